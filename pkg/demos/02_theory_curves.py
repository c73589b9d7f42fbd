"""Closed-form autocovariances and spectral densities of the aggregate.

Shows how the memory changes across the boundary beta = 2: the
autocovariance decays like t**-(beta-1), and the spectral density at the
origin diverges for beta <= 2. Just above 2 it is finite but sharply
peaked, which is easily mistaken for long memory.
"""
import math

from rcartail import autocovariance, beta_model_constants, spectral_density
from rcartail.theory import autocovariance_tail_constant

alpha = 1.0
print("autocovariance r(t) and its scaled version r(t) * t**(beta-1)")
print(f"{'beta':>6} {'t':>8} {'r(t)':>12} {'scaled':>10} {'limit':>10}")
for beta in (1.25, 1.75, 2.5):
    limit = autocovariance_tail_constant(alpha, beta)
    for t in (1, 10, 100, 10_000, 1_000_000):
        r = autocovariance(alpha, beta, t)
        print(f"{beta:>6} {t:>8} {r:>12.5g} {r * t ** (beta - 1):>10.4f} {limit:>10.4f}")

print("\nspectral density f(lambda) near the origin")
lams = (1e-1, 1e-2, 1e-3, 1e-4)
print(f"{'beta':>6} " + " ".join(f"{l:>10.0e}" for l in lams))
for beta in (1.5, 2.0, 2.1, 3.0):
    row = [spectral_density(alpha, beta, l) for l in lams]
    print(f"{beta:>6} " + " ".join(f"{v:>10.4g}" for v in row))

k = beta_model_constants(1.5, 2.5)
print(f"\ntail constants for alpha=1.5, beta=2.5: kappa={k.kappa:.4f} tau={k.tau:.4f} "
      f"rho={k.rho} B={k.b_const:.4f} d={k.memory_parameter}")
print(f"f(0) for beta=2.5 equals E(1-a)**-2 / (2 pi) = {spectral_density(1.5, 2.5, 0.0):.5f}")
print(f"f(pi) lies in (1/(8 pi), 1/(2 pi)) = ({1 / (8 * math.pi):.4f}, {1 / (2 * math.pi):.4f}): "
      f"{spectral_density(1.5, 2.5, math.pi):.4f}")
