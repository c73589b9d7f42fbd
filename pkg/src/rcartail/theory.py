"""Closed-form quantities of the beta-type coefficient model.

The AR coefficient has density

    g(x) = 2 / B(alpha, beta) * x**(2*alpha - 1) * (1 - x**2)**(beta - 1),  0 < x < 1,

so that ``a**2 ~ Beta(alpha, beta)``.  Near the unit root

    P(a > 1 - x) = kappa * x**beta * (1 + tau * x + o(x)),

see ``docs/tau_derivation.md`` for the expansion giving ``tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import NumericError, ParameterError

__all__ = [
    "TailConstants",
    "beta_model_constants",
    "autocovariance",
    "autocovariance_tail_constant",
    "spectral_density",
    "spectral_constant",
    "RatePlan",
    "rate_planner",
]


@dataclass(frozen=True)
class TailConstants:
    """First- and second-order tail constants of the coefficient law at 1.

    ``rho`` and ``b_const`` are the second-order parameters used to pick the
    sample fraction; ``g1 = kappa * beta`` is the density constant
    ``g(x) ~ g1 (1 - x)**(beta - 1)``.
    """

    kappa: float
    nu: float
    tau: float
    rho: float
    b_const: float
    g1: float
    beta: float

    @property
    def memory_parameter(self) -> float:
        """Fractional-integration order ``d = 1 - beta/2`` (metadata only)."""
        return 1.0 - self.beta / 2.0


def _check_law(alpha: float, beta: float) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if not (beta > 1 and math.isfinite(beta)):
        raise ParameterError(f"beta must exceed 1, got {beta}")


def beta_model_constants(alpha: float, beta: float) -> TailConstants:
    _check_law(alpha, beta)
    c = (2.0 * alpha - 1.0) + (beta - 1.0) / 2.0
    if math.isclose(4.0 * alpha + beta, 3.0, rel_tol=0.0, abs_tol=1e-12):
        raise ParameterError("4*alpha + beta == 3: the first-order correction vanishes (nu != 1)")
    kappa = math.exp(beta * math.log(2.0) - math.log(beta) - special.betaln(alpha, beta))
    nu = 1.0
    tau = -c * beta / (beta + 1.0)
    rho = -nu / beta
    b_const = (nu / beta) * kappa ** (-nu / beta) * tau
    return TailConstants(kappa=kappa, nu=nu, tau=tau, rho=rho, b_const=b_const,
                         g1=kappa * beta, beta=beta)


def autocovariance(alpha: float, beta: float, t) -> np.ndarray | float:
    """Unconditional autocovariance ``E a**|t| / (1 - a**2)`` for unit-variance shocks.

    Equals ``B(alpha + t/2, beta - 1) / B(alpha, beta)``; evaluated in log space.
    Accepts a scalar or an array of nonnegative lags.
    """
    _check_law(alpha, beta)
    t_arr = np.abs(np.asarray(t, dtype=float))
    val = np.exp(special.betaln(alpha + t_arr / 2.0, beta - 1.0) - special.betaln(alpha, beta))
    return float(val) if val.ndim == 0 else val


def autocovariance_tail_constant(alpha: float, beta: float) -> float:
    """Limit of ``autocovariance(t) * t**(beta - 1)`` as ``t -> inf``.

    Equals ``g1 * Gamma(beta - 1) / 2`` with ``g1 = kappa * beta``.
    """
    k = beta_model_constants(alpha, beta)
    return k.g1 * math.gamma(beta - 1.0) / 2.0


def _log_density_u(u: float, alpha: float, beta: float, log_norm: float) -> float:
    # log g(1 - u), written in u = 1 - x to keep precision near the unit root
    return (log_norm + (2.0 * alpha - 1.0) * math.log1p(-u)
            + (beta - 1.0) * (math.log(u) + math.log(2.0 - u)))


def spectral_density(alpha: float, beta: float, lam: float, *, epsabs: float = 1e-10,
                     epsrel: float = 1e-10) -> float:
    """Unconditional spectral density ``(2 pi)**-1 E |1 - a exp(-i lam)|**-2``.

    Integrates over ``u = 1 - a`` with breakpoints at ``1e-6``, at every decade
    and at the frequency scale, where the kernel ``1/(u**2 + 4 (1-u) sin(lam/2)**2)``
    changes from flat to ``u**-2``.
    """
    _check_law(alpha, beta)
    lam = float(lam)
    if not -math.pi <= lam <= math.pi:
        raise ParameterError(f"lambda must lie in [-pi, pi], got {lam}")
    if lam == 0.0 and beta <= 2.0:
        raise ParameterError("spectral density diverges at lambda = 0 for beta <= 2")
    s2 = 4.0 * math.sin(lam / 2.0) ** 2
    log_norm = math.log(2.0) - special.betaln(alpha, beta)

    def integrand(u: float) -> float:
        if u <= 0.0 or u >= 1.0:
            return 0.0
        return math.exp(_log_density_u(u, alpha, beta, log_norm)) / (u * u + (1.0 - u) * s2)

    scale = math.sqrt(s2)
    # decade breakpoints: the kernel spans many orders of magnitude in u for small lam
    cand = {1e-6, scale / 10.0, scale, 10.0 * scale, *(10.0 ** -k for k in range(1, 13))}
    pts = sorted(p for p in cand if 1e-12 < p < 1.0)
    edges = [0.0, *pts, 1.0]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = integrate.quad(integrand, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=200)
        total += val
        err += e
    if not math.isfinite(total) or err > max(1e3 * epsabs, 1e-6 * abs(total)):
        raise NumericError(f"spectral quadrature did not converge (estimated error {err:.3e})")
    return total / (2.0 * math.pi)


def spectral_constant(alpha: float, beta: float) -> float:
    """Constant ``kappa_f`` in the small-frequency behaviour of :func:`spectral_density`.

    ``f(lam) ~ kappa_f`` for beta > 2, ``kappa_f ln(1/lam)`` for beta == 2 and
    ``kappa_f lam**-(2 - beta)`` for 1 < beta < 2.
    """
    k = beta_model_constants(alpha, beta)
    if beta > 2.0:
        log_norm = math.log(2.0) - special.betaln(alpha, beta)
        val, _ = integrate.quad(
            lambda u: math.exp(_log_density_u(u, alpha, beta, log_norm)) / (u * u),
            0.0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=200)
        return val / (2.0 * math.pi)
    if beta == 2.0:
        # log-slope g1 / (2 pi); u / (u**2 + lam**2) integrates to ln(1/lam)
        return k.g1 / (2.0 * math.pi)
    # int_0^inf y^(beta-1) / (1 + y^2) dy = pi / (2 sin(pi beta / 2))
    return k.g1 / (2.0 * math.pi) * math.pi / (2.0 * math.sin(math.pi * beta / 2.0))


@dataclass(frozen=True)
class RatePlan:
    """Admissible growth rates ``delta ~ N**-b`` and ``T ~ N**a``."""

    beta: float
    p: float
    b_interval: tuple[float, float]
    b: float | None = None
    b_admissible: bool | None = None
    a_lower_bound: float | None = None

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "p": self.p,
            "b_interval": list(self.b_interval),
            "b": self.b,
            "b_admissible": self.b_admissible,
            "a_lower_bound": self.a_lower_bound,
        }


def rate_planner(beta: float, p: float = math.inf, b_exp: float | None = None) -> RatePlan:
    """Rate conditions for threshold and panel length.

    With ``delta = const * N**-b`` the threshold must satisfy
    ``1/(beta + 2) < b < 1/beta`` (for r >= 2 and nu = 1 < beta).  Given ``b``,
    the panel length ``T = N**a`` must satisfy ``a > a_lower_bound``.
    An inadmissible ``b`` is flagged in the report, not rejected.
    """
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    if not p > 2:
        raise ParameterError(f"moment order p must exceed 2, got {p}")
    interval = (1.0 / (beta + 2.0), 1.0 / beta)
    if b_exp is None:
        return RatePlan(beta=beta, p=p, b_interval=interval)
    b = float(b_exp)
    first = (1.0 + b * beta) / 2.0
    if math.isinf(p):
        second = (2.0 - beta) * b + 1.0
    else:
        second = (1.0 + b * beta) / p + (2.0 - beta) * b + 1.0
    return RatePlan(beta=beta, p=p, b_interval=interval, b=b,
                    b_admissible=interval[0] < b < interval[1],
                    a_lower_bound=max(first, second))
