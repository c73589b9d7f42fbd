"""Simulate one panel, estimate the tail index two ways, and test for long memory.

Run:  python3 demos/01_simulate_and_estimate.py
"""
from rcartail import (CoefficientLaw, InnovationSpec, PanelConfig, confidence_interval,
                      estimate_exact, estimate_noisy, long_memory_test, panel_coefficients,
                      simulate_panel)

# A panel of 750 series of length 2000 whose AR coefficients have tail index
# 1.5 at the unit root. Their aggregate has long memory.
config = PanelConfig(n_series=750, series_len=2000, law=CoefficientLaw(alpha=0.75, beta=1.5),
                     innovations=InnovationSpec(), seed=2024)
panel = simulate_panel(config, keep_truth=True)
print(f"simulated {panel.n_series} series of length {panel.series_len}")

# In practice only the data are seen: estimate each coefficient by the
# sample lag-1 autocorrelation, then apply the truncated estimator.
a_hat = panel_coefficients(panel)
noisy, choice = estimate_noisy(a_hat, epsilon=0.9, r=10.0)
print(f"\nadaptive threshold: k* = {choice.k_star:.1f}, m = {choice.m}, delta = {choice.delta:.4f}")
print(f"  second-order fit: rho_hat = {choice.fit.rho_hat:.3f}, B_hat = {choice.fit.b_hat:.3f}")

lo, hi = confidence_interval(noisy, 0.95)
print(f"\nnoisy estimate  beta = {noisy.beta_hat:.3f}  (95% CI {lo:.3f} .. {hi:.3f}, K = {noisy.exceedances})")

# With the true coefficients (available only in simulation) the same
# functional gives the infeasible benchmark.
exact, _ = estimate_exact(panel.true_coeffs, epsilon=0.9)
print(f"exact estimate  beta = {exact.beta_hat:.3f}  (K = {exact.exceedances})")

# H0: beta >= 2 (short memory) against beta < 2 (long memory).
test = long_memory_test(noisy, omega=0.05)
verdict = "reject H0: long memory" if test.reject_h0 else "do not reject H0"
print(f"\nZ = {test.z_stat:.3f} vs critical {test.critical:.3f} -> {verdict}")
