"""How fast does the sample autocorrelation approach the true coefficient?

For each series length T, draws fresh (a, series) pairs and reports the
frequency of |a_hat - a| > eps. The frequency should fall at least like 1/T.
"""
from rcartail import noise_probe

T_grid = [100, 200, 400, 800, 1600]
for eps in (0.05, 0.1, 0.2):
    res = noise_probe(alpha=1.5, beta=2.5, T_grid=T_grid, eps=eps, reps=2000, seed=4)
    print(f"eps = {eps}")
    for r in res:
        print(f"  T = {r['T']:>5}  P = {r['probability']:.4f} +- {r['std_error']:.4f}  "
              f"T * P = {r['T'] * r['probability']:.1f}")
