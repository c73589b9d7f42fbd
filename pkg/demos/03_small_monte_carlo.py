"""A desk-sized Monte Carlo comparing the noisy and exact estimators.

Usage: python3 demos/03_small_monte_carlo.py [replications] [workers]

The same engine backs `rcartail experiment`; with the default 40
replications this takes a minute or so on one core.
"""
import sys

from rcartail import ExperimentSpec, Scenario, run_experiment

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 40
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 1

spec = ExperimentSpec(
    scenarios=[Scenario(alpha=0.75, beta=1.5, N=750, T=1000),
               Scenario(alpha=1.5, beta=2.0, N=750, T=1000)],
    epsilon_grid=[0.7, 0.9], r_grid=[10.0], replications=reps, master_seed=1, mode="both")
report = run_experiment(spec, parallelism=workers, progress=True)

print(f"\n{'beta':>5} {'est':>6} {'eps':>4} {'rmse':>7} {'bias':>7} {'sd':>7} {'reject':>7} {'fail':>5}")
for row in report.rows:
    print(f"{row.beta:>5} {row.estimator:>6} {row.epsilon:>4} {row.rmse:>7.3f} {row.bias:>+7.3f} "
          f"{row.sd:>7.3f} {row.rejection_rate:>7.1%} {row.failure_count:>5}")
print(f"\nwall time {report.meta['wall_time_s']:.1f} s")
