"""Seeded Monte Carlo engine for the panel tail-index experiments.

Each (scenario, replication) pair is an independent work unit whose random
numbers are addressed by ``(master_seed, scenario_index, replication_index)``,
so the report does not depend on the number of worker processes or on
scheduling.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import rng as rngmod
from .acf import lag1_autocorr_panel
from .errors import EstimationError, ParameterError, SpecError
from .model import CoefficientLaw, InnovationSpec, PanelConfig, simulate_panel
from .tailest import long_memory_test, tail_index_gs, tail_index_noisy
from .threshold import delta_from_order_stat, estimate_second_order, k_star, sample_fraction

__all__ = [
    "Scenario",
    "ExperimentSpec",
    "ReportRow",
    "ExperimentReport",
    "run_replication",
    "run_experiment",
    "noise_probe",
]

MODES = ("noisy-only", "exact-only", "both")
CSV_COLUMNS = ("scenario", "alpha", "beta", "N", "T", "shock_mode", "dist", "estimator",
               "epsilon", "r", "replications", "failure_count", "rmse", "bias", "sd",
               "rejection_rate")


@dataclass(frozen=True)
class Scenario:
    alpha: float
    beta: float
    N: int
    T: int
    shock_mode: str = "idiosyncratic"
    dist: str = "gaussian"

    def panel_config(self, seed: int) -> PanelConfig:
        return PanelConfig(n_series=self.N, series_len=self.T,
                           law=CoefficientLaw(self.alpha, self.beta),
                           innovations=InnovationSpec(shock_mode=self.shock_mode, dist=self.dist),
                           seed=seed)


@dataclass(frozen=True)
class ExperimentSpec:
    scenarios: tuple[Scenario, ...]
    epsilon_grid: tuple[float, ...] = (0.9,)
    r_grid: tuple[float, ...] = (10.0,)
    omega: float = 0.05
    replications: int = 500
    master_seed: int = 0
    mode: str = "both"

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(
            s if isinstance(s, Scenario) else Scenario(**s) for s in self.scenarios))
        object.__setattr__(self, "epsilon_grid", tuple(float(e) for e in self.epsilon_grid))
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        if not self.scenarios:
            raise SpecError("at least one scenario is required")
        if not self.epsilon_grid or not self.r_grid:
            raise SpecError("epsilon_grid and r_grid must be non-empty")
        if any(not 0 < e < 1 for e in self.epsilon_grid):
            raise SpecError("epsilon values must lie in (0, 1)")
        if any(not r > 1 for r in self.r_grid):
            raise SpecError("r values must exceed 1")
        if not 0 < self.omega < 1:
            raise SpecError("omega must lie in (0, 1)")
        if int(self.replications) != self.replications or self.replications < 1:
            raise SpecError(f"replications must be a positive integer, got {self.replications}")
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 <= int(self.master_seed) <= rngmod.MASK64:
            raise SpecError("master_seed must be a 64-bit unsigned integer")
        try:
            for s in self.scenarios:
                s.panel_config(0)
        except ParameterError as exc:
            raise SpecError(str(exc)) from exc

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        try:
            d["scenarios"] = [Scenario(**s) for s in d["scenarios"]]
            return cls(**d)
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed experiment spec: {exc}") from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scenarios"] = [asdict(s) for s in self.scenarios]
        d["epsilon_grid"] = list(self.epsilon_grid)
        d["r_grid"] = list(self.r_grid)
        return d

    @property
    def estimators(self) -> tuple[str, ...]:
        return {"noisy-only": ("noisy",), "exact-only": ("exact",),
                "both": ("noisy", "exact")}[self.mode]


@dataclass(frozen=True)
class ReportRow:
    scenario: int
    alpha: float
    beta: float
    N: int
    T: int
    shock_mode: str
    dist: str
    estimator: str
    epsilon: float
    r: float | None
    replications: int  # successful replications entering the moments
    failure_count: int
    rmse: float
    bias: float
    sd: float
    rejection_rate: float


@dataclass
class ExperimentReport:
    rows: list[ReportRow]
    meta: dict = field(default_factory=dict)
    # per-row arrays of estimates (NaN marks a failed replication)
    estimates: dict = field(default_factory=dict, repr=False)

    def row(self, scenario: int, estimator: str, epsilon: float, r: float | None = None) -> ReportRow:
        for row in self.rows:
            if (row.scenario == scenario and row.estimator == estimator
                    and row.epsilon == epsilon and row.r == (None if r is None else float(r))):
                return row
        raise KeyError((scenario, estimator, epsilon, r))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            d = asdict(row)
            w.writerow(["" if d[c] is None else _fmt(d[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def write(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())
        base, _ = os.path.splitext(str(path))
        with open(base + ".meta.json", "w") as fh:
            json.dump(self.meta, fh, indent=2, sort_keys=True)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _row_keys(spec: ExperimentSpec) -> list[tuple[str, float, float | None]]:
    keys = []
    for est in spec.estimators:
        for eps in spec.epsilon_grid:
            if est == "noisy":
                keys.extend((est, eps, r) for r in spec.r_grid)
            else:
                keys.append((est, eps, None))
    return keys


def run_replication(spec: ExperimentSpec, scenario_index: int, replication: int) -> dict:
    """Estimates and test decisions of one replication.

    Returns a mapping ``(estimator, epsilon, r) -> (beta_hat, reject)``, with
    ``(nan, False)`` for a failed estimation.  Panels and thresholds are
    shared across the epsilon and r grids.
    """
    sc = spec.scenarios[scenario_index]
    seed = rngmod.derive_seed(spec.master_seed, scenario_index, replication)
    panel = simulate_panel(sc.panel_config(seed), keep_truth="exact" in spec.estimators)
    sources = {}
    if "noisy" in spec.estimators:
        sources["noisy"] = lag1_autocorr_panel(panel.values)
    if "exact" in spec.estimators:
        sources["exact"] = panel.true_coeffs

    out = {}
    fail = (math.nan, False)
    for est, x in sources.items():
        try:
            fit = estimate_second_order(x)
            kst = min(max(k_star(fit.n, fit), 5.0), x.size / 2.0)
        except (EstimationError, ArithmeticError):
            kst = None
        for eps in spec.epsilon_grid:
            rs = spec.r_grid if est == "noisy" else (None,)
            try:
                if kst is None:
                    raise EstimationError("second-order fit failed")
                delta, _ = delta_from_order_stat(x, sample_fraction(kst, eps, x.size))
            except EstimationError:
                out.update({(est, eps, r): fail for r in rs})
                continue
            for r in rs:
                try:
                    res = tail_index_noisy(x, delta, r) if est == "noisy" else tail_index_gs(x, delta)
                    out[(est, eps, r)] = (res.beta_hat, long_memory_test(res, spec.omega).reject_h0)
                except EstimationError:
                    out[(est, eps, r)] = fail
    return out


def _work(args):
    spec, s_idx, reps = args
    return [run_replication(spec, s_idx, rep) for rep in reps]


def _aggregate(values: np.ndarray, rejects: np.ndarray, beta: float) -> tuple:
    ok = np.isfinite(values)
    n_ok = int(ok.sum())
    if n_ok == 0:
        return 0, int(values.size), math.nan, math.nan, math.nan, math.nan
    v = values[ok]
    err = v - beta
    bias = float(np.mean(err))
    sd = float(np.sqrt(np.mean((v - v.mean()) ** 2)))
    rmse = float(np.sqrt(np.mean(err * err)))
    return n_ok, int(values.size - n_ok), rmse, bias, sd, float(np.mean(rejects[ok]))


def run_experiment(spec: ExperimentSpec, parallelism: int = 1, *, progress: bool = False,
                   chunk: int = 10) -> ExperimentReport:
    """Run every scenario of ``spec`` and tabulate RMSE, bias, sd and rejection rates.

    ``parallelism`` is the number of worker processes (0 means all CPUs).
    Failed replications are excluded from the moments and counted.
    """
    if not isinstance(spec, ExperimentSpec):
        raise SpecError("spec must be an ExperimentSpec")
    if parallelism == 0:
        parallelism = os.cpu_count() or 1
    if parallelism < 0:
        raise SpecError("parallelism must be >= 0")
    t0 = time.perf_counter()
    keys = _row_keys(spec)
    R = spec.replications
    tasks = [(spec, s, range(lo, min(lo + chunk, R)))
             for s in range(len(spec.scenarios)) for lo in range(0, R, chunk)]

    if parallelism == 1:
        results = map(_work, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=parallelism)
        results = pool.map(_work, tasks)

    per_scenario = [[] for _ in spec.scenarios]
    try:
        for (_, s, reps), res in zip(tasks, results):
            per_scenario[s].extend(res)
            if progress:
                print(f"scenario {s + 1}/{len(spec.scenarios)}: "
                      f"{reps.stop}/{R} replications", file=sys.stderr, flush=True)
    finally:
        if pool is not None:
            pool.shutdown()

    rows, estimates = [], {}
    for s, sc in enumerate(spec.scenarios):
        reps = per_scenario[s]
        for key in keys:
            vals = np.array([rep[key][0] for rep in reps])
            rej = np.array([rep[key][1] for rep in reps], dtype=bool)
            n_ok, fails, rmse, bias, sd, rate = _aggregate(vals, rej, sc.beta)
            est, eps, r = key
            rows.append(ReportRow(scenario=s, alpha=sc.alpha, beta=sc.beta, N=sc.N, T=sc.T,
                                  shock_mode=sc.shock_mode, dist=sc.dist, estimator=est,
                                  epsilon=eps, r=r, replications=n_ok, failure_count=fails,
                                  rmse=rmse, bias=bias, sd=sd, rejection_rate=rate))
            estimates[(s, est, eps, r)] = vals
    meta = {"seed": int(spec.master_seed), "replications": R, "parallelism": parallelism,
            "wall_time_s": time.perf_counter() - t0, "spec": spec.to_dict()}
    return ExperimentReport(rows=rows, meta=meta, estimates=estimates)


def noise_probe(alpha: float, beta: float, T_grid, eps: float, reps: int, seed: int = 0,
                innovations: InnovationSpec | None = None) -> list[dict]:
    """Empirical ``P(|a_hat - a| > eps)`` for each series length in ``T_grid``.

    Every ``T`` uses ``reps`` fresh independent (coefficient, series) pairs.
    """
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if int(reps) < 1:
        raise ParameterError("reps must be >= 1")
    innovations = innovations or InnovationSpec()
    out = []
    for j, T in enumerate(T_grid):
        cfg = PanelConfig(n_series=int(reps), series_len=int(T), law=CoefficientLaw(alpha, beta),
                          innovations=innovations, seed=rngmod.derive_seed(seed, j, int(T)))
        panel = simulate_panel(cfg, keep_truth=True)
        err = np.abs(lag1_autocorr_panel(panel.values) - panel.true_coeffs)
        p = float(np.mean(err > eps))
        out.append({"T": int(T), "probability": p,
                    "std_error": math.sqrt(p * (1.0 - p) / int(reps))})
    return out
