"""Random-coefficient AR(1) data-generating process.

Each series follows ``X(t) = a X(t-1) + b eta(t) + c xi(t)`` with a random
coefficient ``a`` in (0, 1), a common shock ``eta`` shared by the panel and
idiosyncratic shocks ``xi``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from . import rng as rngmod
from .errors import ParameterError

__all__ = [
    "CoefficientLaw",
    "InnovationSpec",
    "PanelConfig",
    "Panel",
    "sample_coefficients",
    "draw_shocks",
    "burn_in_length",
    "simulate_series",
    "simulate_panel",
    "aggregate_panel",
]

SHOCK_MODES = ("idiosyncratic", "common", "mixed")
WEIGHT_LAWS = ("uniform_angle",)
MAX_BURN_IN = 100_000

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


@dataclass(frozen=True)
class CoefficientLaw:
    """Law of ``a`` with ``a**2 ~ Beta(alpha, beta)``; ``beta`` is the tail index at 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 1):
            raise ParameterError(f"beta must exceed 1, got {self.beta}")

    def pdf(self, x):
        from scipy import special

        x = np.asarray(x, dtype=float)
        logc = math.log(2.0) - special.betaln(self.alpha, self.beta)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(logc + (2 * self.alpha - 1) * np.log(x) + (self.beta - 1) * np.log1p(-x * x))
        return np.where((x > 0) & (x < 1), out, 0.0)


@dataclass(frozen=True)
class InnovationSpec:
    """Shock decomposition and marginal law of the unit-variance shocks.

    ``shock_mode`` is ``"idiosyncratic"`` ((b, c) = (0, 1)), ``"common"``
    ((b, c) = (1, 0)) or ``"mixed(uniform_angle)"``, where
    ``(b, c) = (cos theta, sin theta)`` with ``theta ~ U(0, pi/2)``.
    ``dist`` is ``"gaussian"``, ``"rademacher"`` or ``"student_t(df)"``; the
    Student law is rescaled to unit variance and needs ``df > 2 p``.
    """

    shock_mode: str = "idiosyncratic"
    dist: str = "gaussian"
    moment_order_p: float = 2.0

    def __post_init__(self):
        mode, arg = _parse_call(self.shock_mode, "shock_mode")
        if mode not in SHOCK_MODES:
            raise ParameterError(f"unknown shock_mode {self.shock_mode!r}")
        if mode == "mixed" and arg not in WEIGHT_LAWS:
            raise ParameterError(f"mixed shock mode needs a weight law in {WEIGHT_LAWS}, got {arg!r}")
        if mode != "mixed" and arg is not None:
            raise ParameterError(f"shock_mode {mode!r} takes no argument")
        if not self.moment_order_p > 1:
            raise ParameterError(f"moment_order_p must exceed 1, got {self.moment_order_p}")
        name, df = _parse_call(self.dist, "dist")
        if name in ("gaussian", "rademacher"):
            if df is not None:
                raise ParameterError(f"dist {name!r} takes no argument")
        elif name == "student_t":
            try:
                dfv = float(df)
            except (TypeError, ValueError):
                raise ParameterError(f"student_t needs a numeric df, got {self.dist!r}") from None
            if not dfv > 2 * self.moment_order_p:
                raise ParameterError(
                    f"student_t df={dfv} must exceed 2p={2 * self.moment_order_p}")
        else:
            raise ParameterError(f"unknown innovation dist {self.dist!r}")

    @property
    def mode(self) -> str:
        return _parse_call(self.shock_mode, "shock_mode")[0]

    @property
    def dist_name(self) -> str:
        return _parse_call(self.dist, "dist")[0]

    @property
    def df(self) -> float | None:
        name, arg = _parse_call(self.dist, "dist")
        return float(arg) if name == "student_t" else None


def _parse_call(text: str, what: str) -> tuple[str, str | None]:
    m = _CALL.match(str(text))
    if m is None:
        raise ParameterError(f"malformed {what}: {text!r}")
    return m.group(1), m.group(2)


@dataclass(frozen=True)
class PanelConfig:
    n_series: int
    series_len: int
    law: CoefficientLaw
    innovations: InnovationSpec = field(default_factory=InnovationSpec)
    seed: int = 0

    def __post_init__(self):
        if int(self.n_series) != self.n_series or self.n_series < 1:
            raise ParameterError(f"n_series must be a positive integer, got {self.n_series}")
        if int(self.series_len) != self.series_len or self.series_len < 2:
            raise ParameterError(f"series_len must be an integer >= 2, got {self.series_len}")
        if not 0 <= int(self.seed) <= rngmod.MASK64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {
            "n_series": int(self.n_series),
            "series_len": int(self.series_len),
            "law": {"alpha": self.law.alpha, "beta": self.law.beta},
            "innovations": {
                "shock_mode": self.innovations.shock_mode,
                "dist": self.innovations.dist,
                "moment_order_p": self.innovations.moment_order_p,
            },
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PanelConfig":
        expected = {"n_series", "series_len", "law", "innovations", "seed"}
        unknown = set(d) - expected
        if unknown:
            raise ParameterError(f"unknown PanelConfig fields: {sorted(unknown)}")
        missing = {"n_series", "series_len", "law"} - set(d)
        if missing:
            raise ParameterError(f"missing PanelConfig fields: {sorted(missing)}")
        law = d["law"]
        inn = d.get("innovations", {})
        return cls(
            n_series=int(d["n_series"]),
            series_len=int(d["series_len"]),
            law=CoefficientLaw(float(law["alpha"]), float(law["beta"])),
            innovations=InnovationSpec(
                shock_mode=inn.get("shock_mode", "idiosyncratic"),
                dist=inn.get("dist", "gaussian"),
                moment_order_p=float(inn.get("moment_order_p", 2.0)),
            ),
            seed=int(d.get("seed", 0)),
        )


@dataclass(frozen=True, eq=False)
class Panel:
    """N x T matrix of observations, row ``i`` being series ``i``."""

    values: np.ndarray
    config: PanelConfig
    true_coeffs: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.config.n_series, self.config.series_len):
            raise ParameterError(
                f"panel shape {v.shape} does not match config "
                f"({self.config.n_series}, {self.config.series_len})")
        if not np.all(np.isfinite(v)):
            raise ParameterError("panel contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.true_coeffs is not None:
            tc = np.array(self.true_coeffs, dtype=float)
            if tc.shape != (self.config.n_series,):
                raise ParameterError("true_coeffs must have one entry per series")
            tc.setflags(write=False)
            object.__setattr__(self, "true_coeffs", tc)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def series_len(self) -> int:
        return self.values.shape[1]


def sample_coefficients(law: CoefficientLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. coefficients with ``a**2 ~ Beta(alpha, beta)``.

    The beta variate is built from two gamma variates; ``1 - a**2`` is taken
    as ``G_beta / (G_alpha + G_beta)`` directly.  Draws that round to 0 or 1
    are redrawn.
    """
    if not isinstance(law, CoefficientLaw):
        raise ParameterError("law must be a CoefficientLaw")
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = n - filled
        ga = rng.standard_gamma(law.alpha, size=m)
        gb = rng.standard_gamma(law.beta, size=m)
        a = np.sqrt(ga / (ga + gb))
        ok = (a > 0.0) & (a < 1.0)
        k = int(ok.sum())
        out[filled:filled + k] = a[ok]
        filled += k
    return out


def draw_shocks(spec: InnovationSpec, size, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean, unit-variance i.i.d. shocks of the given shape."""
    name = spec.dist_name
    if name == "gaussian":
        return rng.standard_normal(size)
    if name == "rademacher":
        return rng.integers(0, 2, size=size).astype(float) * 2.0 - 1.0
    df = spec.df
    return rng.standard_t(df, size=size) * math.sqrt((df - 2.0) / df)


def burn_in_length(a: float) -> int:
    """Steps after which a start-up error is damped by 1e-6."""
    if a <= 0.0:
        return 0
    return int(min(math.ceil(math.log(1e-6) / math.log(a)), MAX_BURN_IN))


def _check_coeff(a: float) -> None:
    if not 0.0 <= a < 1.0:
        raise ParameterError(f"AR coefficient must lie in (0, 1), got {a}")


def simulate_series(a: float, weights: tuple[float, float], common_shocks, T: int,
                    spec: InnovationSpec, rng: np.random.Generator) -> np.ndarray:
    """Stationary trajectory ``X(1..T)`` of ``X(t) = a X(t-1) + b eta(t) + c xi(t)``.

    ``common_shocks`` holds the shared ``eta``; it needs length ``T`` and may be
    longer, in which case the leading entries are treated as pre-sample shocks
    and used for burn-in of the common component.  Gaussian idiosyncratic
    components start exactly from ``N(0, c**2/(1 - a**2))``; every other
    component is started at a variance-matched Gaussian value and burnt in for
    :func:`burn_in_length` steps.  ``a = 0`` is accepted as the white-noise case.
    """
    _check_coeff(a)
    T = int(T)
    if T < 2:
        raise ParameterError(f"T must be >= 2, got {T}")
    b, c = (float(w) for w in weights)
    if b < 0 or c < 0 or b + c == 0:
        raise ParameterError(f"weights must be nonnegative and not both zero, got {(b, c)}")
    sd = math.sqrt(1.0 - a * a)
    x = np.zeros(T)
    if c > 0:
        if spec.dist_name == "gaussian":
            x0 = c * rng.standard_normal() / sd
            x += signal.lfilter([c], [1.0, -a], rng.standard_normal(T), zi=[a * x0])[0]
        else:
            m = burn_in_length(a)
            x0 = c * rng.standard_normal() / sd
            path = signal.lfilter([c], [1.0, -a], draw_shocks(spec, m + T, rng), zi=[a * x0])[0]
            x += path[m:]
    if b > 0:
        if common_shocks is None:
            raise ParameterError("common_shocks required when b > 0")
        eta = np.asarray(common_shocks, dtype=float)
        if eta.size < T:
            raise ParameterError(f"common_shocks must have length >= {T}")
        pre = eta.size - T
        m = min(burn_in_length(a), pre)
        seg = eta[pre - m:]
        # Gaussian start for the part not covered by the available pre-sample.
        x0 = b * rng.standard_normal() / sd
        x += signal.lfilter([b], [1.0, -a], seg, zi=[a * x0])[0][m:]
    return x


def _series_weights(spec: InnovationSpec, n: int, seed: int) -> np.ndarray:
    mode = spec.mode
    if mode == "idiosyncratic":
        return np.tile([0.0, 1.0], (n, 1))
    if mode == "common":
        return np.tile([1.0, 0.0], (n, 1))
    theta = rngmod.stream(seed, rngmod.WEIGHTS).uniform(0.0, math.pi / 2.0, size=n)
    w = np.column_stack([np.cos(theta), np.sin(theta)])
    w[w < 0] = 0.0
    return w


def simulate_panel(config: PanelConfig, keep_truth: bool = False) -> Panel:
    """Simulate ``N`` independent RCAR(1) series of length ``T``.

    Coefficients, common shocks and each series' idiosyncratic shocks come
    from separate counter-addressed sub-streams of ``config.seed``, so the
    result does not depend on evaluation order.
    """
    N, T = config.n_series, config.series_len
    spec = config.innovations
    coeffs = sample_coefficients(config.law, N, rngmod.stream(config.seed, rngmod.COEFFICIENTS))
    weights = _series_weights(spec, N, config.seed)

    eta = None
    if spec.mode != "idiosyncratic":
        pre = max(burn_in_length(float(coeffs.max())), 1)
        eta = draw_shocks(spec, pre + T, rngmod.stream(config.seed, rngmod.COMMON_SHOCKS))

    if spec.mode == "idiosyncratic" and spec.dist_name == "gaussian":
        values = _gaussian_idiosyncratic(coeffs, T, config.seed)
    else:
        values = np.empty((N, T))
        for i in range(N):
            values[i] = simulate_series(coeffs[i], tuple(weights[i]), eta, T, spec,
                                        rngmod.stream(config.seed, rngmod.SERIES, i))
    return Panel(values=values, config=config, true_coeffs=coeffs if keep_truth else None)


def _gaussian_idiosyncratic(coeffs: np.ndarray, T: int, seed: int) -> np.ndarray:
    # same draws, same order as simulate_series(a, (0, 1), None, T, gaussian, stream_i),
    # with the recursion vectorised across series
    N = coeffs.size
    x0 = np.empty(N)
    eps = np.empty((N, T))
    for i in range(N):
        g = rngmod.stream(seed, rngmod.SERIES, i)
        x0[i] = g.standard_normal()
        eps[i] = g.standard_normal(T)
    out = np.empty((N, T))
    state = coeffs * (x0 / np.sqrt(1.0 - coeffs * coeffs))
    for t in range(T):
        state = coeffs * state + eps[:, t] if t else state + eps[:, 0]
        out[:, t] = state
    return out


def aggregate_panel(panel) -> np.ndarray:
    """Contemporaneous aggregate ``N**-1/2 * sum_i X_i(t)``."""
    values = panel.values if isinstance(panel, Panel) else np.asarray(panel, dtype=float)
    if values.ndim != 2 or values.shape[0] < 1:
        raise ParameterError("expected an N x T panel with N >= 1")
    return values.sum(axis=0) / math.sqrt(values.shape[0])
