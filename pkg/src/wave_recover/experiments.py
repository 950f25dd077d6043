"""Sweep harness: run configurations, sweep records, CSV/JSON output and the
bound-versus-error comparison."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .error_analysis import (
    DEFAULT_DECAY_WINDOW,
    BoundInputs,
    ExponentFit,
    calibrate_a2,
    error_split,
    evaluate_bound,
    fit_decay,
    fit_exponent,
)
from .grid_spectral import (
    DEFAULT_CUTOFF_REL,
    Grid,
    RealField,
    forward_transform,
    l2_norm,
    make_grid,
    spectral_cutoff,
)
from .reconstruction import GRAVITY, compute_g
from .wave_model import (
    DEFAULT_DELTA_WIDTH,
    PerturbationSpec,
    PhysicalParams,
    PressureTrace,
    check_admissibility,
    delta_field,
    load_pressure_csv,
)

__all__ = [
    "CHANNELS",
    "CHANNEL_DEFAULTS",
    "SWEEP_COLUMNS",
    "RunConfig",
    "SweepRecord",
    "SweepResult",
    "sweep_values",
    "run_sweep",
    "load_trace",
    "format_float",
    "sweep_csv_text",
    "read_sweep_csv",
    "bound_comparison",
    "diagnose",
    "parse_config_text",
]

CHANNELS = ("epsilon", "delta_amplitude", "gamma")

# (min, max, count, spacing); ranges stay inside the admissible set
CHANNEL_DEFAULTS = {
    "epsilon": (1e-5, 5e-2, 20, "log"),
    "delta_amplitude": (1e-5, 0.2, 20, "log"),
    "gamma": (1e-5, 0.5, 20, "log"),
}

SWEEP_COLUMNS = (
    "param_name",
    "param_value",
    "error_l2",
    "term_I",
    "term_II",
    "bound_value",
    "admissible",
)


@dataclass(frozen=True)
class RunConfig:
    n: int = 4096
    half_width: float = 30.0
    speed: float = 2.0
    depth: float = 1.0
    cutoff_rel: float = DEFAULT_CUTOFF_REL
    k_max: float | None = None
    channel: str = "epsilon"
    min: float | None = None
    max: float | None = None
    count: int | None = None
    spacing: str | None = None
    delta_width: float = DEFAULT_DELTA_WIDTH
    epsilon: float = 0.0
    delta_amplitude: float = 0.0
    gamma: float = 0.0
    gravity: float = GRAVITY
    decay_k_lo: float = DEFAULT_DECAY_WINDOW[0]
    decay_k_hi: float = DEFAULT_DECAY_WINDOW[1]
    pressure_csv: str | None = None
    sweep_csv: str | None = None
    out: str = "."
    jobs: int = 1

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}; choose from {CHANNELS}")
        if self.spacing not in (None, "log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @property
    def grid(self) -> Grid:
        return make_grid(self.n, self.half_width)

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(self.speed, self.depth)

    @property
    def perturbation(self) -> PerturbationSpec:
        return PerturbationSpec(self.epsilon, self.delta_amplitude, self.delta_width, self.gamma)

    @property
    def decay_window(self) -> tuple[float, float]:
        return (self.decay_k_lo, self.decay_k_hi)

    def resolved_sweep(self) -> tuple[float, float, int, str]:
        d_min, d_max, d_count, d_spacing = CHANNEL_DEFAULTS[self.channel]
        return (
            d_min if self.min is None else self.min,
            d_max if self.max is None else self.max,
            d_count if self.count is None else self.count,
            d_spacing if self.spacing is None else self.spacing,
        )


def _coerce(name: str, raw: str):
    types = {f.name: f.type for f in fields(RunConfig)}
    if name not in types:
        raise ValueError(f"unknown config key {name!r}")
    kind = types[name]
    if raw.lower() in ("", "none") and "None" in kind:
        return None
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("float"):
        return float(raw)
    return raw


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = _coerce(key, value)
    return out


@dataclass(frozen=True)
class SweepRecord:
    param_name: str
    param_value: float
    error_l2: float | None
    term_I: float | None
    term_II: float | None
    bound_value: float | None
    admissible: bool


@dataclass
class SweepResult:
    config: RunConfig
    records: list[SweepRecord]
    fit: ExponentFit | None
    sigma_hat: float
    a2: float | None
    notes: list[str] = field(default_factory=list)

    @property
    def admissible_count(self) -> int:
        return sum(r.admissible for r in self.records)


def sweep_values(lo: float, hi: float, count: int, spacing: str) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be positive")
    if spacing == "log":
        if lo <= 0 or hi <= 0:
            raise ValueError("log spacing needs positive bounds")
        values = np.geomspace(lo, hi, count)
    else:
        values = np.linspace(lo, hi, count)
    return np.sort(values)


def load_trace(config: RunConfig) -> PressureTrace:
    if config.pressure_csv:
        return PressureTrace.tabulated(load_pressure_csv(config.pressure_csv, config.grid))
    return PressureTrace()


def _sweep_point(p: RealField, trace: PressureTrace, config: RunConfig, value: float) -> SweepRecord:
    spec = PerturbationSpec(delta_width=config.delta_width)
    spec = replace(spec, **{config.channel: float(value)})
    report = check_admissibility(trace, config.params, spec, grid=config.grid)
    if not report.passed:
        return SweepRecord(config.channel, float(value), None, None, None, None, False)
    split = error_split(p, config.params, spec, config.cutoff_rel, config.k_max)
    return SweepRecord(
        config.channel, float(value), split.error, split.term_I, split.term_II, None, True
    )


def _bound_inputs(
    config: RunConfig, value: float, sigma: float, p_norm: float, a2: float
) -> BoundInputs:
    spec = replace(PerturbationSpec(delta_width=config.delta_width), **{config.channel: value})
    delta_norm = l2_norm(delta_field(config.grid, spec))
    return BoundInputs(
        sigma=sigma,
        a2=a2,
        kappa=config.params.kappa,
        d=config.depth,
        gamma=spec.gamma,
        epsilon=spec.epsilon,
        delta_norm=delta_norm,
        p_norm=p_norm,
    )


def auxiliary_decay(p: RealField, config: RunConfig):
    """Decay fit of the unperturbed auxiliary spectrum and its cutoff wavenumber."""
    g_hat = forward_transform(compute_g(p, config.params.kappa))
    fit = fit_decay(g_hat, config.decay_window)
    gated = spectral_cutoff(g_hat, config.cutoff_rel, config.k_max)
    return fit, gated.cutoff_k, g_hat


def _attach_bounds(
    records: list[SweepRecord], config: RunConfig, sigma: float, p_norm: float
) -> tuple[list[SweepRecord], float | None, list[str]]:
    notes = []
    usable = [r for r in records if r.admissible and r.param_value != 0]
    if not usable:
        return records, None, notes
    top = max(usable, key=lambda r: abs(r.param_value))
    try:
        a2 = calibrate_a2(_bound_inputs(config, top.param_value, sigma, p_norm, 1.0), top.error_l2)
    except ValueError as exc:
        notes.append(f"bound not evaluated: {exc}")
        return records, None, notes
    out = []
    for r in records:
        if not r.admissible:
            out.append(r)
            continue
        try:
            b = evaluate_bound(_bound_inputs(config, r.param_value, sigma, p_norm, a2))
        except ValueError as exc:
            notes.append(f"bound undefined at {r.param_value!r}: {exc}")
            b = None
        out.append(replace(r, bound_value=b))
    return out, a2, notes


def run_sweep(config: RunConfig, trace: PressureTrace | None = None) -> SweepResult:
    """Evaluate the error, its split and the calibrated bound along one channel.

    Points are independent and run on ``config.jobs`` threads; records come
    back ordered by parameter value.
    """
    trace = trace if trace is not None else load_trace(config)
    p = trace.sample(config.grid)
    lo, hi, count, spacing = config.resolved_sweep()
    values = sweep_values(lo, hi, count, spacing)

    def point(v):
        return _sweep_point(p, trace, config, v)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(point, values))
    else:
        records = [point(v) for v in values]

    decay, _, _ = auxiliary_decay(p, config)
    records, a2, notes = _attach_bounds(records, config, decay.sigma_hat, l2_norm(p))
    fit = None
    if sum(r.admissible for r in records) >= 4:
        try:
            fit = fit_exponent(records)
        except ValueError as exc:
            notes.append(f"exponent fit skipped: {exc}")
    return SweepResult(config, records, fit, decay.sigma_hat, a2, notes)


def format_float(x: float | None) -> str:
    """Fixed 17-significant-digit rendering; ``None`` becomes an empty field."""
    if x is None:
        return ""
    return format(float(x), ".17g")


def sweep_csv_text(result: SweepResult) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in result.records:
        lines.append(
            ",".join(
                [
                    r.param_name,
                    format_float(r.param_value),
                    format_float(r.error_l2),
                    format_float(r.term_I),
                    format_float(r.term_II),
                    format_float(r.bound_value),
                    "true" if r.admissible else "false",
                ]
            )
        )
    if result.fit is not None:
        lines.append(
            f"# alpha_hat={format_float(result.fit.alpha_hat)} r2={format_float(result.fit.r_squared)}"
        )
    else:
        lines.append("# alpha_hat=nan r2=nan")
    return "\n".join(lines) + "\n"


def _opt_float(text: str) -> float | None:
    return float(text) if text else None


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    records = []
    with open(path, newline="") as fh:
        header = None
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                if tuple(header) != SWEEP_COLUMNS:
                    raise ValueError(f"{path}: unexpected sweep header {header!r}")
                continue
            row = dict(zip(header, cells))
            records.append(
                SweepRecord(
                    param_name=row["param_name"],
                    param_value=float(row["param_value"]),
                    error_l2=_opt_float(row["error_l2"]),
                    term_I=_opt_float(row["term_I"]),
                    term_II=_opt_float(row["term_II"]),
                    bound_value=_opt_float(row["bound_value"]),
                    admissible=row["admissible"] == "true",
                )
            )
    return records


def bound_comparison(
    records: list[SweepRecord], config: RunConfig, sigma: float, p_norm: float
) -> dict:
    """Calibrate ``A2`` at the largest admissible point and compare the bound
    with the measured error at every smaller point.

    Returns a dict with the calibrated constant, one table row per point
    and the list of points where the bound falls below the error.
    """
    if not records:
        raise ValueError("no sweep records to compare")
    channel = records[0].param_name
    cfg = replace(config, channel=channel)
    bounded, a2, notes = _attach_bounds(
        [replace(r, bound_value=None) for r in records], cfg, sigma, p_norm
    )
    top = max((abs(r.param_value) for r in bounded if r.admissible), default=None)
    table, violations = [], []
    for r in bounded:
        if not r.admissible or r.bound_value is None:
            continue
        ratio = r.bound_value / r.error_l2 if r.error_l2 > 0 else math.inf
        row = {
            "param_value": r.param_value,
            "error_l2": r.error_l2,
            "bound_value": r.bound_value,
            "bound_over_error": ratio,
        }
        table.append(row)
        if abs(r.param_value) < top and r.bound_value < r.error_l2:
            violations.append(row)
    return {
        "channel": channel,
        "sigma": sigma,
        "a2": a2,
        "table": table,
        "violations": violations,
        "notes": notes,
    }


def diagnose(config: RunConfig, trace: PressureTrace | None = None) -> dict:
    """Decay fit of the auxiliary spectrum plus an optional bound table."""
    trace = trace if trace is not None else load_trace(config)
    p = trace.sample(config.grid)
    fit, cutoff_k, g_hat = auxiliary_decay(p, config)
    out = {
        "sigma_hat": fit.sigma_hat,
        "c_hat": fit.c_hat,
        "fit_window": list(fit.window),
        "fit_residual": fit.residual,
        "fit_points": fit.n_points,
        "cutoff_k": cutoff_k,
        "cutoff_rel": config.cutoff_rel,
        "edge_warning": g_hat.edge_warning,
        "trace": trace.kind,
        "kappa": config.params.kappa,
        "depth": config.depth,
        "p_norm": l2_norm(p),
    }
    if trace.kind == "tabulated":
        out["analyticity"] = "unverified (tabulated trace)"
    if config.sweep_csv:
        records = read_sweep_csv(config.sweep_csv)
        out["bound_comparison"] = bound_comparison(records, config, fit.sigma_hat, l2_norm(p))
    return out


def config_dict(config: RunConfig) -> dict:
    return asdict(config)
