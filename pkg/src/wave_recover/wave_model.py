"""Physical parameters, bed-pressure traces and the perturbation model."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .grid_spectral import Grid, RealField

__all__ = [
    "PhysicalParams",
    "PerturbationSpec",
    "ZERO_PERTURBATION",
    "PressureTrace",
    "AdmissibilityReport",
    "AdmissibilityError",
    "closed_form_pressure",
    "paper_pressure_trace",
    "delta_field",
    "pressure_from_g",
    "radicand",
    "check_admissibility",
    "load_pressure_csv",
]

MARGIN_FLOOR = 1e-8
DEFAULT_DELTA_WIDTH = 2.0


class AdmissibilityError(ValueError):
    """The reconstruction formula is undefined for the given inputs."""

    def __init__(self, report: "AdmissibilityReport"):
        self.report = report
        super().__init__(report.describe())


@dataclass(frozen=True)
class PhysicalParams:
    """Wave speed ``c`` and undisturbed depth ``d``."""

    speed: float = 2.0
    depth: float = 1.0

    def __post_init__(self):
        if not self.speed > 0:
            raise ValueError(f"speed must be positive, got {self.speed!r}")
        if not self.depth > 0:
            raise ValueError(f"depth must be positive, got {self.depth!r}")

    @property
    def kappa(self) -> float:
        return 1.0 / (self.speed * self.speed)


@dataclass(frozen=True)
class PerturbationSpec:
    """Errors in ``kappa`` (``epsilon``), the pressure trace (a Gaussian bump
    of height ``delta_amplitude`` and width ``delta_width``) and the depth
    (``gamma``)."""

    epsilon: float = 0.0
    delta_amplitude: float = 0.0
    delta_width: float = DEFAULT_DELTA_WIDTH
    gamma: float = 0.0

    def __post_init__(self):
        if not self.delta_width > 0:
            raise ValueError(f"delta_width must be positive, got {self.delta_width!r}")

    @property
    def is_zero(self) -> bool:
        return self.epsilon == 0.0 and self.delta_amplitude == 0.0 and self.gamma == 0.0


ZERO_PERTURBATION = PerturbationSpec()


def closed_form_pressure(q):
    """Closed-form trace ``2(2 + e^{-q^2/2}) / (2 + e^{-q^2/2} + e^{q^2/2})``.

    This is the bed pressure whose auxiliary field at ``kappa = 1/4`` is
    exactly ``exp(-q^2/2)``. Written in terms of ``G = exp(-q^2/2)`` so that
    no overflow occurs in the tails.
    """
    q = np.asarray(q, dtype=float)
    G = np.exp(-0.5 * q * q)
    # multiply numerator and denominator by G: e^{q^2/2} G = 1
    return 2.0 * G * (2.0 + G) / (G * (2.0 + G) + 1.0)


def paper_pressure_trace(grid: Grid) -> RealField:
    return RealField(grid, closed_form_pressure(grid.nodes))


def _gaussian(q, amplitude: float, width: float):
    q = np.asarray(q, dtype=float)
    return amplitude * np.exp(-q * q / (2.0 * width * width))


def delta_field(grid: Grid, spec: PerturbationSpec) -> RealField:
    """Pressure perturbation ``a exp(-q^2 / (2 theta^2))`` on the grid."""
    return RealField(grid, _gaussian(grid.nodes, spec.delta_amplitude, spec.delta_width))


def pressure_from_g(g: RealField, kappa: float) -> RealField:
    """Invert ``g = (1 - 2 kappa p)^{-1/2} - 1`` for the pressure ``p``."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    one_plus_g = 1.0 + g.values
    if np.any(one_plus_g <= 0):
        raise ValueError("pressure_from_g needs 1 + g > 0 everywhere")
    # 1 - (1+g)^-2 = g (2 + g) / (1+g)^2, free of cancellation for small g
    return RealField(g.grid, g.values * (2.0 + g.values) / (one_plus_g**2 * 2.0 * kappa))


@dataclass(frozen=True, eq=False)
class PressureTrace:
    """A bed-pressure trace.

    ``kind`` is one of ``"paper_closed_form"``, ``"gaussian_g_prescribed"``
    or ``"tabulated"``. Closed-form kinds can be sampled on any grid, which
    lets admissibility be checked on a finer grid than the working one.
    For ``gaussian_g_prescribed`` the auxiliary field is
    ``g_amplitude * exp(-q^2 / (2 g_width^2))`` at ``kappa``.
    """

    kind: str = "paper_closed_form"
    kappa: float = 0.25
    g_amplitude: float = 1.0
    g_width: float = 1.0
    samples: RealField | None = None

    def __post_init__(self):
        if self.kind not in ("paper_closed_form", "gaussian_g_prescribed", "tabulated"):
            raise ValueError(f"unknown pressure trace kind {self.kind!r}")
        if self.kind == "tabulated" and self.samples is None:
            raise ValueError("tabulated trace needs samples")

    @classmethod
    def tabulated(cls, samples: RealField) -> "PressureTrace":
        return cls(kind="tabulated", samples=samples)

    @property
    def closed_form(self) -> bool:
        return self.kind != "tabulated"

    def sample(self, grid: Grid) -> RealField:
        if self.kind == "paper_closed_form":
            return paper_pressure_trace(grid)
        if self.kind == "gaussian_g_prescribed":
            g = RealField(grid, _gaussian(grid.nodes, self.g_amplitude, self.g_width))
            return pressure_from_g(g, self.kappa)
        if self.samples.grid != grid:
            raise ValueError("tabulated trace is sampled on a different grid")
        return self.samples


@dataclass(frozen=True)
class AdmissibilityReport:
    radicand_ok: bool
    depth_ok: bool
    min_radicand: float
    argmin_q: float
    perturbed_depth: float
    margin_floor: float = MARGIN_FLOOR

    @property
    def passed(self) -> bool:
        return self.radicand_ok and self.depth_ok

    @property
    def margin(self) -> float:
        """Distance of the smallest radicand from the acceptance floor."""
        return self.min_radicand - self.margin_floor

    def describe(self) -> str:
        lines = []
        if self.radicand_ok:
            lines.append(f"radicand 1 - 2(kappa+eps)(p+delta) > 0: ok (min {self.min_radicand:.6g})")
        else:
            lines.append(
                "radicand 1 - 2(kappa+eps)(p+delta) must stay above "
                f"{self.margin_floor:g}: min {self.min_radicand:.6g} at q = {self.argmin_q:.6g}"
            )
        if self.depth_ok:
            lines.append(f"perturbed depth d+gamma > 0: ok ({self.perturbed_depth:.6g})")
        else:
            lines.append(f"perturbed depth d+gamma must be positive: got {self.perturbed_depth:.6g}")
        return "; ".join(lines)


def radicand(p: RealField, kappa: float, spec: PerturbationSpec) -> np.ndarray:
    """``1 - 2(kappa + eps)(p + delta)`` at the grid nodes of ``p``."""
    delta = _gaussian(p.grid.nodes, spec.delta_amplitude, spec.delta_width)
    return 1.0 - 2.0 * (kappa + spec.epsilon) * (p.values + delta)


def check_admissibility(
    p: RealField | PressureTrace,
    params: PhysicalParams,
    spec: PerturbationSpec,
    margin_floor: float = MARGIN_FLOOR,
    grid: Grid | None = None,
) -> AdmissibilityReport:
    """Check that the perturbed reconstruction is defined.

    A closed-form :class:`PressureTrace` is checked on a 4x oversampled
    version of ``grid``; sampled fields are checked on their own nodes.
    """
    if isinstance(p, PressureTrace):
        if p.closed_form:
            if grid is None:
                raise ValueError("a grid is required to check a closed-form trace")
            field_ = p.sample(grid.oversampled(4))
        else:
            field_ = p.samples
    else:
        field_ = p
    r = radicand(field_, params.kappa, spec)
    i = int(np.argmin(r))
    depth = params.depth + spec.gamma
    return AdmissibilityReport(
        radicand_ok=bool(r[i] > margin_floor),
        depth_ok=depth > 0,
        min_radicand=float(r[i]),
        argmin_q=float(field_.grid.nodes[i]),
        perturbed_depth=depth,
        margin_floor=margin_floor,
    )


def load_pressure_csv(path: str | Path, grid: Grid) -> RealField:
    """Read a two-column ``q, p`` CSV and resample it onto ``grid``.

    Lines starting with ``#`` and a non-numeric header row are skipped.
    ``q`` must be strictly increasing. Resampling is by cubic spline; nodes
    outside the tabulated range are set to zero (the trace is assumed to
    have decayed there).
    """
    qs, ps = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                q, p = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not qs:
                    continue  # header
                raise ValueError(f"{path}: malformed row {row!r}") from None
            qs.append(q)
            ps.append(p)
    q = np.asarray(qs)
    p = np.asarray(ps)
    if q.size < 4:
        raise ValueError(f"{path}: need at least 4 samples, got {q.size}")
    if np.any(np.diff(q) <= 0):
        raise ValueError(f"{path}: q column must be strictly increasing")
    nodes = grid.nodes
    inside = (nodes >= q[0]) & (nodes <= q[-1])
    values = np.zeros(grid.n)
    values[inside] = CubicSpline(q, p)(nodes[inside])
    return RealField(grid, values)
