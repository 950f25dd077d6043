"""Free-surface recovery from a bed-pressure trace.

Given the dynamic bed pressure ``p(q)`` in hodograph coordinates, the wave
speed ``c`` (``kappa = 1/c^2``) and the depth ``d``, the auxiliary field

    g(q) = (1 - 2 kappa p(q))^{-1/2} - 1

determines the surface parametrically:

    eta(q) = F^-1[ sinh(k d)/k * g_hat ](q)
    x(q)   = q + int_{-inf}^{q} F^-1[ cosh(k d) * g_hat ](s) ds
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .grid_spectral import (
    DEFAULT_CUTOFF_REL,
    Grid,
    RealField,
    Spectrum,
    apply_cosh_multiplier,
    apply_sinh_multiplier,
    forward_transform,
    inverse_transform,
)
from .wave_model import (
    MARGIN_FLOOR,
    ZERO_PERTURBATION,
    AdmissibilityError,
    PerturbationSpec,
    PhysicalParams,
    check_admissibility,
    radicand,
)

__all__ = [
    "GRAVITY",
    "Diagnostics",
    "ReconstructionResult",
    "compute_g",
    "reconstruct_eta",
    "reconstruct_x",
    "reconstruct_full",
    "linear_baseline_eta",
]

GRAVITY = 9.81


@dataclass(frozen=True)
class Diagnostics:
    cutoff_k: float | None = None
    edge_warning: bool = False
    monotone_x: bool = True


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    grid: Grid
    eta: RealField
    x_of_q: RealField
    params_used: PhysicalParams
    perturbation_used: PerturbationSpec
    g: RealField
    g_hat: Spectrum
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def compute_g(
    p: RealField,
    kappa: float,
    spec: PerturbationSpec = ZERO_PERTURBATION,
    margin_floor: float = MARGIN_FLOOR,
) -> RealField:
    """Auxiliary field ``(1 - 2(kappa+eps)(p+delta))^{-1/2} - 1``.

    Raises
    ------
    ValueError
        If the radicand drops to ``margin_floor`` or below at any node.
    """
    r = radicand(p, kappa, spec)
    if np.any(r <= margin_floor):
        i = int(np.argmin(r))
        raise ValueError(
            f"radicand 1 - 2(kappa+eps)(p+delta) = {r[i]:.6g} at q = {p.grid.nodes[i]:.6g}"
            f" is not above {margin_floor:g}"
        )
    root = np.sqrt(r)
    # 1/sqrt(r) - 1 = (1 - r) / (sqrt(r) (1 + sqrt(r))), exact in the far field
    return RealField(p.grid, (1.0 - r) / (root * (1.0 + root)))


def _eta_from_spectrum(g_hat: Spectrum, depth_arg, cutoff_rel, k_max) -> tuple[RealField, Spectrum]:
    shaped = apply_sinh_multiplier(g_hat, depth_arg, cutoff_rel=cutoff_rel, k_max=k_max)
    return inverse_transform(shaped), shaped


def _x_from_spectrum(g_hat: Spectrum, depth_arg, cutoff_rel, k_max) -> RealField:
    slope = inverse_transform(
        apply_cosh_multiplier(g_hat, depth_arg, cutoff_rel=cutoff_rel, k_max=k_max)
    )
    grid = g_hat.grid
    shift = cumulative_trapezoid(slope.values, dx=grid.spacing, initial=0.0)
    return RealField(grid, grid.nodes + shift)


def reconstruct_eta(
    g: RealField,
    depth_arg: float,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> RealField:
    """Surface elevation ``F^-1[sinh(k d)/k g_hat]`` on the grid of ``g``."""
    eta, _ = _eta_from_spectrum(forward_transform(g), depth_arg, cutoff_rel, k_max)
    return eta


def reconstruct_x(
    g: RealField,
    depth_arg: float,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> RealField:
    """Physical abscissa ``x(q)`` of each hodograph node.

    The integral from minus infinity is started at the left window edge with
    a zero tail, and accumulated with the trapezoid rule.
    """
    return _x_from_spectrum(forward_transform(g), depth_arg, cutoff_rel, k_max)


def reconstruct_full(
    p: RealField,
    params: PhysicalParams,
    spec: PerturbationSpec = ZERO_PERTURBATION,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> ReconstructionResult:
    """Reconstruct ``(x(q), eta(q))`` from perturbed speed, pressure and depth.

    The perturbed depth ``d + gamma`` is used in both multipliers.

    Raises
    ------
    AdmissibilityError
        If the radicand is not positive or ``d + gamma <= 0``.
    """
    report = check_admissibility(p, params, spec)
    if not report.passed:
        raise AdmissibilityError(report)
    depth = params.depth + spec.gamma
    g = compute_g(p, params.kappa, spec)
    g_hat = forward_transform(g)
    eta, shaped = _eta_from_spectrum(g_hat, depth, cutoff_rel, k_max)
    x = _x_from_spectrum(g_hat, depth, cutoff_rel, k_max)
    diagnostics = Diagnostics(
        cutoff_k=shaped.cutoff_k,
        edge_warning=g_hat.edge_warning,
        monotone_x=bool(np.all(np.diff(x.values) > 0)),
    )
    return ReconstructionResult(
        grid=p.grid,
        eta=eta,
        x_of_q=x,
        params_used=params,
        perturbation_used=spec,
        g=g,
        g_hat=g_hat,
        diagnostics=diagnostics,
    )


def linear_baseline_eta(
    p: RealField,
    depth: float,
    gravity: float = GRAVITY,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> RealField:
    """Linear transfer-function estimate ``F^-1[cosh(k d) p_hat] / gravity``."""
    if not depth > 0:
        raise ValueError(f"depth must be positive, got {depth!r}")
    if not gravity > 0:
        raise ValueError(f"gravity must be positive, got {gravity!r}")
    shaped = apply_cosh_multiplier(forward_transform(p), depth, cutoff_rel=cutoff_rel, k_max=k_max)
    return inverse_transform(shaped) * (1.0 / gravity)
