"""Reconstruction error, its two-term split, decay/exponent fits and the
sublinear stability bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .grid_spectral import (
    DEFAULT_CUTOFF_REL,
    RealField,
    Spectrum,
    forward_transform,
    inverse_transform,
    l2_norm,
    sinh_multiplier,
    spectral_cutoff,
)
from .reconstruction import compute_g, reconstruct_full
from .wave_model import (
    ZERO_PERTURBATION,
    AdmissibilityError,
    PerturbationSpec,
    PhysicalParams,
    check_admissibility,
)

__all__ = [
    "DecayFit",
    "ExponentFit",
    "BoundInputs",
    "ErrorSplit",
    "error_E",
    "error_split",
    "fit_decay",
    "fit_exponent",
    "fit_power_law",
    "evaluate_bound",
    "bound_exponent",
    "calibrate_a2",
    "DEFAULT_DECAY_WINDOW",
]

DEFAULT_DECAY_WINDOW = (1.0, 4.0)


@dataclass(frozen=True)
class DecayFit:
    sigma_hat: float
    c_hat: float
    window: tuple[float, float]
    residual: float
    n_points: int


@dataclass(frozen=True)
class ExponentFit:
    alpha_hat: float
    intercept: float
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class BoundInputs:
    """Arguments of the stability bound.

    ``sigma`` is the analyticity margin (decay rate of the auxiliary
    spectrum), ``a2`` the multiplicative constant, ``delta_norm`` and
    ``p_norm`` the L2 norms of the pressure perturbation and of the trace.
    """

    sigma: float
    a2: float
    kappa: float
    d: float
    gamma: float = 0.0
    epsilon: float = 0.0
    delta_norm: float = 0.0
    p_norm: float = 1.0

    def __post_init__(self):
        if not self.sigma > self.gamma:
            raise ValueError(f"need sigma > gamma, got sigma={self.sigma}, gamma={self.gamma}")
        if not self.d + self.gamma > 0:
            raise ValueError(f"need d + gamma > 0, got {self.d + self.gamma}")
        if not self.d + self.sigma > 0:
            raise ValueError("need d + sigma > 0")


@dataclass(frozen=True)
class ErrorSplit:
    """Norms of the depth-multiplier term and the auxiliary-field term."""

    term_I: float
    term_II: float
    error: float

    @property
    def triangle_ok(self) -> bool:
        return self.error <= self.term_I + self.term_II + 1e-10


def _require_admissible(p: RealField, params: PhysicalParams, spec: PerturbationSpec) -> None:
    for s in (ZERO_PERTURBATION, spec):
        report = check_admissibility(p, params, s)
        if not report.passed:
            raise AdmissibilityError(report)


def error_E(
    p: RealField,
    params: PhysicalParams,
    spec: PerturbationSpec,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> float:
    """L2 distance in ``q`` between perturbed and unperturbed profiles."""
    _require_admissible(p, params, spec)
    true = reconstruct_full(p, params, ZERO_PERTURBATION, cutoff_rel, k_max)
    pert = reconstruct_full(p, params, spec, cutoff_rel, k_max)
    return l2_norm(pert.eta - true.eta)


def error_split(
    p: RealField,
    params: PhysicalParams,
    spec: PerturbationSpec,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> ErrorSplit:
    """Split ``eta_pert - eta`` into the change of depth multiplier acting on
    the true auxiliary spectrum (term I) and the perturbed multiplier acting
    on the change of auxiliary spectrum (term II).

    Each auxiliary spectrum is gated by its own cutoff, exactly as in
    :func:`error_E`, so the two term fields sum to the realized difference.
    """
    _require_admissible(p, params, spec)
    d = params.depth
    d_pert = d + spec.gamma
    k = p.grid.wavenumbers

    g0_hat = spectral_cutoff(forward_transform(compute_g(p, params.kappa)), cutoff_rel, k_max)
    g1_hat = spectral_cutoff(
        forward_transform(compute_g(p, params.kappa, spec)), cutoff_rel, k_max
    )
    m_pert = sinh_multiplier(k, d_pert)
    m_true = sinh_multiplier(k, d)

    def norm_of(coeffs) -> float:
        return l2_norm(inverse_transform(Spectrum(p.grid, coeffs)))

    # modes zeroed by the gate never reach the multiplier (overflow guard)
    def shaped(mult, coeffs):
        return np.where(coeffs != 0, mult * coeffs, 0.0)

    term_I_coeffs = shaped(m_pert, g0_hat.coeffs) - shaped(m_true, g0_hat.coeffs)
    diff = g1_hat.coeffs - g0_hat.coeffs
    term_II_coeffs = shaped(m_pert, diff)
    return ErrorSplit(
        term_I=norm_of(term_I_coeffs),
        term_II=norm_of(term_II_coeffs),
        error=error_E(p, params, spec, cutoff_rel, k_max),
    )


def fit_decay(s: Spectrum, window: tuple[float, float] = DEFAULT_DECAY_WINDOW) -> DecayFit:
    """Fit ``|F(k)| ~ C exp(-sigma |k|)`` by least squares on ``log|F|``.

    Positive and negative wavenumbers in ``k_lo <= |k| <= k_hi`` are pooled.
    For a spectrum that decays faster than exponentially the result is a
    window-local slope, not an analyticity width.
    """
    k_lo, k_hi = window
    if not k_lo < k_hi:
        raise ValueError(f"degenerate fit window {window!r}")
    absk = np.abs(s.grid.wavenumbers)
    mag = np.abs(s.coeffs)
    sel = (absk >= k_lo) & (absk <= k_hi) & (mag > 1e-300)
    if sel.sum() < 8:
        raise ValueError(
            f"decay fit needs at least 8 usable wavenumbers in {window!r}, found {int(sel.sum())}"
        )
    x = absk[sel]
    y = np.log(mag[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return DecayFit(
        sigma_hat=float(-slope),
        c_hat=float(np.exp(intercept)),
        window=(float(k_lo), float(k_hi)),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_points=int(sel.sum()),
    )


def fit_power_law(sizes: Sequence[float], errors: Sequence[float]) -> ExponentFit:
    """Least-squares slope of ``log error`` against ``log size``."""
    s = np.asarray(sizes, dtype=float)
    e = np.asarray(errors, dtype=float)
    if s.size < 4:
        raise ValueError(f"exponent fit needs at least 4 points, got {s.size}")
    if np.any(s <= 0) or np.any(e <= 0):
        raise ValueError("exponent fit needs strictly positive sizes and errors")
    if math.log10(s.max() / s.min()) < 1.0 - 1e-12:
        raise ValueError("exponent fit needs sizes spanning at least one decade")
    x, y = np.log(s), np.log(e)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(float(slope), float(intercept), float(r2), int(s.size))


def _smallest_decade(pairs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    # shortest prefix (by size) with >= 4 points spanning >= 1 decade
    pairs = sorted(pairs)
    for end in range(4, len(pairs) + 1):
        if pairs[end - 1][0] >= 10.0 * pairs[0][0] * (1 - 1e-12):
            return pairs[:end]
    return pairs


def fit_exponent(records: Iterable, window: str = "smallest_decade") -> ExponentFit:
    """Empirical stability exponent from sweep records.

    Uses the admissible records with positive size ``|param_value|`` and
    positive error. ``window="smallest_decade"`` keeps the smallest
    perturbations (the asymptotic regime); ``window="all"`` uses every point.
    """
    pairs = [
        (abs(r.param_value), r.error_l2)
        for r in records
        if r.admissible and r.error_l2 is not None and r.param_value != 0 and r.error_l2 > 0
    ]
    if window == "smallest_decade":
        pairs = _smallest_decade(pairs)
    elif window != "all":
        raise ValueError(f"unknown fit window {window!r}")
    return fit_power_law([s for s, _ in pairs], [e for _, e in pairs])


def bound_exponent(sigma: float, d: float, gamma: float) -> float:
    """``(sigma - gamma) / (d + sigma)``; ``gamma`` enters signed."""
    return (sigma - gamma) / (d + sigma)


def evaluate_bound(inputs: BoundInputs) -> float:
    """Right-hand side of the sublinear stability estimate.

    ``(|g| |k|^b + (d+g) |e|^b) A1 + (d+g) |delta|^b |k|^b A2`` with
    ``b = (sigma - g)/(d + sigma)`` and ``A1 = |p|^b A2``, where ``g`` is the
    depth error and ``e`` the speed-parameter error.
    """
    b = bound_exponent(inputs.sigma, inputs.d, inputs.gamma)
    dg = inputs.d + inputs.gamma
    kb = abs(inputs.kappa) ** b
    a1 = inputs.p_norm**b * inputs.a2
    first = (abs(inputs.gamma) * kb + dg * abs(inputs.epsilon) ** b) * a1
    second = dg * inputs.delta_norm**b * kb * inputs.a2
    return float(first + second)


def calibrate_a2(inputs: BoundInputs, error: float) -> float:
    """The ``A2`` making the bound equal ``error`` at ``inputs``."""
    unit = evaluate_bound(replace(inputs, a2=1.0))
    if unit <= 0:
        raise ValueError("cannot calibrate against a zero perturbation")
    return error / unit
