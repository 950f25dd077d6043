"""Uniform real-line grids, continuous-convention Fourier transforms and the
hyperbolic Fourier multipliers used by the reconstruction.

Transform convention::

    F{f}(k)      = int f(q) exp(-i k q) dq
    F^-1{F}(q)   = 1/(2 pi) int F(k) exp(i k q) dk

Spectra are stored in ascending wavenumber order, ``k_m = 2 pi m / (n dq)``
for the signed index ``m`` in ``[-n/2, n/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "RealField",
    "Spectrum",
    "HermitianSymmetryError",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "spectral_cutoff",
    "sinhc",
    "sinh_multiplier",
    "apply_sinh_multiplier",
    "apply_cosh_multiplier",
    "l2_norm",
]

DEFAULT_CUTOFF_REL = 1e-13
DEFAULT_EDGE_TOL = 1e-10
HERMITIAN_TOL = 1e-9


class HermitianSymmetryError(ValueError):
    """Raised when a spectrum cannot be the transform of a real field."""


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of ``[-half_width, half_width)`` with ``n`` nodes."""

    n: int
    half_width: float

    def __post_init__(self):
        n = int(self.n)
        if n != self.n or n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {self.n!r}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    @property
    def signed_index(self) -> np.ndarray:
        return np.arange(-self.n // 2, self.n // 2)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * self.signed_index / (self.n * self.spacing)

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / (self.n * self.spacing)

    def oversampled(self, factor: int = 4) -> "Grid":
        return Grid(self.n * factor, self.half_width)


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples ``f(q_j)`` of a function on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} samples, got array of shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "RealField":
        return cls(grid, func(grid.nodes))

    def __add__(self, other: "RealField") -> "RealField":
        _check_same_grid(self.grid, other.grid)
        return RealField(self.grid, self.values + other.values)

    def __sub__(self, other: "RealField") -> "RealField":
        _check_same_grid(self.grid, other.grid)
        return RealField(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "RealField":
        return RealField(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def edge_decayed(self, edge_tol: float = DEFAULT_EDGE_TOL) -> bool:
        """True if both end samples are below ``edge_tol * max|f|``."""
        peak = np.max(np.abs(self.values))
        if peak == 0.0:
            return True
        limit = edge_tol * peak
        return abs(self.values[0]) <= limit and abs(self.values[-1]) <= limit


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Samples ``F(k_m)`` of a continuous Fourier transform.

    ``edge_warning`` is set when the source field did not decay at the
    window edges; ``cutoff_k`` is the largest retained ``|k|`` once a
    spectral cutoff has been applied (``None`` if never gated).
    """

    grid: Grid
    coeffs: np.ndarray
    edge_warning: bool = False
    cutoff_k: float | None = field(default=None)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} coefficients, got shape {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def wavenumbers(self) -> np.ndarray:
        return self.grid.wavenumbers

    def hermitian_defect(self) -> float:
        """Max of ``|F(-k) - conj F(k)|`` relative to ``max|F|``."""
        peak = np.max(np.abs(self.coeffs))
        if peak == 0.0:
            return 0.0
        mirrored = self.coeffs[_partner_index(self.grid.n)]
        return float(np.max(np.abs(mirrored - np.conj(self.coeffs))) / peak)

    def __add__(self, other: "Spectrum") -> "Spectrum":
        _check_same_grid(self.grid, other.grid)
        return Spectrum(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "Spectrum") -> "Spectrum":
        _check_same_grid(self.grid, other.grid)
        return Spectrum(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "Spectrum":
        return Spectrum(self.grid, self.coeffs * scalar, edge_warning=self.edge_warning)

    __rmul__ = __mul__


def _check_same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")


def _partner_index(n: int) -> np.ndarray:
    # index of -k for each stored k; the Nyquist slot (index 0) maps to itself
    return (n - np.arange(n)) % n


def _window_phase(grid: Grid) -> np.ndarray:
    # exp(i k_m L) = exp(i pi m) = (-1)^m on this grid
    return np.where(grid.signed_index % 2 == 0, 1.0, -1.0)


def make_grid(n: int, half_width: float) -> Grid:
    """Return the grid with nodes ``q_j = -L + j*2L/n``, ``j = 0..n-1``."""
    return Grid(n, half_width)


def forward_transform(f: RealField, edge_tol: float = DEFAULT_EDGE_TOL) -> Spectrum:
    """Approximate ``int f(q) exp(-ikq) dq`` at every grid wavenumber.

    The result is a ``dq``-scaled DFT carrying the window offset phase. It is
    Hermitian by construction. A field that has not decayed at the window
    edges is transformed anyway, with ``edge_warning`` set on the result.
    """
    grid = f.grid
    n = grid.n
    half = np.fft.rfft(f.values)  # m = 0 .. n/2
    full = np.empty(n, dtype=complex)
    # ascending layout: slot i holds m = i - n/2
    full[n // 2 :] = half[: n // 2]
    full[: n // 2] = np.conj(half[n // 2 : 0 : -1])
    coeffs = grid.spacing * _window_phase(grid) * full
    return Spectrum(grid, coeffs, edge_warning=not f.edge_decayed(edge_tol))


def inverse_transform(s: Spectrum) -> RealField:
    """Sample ``1/(2 pi) int F(k) exp(ikq) dk`` on the grid nodes.

    Raises
    ------
    HermitianSymmetryError
        If the spectrum departs from ``F(-k) = conj F(k)`` by more than
        1e-9 relative; every physical field here is real, so this means an
        upstream bug.
    """
    defect = s.hermitian_defect()
    if defect > HERMITIAN_TOL:
        raise HermitianSymmetryError(
            f"spectrum is not Hermitian (relative defect {defect:.3e})"
        )
    grid = s.grid
    n = grid.n
    unphased = s.coeffs * _window_phase(grid) / grid.spacing
    half = np.empty(n // 2 + 1, dtype=complex)
    half[: n // 2] = unphased[n // 2 :]
    half[n // 2] = unphased[0]
    return RealField(grid, np.fft.irfft(half, n))


def spectral_cutoff(
    s: Spectrum,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> Spectrum:
    """Zero coefficients below ``cutoff_rel * max|F|`` and beyond ``k_max``.

    The magnitude test is applied to ``max(|F(k)|, |F(-k)|)`` so the mask is
    symmetric in ``k`` and the gated spectrum stays Hermitian. The largest
    retained ``|k|`` is recorded in ``cutoff_k``.
    """
    keep = _cutoff_mask(s, cutoff_rel, k_max)
    gated = np.where(keep, s.coeffs, 0.0)
    return Spectrum(
        s.grid, gated, edge_warning=s.edge_warning, cutoff_k=_largest_kept(s.grid, keep)
    )


def _cutoff_mask(s: Spectrum, cutoff_rel, k_max) -> np.ndarray:
    mag = np.abs(s.coeffs)
    mag = np.maximum(mag, mag[_partner_index(s.grid.n)])
    keep = np.ones(s.grid.n, dtype=bool)
    if cutoff_rel:
        keep &= mag >= cutoff_rel * mag.max()
    if k_max is not None:
        keep &= np.abs(s.grid.wavenumbers) <= k_max
    return keep


def _largest_kept(grid: Grid, keep: np.ndarray) -> float:
    return float(np.max(np.abs(grid.wavenumbers[keep]))) if keep.any() else 0.0


def _gated_multiply(s: Spectrum, factor_fn, cutoff_rel, k_max) -> Spectrum:
    # factors are only evaluated on kept modes: sinh/cosh overflow at large |k|
    keep = _cutoff_mask(s, cutoff_rel, k_max)
    out = np.zeros(s.grid.n, dtype=complex)
    out[keep] = s.coeffs[keep] * factor_fn(s.grid.wavenumbers[keep])
    return Spectrum(
        s.grid, out, edge_warning=s.edge_warning, cutoff_k=_largest_kept(s.grid, keep)
    )


_SINHC_SERIES_BELOW = 1e-3


def sinhc(x):
    """``sinh(x)/x`` with its removable singularity filled in (value 1 at 0)."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < _SINHC_SERIES_BELOW
    # truncation error of the series is below x^6/5040 ~ 2e-22 on the small branch
    series = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    safe = np.where(small, 1.0, x)
    return np.where(small, series, np.sinh(safe) / safe)


def sinh_multiplier(k, depth_arg: float):
    """``sinh(k d)/k``, equal to ``d`` at ``k = 0``."""
    return depth_arg * sinhc(np.asarray(k) * depth_arg)


def _check_depth(depth_arg: float) -> None:
    if not depth_arg > 0:
        raise ValueError(f"depth argument must be positive, got {depth_arg!r}")


def apply_sinh_multiplier(
    s: Spectrum,
    depth_arg: float,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> Spectrum:
    """Multiply by ``sinh(k d)/k`` after gating with :func:`spectral_cutoff`.

    Pass ``cutoff_rel=None`` for a spectrum that has already been gated.
    """
    _check_depth(depth_arg)
    return _gated_multiply(
        s, lambda k: sinh_multiplier(k, depth_arg), cutoff_rel, k_max
    )


def apply_cosh_multiplier(
    s: Spectrum,
    depth_arg: float,
    cutoff_rel: float | None = DEFAULT_CUTOFF_REL,
    k_max: float | None = None,
) -> Spectrum:
    """Multiply by ``cosh(k d)`` after gating with :func:`spectral_cutoff`."""
    _check_depth(depth_arg)
    return _gated_multiply(s, lambda k: np.cosh(k * depth_arg), cutoff_rel, k_max)


def l2_norm(f: RealField) -> float:
    """Trapezoid-rule ``(int |f|^2 dq)^(1/2)`` over the grid nodes."""
    sq = f.values * f.values
    total = f.grid.spacing * (sq.sum() - 0.5 * (sq[0] + sq[-1]))
    return float(np.sqrt(total))
