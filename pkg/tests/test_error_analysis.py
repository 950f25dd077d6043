import math
from dataclasses import replace
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import DEPTH_SENSITIVITY, KAPPA_SENSITIVITY
from wave_recover.error_analysis import (
    BoundInputs,
    bound_exponent,
    calibrate_a2,
    error_E,
    error_split,
    evaluate_bound,
    fit_decay,
    fit_exponent,
    fit_power_law,
)
from wave_recover.experiments import RunConfig, run_sweep
from wave_recover.grid_spectral import RealField, Spectrum, forward_transform, make_grid
from wave_recover.wave_model import (
    AdmissibilityError,
    PerturbationSpec,
    PhysicalParams,
    paper_pressure_trace,
)


def test_zero_spec_has_zero_error(trace_p, default_params):
    assert error_E(trace_p, default_params, PerturbationSpec()) == 0.0


@pytest.mark.parametrize("eps", [1e-5, -1e-5, 1e-4])
def test_first_order_kappa(trace_p, default_params, eps):
    e = error_E(trace_p, default_params, PerturbationSpec(epsilon=eps))
    assert e == pytest.approx(abs(eps) * KAPPA_SENSITIVITY, rel=0.02)


@pytest.mark.parametrize("gamma", [1e-5, -1e-5, 1e-4])
def test_first_order_depth(trace_p, default_params, gamma):
    e = error_E(trace_p, default_params, PerturbationSpec(gamma=gamma))
    assert e == pytest.approx(abs(gamma) * DEPTH_SENSITIVITY, rel=0.02)


def test_error_rejects_inadmissible(trace_p, default_params):
    with pytest.raises(AdmissibilityError):
        error_E(trace_p, default_params, PerturbationSpec(epsilon=0.1))


def test_split_single_channels(trace_p, default_params):
    depth_only = error_split(trace_p, default_params, PerturbationSpec(gamma=0.05))
    assert depth_only.term_II == 0.0
    assert depth_only.term_I == pytest.approx(depth_only.error, rel=1e-10)
    speed_only = error_split(trace_p, default_params, PerturbationSpec(epsilon=0.01))
    assert speed_only.term_I == 0.0
    assert speed_only.term_II == pytest.approx(speed_only.error, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(
    st.floats(-0.03, 0.03),
    st.floats(-0.1, 0.15),
    st.floats(-0.4, 0.4),
)
def test_split_triangle_inequality(eps, a, gamma):
    grid = make_grid(1024, 30.0)
    split = error_split(
        paper_pressure_trace(grid),
        PhysicalParams(2.0, 1.0),
        PerturbationSpec(epsilon=eps, delta_amplitude=a, gamma=gamma),
    )
    assert split.triangle_ok
    assert split.error <= split.term_I + split.term_II + 1e-10


def _exp_spectrum(grid, c, sigma):
    k = grid.wavenumbers
    return Spectrum(grid, (c * np.exp(-sigma * np.abs(k))).astype(complex))


@pytest.mark.parametrize("c,sigma", [(1.0, 2.0), (5.0, 0.7)])
def test_fit_decay_exact_exponential(grid, c, sigma):
    fit = fit_decay(_exp_spectrum(grid, c, sigma), (1.0, 4.0))
    assert fit.sigma_hat == pytest.approx(sigma, abs=1e-10)
    assert fit.c_hat == pytest.approx(c, rel=1e-10)
    assert fit.residual < 1e-10
    assert fit.window == (1.0, 4.0)


def test_fit_decay_gaussian_local_slope(grid):
    g = RealField.from_function(grid, lambda q: np.exp(-q * q / 2))
    fit = fit_decay(forward_transform(g), (1.0, 3.0))
    absk = np.abs(grid.wavenumbers)
    mean_k = absk[(absk >= 1.0) & (absk <= 3.0)].mean()
    # log of e^{-k^2/2} has slope -k, the least-squares line gives -mean(k)
    assert fit.sigma_hat == pytest.approx(mean_k, rel=1e-6)


def test_fit_decay_errors(grid):
    s = _exp_spectrum(grid, 1.0, 1.0)
    with pytest.raises(ValueError):
        fit_decay(s, (3.0, 1.0))
    with pytest.raises(ValueError):
        fit_decay(s, (1.0, 1.2))


def _records(sizes, errors):
    return [
        SimpleNamespace(param_value=s, error_l2=e, admissible=True) for s, e in zip(sizes, errors)
    ]


def test_fit_power_law_exact():
    s = np.geomspace(1e-4, 1e-1, 10)
    fit = fit_power_law(s, 3.0 * s**0.6)
    assert fit.alpha_hat == pytest.approx(0.6, abs=1e-12)
    assert math.exp(fit.intercept) == pytest.approx(3.0, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 10


def test_fit_exponent_smallest_decade():
    # linear below 1e-2, quadratic above: only the small-size regime is fitted
    s = np.geomspace(1e-4, 1.0, 17)
    e = np.where(s < 1e-2, s, 100 * s**2)
    fit = fit_exponent(_records(s, e))
    assert fit.alpha_hat == pytest.approx(1.0, abs=1e-12)
    assert fit.n_points == 5
    assert fit_exponent(_records(s, e), window="all").alpha_hat > 1.1


def test_fit_exponent_ignores_inadmissible_and_zero():
    s = list(np.geomspace(1e-3, 1e-1, 8))
    recs = _records(s, [x**2 for x in s])
    recs.append(SimpleNamespace(param_value=0.0, error_l2=0.0, admissible=True))
    recs.append(SimpleNamespace(param_value=0.5, error_l2=None, admissible=False))
    assert fit_exponent(recs, window="all").alpha_hat == pytest.approx(2.0, abs=1e-12)


def test_fit_exponent_errors():
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3, 4], [1, 0, 3, 4])
    with pytest.raises(ValueError):
        fit_power_law([1, 2, 3, 4], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        fit_exponent(_records([1e-3, 1e-2, 1e-1, 1.0], [1, 2, 3, 4]), window="middle")


def test_bound_exponent():
    assert bound_exponent(2.0, 1.0, 0.0) == pytest.approx(2 / 3)
    assert bound_exponent(2.0, 1.0, 0.5) == pytest.approx(0.5)


def test_bound_speed_only():
    b = BoundInputs(sigma=2.0, a2=3.0, kappa=0.25, d=1.0, epsilon=1e-3, p_norm=2.0)
    beta = 2 / 3
    expected = 1.0 * 1e-3**beta * 2.0**beta * 3.0
    assert evaluate_bound(b) == pytest.approx(expected, rel=1e-14)


def test_bound_amplitude_only():
    b = BoundInputs(sigma=2.0, a2=3.0, kappa=0.25, d=1.0, delta_norm=0.01)
    beta = 2 / 3
    assert evaluate_bound(b) == pytest.approx(0.01**beta * 0.25**beta * 3.0, rel=1e-14)


def test_bound_zero_perturbation():
    assert evaluate_bound(BoundInputs(sigma=2.0, a2=3.0, kappa=0.25, d=1.0)) == 0.0


def test_bound_input_validation():
    with pytest.raises(ValueError):
        BoundInputs(sigma=0.5, a2=1.0, kappa=0.25, d=1.0, gamma=0.5)
    with pytest.raises(ValueError):
        BoundInputs(sigma=2.0, a2=1.0, kappa=0.25, d=1.0, gamma=-1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-8, 0.1), st.floats(1.01, 10.0), st.sampled_from(["epsilon", "delta_norm"]))
def test_bound_monotone_in_size(x, factor, field):
    base = dict(sigma=2.0, a2=1.5, kappa=0.25, d=1.0, p_norm=1.7)
    lo = evaluate_bound(BoundInputs(**base, **{field: x}))
    hi = evaluate_bound(BoundInputs(**base, **{field: x * factor}))
    assert hi > lo


def test_calibrate_a2_round_trip():
    b = BoundInputs(sigma=2.5, a2=1.0, kappa=0.25, d=1.0, epsilon=0.02, p_norm=1.2)
    a2 = calibrate_a2(b, 0.3)
    assert evaluate_bound(replace(b, a2=a2)) == pytest.approx(0.3, rel=1e-14)
    with pytest.raises(ValueError):
        calibrate_a2(replace(b, epsilon=0.0), 0.3)


@pytest.fixture(scope="module")
def default_sweeps():
    return {ch: run_sweep(RunConfig(channel=ch)) for ch in ("epsilon", "delta_amplitude", "gamma")}


@pytest.mark.parametrize("channel", ["epsilon", "delta_amplitude", "gamma"])
def test_default_sweeps_monotone(default_sweeps, channel):
    res = default_sweeps[channel]
    errors = [r.error_l2 for r in res.records]
    assert len(errors) == 20 and all(r.admissible for r in res.records)
    assert all(b > a for a, b in zip(errors, errors[1:]))


@pytest.mark.parametrize("channel", ["epsilon", "delta_amplitude", "gamma"])
def test_default_sweeps_linear_regime(default_sweeps, channel):
    fit = default_sweeps[channel].fit
    assert fit.alpha_hat == pytest.approx(1.0, abs=0.05)
    assert fit.r_squared > 0.999
