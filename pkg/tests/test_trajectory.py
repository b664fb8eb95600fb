"""Tests for the stochastic output simulation and spectral estimation."""

import math

import numpy as np
import pytest
import scipy.signal

from nanosqueeze.constants import VACUUM_FLOOR
from nanosqueeze.errors import InstabilityError, InsufficientDataError, ParameterError
from nanosqueeze.model import DriveMode, build_drift
from nanosqueeze.params import EffectiveParams
from nanosqueeze.spectra import closed_form_spectrum
from nanosqueeze.steadystate import solve_steady_moments
from nanosqueeze.trajectory import (
    TrajectoryConfig,
    estimate_spectrum,
    max_step,
    noise_matrix,
    quadrature_drift,
    restrict,
    simulate_output,
    simulate_spectrum,
    stationary_covariance,
)
from nanosqueeze.trajectory.estimate import segment_length


def _unit_mu(**kwargs):
    return EffectiveParams(gamma=0.5, mu_ext=1.0, **kwargs)


def _empty_cavity():
    params = EffectiveParams(g=0.0, chi=0.0, gamma=0.5, mu_ext=1.0)
    return build_drift(params, DriveMode.red())


def _fast_cfg(n_segments=8, seed=3, duration_per_record=50.0):
    return TrajectoryConfig(
        dt=0.025,
        duration=n_segments * duration_per_record,
        n_segments=n_segments,
        seed=seed,
        burn_in=10.0,
    )


def test_config_validation():
    """Test trajectory settings validation."""
    cfg = TrajectoryConfig(dt=0.01, duration=10.0, n_segments=4, burn_in=0.5)
    assert cfg.record_steps == 250
    assert cfg.burn_in_steps == 50
    with pytest.raises(ParameterError):
        TrajectoryConfig(dt=0.0, duration=1.0)
    with pytest.raises(ParameterError):
        TrajectoryConfig(dt=0.1, duration=1.0, n_segments=0)
    with pytest.raises(ParameterError):
        TrajectoryConfig(dt=0.1, duration=1.0, seed=-1)


def test_quadrature_drift_is_real(red_fiducial):
    """Test the real quadrature form of each drift matrix."""
    for mode in (DriveMode.blue(), DriveMode.red(), DriveMode.blue_red(psi=0.4)):
        model = build_drift(red_fiducial.with_updates(chi=1e-4 * red_fiducial.mu), mode)
        R = quadrature_drift(model)
        assert R.dtype == float
        assert np.trace(R) == pytest.approx(np.trace(model.M).real, rel=1e-12)
        assert np.linalg.det(R) == pytest.approx(np.linalg.det(model.M).real, rel=1e-9)


def test_noise_matrix_columns():
    """Test the noise amplitudes of each port."""
    p = EffectiveParams(g=0.1, chi=0.0, gamma=0.5, mu_ext=2.0, mu_int=0.5, n_m0=1.0)
    G = noise_matrix(build_drift(p, DriveMode.red()))
    assert G.shape == (4, 6)
    assert G[0, 0] == pytest.approx(math.sqrt(2.0))
    assert G[2, 2] == pytest.approx(math.sqrt(1.5))
    assert G[1, 5] == pytest.approx(math.sqrt(0.5))


def test_guards(red_fiducial):
    """Test the step, duration and stability guards."""
    model = _empty_cavity()
    with pytest.raises(ParameterError):
        simulate_output(model, 0.0, TrajectoryConfig(dt=max_step(model), duration=1e3))
    with pytest.raises(InsufficientDataError) as excinfo:
        simulate_output(model, 0.0, TrajectoryConfig(dt=0.01, duration=10.0))
    assert excinfo.value.required_duration == pytest.approx(200.0)

    above = red_fiducial.with_updates(chi=0.02 * red_fiducial.mu)
    unstable = build_drift(above, DriveMode.red())
    with pytest.raises(InstabilityError):
        simulate_output(unstable, 0.0, TrajectoryConfig(dt=1e-9, duration=1.0))


def test_deterministic_given_seed():
    """Test bit-identical reruns and seed sensitivity."""
    model = _empty_cavity()
    first = simulate_output(model, 0.3, _fast_cfg())
    second = simulate_output(model, 0.3, _fast_cfg())
    assert np.array_equal(first.x_out, second.x_out)
    assert np.array_equal(first.y_out, second.y_out)

    other = simulate_output(model, 0.3, _fast_cfg(seed=4))
    assert not np.array_equal(first.x_out, other.x_out)


def test_records_independent_of_record_count():
    """Test that a record's noise does not depend on how many records run."""
    model = _empty_cavity()
    few = simulate_output(model, 0.0, _fast_cfg(n_segments=4))
    many = simulate_output(model, 0.0, _fast_cfg(n_segments=8))
    np.testing.assert_allclose(few.x_out, many.x_out[:4], rtol=0, atol=1e-12)


def test_vacuum_floor():
    """Test that an empty cavity reflects vacuum at the floor level."""
    model = _empty_cavity()
    cfg = _fast_cfg(n_segments=8)
    series = simulate_output(model, 0.0, cfg)
    spec = estimate_spectrum(series, cfg)

    assert spec.has_errors
    within = np.abs(spec.S_squeezed) < 3 * spec.stderr_squeezed
    assert within.mean() >= 0.95, f"{within.mean():.3f} of bins within 3 sigma"
    assert abs(np.mean(spec.S_squeezed)) < 0.05
    assert abs(np.mean(spec.S_antisqueezed)) < 0.05

    # raw periodogram level before subtraction
    assert np.mean(spec.S_squeezed + VACUUM_FLOOR) == pytest.approx(1.0, abs=0.05)

    x = series.x_out
    mean_stderr = x.mean(axis=1).std(ddof=1) / math.sqrt(series.n_records)
    assert abs(x.mean()) < 4 * mean_stderr + 1e-12


def test_stderr_scales_with_records():
    """Test that doubling the records shrinks error bars by about √2."""
    model = _empty_cavity()
    cfg_a = _fast_cfg(n_segments=8)
    cfg_b = _fast_cfg(n_segments=16)
    a = simulate_spectrum(model, 0.0, cfg_a)
    b = simulate_spectrum(model, 0.0, cfg_b)
    ratio = float(np.median(a.stderr_squeezed / b.stderr_squeezed))
    assert ratio == pytest.approx(math.sqrt(2), rel=0.2)


def test_error_bars_count_records_not_windows():
    """Test that error bars come from the spread of per-record Welch averages."""
    model = _empty_cavity()
    cfg = _fast_cfg(n_segments=6)
    series = simulate_output(model, 0.0, cfg)
    spec = estimate_spectrum(series, cfg)

    nperseg = segment_length(series, cfg)
    freqs, per_record = scipy.signal.welch(
        series.x_out,
        fs=1.0 / series.dt,
        window="hann",
        nperseg=nperseg,
        noverlap=nperseg // 2,
        detrend=False,
        return_onesided=False,
        scaling="density",
        axis=-1,
    )
    per_record = per_record[:, np.argsort(freqs)]
    assert per_record.shape[0] == series.n_records == 6

    expected = per_record.std(axis=0, ddof=1) / math.sqrt(6)
    np.testing.assert_allclose(spec.stderr_squeezed, expected, rtol=1e-9)
    np.testing.assert_allclose(
        spec.S_squeezed + VACUUM_FLOOR, per_record.mean(axis=0), rtol=1e-9
    )

    single = _fast_cfg(n_segments=1)
    alone = estimate_spectrum(simulate_output(model, 0.0, single), single)
    assert alone.stderr_squeezed is None
    assert not alone.has_errors


def test_estimate_needs_two_segments():
    """Test the data-length check of the spectral estimate."""
    model = _empty_cavity()
    cfg = _fast_cfg()
    series = simulate_output(model, 0.0, cfg)
    too_long = TrajectoryConfig(
        dt=cfg.dt,
        duration=cfg.duration,
        n_segments=cfg.n_segments,
        seed=cfg.seed,
        burn_in=cfg.burn_in,
        segment_points=series.x_out.shape[1],
    )
    with pytest.raises(InsufficientDataError):
        estimate_spectrum(series, too_long)


def test_covariance_matches_moment_solver():
    """Test the integrator's stationary covariance against the moment solver."""
    cases = [
        (_unit_mu(g=0.2, chi=0.05, n_m0=0.5), DriveMode.red()),
        (_unit_mu(g=0.1, chi=0.03), DriveMode.blue()),
        (_unit_mu(g=0.2, chi=0.06, n_m0=0.2), DriveMode.blue_red()),
    ]
    for params, mode in cases:
        model = build_drift(params, mode)
        cfg = TrajectoryConfig(
            dt=0.01, duration=16 * 400.0, n_segments=16, seed=5, burn_in=40.0
        )
        estimate = stationary_covariance(simulate_output(model, 0.0, cfg))
        expected = solve_steady_moments(model).symmetric_covariance()
        allowance = 3 * estimate.stderr + 0.02 * np.max(np.abs(expected))
        assert np.all(np.abs(estimate.covariance - expected) <= allowance), (
            mode.label,
            estimate.covariance,
            expected,
        )
        assert np.all(np.abs(estimate.mean) <= 4 * estimate.mean_stderr + 1e-12)


@pytest.mark.slow
def test_red_fiducial_spectrum(red_fiducial):
    """Test the simulated red spectrum against the analytic one."""
    model = build_drift(red_fiducial, DriveMode.red())
    cfg = TrajectoryConfig.for_model(model, n_segments=16, seed=1)
    spec = restrict(simulate_spectrum(model, -math.pi / 4, cfg), 0.5 * red_fiducial.mu)
    analytic, _ = closed_form_spectrum(red_fiducial, DriveMode.red(), spec.omega)
    within = np.abs(spec.S_squeezed - analytic) <= 3 * spec.stderr_squeezed
    assert within.mean() >= 0.95, f"{within.mean():.3f} of bins within 3 sigma"


@pytest.mark.slow
def test_halving_dt_within_errors():
    """Test that the integration step does not bias the band-averaged spectrum."""
    params = EffectiveParams(g=0.2, chi=0.05, gamma=0.5, mu_ext=1.0)
    model = build_drift(params, DriveMode.red())

    def band(dt):
        cfg = TrajectoryConfig(
            dt=dt, duration=16 * 200.0, n_segments=16, seed=9, burn_in=40.0
        )
        spec = restrict(simulate_spectrum(model, -math.pi / 4, cfg), 1.0)
        # neighbouring Hann bins are correlated, so count half of them
        error = np.sqrt(np.mean(spec.stderr_squeezed**2) / (spec.omega.size / 2))
        return float(np.mean(spec.S_squeezed)), float(error)

    coarse, coarse_err = band(0.02)
    fine, fine_err = band(0.01)
    assert abs(coarse - fine) < 4 * math.hypot(coarse_err, fine_err)
