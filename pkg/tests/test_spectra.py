"""Tests for output spectra, closed forms, the amplifier and splitting."""

import math

import numpy as np
import pytest

from nanosqueeze.errors import GridSpanError, InstabilityError, ParameterError
from nanosqueeze.model import DriveMode, build_drift, stability, stability_threshold
from nanosqueeze.params import EffectiveParams
from nanosqueeze.spectra import (
    SpectrumGrid,
    SpectrumResult,
    adiabatic_output_relation,
    amplifier_noise,
    calibrate_normalization,
    closed_form_spectrum,
    detect_normal_mode_splitting,
    integrate_spectrum,
    make_grid,
    output_correlations,
    output_spectrum,
    transfer_matrix,
)
from nanosqueeze.steadystate import (
    optimal_phases,
    quadrature_squeezing,
    solve_steady_moments,
)

MODES = [DriveMode.blue(), DriveMode.red(), DriveMode.blue_red()]


def _zero_temperature_draws(mode, rng, count):
    draws = []
    while len(draws) < count:
        mu = 10 ** rng.uniform(4, 6)
        gamma = mu * 10 ** rng.uniform(-3, -1)
        if mode == DriveMode.blue():
            g = math.sqrt(rng.uniform(0.05, 0.9) * gamma * mu / 4)
        else:
            g = mu * rng.uniform(0.01, 0.5)
        base = EffectiveParams(g=g, chi=0.0, gamma=gamma, mu_ext=mu)
        chi = rng.uniform(0.0, 0.95) * stability_threshold(base, mode)
        params = base.with_updates(chi=chi)
        report = stability(params, mode)
        if report.analytic_pass and report.eigenvalue_pass:
            draws.append(params)
    return draws


def _spectrum(params, mode, theta=None, grid=None):
    if theta is None:
        theta = optimal_phases(mode).theta
    if grid is None:
        grid = make_grid(params, points=65)
    return output_spectrum(build_drift(params, mode), theta, grid)


def test_grid_construction(red_fiducial):
    """Test default and densified grids."""
    grid = make_grid(red_fiducial)
    assert len(grid) == 2049
    assert grid.omega[grid.zero_index] == 0.0
    assert grid.span == pytest.approx(20 * red_fiducial.mu)

    dense = make_grid(red_fiducial, points=101, densify=True)
    assert np.all(np.diff(dense.omega) > 0)
    assert len(dense) > 101

    with pytest.raises(ParameterError):
        make_grid(red_fiducial, points=64)
    with pytest.raises(ParameterError):
        SpectrumGrid(np.array([1.0, 2.0, 3.0]))


def test_empty_cavity_reflection():
    """Test that an empty cavity on resonance reflects with coefficient +1."""
    p = EffectiveParams(g=0.0, chi=0.0, gamma=0.01, mu_ext=1.0)
    model = build_drift(p, DriveMode.red())
    T = transfer_matrix(model, 0.0)
    assert T[0, 0] == pytest.approx(1.0)
    assert T[1, 1] == pytest.approx(1.0)
    assert transfer_matrix(model, np.array([0.0, 1.0])).shape == (2, 4, 4)


@pytest.mark.parametrize(
    "mode", [DriveMode.red(), DriveMode.blue()], ids=lambda m: m.kind.value
)
def test_adiabatic_output_relation_at_low_frequency(mode):
    """Test the slaved-cavity transfer matrix against the full one for g << μ."""
    p = EffectiveParams(g=0.02, chi=0.0002, gamma=0.003334, mu_ext=1.0)
    model = build_drift(p, mode)
    omega = np.linspace(-0.01, 0.01, 11)
    full = transfer_matrix(model, omega)
    approx = adiabatic_output_relation(model, omega)
    assert approx.shape == full.shape
    assert np.max(np.abs(approx - full)) < 0.05 * np.max(np.abs(full))
    assert adiabatic_output_relation(model, 0.0).shape == (4, 4)


def test_vacuum_in_vacuum_out():
    """Test that a red beam splitter without pump emits vacuum at every phase."""
    p = EffectiveParams.in_mu_units(1e5, g=0.02, chi=0.0, gamma=0.003)
    for theta in (0.0, -math.pi / 4, 1.0):
        spec = _spectrum(p, DriveMode.red(), theta)
        assert np.max(np.abs(spec.S_squeezed)) < 1e-12
        assert np.max(np.abs(spec.S_antisqueezed)) < 1e-12


def test_unpumped_amplifying_drives_are_not_vacuum():
    """Test that blue driving amplifies and two drives keep only θ = 0 at vacuum."""
    p = EffectiveParams.in_mu_units(1e5, g=0.02, chi=0.0, gamma=0.003)
    blue = _spectrum(p, DriveMode.blue(), -math.pi / 4)
    assert np.max(blue.S_squeezed) > 1.0
    assert np.all(blue.S_squeezed > -1e-12)

    both = _spectrum(p, DriveMode.blue_red(), 0.0)
    assert np.max(np.abs(both.S_squeezed)) < 1e-12
    assert np.max(both.S_antisqueezed) > 1.0


def test_red_fiducial_matches_closed_form(red_fiducial):
    """Test the assembled red spectrum against its closed form."""
    grid = make_grid(red_fiducial, points=257)
    spec = _spectrum(red_fiducial, DriveMode.red(), grid=grid)
    closed, anti = closed_form_spectrum(red_fiducial, DriveMode.red(), spec.omega)
    assert anti is None
    np.testing.assert_allclose(
        spec.S_squeezed, closed, rtol=1e-10, atol=1e-13 * np.max(np.abs(closed))
    )

    p = red_fiducial
    chi = p.chi.real
    damping = 4 * p.g**2 + p.gamma * p.mu + 4 * p.mu * chi
    at_zero = -64 * p.g**2 * p.mu * chi / damping**2
    assert spec.S_squeezed[spec.grid.zero_index] == pytest.approx(at_zero, rel=1e-10)
    assert at_zero < 0


@pytest.mark.parametrize("mode", MODES, ids=lambda m: m.kind.value)
def test_closed_form_equivalence(mode):
    """Test output spectra against the closed forms on random draws."""
    rng = np.random.default_rng(11)
    for params in _zero_temperature_draws(mode, rng, 50):
        spec = _spectrum(params, mode)
        squeezed, anti = closed_form_spectrum(params, mode, spec.omega)
        scale = max(
            np.max(np.abs(spec.S_antisqueezed)), np.max(np.abs(spec.S_squeezed))
        )
        tol = dict(rtol=1e-9, atol=1e-12 * scale, err_msg=str(params))
        np.testing.assert_allclose(spec.S_squeezed, squeezed, **tol)
        if anti is not None:
            np.testing.assert_allclose(spec.S_antisqueezed, anti, **tol)

        assert np.all(spec.S_squeezed >= -1) and np.all(spec.S_antisqueezed >= -1)
        assert np.all(spec.S_squeezed + spec.S_antisqueezed >= -1e-12 * scale)
        if mode == DriveMode.blue():
            floor = -1e-12 * scale
            assert np.all(spec.S_squeezed >= floor), "blue drive cannot squeeze"


def test_closed_form_errors(red_fiducial):
    """Test the closed-form preconditions."""
    with pytest.raises(ParameterError):
        closed_form_spectrum(red_fiducial.with_updates(n_m0=0.1), DriveMode.red(), 0.0)
    with pytest.raises(ParameterError):
        closed_form_spectrum(red_fiducial.with_updates(chi=1j), DriveMode.red(), 0.0)
    with pytest.raises(InstabilityError):
        closed_form_spectrum(
            red_fiducial.with_updates(chi=0.02 * red_fiducial.mu), DriveMode.red(), 0.0
        )

    omega = np.array([1e3, 1e4]) * red_fiducial.mu
    tail, _ = closed_form_spectrum(red_fiducial, DriveMode.red(), omega)
    # ω⁻⁴ decay
    assert tail[0] / tail[1] == pytest.approx(1e4, rel=1e-3)


def test_spectra_real_for_complex_chi_and_thermal_bath(red_fiducial):
    """Test that general parameters still give real spectra."""
    rotation = complex(0.6, 0.8)
    red = red_fiducial.with_updates(chi=red_fiducial.chi * rotation, n_m0=1.5)
    both = red.with_updates(chi=5e-4 * red_fiducial.mu * rotation)
    for p, mode in ((red, DriveMode.red()), (both, DriveMode.blue_red(psi=0.3))):
        model = build_drift(p, mode)
        corr = output_correlations(model, make_grid(p, points=33).omega)
        S = np.exp(2j) * corr.aa + np.exp(-2j) * corr.adad + 2 * corr.ada
        assert np.max(np.abs(S.imag)) < 1e-10
        spec = output_spectrum(model, 1.0, make_grid(p, points=33))
        assert np.all(spec.S_squeezed + spec.S_antisqueezed >= -1e-12)


def test_thermal_noise_degrades_squeezing(red_fiducial):
    """Test that S_s(0) does not decrease with the bath occupation."""
    grid = SpectrumGrid(np.array([-1.0, 0.0, 1.0]))
    for chi in (0.001, 0.003, 0.005):
        values = [
            _spectrum(
                red_fiducial.with_updates(chi=chi * red_fiducial.mu, n_m0=n),
                DriveMode.red(),
                grid=grid,
            ).S_squeezed[1]
            for n in (0.0, 0.25, 0.5, 1.0, 2.0)
        ]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:])), values


@pytest.mark.parametrize("n_m0", [0.5, 1.0, 2.0, 4.0])
def test_warm_red_spectrum_keeps_the_zero_temperature_shape(red_fiducial, n_m0):
    """Test that a warm bath only rescales the red spectrum at θ = -π/4.

    The numerator becomes 32 g² μ (γ n - 2χ) over the zero-temperature
    denominator, so squeezing needs 2χ > γ n and its optimum stays at ω = 0.
    """
    base = red_fiducial.with_updates(n_m0=n_m0)
    threshold = stability_threshold(base, DriveMode.red())
    grid = make_grid(base, points=801, span=0.5 * base.mu)
    g2, gamma, mu = base.g**2, base.gamma, base.mu
    w2 = grid.omega**2
    for fraction in (0.3, 0.6, 0.9, 0.99):
        chi = fraction * threshold
        spec = _spectrum(base.with_updates(chi=chi), DriveMode.red(), grid=grid)
        denominator = (
            (4 * g2 + gamma * mu + 4 * mu * chi) ** 2
            + 4 * (-8 * g2 + mu**2 + (gamma + 4 * chi) ** 2) * w2
            + 16 * w2**2
        )
        expected = 32 * g2 * mu * (gamma * n_m0 - 2 * chi) / denominator
        scale = np.max(np.abs(expected))
        np.testing.assert_allclose(
            spec.S_squeezed, expected, rtol=1e-8, atol=1e-10 * scale
        )
        lowest = spec.minimum()
        if lowest["S_squeezed"] < 0:
            assert lowest["omega"] == 0.0
            assert 2 * chi > gamma * n_m0


def test_phase_offset_moves_warm_optimum_off_resonance(red_fiducial):
    """Test that a detuned local oscillator picks up the narrow anti-squeezed peak.

    With n_m0 = 0.5 and χ at 90 % of threshold the ω = 0 component is
    anti-squeezed while the best squeezing sits off resonance.
    """
    base = red_fiducial.with_updates(n_m0=0.5)
    threshold = stability_threshold(base, DriveMode.red())
    params = base.with_updates(chi=0.9 * threshold)
    grid = make_grid(base, points=801, span=0.2 * base.mu)

    aligned = _spectrum(params, DriveMode.red(), -math.pi / 4, grid)
    assert aligned.minimum()["omega"] == 0.0

    detuned = _spectrum(params, DriveMode.red(), -math.pi / 4 + 0.1, grid)
    lowest = detuned.minimum()
    assert lowest["S_squeezed"] < 0
    assert abs(lowest["omega"]) > 0.005 * base.mu
    assert detuned.S_squeezed[grid.zero_index] > 0


def test_amplifier_noise(red_fiducial):
    """Test the phase-insensitive amplifier map."""
    grid = SpectrumGrid(np.array([-1.0, 0.0, 1.0]))
    spec = SpectrumResult(
        grid=grid,
        S_squeezed=np.array([-0.4, -0.4, 0.0]),
        S_antisqueezed=np.array([0.0, 0.5, 0.0]),
        theta=0.0,
        mode=DriveMode.red(),
        params=red_fiducial,
    )
    same = amplifier_noise(spec, 1.0, 7.0)
    np.testing.assert_allclose(same.S_squeezed, spec.S_squeezed)

    doubled = amplifier_noise(spec, 2.0, 0.0)
    assert doubled.S_squeezed[0] == pytest.approx(1.2)
    assert doubled.amplifier.gain == 2.0

    loud = amplifier_noise(spec, 10.0, 5.0)
    assert loud.S_squeezed[2] == pytest.approx(108.0)

    with pytest.raises(ParameterError):
        amplifier_noise(spec, 0.5, 0.0)
    with pytest.raises(ParameterError):
        amplifier_noise(doubled, 2.0, 0.0)
    with pytest.raises(ParameterError):
        integrate_spectrum(doubled)


def test_integral_matches_intracavity_variance(red_fiducial):
    """Test the integral relation against the moment solver."""
    mode = DriveMode.red()
    theta = -math.pi / 4
    cavity = solve_steady_moments(build_drift(red_fiducial, mode)).cavity
    expected = quadrature_squeezing(cavity, theta).S_X

    def integral(points):
        grid = make_grid(red_fiducial, points)
        return integrate_spectrum(_spectrum(red_fiducial, mode, theta, grid))

    coarse = integral(8001)
    fine = integral(16001)
    assert coarse == pytest.approx(expected, rel=5e-3)
    assert fine == pytest.approx(coarse, rel=5e-4)

    quiet = red_fiducial.with_updates(chi=0.0)
    silent = integrate_spectrum(_spectrum(quiet, mode, theta))
    assert silent == pytest.approx(0.0, abs=1e-12)


def test_integral_needs_wide_grid(red_fiducial):
    """Test that a grid cutting into the spectrum is rejected."""
    narrow = make_grid(red_fiducial, points=401, span=0.05 * red_fiducial.mu)
    spec = _spectrum(red_fiducial, DriveMode.red(), -math.pi / 4, narrow)
    with pytest.raises(GridSpanError) as excinfo:
        integrate_spectrum(spec)
    assert excinfo.value.required_span > narrow.span


def test_normalization_calibration():
    """Test that the frozen normalisation is recovered on three parameter sets."""
    cases = [
        EffectiveParams.in_mu_units(1e5, g=0.09, chi=0.003, gamma=0.003334),
        EffectiveParams.in_mu_units(1e5, g=0.05, chi=0.002, gamma=0.01),
        EffectiveParams.in_mu_units(1e5, g=0.2, chi=0.02, gamma=0.005),
    ]
    result = calibrate_normalization(cases, DriveMode.red(), -math.pi / 4)
    assert len(result.constants) == 3
    assert result.consistent, result.constants
    assert result.matches_frozen, result.constants


def test_normal_mode_splitting(red_fiducial):
    """Test splitting detection in the weak and strong coupling regimes."""
    weak = detect_normal_mode_splitting(red_fiducial)
    assert not weak.split and not weak.marginal
    assert weak.found_minima == []

    strong = EffectiveParams.in_mu_units(1e5, g=1.0, chi=0.1, gamma=0.003334)
    report = detect_normal_mode_splitting(strong)
    assert report.split
    g = strong.g
    assert any(abs(w - g) < 0.1 * g for w in report.found_minima), report.found_minima
    assert any(abs(w + g) < 0.1 * g for w in report.found_minima), report.found_minima

    s = strong.gamma + 4 * strong.chi.real
    edge = strong.with_updates(g=math.sqrt((strong.mu**2 + s**2) / 8))
    boundary = detect_normal_mode_splitting(edge)
    assert boundary.marginal and not boundary.split
