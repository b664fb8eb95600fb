"""Tests for the moment solver, quadrature squeezing and phonon numbers."""

import cmath
import math

import numpy as np
import pytest

from nanosqueeze.errors import InstabilityError, ParameterError
from nanosqueeze.model import DriveMode, build_drift, stability, stability_threshold
from nanosqueeze.params import EffectiveParams
from nanosqueeze.steadystate import (
    ModeMoments,
    cavity_nanores_relation_check,
    closed_form_SYm,
    final_phonon_number,
    optimal_phases,
    optimal_quadrature,
    quadrature_squeezing,
    red_threshold_SYm,
    solve_steady_moments,
)

MODES = [DriveMode.blue(), DriveMode.red(), DriveMode.blue_red()]


def _moments(params, mode):
    return solve_steady_moments(build_drift(params, mode))


def _random_stable(mode, rng, count):
    """Draw real-χ parameter sets below threshold on both criteria."""
    draws = []
    while len(draws) < count:
        mu = 10 ** rng.uniform(4, 6)
        gamma = mu * 10 ** rng.uniform(-3, -1)
        if mode == DriveMode.blue():
            g = math.sqrt(rng.uniform(0.0, 0.9) * gamma * mu / 4)
        else:
            g = mu * rng.uniform(0.0, 0.3)
        base = EffectiveParams(
            g=g, chi=0.0, gamma=gamma, mu_ext=mu, n_m0=rng.uniform(0.0, 4.0)
        )
        chi = rng.uniform(0.0, 0.95) * stability_threshold(base, mode)
        params = base.with_updates(chi=chi)
        report = stability(params, mode)
        if report.analytic_pass and report.eigenvalue_pass:
            draws.append(params)
    return draws


def test_vacuum_and_thermal_fixed_points():
    """Test the uncoupled system relaxes to vacuum or the bath occupation."""
    vacuum = EffectiveParams(g=0.0, chi=0.0, gamma=0.01, mu_ext=1.0)
    state = _moments(vacuum, DriveMode.red())
    assert abs(state.bdb) < 1e-14 and abs(state.ada) < 1e-14
    assert abs(state.b2) < 1e-14 and abs(state.a2) < 1e-14

    thermal = vacuum.with_updates(n_m0=3.0)
    state = _moments(thermal, DriveMode.red())
    assert state.bdb == pytest.approx(3.0, rel=1e-12)
    assert abs(state.ada) < 1e-12
    assert abs(state.b2) < 1e-12


def test_moment_conjugation_invariants(red_fiducial):
    """Test the conjugate moment pairs and positivity of the occupations."""
    state = _moments(red_fiducial.with_updates(n_m0=0.5), DriveMode.red())
    assert state.ad2 == pytest.approx(state.a2.conjugate(), abs=1e-12)
    assert state.bd2 == pytest.approx(state.b2.conjugate(), abs=1e-12)
    assert state.adbd == pytest.approx(state.ab.conjugate(), abs=1e-12)
    assert state.bdb >= 0 and state.ada >= 0
    assert state.is_physical()
    assert not state.near_threshold


def test_red_fiducial_matches_closed_form(red_fiducial):
    """Test the moment solver against the red closed form at φ = -π/4."""
    state = _moments(red_fiducial, DriveMode.red())
    S_Y = quadrature_squeezing(state.mechanics, -math.pi / 4).S_Y
    expected = closed_form_SYm(red_fiducial, DriveMode.red())
    assert S_Y == pytest.approx(expected, rel=1e-10)
    assert S_Y < 0, "fiducial red drive should squeeze the nanoresonator"


@pytest.mark.parametrize("mode", MODES, ids=lambda m: m.kind.value)
def test_closed_forms_match_moment_solver(mode):
    """Test closed-form S_Y'm against the moment solver on random draws."""
    rng = np.random.default_rng(7)
    for params in _random_stable(mode, rng, 100):
        state = _moments(params, mode)
        S_Y = quadrature_squeezing(state.mechanics, -math.pi / 4).S_Y
        expected = closed_form_SYm(params, mode)
        label = f"{mode.label} {params}"
        assert S_Y == pytest.approx(expected, rel=1e-9, abs=1e-10), label

        sq = quadrature_squeezing(state.mechanics, -math.pi / 4)
        assert sq.S_X >= -1 and sq.S_Y >= -1
        assert (sq.S_X + 1) * (sq.S_Y + 1) >= 1 - 1e-9


def test_closed_form_edge_cases():
    """Test the no-pump value, the two-drive threshold limit and errors."""
    p = EffectiveParams.in_mu_units(1e5, g=0.01, chi=0.0, gamma=0.003)
    for mode in (DriveMode.red(), DriveMode.blue_red()):
        assert closed_form_SYm(p, mode) == pytest.approx(0.0, abs=1e-15)
    # blue driving heats the nanoresonator even without a pump
    heated = _moments(p, DriveMode.blue())
    blue = closed_form_SYm(p, DriveMode.blue())
    assert blue == pytest.approx(2 * heated.bdb, rel=1e-9)

    near = p.with_updates(chi=(1 - 1e-9) * p.gamma / 4)
    assert closed_form_SYm(near, DriveMode.blue_red()) == pytest.approx(-0.5, abs=1e-6)

    with pytest.raises(ParameterError):
        closed_form_SYm(p.with_updates(chi=1j), DriveMode.red())
    with pytest.raises(ParameterError):
        closed_form_SYm(p, DriveMode.blue_red(psi=0.3))
    with pytest.raises(InstabilityError):
        closed_form_SYm(p.with_updates(chi=p.gamma), DriveMode.blue_red())


def test_red_threshold_limit():
    """Test S_Y'm just below the red threshold approaches -1/2 + n_m0."""
    for n_m0 in (0.0, 1.0):
        base = EffectiveParams.in_mu_units(1e5, g=1e-3, chi=0.0, gamma=1e-3, n_m0=n_m0)
        chi = 0.999 * stability_threshold(base, DriveMode.red())
        state = _moments(base.with_updates(chi=chi), DriveMode.red())
        S_Y = quadrature_squeezing(state.mechanics, -math.pi / 4).S_Y
        assert abs(S_Y - (-0.5 + n_m0)) < 1e-2, f"n_m0 = {n_m0}: S_Y = {S_Y}"
        assert abs(S_Y - red_threshold_SYm(base)) < 1e-2


def test_conjugate_quadrature_diverges(red_fiducial):
    """Test that the anti-squeezed variance grows without bound at threshold."""
    mode = DriveMode.red()
    threshold = stability_threshold(red_fiducial, mode)
    values = []
    for fraction in (0.5, 0.9, 0.99, 1 - 1e-6):
        state = _moments(red_fiducial.with_updates(chi=fraction * threshold), mode)
        values.append(quadrature_squeezing(state.mechanics, -math.pi / 4).S_X)
    assert all(a < b for a, b in zip(values, values[1:])), values
    assert values[-1] > 1e3


def test_unstable_model_rejected(red_fiducial):
    """Test that the solver refuses a model with no steady state."""
    threshold = stability_threshold(red_fiducial, DriveMode.red())
    with pytest.raises(InstabilityError):
        _moments(red_fiducial.with_updates(chi=1.2 * threshold), DriveMode.red())


def test_quadrature_squeezing_examples():
    """Test direct substitution into the variance formulas."""
    vacuum = quadrature_squeezing(ModeMoments(square=0.0, number=0.0), 0.7)
    assert (vacuum.S_X, vacuum.S_Y) == (0.0, 0.0)

    thermal = quadrature_squeezing(ModeMoments(square=0.0, number=1.5), 0.3)
    assert thermal.S_X == pytest.approx(3.0) and thermal.S_Y == pytest.approx(3.0)

    squeezed = quadrature_squeezing(ModeMoments(square=-0.1, number=0.2), 0.0)
    assert squeezed.S_X == pytest.approx(0.2)
    assert squeezed.S_Y == pytest.approx(0.6)


def test_optimal_phases():
    """Test the quadrature and local-oscillator phases."""
    red = optimal_phases(DriveMode.red())
    assert red.phi == pytest.approx(-math.pi / 4)
    assert red.theta == pytest.approx(-math.pi / 4)
    assert red.psi is None

    both = optimal_phases(DriveMode.blue_red())
    assert both.theta == 0.0
    assert both.psi == pytest.approx(math.pi / 4)

    position = optimal_phases(DriveMode.red(), arg_chi=-math.pi / 2)
    assert position.phi == pytest.approx(-math.pi / 2) or position.phi == pytest.approx(
        math.pi / 2
    )


def test_pump_phase_rotation(red_fiducial):
    """Test that rotating arg χ by 2α rotates the optimum by α."""
    mode = DriveMode.red()
    reference = optimal_quadrature(_moments(red_fiducial, mode).mechanics)
    for alpha in (0.2, -0.6, 1.1):
        chi = red_fiducial.chi * cmath.exp(2j * alpha)
        rotated = red_fiducial.with_updates(chi=chi)
        best = optimal_quadrature(_moments(rotated, mode).mechanics)
        assert best.S_X == pytest.approx(reference.S_X, rel=1e-9)
        shift = math.remainder(best.phi - reference.phi - alpha, math.pi)
        moved = best.phi - reference.phi
        assert abs(shift) < 1e-9, f"alpha = {alpha}: argmin moved by {moved}"

        phases = optimal_phases(mode, arg_chi=2 * alpha)
        at_phase = quadrature_squeezing(_moments(rotated, mode).mechanics, phases.phi)
        unrotated = _moments(red_fiducial, mode).mechanics
        expected = quadrature_squeezing(unrotated, -math.pi / 4).S_Y
        assert at_phase.S_Y == pytest.approx(expected, rel=1e-9)


def test_cavity_relation(red_fiducial):
    """Test the red-sideband cavity-nanoresonator relation and bath bound."""
    report = cavity_nanores_relation_check(red_fiducial)
    assert abs(report.residual) < 1e-10
    assert report.bath_condition

    quiet = cavity_nanores_relation_check(red_fiducial.with_updates(chi=0.0))
    assert abs(quiet.S_Ym) < 1e-12 and abs(quiet.S_Xc) < 1e-12

    p = red_fiducial
    bound = (4 * p.g**2 + p.gamma * p.mu) / (2 * p.gamma * p.mu)
    edge = cavity_nanores_relation_check(p.with_updates(n_m0=bound))
    assert edge.bath_marginal
    assert not edge.bath_condition


def test_final_phonon_number():
    """Test the cooling and heating formulas."""
    red = DriveMode.red()
    p = EffectiveParams(g=3.39e4, chi=0.0, gamma=1.26e3, mu_ext=3.77e5, n_m0=50.0)
    assert final_phonon_number(p, red) == pytest.approx(4.68, rel=5e-3)
    assert final_phonon_number(p.with_updates(g=0.0), red) == pytest.approx(50.0)

    blue = EffectiveParams(g=1.0, chi=0.0, gamma=8.0, mu_ext=1.0, n_m0=0.0)
    # Γ = 4, (Γ + γ n)/(γ - Γ) = 1
    assert final_phonon_number(blue, DriveMode.blue()) == pytest.approx(1.0)
    assert final_phonon_number(blue, DriveMode.blue_red()) == pytest.approx(1.0)
    with pytest.raises(InstabilityError):
        final_phonon_number(blue.with_updates(gamma=4.0), DriveMode.blue())


def test_red_cooling_matches_moment_solver():
    """Test the cooling formula against the full linear model at small ε."""
    p = EffectiveParams.in_mu_units(1e5, g=0.01, chi=0.0, gamma=1e-4, n_m0=20.0)
    state = _moments(p, DriveMode.red())
    assert state.bdb == pytest.approx(final_phonon_number(p, DriveMode.red()), rel=1e-2)
