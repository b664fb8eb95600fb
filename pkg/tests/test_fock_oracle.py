"""Tests for the truncated Fock-space master equations."""

import math

import numpy as np
import pytest
import qutip

from nanosqueeze.errors import InstabilityError, ParameterError, TruncationError
from nanosqueeze.model import DriveMode, build_drift
from nanosqueeze.oracle import (
    FockConfig,
    adiabatic_consistency,
    full_me_steady,
    gaussianity_residual,
    liouvillian_trace_residual,
    mode_operators,
    reduced_me_steady,
)
from nanosqueeze.params import EffectiveParams
from nanosqueeze.steadystate import (
    closed_form_SYm,
    quadrature_squeezing,
    solve_steady_moments,
)

MODES = [DriveMode.blue(), DriveMode.red(), DriveMode.blue_red()]


def _red_weak(n_m0=0.0):
    # g/μ = 0.02 puts the red threshold at χ/μ ≈ 0.00123
    return EffectiveParams.in_mu_units(
        1.0, g=0.02, chi=0.0006, gamma=0.003334, n_m0=n_m0
    )


def test_config_validation():
    """Test truncation limits."""
    assert FockConfig().dimension == 72
    with pytest.raises(ParameterError):
        FockConfig(n_cav=1)
    with pytest.raises(ParameterError):
        FockConfig(n_mech=3)
    with pytest.raises(ParameterError):
        FockConfig(solver_tol=0.0)


def test_uncoupled_vacuum():
    """Test that the undriven system settles in the vacuum."""
    p = EffectiveParams(g=0.0, chi=0.0, gamma=0.01, mu_ext=1.0)
    result = full_me_steady(p, DriveMode.red(), FockConfig(n_cav=3, n_mech=5))
    vacuum = qutip.tensor(
        qutip.fock_dm(result.n_cav, 0), qutip.fock_dm(result.n_mech, 0)
    )
    assert np.max(np.abs((result.rho - vacuum).full())) < 1e-8
    assert abs(result.moments.bdb) < 1e-8


@pytest.mark.parametrize("mode", MODES, ids=lambda m: m.kind.value)
def test_liouvillian_preserves_trace(mode):
    """Test that the generator maps trace-one states to traceless ones."""
    p = EffectiveParams.in_mu_units(
        1.0, g=0.05, chi=0.0004 + 0.0002j, gamma=0.01, n_m0=0.7
    )
    cfg = FockConfig(n_cav=4, n_mech=6)
    assert liouvillian_trace_residual(p, mode, cfg) < 1e-12 * cfg.dimension


def test_red_matches_moment_solver():
    """Test the full master equation against the Gaussian moment solver."""
    p = _red_weak()
    result = full_me_steady(p, DriveMode.red(), FockConfig(n_cav=6, n_mech=10))
    gaussian = solve_steady_moments(build_drift(p, DriveMode.red()))

    for name in ("bdb", "ada", "b2", "a2", "ab", "abd"):
        full = getattr(result.moments, name)
        assert abs(full - getattr(gaussian, name)) < 1e-3, name

    assert result.trace_error < 1e-6
    assert result.min_eigenvalue > -10 * 1e-6
    assert max(result.top_populations) < 1e-6
    a, b = mode_operators(result.n_cav, result.n_mech)
    assert gaussianity_residual(result.rho, b) < 1e-3


def test_thermal_red_matches_closed_form():
    """Test thermal squeezing against the closed form."""
    p = _red_weak(n_m0=0.5)
    result = full_me_steady(p, DriveMode.red())
    S_Y = quadrature_squeezing(result.moments.mechanics, -math.pi / 4).S_Y
    assert abs(S_Y - closed_form_SYm(p, DriveMode.red())) < 1e-3


def test_unstable_and_overflowing():
    """Test the errors for no steady state and an inadequate truncation."""
    p = _red_weak()
    with pytest.raises(InstabilityError):
        full_me_steady(p.with_updates(chi=0.01), DriveMode.red())

    warm = p.with_updates(n_m0=3.0)
    cfg = FockConfig(n_cav=4, n_mech=4, auto_truncation=False, escalate=False)
    with pytest.raises(TruncationError) as excinfo:
        full_me_steady(warm, DriveMode.red(), cfg)
    assert excinfo.value.mode == "mechanics"


@pytest.mark.slow
def test_steady_state_unique():
    """Test that vacuum and thermal initial states relax to the same moments."""
    p = _red_weak()
    cfg = FockConfig(n_cav=4, n_mech=8, auto_truncation=False, escalate=False)
    vacuum = qutip.tensor(qutip.fock_dm(4, 0), qutip.fock_dm(8, 0))
    thermal = qutip.tensor(qutip.thermal_dm(4, 0.1), qutip.thermal_dm(8, 0.3))
    mode = DriveMode.red()
    first = full_me_steady(p, mode, cfg, method="integrate", initial_state=vacuum)
    second = full_me_steady(p, mode, cfg, method="integrate", initial_state=thermal)
    assert first.method == "integrate"
    assert abs(first.moments.bdb - second.moments.bdb) < 1e-5
    assert abs(first.moments.b2 - second.moments.b2) < 1e-5


def test_reduced_occupations():
    """Test the reduced master equations against the cooling and heating rates."""
    mu, gamma = 1.0, 1e-3

    def coupling(rate_ratio):
        return math.sqrt(rate_ratio * gamma * mu / 4)

    red = EffectiveParams(g=coupling(9.0), chi=0.0, gamma=gamma, mu_ext=mu, n_m0=10.0)
    assert reduced_me_steady(red, DriveMode.red()).bdb == pytest.approx(1.0, abs=1e-4)

    both = EffectiveParams(g=coupling(0.5), chi=0.0, gamma=gamma, mu_ext=mu, n_m0=1.0)
    heated = reduced_me_steady(both, DriveMode.blue_red())
    assert heated.bdb == pytest.approx(2.0, abs=1e-4)

    blue = EffectiveParams(g=coupling(0.5), chi=0.0, gamma=gamma, mu_ext=mu)
    assert reduced_me_steady(blue, DriveMode.blue()).bdb == pytest.approx(1.0, abs=1e-4)

    with pytest.raises(InstabilityError):
        reduced_me_steady(blue.with_updates(g=coupling(2.0)), DriveMode.blue())
    with pytest.raises(ParameterError):
        reduced_me_steady(blue.with_updates(g=0.5), DriveMode.blue())


@pytest.mark.slow
def test_adiabatic_consistency():
    """Test that full and reduced models converge as ε shrinks."""
    p = EffectiveParams.in_mu_units(1.0, g=0.05, chi=0.0005, gamma=0.01, n_m0=0.5)
    report = adiabatic_consistency(p, DriveMode.red())
    assert report.epsilon == pytest.approx(0.05)
    assert report.discrepancy < 0.05
    assert report.improvement >= 1.5

    bare = adiabatic_consistency(p.with_updates(g=0.0, chi=0.0), DriveMode.red())
    assert bare.discrepancy < 1e-6
