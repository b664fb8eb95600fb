"""Tests for drive modes, drift matrices and stability criteria."""

import cmath
import math

import numpy as np
import pytest

from nanosqueeze.errors import ParameterError
from nanosqueeze.model import (
    DriveKind,
    DriveMode,
    build_drift,
    input_correlations,
    stability,
    stability_threshold,
)
from nanosqueeze.params import EffectiveParams

MODES = [DriveMode.blue(), DriveMode.red(), DriveMode.blue_red()]

# swaps a <-> a† and b <-> b†
CONJUGATE = np.array(
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float
)


def test_drive_mode_parsing():
    """Test drive-mode construction from config values."""
    assert DriveMode.from_config("red") == DriveMode.red()
    assert DriveMode.from_config("blue_red").psi == pytest.approx(math.pi / 4)
    mode = DriveMode.from_config({"kind": "blue_red", "psi": 0.5})
    assert mode.kind is DriveKind.BLUE_RED and mode.psi == 0.5
    assert DriveMode.from_config(mode.to_dict()) == mode

    with pytest.raises(ParameterError):
        DriveMode.from_config("green")
    with pytest.raises(ParameterError):
        DriveMode(DriveKind.RED, psi=0.1)


@pytest.mark.parametrize("mode", MODES, ids=lambda m: m.kind.value)
def test_drift_conjugation_symmetry(mode):
    """Test that the a† and b† rows are the conjugates of the a and b rows."""
    p = EffectiveParams(g=0.3, chi=0.02 + 0.01j, gamma=0.05, mu_ext=1.0)
    M = build_drift(p, mode).M
    np.testing.assert_allclose(CONJUGATE @ M @ CONJUGATE, M.conj(), atol=1e-15)


def test_drift_damping_and_coupling():
    """Test damping diagonal and output coupling, including internal loss."""
    p = EffectiveParams(g=0.0, chi=0.0, gamma=0.2, mu_ext=1.0, mu_int=0.5)
    model = build_drift(p, DriveMode.red())
    np.testing.assert_allclose(np.diag(model.M).real, [-0.75, -0.75, -0.1, -0.1])
    root = math.sqrt(0.2)
    np.testing.assert_allclose(np.diag(model.D), [1.0, 1.0, root, root])
    assert model.B.shape == (4, 6)
    assert model.n_inputs == 6
    assert model.B[0, 4] == pytest.approx(math.sqrt(0.5))


def test_input_correlations():
    """Test the thermal and vacuum input correlation entries."""
    C = input_correlations(2.0)
    assert C.shape == (4, 4)
    assert C[0, 1] == 1.0
    assert C[1, 0] == 0.0
    assert C[2, 3] == 3.0
    assert C[3, 2] == 2.0
    assert input_correlations(0.0, mu_int=0.1).shape == (6, 6)
    with pytest.raises(ParameterError):
        input_correlations(-1.0)


def test_red_threshold_value(red_fiducial):
    """Test the red-sideband threshold on the fiducial operating point."""
    threshold = stability_threshold(red_fiducial, DriveMode.red())
    assert threshold / red_fiducial.mu == pytest.approx(0.00893, rel=2e-3)


@pytest.mark.parametrize(
    "mode,g",
    [(DriveMode.red(), 0.09), (DriveMode.blue_red(), 0.09)],
    ids=["red", "blue_red"],
)
def test_criteria_agree_around_threshold(mode, g):
    """Test analytic and eigenvalue criteria on either side of threshold."""
    base = EffectiveParams.in_mu_units(1e5, g=g, chi=0.0, gamma=0.003334)
    threshold = stability_threshold(base, mode)

    below = stability(base.with_updates(chi=0.9 * threshold), mode)
    assert below.analytic_pass and below.eigenvalue_pass
    assert not below.disagreement

    above = stability(base.with_updates(chi=1.1 * threshold), mode)
    assert not above.analytic_pass and not above.eigenvalue_pass
    assert above.max_real_eigenvalue > 0
    assert above.violated(), "unstable report should list violated conditions"


def test_blue_heating_instability():
    """Test that blue driving beyond Γ = γ has no steady state."""
    mu, gamma = 1e5, 300.0
    weak = EffectiveParams(
        g=math.sqrt(0.5 * gamma * mu / 4), chi=0.0, gamma=gamma, mu_ext=mu
    )
    strong = weak.with_updates(g=math.sqrt(2.0 * gamma * mu / 4))
    assert stability(weak, DriveMode.blue()).stable
    report = stability(strong, DriveMode.blue())
    assert not report.stable
    assert not report.analytic_pass


def test_phase_of_chi_does_not_change_stability(red_fiducial):
    """Test that only |χ| enters the stability verdict."""
    rotated = red_fiducial.with_updates(chi=red_fiducial.chi * cmath.exp(1j))
    a = stability(red_fiducial, DriveMode.red())
    b = stability(rotated, DriveMode.red())
    assert a.stable == b.stable
    assert a.max_real_eigenvalue == pytest.approx(b.max_real_eigenvalue, rel=1e-9)
