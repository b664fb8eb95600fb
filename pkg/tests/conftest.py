"""Shared fixtures: the fiducial device and operating points built from it."""

import math

import pytest

from nanosqueeze.params import EffectiveParams, PhysicalParams

MU = 3.77e5


@pytest.fixture
def fiducial_physical():
    """Device parameters of the reference nanoresonator-cavity system."""
    return PhysicalParams(
        omega_c=2 * math.pi * 6e9,
        nu=2 * math.pi * 20e6,
        mass=1e-15,
        beta=0.002,
        d=80e-9,
        C_c0=200e-18,
        x_c0=80e-9,
        V0=1.0,
        VP=0.121,
        E_drive=4.441e11,
        Q_cavity=1e5,
        Q_mech=1e5,
        T_m=0.0,
    )


@pytest.fixture
def red_fiducial():
    """Red-sideband operating point, rates quoted as fractions of μ."""
    return EffectiveParams.in_mu_units(MU, g=0.09, chi=0.003, gamma=0.003334)


@pytest.fixture
def blue_fiducial():
    """Blue-sideband operating point below threshold."""
    return EffectiveParams.in_mu_units(MU, g=0.028, chi=2e-5, gamma=0.003334)


@pytest.fixture
def two_drive_fiducial():
    """Two-sideband operating point below threshold."""
    return EffectiveParams.in_mu_units(MU, g=0.09, chi=4e-4, gamma=0.003334)
