"""Physical constants and numeric tolerances shared across the package."""

import math

# CODATA 2018 exact-definition values
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

TWO_PI = 2.0 * math.pi

# ω_c = 1/sqrt(L C_Σ) consistency, relative
LC_TOLERANCE = 5e-3

# Eigenvalues with real part above -STABILITY_EPS * max(mu, gamma) count as unstable
STABILITY_EPS = 1e-12

# Moment systems with a larger condition number are flagged near-threshold
NEAR_THRESHOLD_CONDITION = 1e12

# Largest tolerated imaginary residue of an output spectrum
IMAGINARY_RESIDUE_LIMIT = 1e-10

# Feasibility: "a << b" means a / b <= MUCH_LESS, "a >> b" means a / b >= MUCH_GREATER
MUCH_LESS = 0.2
MUCH_GREATER = 10.0

# Quoted value of the cooling rate on the fiducial device (s^-1)
QUOTED_COOLING_RATE = 5.49e5

# Integral of the output spectrum times SPECTRAL_NORMALIZATION / mu_ext gives the
# intracavity normally ordered variance (symmetric 1/sqrt(2 pi) Fourier pairs)
SPECTRAL_NORMALIZATION = 1.0 / TWO_PI

# Symmetric-ordered output quadrature PSD of pure vacuum
VACUUM_FLOOR = 1.0
