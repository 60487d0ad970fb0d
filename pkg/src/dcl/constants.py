"""Reference values for the Deployable Compliant Leg (DCL).

Published measurements are kept here so the rest of the package never
hard-codes them. Everything else (robot geometry, cam dimensions, lattice
cell size) is a placeholder default and lives next to the code that uses it.
"""

import math

DEG = math.pi / 180.0

# Stiffness characterization of the Sector-Shaped Compliant Module (SSCM).
OPERATING_MAX_DEG = 29.0  # end of the operating region
DESIGN_LIMIT_DEG = 39.0  # end of the safety margin, start of densification
SWEEP_MAX_DEG = 45.0  # extent of the torque-angle characterization sweep
PEAK_TORQUE_NM = 6.8  # torque at the end of the operating region
REPORTED_R_SQUARED = 0.87  # fit quality on the original FEA data (not reproduced)

OPERATING_MAX = OPERATING_MAX_DEG * DEG
DESIGN_LIMIT = DESIGN_LIMIT_DEG * DEG
SWEEP_MAX = SWEEP_MAX_DEG * DEG

# Vertical jumping experiments, mean of N=5 trials each.
H_BASE_MM = 283.1
N_TRIALS = 5
N_MARKERS = 15
MOCAP_NOISE_MM = 0.1

MEASURED_JUMPS = {
    "Baseline": {"max_height_mm": 656.3, "delta_h_mm": 373.1, "relative_change_pct": None},
    "Stowed": {"max_height_mm": 654.9, "delta_h_mm": 371.7, "relative_change_pct": -0.4},
    "Deployed": {"max_height_mm": 720.3, "delta_h_mm": 437.1, "relative_change_pct": 17.1},
}

# Acceptance band for the Deployed prediction. The stiffness coefficients are
# unpublished, so the model is only expected to bracket the measured gain.
DEPLOYED_BAND_PCT = (10.0, 25.0)

# Flipping mechanism
DEPLOY_ROTATION = math.pi / 2
