"""Wave-particle duality in a polarization-marked Mach-Zehnder interferometer."""

__version__ = "0.1.0"

from .polarization import (
    A, D, H, L, R, V,
    ElementUnitary, PolState,
    from_stokes, fractional_purity, hwp, identity, linear, partial_mix,
    qwp, rotator, to_stokes, trace_purity, tunable_source,
)
from .interferometer import (
    FringeProfile, InterferometerConfig, JointState,
    build_joint, detector_intensity, fringe, imperfect_config, predictability, visibility,
)
from .metrics import (
    AnalyzerSetting, MetricsResult, NoCountsError, PathRates,
    chsh_value, distinguishability, duality_check, knowledge, likelihood,
    optimal_linear_basis, rates_in_basis,
)
from .eraser import (
    EraserCurve, UndefinedVisibilityError, VisibilityLoci,
    conditional_fringe, eraser_scan, poincare_loci, zero_visibility_angles,
)
from .montecarlo import (
    CountRecord, EstimationResult, NoiseModel, Scenario,
    estimate_knowledge, estimate_visibility, run_duality_experiment, simulate_counts,
)
