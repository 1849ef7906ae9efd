"""fiberphase: phase noise in long fiber interferometers.

Simulate calibrated stochastic phase processes, forward-model Sagnac and
Mach-Zehnder interferometers, recover phase statistics from intensity
records, and propagate the noise into quantum-repeater fidelity budgets.
"""

from .analysis import (
    FringeFit,
    GaussianHistogram,
    PhaseStats,
    check_gaussian_relation,
    default_lag_grid,
    estimate_diffusion,
    extract_phase,
    fit_fringe,
    fit_gaussian,
    fit_scaling_exponent,
    gaussian_widths,
    increment_sets,
    mean_phase_change,
    pool_stats,
    tau_threshold,
)
from .errors import (
    DomainError,
    EmptySegmentsError,
    FiberPhaseError,
    FitError,
    InsufficientDataError,
    ResourceLimitError,
    ThresholdNotReachedError,
    TraceParseError,
)
from .fileio import (
    ReportDocument,
    read_dphi_curve,
    read_fringe_scan,
    read_trace,
    write_dphi_curve,
    write_fringe_scan,
    write_histogram,
    write_report,
    write_trace,
)
from .fileio import TOOL_VERSION as __version__
from .interferometer import (
    FringeScan,
    IntensityTrace,
    sagnac_effective_sigma,
    sigma_from_visibility,
    simulate_fringe_scan,
    simulate_mz_trace,
    visibility_from_sigma,
)
from .noise import (
    DEFAULT_GROUP_INDEX,
    SPEED_OF_LIGHT_KM_S,
    NoiseParams,
    PhaseProcess,
    PhaseTrace,
    build_process,
    from_sagnac_calibration,
    travel_time,
)
from .presets import preset_params
from .repeater import (
    BudgetReport,
    RepeaterChain,
    budget_per_segment,
    chain_sigma,
    fidelity_from_sigma,
    fidelity_visibility_convert,
    monte_carlo_fidelity,
    predict_visibility,
)
