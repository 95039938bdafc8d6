"""Probe response and transparency-window analysis for N-cavity optomechanical chains."""

from .model import (
    Atom,
    DirectG,
    Drive,
    Explicit,
    NormalizedSystem,
    PhysicalConfig,
    ResolvedSideband,
    config_from_json,
    config_to_json,
    normalize,
    validate,
)
from .presets import PRESETS, preset
from .response import (
    ResponseSpectrum,
    chain_denominator,
    epsilon_T_cf,
    epsilon_T_full,
    epsilon_T_linear,
    spectrum,
)
from .steady import (
    SteadyState,
    chain_steady_linear,
    lambda_of,
    sigma_z_of,
    solve_from_config,
    solve_self_consistent,
    steady_residual,
)
from .timedomain import (
    Trajectory,
    demodulate,
    integrate_linearized,
    integrate_nonlinear,
    probe_transmission,
)
from .windows import (
    WindowReport,
    central_feature_width,
    detect_windows,
    predict_windows_lossless,
)

__version__ = "0.1.0"
