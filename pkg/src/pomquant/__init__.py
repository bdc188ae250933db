"""Phase-space quantization of classical variables into positive operator measures."""
from .borel import BorelSet1D, Interval
from .exceptions import (
    ConfigError,
    NotHermitianError,
    PomQuantError,
    SpectrumOutsideUnitInterval,
    TailMassError,
    UnboundedFunctionError,
)
from .fock import (
    FockState,
    SpectralDecomposition,
    TruncationConfig,
    block,
    build_fourier,
    build_momentum,
    build_parity,
    build_position,
    momentum_measure,
    position_measure,
    position_wavefunction,
    spectral_decomposition,
    spectral_measure,
)
from .functions import (
    ArrivalTime,
    Disc,
    GridSampled,
    HalfPlane,
    Indicator,
    Monomial,
    PhaseSpaceFunction,
    Rectangle,
    Sector,
    arrival_time_question,
    momentum_question,
    parse_function,
    position_question,
)
from .phase_space import (
    GeneratingOperator,
    PhaseGrid,
    PhasePoint,
    displaced_density,
    displacement_matrix,
    generalized_distribution,
    husimi,
    weyl_operator,
    wigner_transform,
)
from .pom import (
    DiscretePOM,
    bin_labels,
    is_noiseless,
    noise_operator,
    pom_moment,
    probabilities,
    projection_defect,
    spectral_pom,
    two_valued_pom,
    variance_decomposition,
)
from .quantizer import (
    EffectReport,
    QuantizerA,
    QuantizerWeyl,
    assemble_binned_observable,
    commutation_defect,
    effect_report,
    gamma_a,
    gamma_a_cylinder,
    gamma_weyl,
    moment_sequence,
    quantize,
    quantize_question,
)
from .measurement import (
    MomentTransferReport,
    SampleReport,
    classical_moment,
    moment_transfer_check,
    sample_outcomes,
)
from .config import RunConfig
from .verify import CHECKS, run_checks

__all__ = [
    "ArrivalTime",
    "BorelSet1D",
    "CHECKS",
    "ConfigError",
    "Disc",
    "DiscretePOM",
    "EffectReport",
    "FockState",
    "GeneratingOperator",
    "GridSampled",
    "HalfPlane",
    "Indicator",
    "Interval",
    "MomentTransferReport",
    "Monomial",
    "NotHermitianError",
    "PhaseGrid",
    "PhasePoint",
    "PhaseSpaceFunction",
    "PomQuantError",
    "QuantizerA",
    "QuantizerWeyl",
    "Rectangle",
    "RunConfig",
    "SampleReport",
    "Sector",
    "SpectralDecomposition",
    "SpectrumOutsideUnitInterval",
    "TailMassError",
    "TruncationConfig",
    "UnboundedFunctionError",
    "arrival_time_question",
    "assemble_binned_observable",
    "bin_labels",
    "block",
    "build_fourier",
    "build_momentum",
    "build_parity",
    "build_position",
    "classical_moment",
    "commutation_defect",
    "displaced_density",
    "displacement_matrix",
    "effect_report",
    "gamma_a",
    "gamma_a_cylinder",
    "gamma_weyl",
    "generalized_distribution",
    "husimi",
    "is_noiseless",
    "moment_sequence",
    "moment_transfer_check",
    "momentum_measure",
    "momentum_question",
    "noise_operator",
    "parse_function",
    "pom_moment",
    "position_measure",
    "position_question",
    "position_wavefunction",
    "probabilities",
    "projection_defect",
    "quantize",
    "quantize_question",
    "run_checks",
    "sample_outcomes",
    "spectral_decomposition",
    "spectral_measure",
    "spectral_pom",
    "two_valued_pom",
    "variance_decomposition",
    "weyl_operator",
    "wigner_transform",
]

__version__ = "0.1.0"
