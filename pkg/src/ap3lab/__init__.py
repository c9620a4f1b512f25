"""ap3lab: three-term progressions in Z/pZ and the constructions around critical sets."""

__version__ = "0.1.0"

from .apcount import (
    Ap3Count,
    SpectrumSplit,
    complement_identity_check,
    count_3aps,
    count_3aps_naive,
    count_3aps_spectral,
    split_spectrum,
)
from .bohr import (
    BohrSpec,
    SmoothingProgression,
    bohr_element,
    convolve,
    extract_ap_from_convolution,
    spectrum_flatness,
)
from .constructions import (
    ImproveParams,
    IntersectionSample,
    TwoIntervalSet,
    affine_image,
    improve_critical_candidate,
    sample_intersection,
    two_interval_set,
)
from .critical import (
    AnnealSchedule,
    CriticalSearchResult,
    anneal_critical,
    exhaustive_critical,
    varnavides_estimate,
)
from .experiment import run_theorem_experiment
from .fourier import Spectrum, dft, inverse_dft
from .report import ExperimentReport, emit
from .rounding import RoundingCertificate, adjust_cardinality, hoeffding_bound, round_weights
from .zpz import (
    ApRun,
    ApTriple,
    PrimeModulus,
    ResidueSet,
    WeightFunction,
    complement,
    longest_ap,
    make_residue_set,
)
