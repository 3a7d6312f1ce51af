"""Hierarchical meta-atom selection for greedy sparse recovery over
Fourier-structured, Kronecker-decomposed dictionaries."""

__version__ = "0.1.0"

from .dictionary import (
    Dictionary,
    MetaAtomSet,
    build_classical,
    meta_atom,
    meta_atom_set,
    response,
    response_profile,
)
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ConfigError,
    DimensionMismatch,
    EmptyDictionary,
    EmptyDomain,
    HiersparseError,
    LengthMismatch,
    NonFiniteResidual,
    RankDeficientSupport,
    ZeroChannel,
    ZeroNoise,
    ZeroTruth,
    ZeroVector,
)
from .hierarchical_search import HSearchConfig, HSearchOutcome, hsearch_1d, hsearch_tensor
from .opcount import (
    OpCounter,
    SelectionMethod,
    predicted_correlations,
    predicted_selection_mults,
)
from .recovery import (
    RecoveryResult,
    StoppingRule,
    SupportEntry,
    homp,
    least_squares,
    mhomp,
    momp,
    mp,
    omp,
    omp_matrix,
)
from .signal_model import (
    GridKind,
    Observation,
    ObservationGrid,
    PathSet,
    TargetDomain,
    add_noise,
    atomic_signal,
    atomic_signals,
    measure_snr,
    synth_channel,
)
