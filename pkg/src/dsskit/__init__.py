"""Difference systems of sets for frame synchronization and phase detection.

Construct DSSes with a linear-time randomized algorithm, verify their
parameters exactly through two independent paths, turn them into
self-synchronizing codes with a pluggable block ECC, and build phase
detection sequences decodable from one noisy window.
"""

from .channel import NoiseSpec, corrupt
from .codec import (
    WILDCARD,
    AlignmentEstimate,
    BlockCode,
    IdentityCode,
    RepetitionCode,
    SyncCode,
    TemplateSequence,
    comma_free_index_bruteforce,
    correlation_profile,
    decode_payload,
    dss_from_template,
    encode,
    format_symbols,
    h,
    locate_frame,
    parse_symbols,
    template_from_dss,
)
from .construct import (
    ConstructionConfig,
    ConstructionOutcome,
    IndexStatistics,
    balanced_allocation,
    construct_once,
    construct_with_target,
    expected_index,
    mcdiarmid_tail,
    mcdiarmid_union_tail,
    min_index_statistics,
    p_for_relative_index,
)
from .core import (
    DifferenceProfile,
    Dss,
    DssReport,
    difference_profile,
    difference_profile_fast,
    levenshtein_bound,
    profile,
    report,
    validate,
)
from .errors import (
    ArityError,
    CapacityError,
    DecodeFailure,
    DegenerateConstructionWarning,
    DomainError,
    DsskitError,
    EccFailure,
    LengthMismatch,
    OverlapError,
    PayloadLengthError,
    RangeError,
    TargetUnreached,
    TooLarge,
    WindowLengthError,
    WindowTooShort,
)
from .pds import (
    Pds,
    PhaseEstimate,
    build_pds,
    frame_payload,
    locate_phase,
    payload_to_frame_number,
    verify_pds_bruteforce,
)
from .rng import RandomStream, Seed
from .shuffle import (
    ShuffleTrace,
    apply_trace,
    permute_identity_batch,
    sample_trace,
    sample_trace_batch,
    trace_distance_bound_check,
)

__version__ = "0.1.0"
