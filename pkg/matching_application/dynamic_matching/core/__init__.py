"""
Core dynamic matching engine
"""

from .errors import (
    MatchingError,
    InvalidConfigError,
    GraphUpdateError,
    PreconditionError,
    WorkloadError,
    OracleTooLargeError,
    EpochError,
    LiveEpochError,
)

from .models import (
    MatchingConfig,
    UpdateKind,
    UpdateOp,
    ProcedureTrace,
    TraceEntry,
    default_threshold,
    normalize_edge,
)

from .state import (
    State,
    IndexableSet,
    OwnershipList,
    FreeNeighborIndex,
    new_state,
)

from .engine import (
    MatchingEngine,
    MatchObserver,
    PROCEDURES,
)

from .verifier import (
    ViolationReport,
    RatioResult,
    check_invariants,
    find_3_aug_path,
    brute_force_mcm,
    greedy_maximal_matching,
    check_ratio,
    ratio_status,
)

from .processor import (
    ReplayProcessor,
    ReplayResult,
)

__all__ = [
    # Errors
    'MatchingError',
    'InvalidConfigError',
    'GraphUpdateError',
    'PreconditionError',
    'WorkloadError',
    'OracleTooLargeError',
    'EpochError',
    'LiveEpochError',

    # Models
    'MatchingConfig',
    'UpdateKind',
    'UpdateOp',
    'ProcedureTrace',
    'TraceEntry',
    'default_threshold',
    'normalize_edge',

    # State
    'State',
    'IndexableSet',
    'OwnershipList',
    'FreeNeighborIndex',
    'new_state',

    # Engine
    'MatchingEngine',
    'MatchObserver',
    'PROCEDURES',

    # Verifier
    'ViolationReport',
    'RatioResult',
    'check_invariants',
    'find_3_aug_path',
    'brute_force_mcm',
    'greedy_maximal_matching',
    'check_ratio',
    'ratio_status',

    # Replay
    'ReplayProcessor',
    'ReplayResult',
]
