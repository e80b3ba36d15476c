"""
Workloads, metrics and benchmarks for the matching engine
"""

from .workload import (
    UpdateSequence,
    gen_random,
    gen_named,
    extend_with_teardown,
    parse,
    serialize,
    load,
    save,
    PATTERNS,
)

from .metrics import (
    EpochRecord,
    EpochSetRecord,
    EpochTracker,
    RunStats,
    classify_epoch_set,
    export,
    summary_table,
)

from .bench import (
    BenchCell,
    run_bench,
    format_table,
)

__all__ = [
    # Workloads
    'UpdateSequence',
    'gen_random',
    'gen_named',
    'extend_with_teardown',
    'parse',
    'serialize',
    'load',
    'save',
    'PATTERNS',

    # Metrics
    'EpochRecord',
    'EpochSetRecord',
    'EpochTracker',
    'RunStats',
    'classify_epoch_set',
    'export',
    'summary_table',

    # Benchmarks
    'BenchCell',
    'run_bench',
    'format_table',
]
