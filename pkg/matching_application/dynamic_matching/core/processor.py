"""
Replay processor
Feeds an update sequence through a fresh engine, verifying and recording as it goes
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

from .engine import MatchingEngine
from .errors import InvalidConfigError
from .models import MatchingConfig
from .state import State, new_state
from .verifier import (
    DEFAULT_ORACLE_MAX_EDGES,
    DEFAULT_ORACLE_MAX_VERTICES,
    RatioResult,
    ViolationReport,
    check_invariants,
    ratio_status,
)
from ..utils.metrics import EpochTracker, RunStats

logger = logging.getLogger(__name__)


@dataclass
class ReplayResult:
    success: bool
    stats: RunStats
    report: ViolationReport
    state: State
    failed_at: Optional[int] = None
    ratio: Optional[RatioResult] = None

    def to_dict(self) -> dict:
        return {
            'success': self.success,
            'failed_at': self.failed_at,
            'violations': [v.to_dict() for v in self.report.violations],
            'ratio': self.ratio.to_dict() if self.ratio else None,
            'matching_size': self.state.matching_size,
            'edge_count': self.state.edge_count,
        }


class ReplayProcessor:
    """
    Replays a sequence on a new State.

    verify_every=V checks every invariant after each V-th update (0 means
    only at the end); check_oracle adds the 3/2 ratio check whenever the
    graph fits the brute-force guard. The first dirty state stops the run.
    final_verify=False skips the end-of-run check as well (timing runs).
    """

    def __init__(self, seed: int = 0, threshold: Optional[int] = None, verify_every: int = 0,
                 check_oracle: bool = False, collect_metrics: bool = True, final_verify: bool = True,
                 oracle_max_vertices: int = DEFAULT_ORACLE_MAX_VERTICES,
                 oracle_max_edges: int = DEFAULT_ORACLE_MAX_EDGES):
        if verify_every < 0:
            raise InvalidConfigError(f"verify_every must be non-negative, got {verify_every}")
        self.seed = seed
        self.threshold = threshold
        self.verify_every = verify_every
        self.check_oracle = check_oracle
        self.collect_metrics = collect_metrics
        self.final_verify = final_verify
        self.oracle_max_vertices = oracle_max_vertices
        self.oracle_max_edges = oracle_max_edges

    def config_for(self, seq) -> MatchingConfig:
        return MatchingConfig(n=seq.n, threshold=self.threshold, seed=self.seed)

    def run(self, seq) -> ReplayResult:
        config = self.config_for(seq)
        state = new_state(config)
        tracker = EpochTracker(config.threshold) if self.collect_metrics else None
        engine = MatchingEngine(state, tracker)
        stats = RunStats(config, tracker)

        logger.info(f"▶️ Replaying {len(seq)} updates on n={config.n} "
                    f"(threshold={config.threshold}, seed={config.seed})")

        for i, op in enumerate(seq.ops, start=1):
            started = time.perf_counter()
            trace = engine.apply(op)
            elapsed = time.perf_counter() - started
            stats.record_update(op, trace, state.matching_size, state.edge_count, elapsed,
                                tracker.last_update_opened if tracker else 0)

            if self.verify_every and i % self.verify_every == 0:
                report, ratio = self._verify(state)
                if report or (ratio is not None and not ratio.ok):
                    logger.error(f"❌ Dirty state after update {i} ({op.to_line()})")
                    return ReplayResult(False, stats, report, state, failed_at=i, ratio=ratio)

        if not self.final_verify:
            return ReplayResult(True, stats, ViolationReport(), state)

        report, ratio = self._verify(state)
        success = not report and (ratio is None or ratio.ok)
        if success:
            logger.info(f"✅ Replay finished: |M|={state.matching_size}, edges={state.edge_count}")
        else:
            logger.error(f"❌ Final state is dirty: {len(report)} violation(s)")
        return ReplayResult(success, stats, report, state,
                            failed_at=None if success else len(seq), ratio=ratio)

    def _verify(self, state: State):
        report = check_invariants(state)
        ratio = None
        if self.check_oracle:
            ratio = ratio_status(state, self.oracle_max_vertices, self.oracle_max_edges)
        return report, ratio
