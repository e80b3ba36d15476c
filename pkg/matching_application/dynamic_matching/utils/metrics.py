"""
Epoch bookkeeping and run statistics

An epoch is the lifetime of one matched edge. Random level-1 epochs open
epoch-sets; deterministic level-1 epochs created later in the same update
join the open set. A set is bad when its representative ends before a third
of the edges it owned at creation have been deleted from the graph.
"""

import csv
import io
import json
import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..core.errors import EpochError, LiveEpochError
from ..core.models import DETERMINISTIC, LEVEL_1, RANDOM, Edge, MatchingConfig, ProcedureTrace, UpdateOp

logger = logging.getLogger(__name__)

SCHEMA = 'dynamic-matching-metrics/1'
MAX_EPOCH_SET_SIZE = 63
GOOD = 'good'
BAD = 'bad'

CSV_COLUMNS = [
    'index', 'kind', 'u', 'v', 'calls', 'random_settles', 'epochs_opened',
    'matching_size', 'edge_count', 'seconds',
]


@dataclass
class EpochRecord:
    epoch_id: int
    edge: Edge
    created: int
    level: int
    epoch_class: Optional[str] = None
    owner: Optional[int] = None
    owner_init_size: int = 0
    creation_work: int = 0
    terminated: Optional[int] = None
    deletions_from_init: int = 0

    @property
    def live(self) -> bool:
        return self.terminated is None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class EpochSetRecord:
    set_id: int
    representative: EpochRecord
    member_ids: List[int] = field(default_factory=list)
    classification: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.member_ids)


def classify_epoch_set(record: EpochSetRecord) -> str:
    """'bad' iff fewer than ceil(owner_init_size / 3) initially owned edges were deleted"""
    rep = record.representative
    if rep.live:
        raise LiveEpochError(f"epoch {rep.epoch_id} on {rep.edge} is still live")
    needed = -(-rep.owner_init_size // 3)
    return BAD if rep.deletions_from_init < needed else GOOD


class EpochTracker:
    """Engine observer that opens and closes EpochRecords and groups epoch-sets"""

    def __init__(self, threshold: int):
        self.threshold = threshold
        self.epochs: List[EpochRecord] = []
        self.sets: List[EpochSetRecord] = []
        self.live: Dict[Edge, EpochRecord] = {}
        self.unanchored_expensive_epochs = 0
        self.type2_candidates = 0
        self.opened_this_update = 0
        self.last_update_opened = 0
        self._init_index: Dict[Edge, Set[int]] = {}
        self._init_edges: Dict[int, Tuple[Edge, ...]] = {}
        self._set_of_representative: Dict[int, EpochSetRecord] = {}
        self._open_set: Optional[EpochSetRecord] = None
        self._last_level1_class: Dict[int, Tuple[str, int]] = {}
        # epochs opened this update: (record, creating trace entry, outside any epoch-set)
        self._opened: List[Tuple[EpochRecord, Optional[int], bool]] = []

    @property
    def live_count(self) -> int:
        return len(self.live)

    def on_match_set(self, update_index: int, edge: Edge, level: int, epoch_class: Optional[str],
                     owner_init, creator: Optional[int]):
        if edge in self.live:
            raise EpochError(f"edge {edge} already has a live epoch")
        record = EpochRecord(len(self.epochs), edge, update_index, level, epoch_class)
        self.epochs.append(record)
        self.live[edge] = record
        self.opened_this_update += 1
        unanchored = False

        if level == LEVEL_1 and epoch_class == RANDOM:
            if owner_init is not None:
                owner, others = owner_init
                record.owner = owner
                record.owner_init_size = len(others)
                init_edges = tuple((owner, w) if owner < w else (w, owner) for w in others)
                self._init_edges[record.epoch_id] = init_edges
                for init_edge in init_edges:
                    self._init_index.setdefault(init_edge, set()).add(record.epoch_id)
            epoch_set = EpochSetRecord(len(self.sets), record, [record.epoch_id])
            self.sets.append(epoch_set)
            self._set_of_representative[record.epoch_id] = epoch_set
            self._open_set = epoch_set
        elif level == LEVEL_1:
            if self._open_set is not None:
                self._open_set.member_ids.append(record.epoch_id)
            else:
                unanchored = True
            for u in edge:
                previous = self._last_level1_class.get(u)
                if previous is not None and previous[0] == RANDOM and previous[1] < update_index:
                    self.type2_candidates += 1
                    logger.debug(f"Type-2 candidate: epoch {record.epoch_id} at vertex {u}")
                    break

        if level == LEVEL_1:
            for u in edge:
                self._last_level1_class[u] = (epoch_class or DETERMINISTIC, update_index)
        self._opened.append((record, creator, unanchored))

    def on_match_unset(self, update_index: int, edge: Edge):
        record = self.live.pop(edge, None)
        if record is None:
            raise EpochError(f"no live epoch on {edge}")
        record.terminated = update_index
        for init_edge in self._init_edges.pop(record.epoch_id, ()):
            holders = self._init_index.get(init_edge)
            if holders is not None:
                holders.discard(record.epoch_id)
                if not holders:
                    del self._init_index[init_edge]
        epoch_set = self._set_of_representative.get(record.epoch_id)
        if epoch_set is not None:
            epoch_set.classification = classify_epoch_set(epoch_set)

    def on_edge_deleted(self, update_index: int, edge: Edge):
        for epoch_id in self._init_index.get(edge, ()):
            self.epochs[epoch_id].deletions_from_init += 1

    def on_update_end(self, update_index: int, trace: ProcedureTrace):
        for record, creator, unanchored in self._opened:
            if creator is not None:
                record.creation_work = trace.entries[creator].work
            if unanchored and record.creation_work > self.threshold:
                self.unanchored_expensive_epochs += 1
        self._opened = []
        self._open_set = None
        self.last_update_opened = self.opened_this_update
        self.opened_this_update = 0

    def summary(self) -> dict:
        by_kind = Counter()
        for record in self.epochs:
            if record.level == LEVEL_1:
                by_kind[f"level1_{record.epoch_class}"] += 1
            else:
                by_kind['level0'] += 1
        classified = [s.classification for s in self.sets]
        good = classified.count(GOOD)
        bad = classified.count(BAD)
        decided = good + bad
        return {
            'epochs_total': len(self.epochs),
            'epochs_level0': by_kind['level0'],
            'epochs_level1_random': by_kind[f"level1_{RANDOM}"],
            'epochs_level1_deterministic': by_kind[f"level1_{DETERMINISTIC}"],
            'live_epochs': self.live_count,
            'epoch_sets': len(self.sets),
            'good_sets': good,
            'bad_sets': bad,
            'unclassified_sets': len(self.sets) - decided,
            'bad_fraction': round(bad / decided, 6) if decided else 0.0,
            'max_epoch_set_size': max((s.size for s in self.sets), default=0),
            'oversized_epoch_sets': sum(1 for s in self.sets if s.size > MAX_EPOCH_SET_SIZE),
            'unanchored_expensive_epochs': self.unanchored_expensive_epochs,
            'type2_candidates': self.type2_candidates,
        }


@dataclass
class UpdateRecord:
    index: int
    kind: str
    u: int
    v: int
    calls: int
    random_settles: int
    epochs_opened: int
    matching_size: int
    edge_count: int
    seconds: float


class RunStats:
    """Per-update records and totals for one replay"""

    def __init__(self, config: MatchingConfig, tracker: Optional[EpochTracker] = None):
        self.config = config
        self.tracker = tracker
        self.updates: List[UpdateRecord] = []
        self.histogram: Counter = Counter()

    def record_update(self, op: UpdateOp, trace: ProcedureTrace, matching_size: int,
                      edge_count: int, seconds: float, epochs_opened: int = 0):
        self.histogram.update(trace.procedures())
        self.updates.append(UpdateRecord(
            index=trace.update_index,
            kind=op.kind.value,
            u=op.u,
            v=op.v,
            calls=trace.call_count,
            random_settles=trace.random_settles,
            epochs_opened=epochs_opened,
            matching_size=matching_size,
            edge_count=edge_count,
            seconds=seconds,
        ))

    @property
    def max_calls(self) -> int:
        return max((u.calls for u in self.updates), default=0)

    @property
    def total_seconds(self) -> float:
        return sum(u.seconds for u in self.updates)

    def totals(self) -> dict:
        count = len(self.updates)
        inserts = sum(1 for u in self.updates if u.kind == '+')
        totals = {
            'updates': count,
            'inserts': inserts,
            'deletes': count - inserts,
            'procedure_calls': sum(u.calls for u in self.updates),
            'max_calls_per_update': self.max_calls,
            'random_settles': sum(u.random_settles for u in self.updates),
            'final_matching_size': self.updates[-1].matching_size if self.updates else 0,
            'final_edge_count': self.updates[-1].edge_count if self.updates else 0,
            'max_matching_size': max((u.matching_size for u in self.updates), default=0),
        }
        if self.tracker is not None:
            totals.update(self.tracker.summary())
            totals['good_set_bound'] = round(3 * count / self.config.threshold, 6)
        return totals


def export(stats: RunStats, fmt: str = 'json') -> str:
    """
    json: {schema, seed, config, totals, procedure_histogram, updates, timing}
    csv:  one row per update with CSV_COLUMNS; 'seconds' is the only timing column
    """
    if fmt == 'json':
        document = {
            'schema': SCHEMA,
            'seed': stats.config.seed,
            'config': stats.config.to_dict(),
            'totals': stats.totals(),
            'procedure_histogram': dict(sorted(stats.histogram.items())),
            'updates': [
                {k: v for k, v in asdict(u).items() if k != 'seconds'} for u in stats.updates
            ],
            'timing': {
                'total_seconds': stats.total_seconds,
                'amortized_micros_per_update':
                    (stats.total_seconds / len(stats.updates) * 1e6) if stats.updates else 0.0,
                'per_update_seconds': [u.seconds for u in stats.updates],
            },
        }
        return json.dumps(document, indent=2)
    if fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for record in stats.updates:
            writer.writerow(asdict(record))
        return buffer.getvalue()
    raise ValueError(f"unknown export format {fmt!r}")


def summary_table(stats: RunStats) -> str:
    """Plain-text key/value table of the run totals"""
    totals = stats.totals()
    width = max((len(k) for k in totals), default=0)
    lines = [f"{key.ljust(width)}  {value}" for key, value in totals.items()]
    lines.append(f"{'seconds'.ljust(width)}  {stats.total_seconds:.3f}")
    return '\n'.join(lines)
