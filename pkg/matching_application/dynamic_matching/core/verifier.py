"""
Independent correctness oracle
Recomputes freeness, degrees and augmenting paths from adjacency and the
mate map alone, plus an exact maximum-matching search for small graphs.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import OracleTooLargeError
from .models import LEVEL_0, LEVEL_1, VertexId

logger = logging.getLogger(__name__)

# Invariant codes used in violation reports
FREE_LEVEL_1 = '1a'
FREE_NEIGHBOURS = '1b'
LEVEL0_OWNERSHIP = '2'
LEVEL0_DEGREE = '3'
LEVEL_MISMATCH = '4'
AUGMENTING_PATH = '5'
OWNERSHIP = 'OWN'
FREE_LISTS = 'F'
SYMMETRY = 'SYM'
MAXIMALITY = 'MAX'

DEFAULT_ORACLE_MAX_VERTICES = 20
DEFAULT_ORACLE_MAX_EDGES = 28


@dataclass
class Violation:
    code: str
    witness: Tuple[int, ...]
    message: str

    def to_dict(self) -> dict:
        return {'code': self.code, 'witness': list(self.witness), 'message': self.message}


@dataclass
class ViolationReport:
    """Violations found in one state snapshot; empty means every invariant holds"""

    violations: List[Violation] = field(default_factory=list)

    def add(self, code: str, witness: Sequence[int], message: str):
        self.violations.append(Violation(code, tuple(witness), message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> Set[str]:
        return {v.code for v in self.violations}

    def to_text(self) -> str:
        return '\n'.join(
            f"{v.code}\t{' '.join(str(w) for w in v.witness)}\t{v.message}" for v in self.violations
        )

    def to_dict(self) -> dict:
        return {'ok': self.ok, 'violations': [v.to_dict() for v in self.violations]}

    def __len__(self) -> int:
        return len(self.violations)

    def __bool__(self) -> bool:
        return bool(self.violations)


@dataclass
class RatioResult:
    """Outcome of the 3/2 ratio check: 'ok', 'violated' or 'skipped'"""

    status: str
    matching_size: int
    maximum_matching: Optional[int] = None
    reason: str = ''

    @property
    def ok(self) -> bool:
        return self.status != 'violated'

    def to_dict(self) -> dict:
        return {
            'status': self.status,
            'matching_size': self.matching_size,
            'maximum_matching': self.maximum_matching,
            'reason': self.reason,
        }


def find_3_aug_path(adjacency: Sequence[Set[VertexId]],
                    mate: Sequence[Optional[VertexId]]) -> Optional[Tuple[int, int, int, int]]:
    """
    First length-3 augmenting path (u, v, y, z) in ascending (v, y, u, z)
    order: (v, y) matched, u free next to v, z != u free next to y.
    """
    for v in range(len(mate)):
        y = mate[v]
        if y is None:
            continue
        free_at_v = sorted(w for w in adjacency[v] if mate[w] is None)
        if not free_at_v:
            continue
        free_at_y = sorted(w for w in adjacency[y] if mate[w] is None)
        for u in free_at_v:
            for z in free_at_y:
                if z != u:
                    return u, v, y, z
    return None


def check_invariants(state) -> ViolationReport:
    """Check every invariant of a State and report all violations found"""
    report = ViolationReport()
    n = state.n
    t = state.threshold
    adjacency = state.neighbors
    mate = state.mate
    level = state.level

    for u in range(n):
        m = mate[u]
        if m is not None:
            if not 0 <= m < n or m == u or mate[m] != u:
                report.add(SYMMETRY, (u, m if m is not None else -1), "mate map is not an involution")
                continue
            if m not in adjacency[u]:
                report.add(SYMMETRY, (u, m), "matched pair is not an edge")
        for w in adjacency[u]:
            if u not in adjacency[w]:
                report.add(SYMMETRY, (u, w), "adjacency is not symmetric")

    free = [mate[u] is None for u in range(n)]

    for u in range(n):
        degree = len(adjacency[u])
        if level[u] not in (LEVEL_0, LEVEL_1):
            report.add(FREE_LEVEL_1, (u,), f"level {level[u]} is not 0 or 1")
        if free[u]:
            if level[u] != LEVEL_0:
                report.add(FREE_LEVEL_1, (u,), "free vertex at level 1")
            free_neighbours = sorted(w for w in adjacency[u] if free[w])
            if free_neighbours:
                report.add(FREE_NEIGHBOURS, (u, free_neighbours[0]), "free vertex has a free neighbour")
        else:
            m = mate[u]
            if level[u] == LEVEL_0 and degree >= t:
                report.add(LEVEL0_DEGREE, (u,), f"matched level-0 vertex has degree {degree} >= {t}")
            if 0 <= m < n and level[m] != level[u]:
                report.add(LEVEL_MISMATCH, (u, m), "matched endpoints on different levels")
        if level[u] == LEVEL_0 and len(state.ownership[u]) >= t:
            report.add(LEVEL0_OWNERSHIP, (u,),
                       f"level-0 vertex owns {len(state.ownership[u])} edges >= {t}")

    path = find_3_aug_path(adjacency, mate)
    if path is not None:
        report.add(AUGMENTING_PATH, path, "length-3 augmenting path")

    _check_ownership(state, report)
    _check_free_lists(state, free, report)

    for u in range(n):
        if free[u]:
            for w in adjacency[u]:
                if u < w and free[w]:
                    report.add(MAXIMALITY, (u, w), "edge with both endpoints free")

    if report:
        logger.debug(f"Invariant check found {len(report)} violation(s)")
    return report


def _check_ownership(state, report: ViolationReport):
    adjacency = state.neighbors
    level = state.level
    ownership = state.ownership
    for u in range(state.n):
        if not ownership[u].is_consistent():
            report.add(OWNERSHIP, (u,), "ownership list index is inconsistent")
        for w in ownership[u]:
            if w not in adjacency[u]:
                report.add(OWNERSHIP, (u, w), "owned pair is not an edge")
        for w in adjacency[u]:
            if u > w:
                continue
            owned_by_u = w in ownership[u]
            owned_by_w = u in ownership[w]
            if owned_by_u == owned_by_w:
                report.add(OWNERSHIP, (u, w),
                           "edge owned by both endpoints" if owned_by_u else "edge has no owner")
                continue
            owner = u if owned_by_u else w
            if level[u] != level[w] and level[owner] != LEVEL_1:
                report.add(OWNERSHIP, (u, w), "edge across levels owned by its level-0 endpoint")


def _check_free_lists(state, free: List[bool], report: ViolationReport):
    adjacency = state.neighbors
    for v in range(state.n):
        index = state.free_index[v]
        if not index.is_consistent():
            report.add(FREE_LISTS, (v,), "free-neighbour buckets are inconsistent")
        expected = {w for w in adjacency[v] if free[w]}
        actual = index.members()
        if expected != actual:
            extra = sorted(actual - expected)
            missing = sorted(expected - actual)
            report.add(FREE_LISTS, (v,), f"free-neighbour list mismatch (extra {extra}, missing {missing})")


def _active_vertices(adjacency: Sequence[Set[VertexId]]) -> List[VertexId]:
    return [u for u in range(len(adjacency)) if adjacency[u]]


def brute_force_mcm(adjacency: Sequence[Set[VertexId]],
                    max_vertices: int = DEFAULT_ORACLE_MAX_VERTICES,
                    max_edges: int = DEFAULT_ORACLE_MAX_EDGES) -> int:
    """
    Exact maximum matching size by exhaustive search.

    Accepted when the non-isolated vertex count is at most max_vertices or
    the edge count is at most max_edges.
    """
    vertices = _active_vertices(adjacency)
    edge_count = sum(len(adjacency[u]) for u in vertices) // 2
    if len(vertices) > max_vertices and edge_count > max_edges:
        raise OracleTooLargeError(
            f"oracle limited to {max_vertices} vertices or {max_edges} edges, "
            f"got {len(vertices)} vertices and {edge_count} edges"
        )
    position: Dict[VertexId, int] = {u: i for i, u in enumerate(vertices)}
    neighbour_masks = [0] * len(vertices)
    for u in vertices:
        for w in adjacency[u]:
            neighbour_masks[position[u]] |= 1 << position[w]

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        result = best(rest)
        ceiling = bin(mask).count('1') // 2
        candidates = neighbour_masks[i] & rest
        while candidates and result < ceiling:
            bit = candidates & -candidates
            candidates ^= bit
            result = max(result, 1 + best(rest ^ bit))
        return result

    return best((1 << len(vertices)) - 1)


def greedy_maximal_matching(adjacency: Sequence[Set[VertexId]]) -> int:
    """Size of the greedy maximal matching taken in ascending edge order"""
    matched: Set[VertexId] = set()
    size = 0
    for u in range(len(adjacency)):
        if u in matched:
            continue
        for w in sorted(adjacency[u]):
            if w > u and w not in matched:
                matched.add(u)
                matched.add(w)
                size += 1
                break
    return size


def ratio_status(state, max_vertices: int = DEFAULT_ORACLE_MAX_VERTICES,
                 max_edges: int = DEFAULT_ORACLE_MAX_EDGES) -> RatioResult:
    size = state.matching_size
    try:
        mcm = brute_force_mcm(state.neighbors, max_vertices, max_edges)
    except OracleTooLargeError as e:
        return RatioResult('skipped', size, None, str(e))
    status = 'ok' if 2 * mcm <= 3 * size else 'violated'
    if status == 'violated':
        logger.error(f"❌ Ratio violated: |M|={size}, maximum matching={mcm}")
    return RatioResult(status, size, mcm)


def check_ratio(state, max_vertices: int = DEFAULT_ORACLE_MAX_VERTICES,
                max_edges: int = DEFAULT_ORACLE_MAX_EDGES) -> bool:
    """|M| >= ceil(2/3 * MCM); raises OracleTooLargeError past the guard"""
    mcm = brute_force_mcm(state.neighbors, max_vertices, max_edges)
    return 2 * mcm <= 3 * state.matching_size
