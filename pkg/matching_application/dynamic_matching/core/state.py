"""
Mutable engine state
Adjacency, matching, levels, edge ownership and bucketed free-neighbour lists
"""

import logging
import random
from typing import Dict, Generic, Iterator, List, Optional, Set, TypeVar

from .errors import GraphUpdateError, PreconditionError
from .models import LEVEL_0, Edge, MatchingConfig, VertexId, normalize_edge

logger = logging.getLogger(__name__)

T = TypeVar('T')


class IndexableSet(Generic[T]):
    """
    Set with O(1) add, discard, membership and uniform sampling.

    Items live in a dense list; a dict maps each item to its slot so a
    discard can swap the last item into the freed slot.
    """

    def __init__(self, items=()):
        self._items: List[T] = []
        self._slots: Dict[T, int] = {}
        for item in items:
            self.add(item)

    def add(self, item: T) -> bool:
        if item in self._slots:
            return False
        self._slots[item] = len(self._items)
        self._items.append(item)
        return True

    def discard(self, item: T) -> bool:
        slot = self._slots.pop(item, None)
        if slot is None:
            return False
        last = self._items.pop()
        if slot < len(self._items):
            self._items[slot] = last
            self._slots[last] = slot
        return True

    def sample(self, rng: random.Random) -> T:
        if not self._items:
            raise PreconditionError("cannot sample from an empty set")
        return self._items[rng.randrange(len(self._items))]

    def is_consistent(self) -> bool:
        if len(self._items) != len(self._slots):
            return False
        return all(self._slots.get(item) == slot for slot, item in enumerate(self._items))

    def __contains__(self, item) -> bool:
        return item in self._slots

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[T]:
        return iter(list(self._items))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._items!r})"


class OwnershipList(IndexableSet[VertexId]):
    """O_u: the far endpoints of the edges owned by one vertex"""


class FreeNeighborIndex:
    """
    F(v): the free neighbours of v, bucketed by id.

    Bucket j covers ids [j*width, (j+1)*width). Only non-empty buckets are
    stored, so an index costs O(|F(v)|) memory; a scan for the smallest
    non-empty bucket walks at most ceil(n/width) bucket numbers.
    """

    __slots__ = ('n', 'width', '_buckets', '_total')

    def __init__(self, n: int, width: int):
        self.n = n
        self.width = width
        self._buckets: Dict[int, Set[VertexId]] = {}
        self._total = 0

    @property
    def num_buckets(self) -> int:
        return -(-self.n // self.width)

    @property
    def total(self) -> int:
        return self._total

    def insert(self, u: VertexId) -> bool:
        bucket = self._buckets.setdefault(u // self.width, set())
        if u in bucket:
            return False
        bucket.add(u)
        self._total += 1
        return True

    def delete(self, u: VertexId) -> bool:
        key = u // self.width
        bucket = self._buckets.get(key)
        if bucket is None or u not in bucket:
            return False
        bucket.remove(u)
        if not bucket:
            del self._buckets[key]
        self._total -= 1
        return True

    def first(self) -> Optional[VertexId]:
        """Smallest-index non-empty bucket, then any member of it"""
        if self._total == 0:
            return None
        for key in range(self.num_buckets):
            bucket = self._buckets.get(key)
            if bucket:
                return min(bucket)
        return None

    def bucket_count(self, key: int) -> int:
        return len(self._buckets.get(key, ()))

    def members(self) -> Set[VertexId]:
        result: Set[VertexId] = set()
        for bucket in self._buckets.values():
            result |= bucket
        return result

    def is_consistent(self) -> bool:
        count = 0
        for key, bucket in self._buckets.items():
            if not bucket:
                return False
            if any(u // self.width != key for u in bucket):
                return False
            count += len(bucket)
        return count == self._total

    def __contains__(self, u: VertexId) -> bool:
        bucket = self._buckets.get(u // self.width)
        return bucket is not None and u in bucket

    def __len__(self) -> int:
        return self._total


class State:
    """All mutable data of one engine instance"""

    def __init__(self, config: MatchingConfig):
        self.config = config
        self.n = config.n
        self.threshold = config.threshold
        self.neighbors: List[Set[VertexId]] = [set() for _ in range(self.n)]
        self.mate: List[Optional[VertexId]] = [None] * self.n
        self.level: List[int] = [LEVEL_0] * self.n
        self.ownership: List[OwnershipList] = [OwnershipList() for _ in range(self.n)]
        self.free_index: List[FreeNeighborIndex] = [
            FreeNeighborIndex(self.n, self.threshold) for _ in range(self.n)
        ]
        self.flag = False
        self.rng = random.Random(config.seed)
        self.work = 0
        self._edge_count = 0
        self._matching_size = 0

    # ---- graph ----

    def _check_vertex(self, u: VertexId):
        if not isinstance(u, int) or not 0 <= u < self.n:
            raise GraphUpdateError(f"vertex {u!r} out of range [0, {self.n})")

    def deg(self, u: VertexId) -> int:
        return len(self.neighbors[u])

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return v in self.neighbors[u]

    def add_edge(self, u: VertexId, v: VertexId):
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphUpdateError(f"self-loop on vertex {u}")
        if v in self.neighbors[u]:
            raise GraphUpdateError(f"edge {normalize_edge(u, v)} already present")
        self.neighbors[u].add(v)
        self.neighbors[v].add(u)
        self._edge_count += 1

    def remove_edge(self, u: VertexId, v: VertexId):
        self._check_vertex(u)
        self._check_vertex(v)
        if v not in self.neighbors[u]:
            raise GraphUpdateError(f"edge {normalize_edge(u, v)} not present")
        self.neighbors[u].discard(v)
        self.neighbors[v].discard(u)
        self._edge_count -= 1

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def edges(self) -> List[Edge]:
        return sorted((u, w) for u in range(self.n) for w in self.neighbors[u] if u < w)

    # ---- matching ----

    def is_free(self, u: VertexId) -> bool:
        return self.mate[u] is None

    def set_match(self, u: VertexId, v: VertexId):
        if self.mate[u] is not None or self.mate[v] is not None:
            raise PreconditionError(f"cannot match ({u}, {v}): an endpoint is already matched")
        if v not in self.neighbors[u]:
            raise PreconditionError(f"cannot match ({u}, {v}): not an edge")
        self.mate[u] = v
        self.mate[v] = u
        self._matching_size += 1
        self.work += 1

    def unset_match(self, u: VertexId, v: VertexId):
        if self.mate[u] != v or self.mate[v] != u:
            raise PreconditionError(f"cannot unmatch ({u}, {v}): not a matched edge")
        self.mate[u] = None
        self.mate[v] = None
        self._matching_size -= 1
        self.work += 1

    @property
    def matching_size(self) -> int:
        return self._matching_size

    def matched_edges(self) -> List[Edge]:
        return [(u, m) for u, m in enumerate(self.mate) if m is not None and u < m]

    # ---- free-neighbour lists ----

    def has_free(self, v: VertexId) -> bool:
        self.work += 1
        return self.free_index[v].total > 0

    def get_free(self, v: VertexId) -> Optional[VertexId]:
        index = self.free_index[v]
        self.work += index.num_buckets
        return index.first()

    def f_insert(self, v: VertexId, u: VertexId):
        if not 0 <= u < self.n or not 0 <= v < self.n:
            raise PreconditionError(f"F({v}) insert of {u}: vertex out of range")
        self.free_index[v].insert(u)
        self.work += 1

    def f_delete(self, v: VertexId, u: VertexId):
        self.free_index[v].delete(u)
        self.work += 1

    # ---- ownership ----

    def owner_of(self, u: VertexId, v: VertexId) -> Optional[VertexId]:
        if v in self.ownership[u]:
            return u
        if u in self.ownership[v]:
            return v
        return None

    def own_add(self, u: VertexId, v: VertexId):
        if v not in self.neighbors[u]:
            raise PreconditionError(f"cannot own ({u}, {v}): not an edge")
        owner = self.owner_of(u, v)
        if owner is not None:
            raise PreconditionError(f"edge ({u}, {v}) already owned by {owner}")
        self.ownership[u].add(v)
        self.work += 1

    def own_remove(self, u: VertexId, v: VertexId):
        if not self.ownership[u].discard(v):
            raise PreconditionError(f"edge ({u}, {v}) is not owned by {u}")
        self.work += 1

    def own_sample_uniform(self, u: VertexId) -> VertexId:
        self.work += 1
        return self.ownership[u].sample(self.rng)

    def to_dict(self) -> dict:
        return {
            'config': self.config.to_dict(),
            'edge_count': self.edge_count,
            'matching_size': self.matching_size,
            'matching': [list(edge) for edge in self.matched_edges()],
            'level_1_vertices': [u for u in range(self.n) if self.level[u] != LEVEL_0],
            'work': self.work,
        }


def new_state(config: MatchingConfig) -> State:
    """Empty graph on config.n vertices: everything free at level 0"""
    logger.debug(f"New state: n={config.n}, threshold={config.threshold}, seed={config.seed}")
    return State(config)
