"""
Fully dynamic maximal matching without length-3 augmenting paths

Two-level scheme: vertices of low degree are settled deterministically at
level 0, high-degree vertices are matched to a uniformly random owned
neighbour at level 1. Every update ends with a matching that is maximal,
has no length-3 augmenting path and is therefore 3/2-approximate.

A vertex that loses its mate mid-update is pending: it stays out of every
F list until its own settle runs, so other procedures never pick it up as
a free neighbour before it has dropped to level 0.
"""

import logging
from functools import wraps
from typing import Iterable, List, Optional, Protocol, Tuple

from .errors import GraphUpdateError, PreconditionError
from .models import (
    DETERMINISTIC,
    LEVEL_0,
    LEVEL_1,
    RANDOM,
    Edge,
    ProcedureTrace,
    TraceEntry,
    UpdateOp,
    VertexId,
    normalize_edge,
)
from .state import State

logger = logging.getLogger(__name__)

# Procedure names as they appear in traces
NAIVE_SETTLE = 'naive-settle-augmented'
RANDOM_SETTLE = 'random-settle-augmented'
DETERMINISTIC_RAISE = 'deterministic-raise-level-to-1'
RANDOMISED_RAISE = 'randomised-raise-level-to-1'
FIX_3_AUG_PATH = 'fix-3-aug-path'
FIX_3_AUG_PATH_D = 'fix-3-aug-path-d'
HANDLE_DELETE_LEVEL1 = 'handle-delete-level1'
HANDLE_INSERT_LEVEL0 = 'handle-insert-level0'

PROCEDURES = (
    NAIVE_SETTLE,
    RANDOM_SETTLE,
    DETERMINISTIC_RAISE,
    RANDOMISED_RAISE,
    FIX_3_AUG_PATH,
    FIX_3_AUG_PATH_D,
    HANDLE_DELETE_LEVEL1,
    HANDLE_INSERT_LEVEL0,
)


class MatchObserver(Protocol):
    """
    Receives matching events as the engine emits them.

    `creator` is the index in the current trace of the procedure that set
    the edge; its work is final once on_update_end is called.
    """

    def on_match_set(self, update_index: int, edge: Edge, level: int, epoch_class: Optional[str],
                     owner_init: Optional[Tuple[VertexId, Tuple[VertexId, ...]]],
                     creator: Optional[int]) -> None: ...

    def on_match_unset(self, update_index: int, edge: Edge) -> None: ...

    def on_edge_deleted(self, update_index: int, edge: Edge) -> None: ...

    def on_update_end(self, update_index: int, trace: ProcedureTrace) -> None: ...


def procedure(name: str):
    """Record a call in the current trace together with the work it performed"""
    def decorator(func):
        @wraps(func)
        def wrapper(self, *args):
            entry = TraceEntry(name, args)
            self._active.append(len(self.trace.entries))
            self.trace.entries.append(entry)
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug(f"[{self.update_index}] {name}{args}")
            started = self.state.work
            try:
                return func(self, *args)
            finally:
                entry.work = self.state.work - started
                self._active.pop()
        return wrapper
    return decorator


class MatchingEngine:
    """
    Processes edge insertions and deletions against a State.

    Procedures mirror the update algorithm one-to-one; each is recorded in
    the ProcedureTrace returned by insert_edge / delete_edge. An optional
    observer receives epoch events (matched edge set and unset).
    """

    def __init__(self, state: State, observer: Optional[MatchObserver] = None):
        self.state = state
        self.observer = observer
        self.update_index = 0
        self.trace = ProcedureTrace(update_index=0)
        self._active: List[int] = []

    # ------------------------------------------------------------------
    # updates
    # ------------------------------------------------------------------

    def apply(self, op: UpdateOp) -> ProcedureTrace:
        if op.is_insert:
            return self.insert_edge(op.u, op.v)
        return self.delete_edge(op.u, op.v)

    def replay(self, ops: Iterable[UpdateOp]) -> List[ProcedureTrace]:
        return [self.apply(op) for op in ops]

    def insert_edge(self, u: VertexId, v: VertexId) -> ProcedureTrace:
        st = self.state
        st.add_edge(u, v)
        self._begin(UpdateOp.insert(u, v))

        # F lists stay exact: free endpoints are announced before dispatch
        if st.mate[u] is None:
            st.f_insert(v, u)
        if st.mate[v] is None:
            st.f_insert(u, v)

        level_u, level_v = st.level[u], st.level[v]
        if level_u == LEVEL_1 and level_v == LEVEL_1:
            st.own_add(min(u, v), max(u, v))
        elif level_u == LEVEL_1:
            self._insert_next_to_level1(u, v)
        elif level_v == LEVEL_1:
            self._insert_next_to_level1(v, u)
        else:
            self.handle_insert_level0(u, v)
        return self._finish()

    def delete_edge(self, u: VertexId, v: VertexId) -> ProcedureTrace:
        st = self.state
        if not (isinstance(u, int) and isinstance(v, int) and 0 <= u < st.n and 0 <= v < st.n):
            raise GraphUpdateError(f"vertex out of range in ({u}, {v})")
        if u == v or not st.has_edge(u, v):
            raise GraphUpdateError(f"edge {normalize_edge(u, v)} not present")
        self._begin(UpdateOp.delete(u, v))

        owner = st.owner_of(u, v)
        st.own_remove(owner, v if owner == u else u)
        st.f_delete(u, v)
        st.f_delete(v, u)
        st.remove_edge(u, v)
        if self.observer is not None:
            self.observer.on_edge_deleted(self.update_index, normalize_edge(u, v))

        if st.mate[u] != v:
            # unmatched edge: no invariant can break
            return self._finish()

        was_level = st.level[u]
        self._unmatch(u, v)
        if was_level == LEVEL_0:
            self.naive_settle_augmented(u, False)
        else:
            self.handle_delete_level1(u, False)
        self._resettle(v, False)
        return self._finish()

    def _insert_next_to_level1(self, high: VertexId, low: VertexId):
        st = self.state
        st.own_add(high, low)
        if st.mate[low] is None:
            z = self.check_3_aug_path(low, high)
            if z is not None:
                self._fix(low, high, st.mate[high], z, False)
        elif st.deg(low) >= st.threshold:
            self.randomised_raise_level_to_1(low)

    def _begin(self, op: UpdateOp):
        self.update_index += 1
        self.state.flag = False
        self.trace = ProcedureTrace(update_index=self.update_index, op=op)
        self._active = []

    def _finish(self) -> ProcedureTrace:
        trace = self.trace
        if self.observer is not None:
            self.observer.on_update_end(self.update_index, trace)
        return trace

    # ------------------------------------------------------------------
    # procedures
    # ------------------------------------------------------------------

    def check_3_aug_path(self, u: VertexId, v: VertexId) -> Optional[VertexId]:
        """Free z != u adjacent to mate(v), or None; F(mate(v)) is left unchanged"""
        st = self.state
        y = st.mate[v]
        if y is None:
            raise PreconditionError(f"check-3-aug-path({u}, {v}): {v} is free")
        removed = u in st.free_index[y]
        if removed:
            st.f_delete(y, u)
        z = st.get_free(y) if st.has_free(y) else None
        if removed:
            st.f_insert(y, u)
        return z

    @procedure(NAIVE_SETTLE)
    def naive_settle_augmented(self, u: VertexId, flag: bool = False):
        st = self.state
        if st.mate[u] is not None or st.level[u] != LEVEL_0:
            raise PreconditionError(f"naive-settle({u}): vertex must be free at level 0")
        flag = flag or st.flag
        t = st.threshold

        if st.has_free(u):
            w = st.get_free(u)
            self._match(u, w)
            if st.deg(u) >= t:
                if flag:
                    self.deterministic_raise_level_to_1(u)
                else:
                    self.randomised_raise_level_to_1(u)
            elif st.deg(w) >= t:
                if flag:
                    self.deterministic_raise_level_to_1(w)
                else:
                    self.randomised_raise_level_to_1(w)
                    self._resettle(u, True)
            return

        for x in sorted(st.neighbors[u]):
            if st.mate[x] is None:
                continue
            z = self.check_3_aug_path(u, x)
            if z is not None:
                self._fix(u, x, st.mate[x], z, flag)
                return
        self.insert_to_f_list(u)

    @procedure(RANDOM_SETTLE)
    def random_settle_augmented(self, u: VertexId) -> Optional[VertexId]:
        st = self.state
        if st.mate[u] is not None or st.level[u] != LEVEL_0:
            raise PreconditionError(f"random-settle({u}): vertex must be free at level 0")
        if len(st.ownership[u]) < st.threshold:
            raise PreconditionError(
                f"random-settle({u}): owns {len(st.ownership[u])} edges, needs {st.threshold}"
            )
        owned = tuple(st.ownership[u]) if self.observer is not None else None
        y = st.own_sample_uniform(u)

        self.transfer_ownership_to(u)
        self.transfer_ownership_to(y)
        x = st.mate[y]
        if x is not None:
            self._unmatch(x, y)
        self._set_level(u, LEVEL_1)
        self._set_level(y, LEVEL_1)
        self._match(u, y, RANDOM, (u, owned) if owned is not None else None)
        st.flag = True
        self.trace.random_settles += 1

        found = self._aug_path_through(u, y)
        if found is not None:
            w, z = found
            self.fix_3_aug_path_d(w, u, y, z)
        return x

    @procedure(DETERMINISTIC_RAISE)
    def deterministic_raise_level_to_1(self, u: VertexId):
        st = self.state
        v = st.mate[u]
        if v is None:
            raise PreconditionError(f"deterministic-raise({u}): vertex is free")
        was_level_0 = st.level[u] == LEVEL_0 and st.level[v] == LEVEL_0
        self.take_ownership(u)
        self.transfer_ownership_to(v)
        self._set_level(u, LEVEL_1)
        self._set_level(v, LEVEL_1)
        if was_level_0 and self.observer is not None:
            # the level-0 epoch ends and a deterministic level-1 epoch opens on the same edge
            edge = normalize_edge(u, v)
            self.observer.on_match_unset(self.update_index, edge)
            self.observer.on_match_set(self.update_index, edge, LEVEL_1, DETERMINISTIC, None,
                                       self._creator())

    @procedure(RANDOMISED_RAISE)
    def randomised_raise_level_to_1(self, u: VertexId):
        st = self.state
        v = st.mate[u]
        if v is None or st.level[u] != LEVEL_0:
            raise PreconditionError(f"randomised-raise({u}): vertex must be matched at level 0")
        if st.deg(u) < st.threshold:
            raise PreconditionError(f"randomised-raise({u}): degree {st.deg(u)} below threshold")
        self._unmatch(u, v)
        self.take_ownership(u)
        x = self.random_settle_augmented(u)
        if x is not None:
            self._resettle(x, True)
        self._resettle(v, True)

    @procedure(FIX_3_AUG_PATH_D)
    def fix_3_aug_path_d(self, u: VertexId, v: VertexId, y: VertexId, z: VertexId):
        st = self.state
        self._check_aug_path(u, v, y, z)
        self.transfer_ownership_to(u)
        self.transfer_ownership_to(z)
        if st.level[v] == LEVEL_0 or st.level[y] == LEVEL_0:
            self.transfer_ownership_to(v)
            self.transfer_ownership_to(y)
        self._unmatch(v, y)
        for p in (u, v, y, z):
            self._set_level(p, LEVEL_1)
        self._match(u, v)
        self._match(y, z)

    @procedure(FIX_3_AUG_PATH)
    def fix_3_aug_path(self, u: VertexId, v: VertexId, y: VertexId, z: VertexId):
        st = self.state
        self._check_aug_path(u, v, y, z)
        t = st.threshold
        level_v = st.level[v]
        self._unmatch(v, y)
        self._match(u, v)
        self._match(y, z)

        if level_v == LEVEL_1:
            # the endpoint that is not raised joins its level-1 mate first;
            # no matched pair may straddle the levels while the raise runs
            if st.deg(u) >= t:
                self._lift_to_mate_level(z)
                self.randomised_raise_level_to_1(u)
                self._resettle(v, True)
            elif st.deg(z) >= t:
                self._lift_to_mate_level(u)
                self.randomised_raise_level_to_1(z)
                self._resettle(y, True)
            else:
                self._lift_to_mate_level(u)
                self._lift_to_mate_level(z)
            return

        if st.deg(u) >= t:
            self.randomised_raise_level_to_1(u)
            self._resettle(v, True)
        if st.deg(z) >= t:
            q = st.mate[z]
            if q is not None and st.level[z] == LEVEL_0 and st.level[q] == LEVEL_0:
                self.randomised_raise_level_to_1(z)
            else:
                self._resettle(z, True)
            self._resettle(y, True)

    @procedure(HANDLE_DELETE_LEVEL1)
    def handle_delete_level1(self, u: VertexId, flag: bool = False):
        st = self.state
        if st.mate[u] is not None or st.level[u] != LEVEL_1:
            raise PreconditionError(f"handle-delete-level1({u}): vertex must be free at level 1")
        self.transfer_ownership_from(u)
        self._set_level(u, LEVEL_0)
        if len(st.ownership[u]) >= st.threshold:
            x = self.random_settle_augmented(u)
            if x is not None:
                self._resettle(x, True)
        else:
            self.naive_settle_augmented(u, flag)

    @procedure(HANDLE_INSERT_LEVEL0)
    def handle_insert_level0(self, u: VertexId, v: VertexId):
        st = self.state
        if st.level[u] != LEVEL_0 or st.level[v] != LEVEL_0 or not st.has_edge(u, v):
            raise PreconditionError(f"handle-insert-level0({u}, {v}): needs a level-0 edge")
        t = st.threshold
        owns = st.ownership

        if len(owns[u]) >= len(owns[v]):
            st.own_add(u, v)
        else:
            st.own_add(v, u)
        pair_matched = False
        if st.mate[u] is None and st.mate[v] is None:
            self._match(u, v)
            pair_matched = True
        if len(owns[v]) > len(owns[u]):
            u, v = v, u

        if len(owns[u]) >= t:
            self.transfer_ownership_to(u)
            previous = st.mate[u]
            if previous is not None:
                self._unmatch(u, previous)
            x = self.random_settle_augmented(u)
            if x is not None:
                self._resettle(x, True)
            if previous is not None:
                self._resettle(previous, True)
            if not pair_matched and st.mate[v] is not None and st.deg(v) >= t \
                    and st.level[v] == LEVEL_0:
                self.deterministic_raise_level_to_1(v)
            return

        if st.mate[v] is not None:
            if st.deg(v) >= t:
                self.randomised_raise_level_to_1(v)
                if st.mate[u] is not None and st.deg(u) >= t and st.level[u] == LEVEL_0:
                    self.deterministic_raise_level_to_1(u)
            elif st.mate[u] is None:
                z = self.check_3_aug_path(u, v)
                if z is not None:
                    self._fix(u, v, st.mate[v], z, False)
            elif st.deg(u) >= t:
                self.randomised_raise_level_to_1(u)
        elif st.mate[u] is not None:
            if st.deg(u) >= t:
                self.randomised_raise_level_to_1(u)
            else:
                z = self.check_3_aug_path(v, u)
                if z is not None:
                    self._fix(v, u, st.mate[u], z, False)

    # ------------------------------------------------------------------
    # ownership and free-list macros
    # ------------------------------------------------------------------

    def _give(self, owner: VertexId, other: VertexId):
        """Move edge (owner, other) from O_owner to O_other"""
        self.state.own_remove(owner, other)
        self.state.own_add(other, owner)

    def transfer_ownership_from(self, u: VertexId):
        """Hand every owned edge with a level-1 far endpoint to that endpoint"""
        st = self.state
        for w in sorted(st.ownership[u]):
            if st.level[w] == LEVEL_1:
                self._give(u, w)

    def transfer_ownership_to(self, u: VertexId):
        """Claim every edge (u, w) owned by a level-0 neighbour w"""
        st = self.state
        for w in sorted(st.neighbors[u]):
            if st.level[w] == LEVEL_0 and u in st.ownership[w]:
                self._give(w, u)

    def take_ownership(self, u: VertexId):
        """Claim every incident edge"""
        st = self.state
        for w in sorted(st.neighbors[u]):
            if u in st.ownership[w]:
                self._give(w, u)

    def insert_to_f_list(self, u: VertexId):
        st = self.state
        for w in st.neighbors[u]:
            st.f_insert(w, u)

    def delete_from_f_list(self, u: VertexId):
        st = self.state
        for w in st.neighbors[u]:
            st.f_delete(w, u)

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _creator(self) -> Optional[int]:
        """Trace index of the innermost running procedure"""
        return self._active[-1] if self._active else None

    def _set_level(self, u: VertexId, level: int):
        self.state.level[u] = level

    def _match(self, a: VertexId, b: VertexId, epoch_class: Optional[str] = None,
               owner_init: Optional[Tuple[VertexId, Tuple[VertexId, ...]]] = None):
        st = self.state
        st.set_match(a, b)
        self.delete_from_f_list(a)
        self.delete_from_f_list(b)
        if self.observer is not None:
            level = max(st.level[a], st.level[b])
            kind = (epoch_class or DETERMINISTIC) if level == LEVEL_1 else None
            self.observer.on_match_set(self.update_index, normalize_edge(a, b), level, kind,
                                       owner_init, self._creator())

    def _unmatch(self, a: VertexId, b: VertexId):
        """Both endpoints become pending; whoever stays free is announced by its settle"""
        self.state.unset_match(a, b)
        if self.observer is not None:
            self.observer.on_match_unset(self.update_index, normalize_edge(a, b))

    def _resettle(self, p: VertexId, flag: bool):
        """Settle p if it is still free"""
        st = self.state
        if st.mate[p] is not None:
            return
        if st.level[p] == LEVEL_1:
            self.handle_delete_level1(p, flag)
        else:
            self.naive_settle_augmented(p, flag)

    def _lift_to_mate_level(self, p: VertexId):
        """Raise matched p to level 1 next to its level-1 mate"""
        st = self.state
        if st.level[p] == LEVEL_0 and st.level[st.mate[p]] == LEVEL_1:
            self.transfer_ownership_to(p)
            self._set_level(p, LEVEL_1)

    def _fix(self, u: VertexId, v: VertexId, y: VertexId, z: VertexId, flag: bool):
        if flag or self.state.flag:
            self.fix_3_aug_path_d(u, v, y, z)
        else:
            self.fix_3_aug_path(u, v, y, z)

    def _check_aug_path(self, u: VertexId, v: VertexId, y: VertexId, z: VertexId):
        st = self.state
        ok = (
            st.mate[u] is None and st.mate[z] is None and u != z
            and st.mate[v] == y
            and st.has_edge(u, v) and st.has_edge(y, z)
        )
        if not ok:
            raise PreconditionError(f"({u}, {v}, {y}, {z}) is not a length-3 augmenting path")

    def _aug_path_through(self, a: VertexId, b: VertexId) -> Optional[Tuple[VertexId, VertexId]]:
        """(w, z) with w free next to a and z != w free next to b, for matched (a, b)"""
        st = self.state
        if not st.has_free(a) or not st.has_free(b):
            return None
        w = st.get_free(a)
        z = self.check_3_aug_path(w, a)
        if z is not None:
            return w, z
        # F(b) == {w}: try another free neighbour of a
        other = self.check_3_aug_path(w, b)
        if other is not None:
            return other, w
        return None
