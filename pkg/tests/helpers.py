"""
Builders shared by the test modules
"""

from matching_application.dynamic_matching.core.engine import MatchingEngine
from matching_application.dynamic_matching.core.models import LEVEL_1, MatchingConfig, UpdateOp
from matching_application.dynamic_matching.core.state import new_state


def make_engine(n, threshold=None, seed=0, observer=None):
    state = new_state(MatchingConfig(n=n, threshold=threshold, seed=seed))
    return MatchingEngine(state, observer)


def build_state(n, edges, matching=(), threshold=None, levels=None, seed=0):
    """
    Hand-built state. Each edge is owned by its level-1 endpoint when the
    levels differ, otherwise by its smaller endpoint; F lists are exact.
    """
    state = new_state(MatchingConfig(n=n, threshold=threshold, seed=seed))
    for u, v in edges:
        state.add_edge(u, v)
    for u, v in matching:
        state.set_match(u, v)
    for u, level in (levels or {}).items():
        state.level[u] = level
    for u, v in edges:
        if state.level[u] != state.level[v]:
            owner = u if state.level[u] == LEVEL_1 else v
        else:
            owner = min(u, v)
        state.own_add(owner, v if owner == u else u)
    for v in range(n):
        for w in state.neighbors[v]:
            if state.mate[w] is None:
                state.f_insert(v, w)
    return state


def toggle_ops(pairs):
    """Turn vertex pairs into a replayable sequence: insert if absent, else delete"""
    present = set()
    ops = []
    for a, b in pairs:
        if a == b:
            continue
        edge = (min(a, b), max(a, b))
        if edge in present:
            present.remove(edge)
            ops.append(UpdateOp.delete(a, b))
        else:
            present.add(edge)
            ops.append(UpdateOp.insert(a, b))
    return ops


def adjacency_of(graph, n):
    """networkx graph -> list of neighbour sets"""
    adjacency = [set() for _ in range(n)]
    for u, v in graph.edges():
        adjacency[u].add(v)
        adjacency[v].add(u)
    return adjacency
