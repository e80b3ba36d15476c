import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matching_application.dynamic_matching.core.engine import (
    FIX_3_AUG_PATH,
    HANDLE_DELETE_LEVEL1,
    HANDLE_INSERT_LEVEL0,
    NAIVE_SETTLE,
    RANDOMISED_RAISE,
    RANDOM_SETTLE,
    MatchingEngine,
)
from matching_application.dynamic_matching.core.errors import GraphUpdateError, PreconditionError
from matching_application.dynamic_matching.core.verifier import check_invariants
from matching_application.dynamic_matching.utils.metrics import EpochTracker
from matching_application.dynamic_matching.utils.workload import gen_random

from helpers import adjacency_of, build_state, make_engine, toggle_ops


def test_insert_into_empty_graph(engine):
    trace = engine.insert_edge(0, 1)
    state = engine.state
    assert state.mate[0] == 1 and state.mate[1] == 0
    assert state.level[0] == 0 and state.level[1] == 0
    assert trace.procedures() == [HANDLE_INSERT_LEVEL0]
    assert check_invariants(state).ok


def test_insert_closing_augmenting_path(engine):
    engine.insert_edge(1, 2)
    engine.insert_edge(0, 1)
    trace = engine.insert_edge(2, 3)
    assert sorted(engine.state.matched_edges()) == [(0, 1), (2, 3)]
    assert trace.procedures() == [HANDLE_INSERT_LEVEL0, FIX_3_AUG_PATH]
    assert check_invariants(engine.state).ok


def test_check_returns_none_when_only_free_neighbour_is_u():
    state = build_state(3, [(0, 1), (0, 2), (1, 2)], matching=[(1, 2)])
    engine = MatchingEngine(state)
    assert engine.check_3_aug_path(0, 1) is None
    # F(mate(v)) is restored
    assert 0 in state.free_index[2]


def test_check_finds_path_end():
    state = build_state(4, [(0, 1), (1, 2), (2, 3)], matching=[(1, 2)])
    engine = MatchingEngine(state)
    assert engine.check_3_aug_path(0, 1) == 3
    assert engine.check_3_aug_path(3, 2) == 0


def test_check_requires_matched_vertex():
    state = build_state(4, [(0, 1)])
    with pytest.raises(PreconditionError):
        MatchingEngine(state).check_3_aug_path(0, 1)


def test_naive_settle_fixes_path():
    state = build_state(4, [(0, 1), (1, 2), (2, 3)], matching=[(1, 2)])
    engine = MatchingEngine(state)
    engine.naive_settle_augmented(3, False)
    assert state.mate[3] == 2
    assert state.mate[0] == 1
    assert engine.trace.procedures() == [NAIVE_SETTLE, FIX_3_AUG_PATH]


def test_naive_settle_requires_free_level0_vertex():
    state = build_state(4, [(0, 1)], matching=[(0, 1)])
    with pytest.raises(PreconditionError):
        MatchingEngine(state).naive_settle_augmented(0, False)


def test_random_settle_to_free_vertex():
    state = build_state(2, [(0, 1)], threshold=1)
    engine = MatchingEngine(state)
    assert engine.random_settle_augmented(0) is None
    assert state.mate[0] == 1
    assert state.level[0] == 1 and state.level[1] == 1


def test_random_settle_returns_previous_mate():
    state = build_state(3, [(0, 1), (1, 2)], matching=[(1, 2)], threshold=1)
    engine = MatchingEngine(state)
    assert engine.random_settle_augmented(0) == 2
    assert state.mate[0] == 1
    assert state.mate[2] is None


def test_random_settle_needs_enough_owned_edges():
    state = build_state(3, [(0, 1)], threshold=2)
    with pytest.raises(PreconditionError):
        MatchingEngine(state).random_settle_augmented(0)


@pytest.mark.parametrize('seed', [0, 1, 2, 3])
def test_random_settle_is_seed_deterministic(seed):
    picks = []
    for _ in range(2):
        state = build_state(3, [(0, 1), (0, 2)], threshold=2, seed=seed)
        MatchingEngine(state).random_settle_augmented(0)
        picks.append(state.mate[0])
    assert picks[0] == picks[1]


def test_deterministic_raise_keeps_matching():
    state = build_state(3, [(0, 1), (0, 2)], matching=[(0, 1)], threshold=2)
    engine = MatchingEngine(state)
    engine.deterministic_raise_level_to_1(0)
    assert state.mate[0] == 1
    assert state.level[0] == 1 and state.level[1] == 1
    assert 2 in state.ownership[0]


def test_handle_delete_level1_on_isolated_vertex():
    state = build_state(2, [])
    state.level[0] = 1
    engine = MatchingEngine(state)
    engine.handle_delete_level1(0, False)
    assert state.level[0] == 0
    assert state.mate[0] is None


def test_delete_unmatched_edge_calls_nothing():
    engine = make_engine(16)
    engine.insert_edge(0, 1)
    engine.insert_edge(1, 2)
    trace = engine.delete_edge(1, 2)
    assert trace.call_count == 0
    assert engine.state.matched_edges() == [(0, 1)]


def test_delete_only_matched_edge():
    engine = make_engine(4)
    engine.insert_edge(0, 1)
    trace = engine.delete_edge(0, 1)
    state = engine.state
    assert state.matching_size == 0
    assert state.level[0] == 0 and state.level[1] == 0
    assert trace.procedures() == [NAIVE_SETTLE, NAIVE_SETTLE]


def test_level1_delete_rematches_heavy_endpoint():
    engine = make_engine(6, threshold=2)
    for leaf in (1, 2, 3, 4):
        engine.insert_edge(leaf, 0)
    state = engine.state
    assert state.level[0] == 1

    trace = engine.delete_edge(0, state.mate[0])
    assert state.mate[0] is not None
    assert state.level[0] == 1
    assert HANDLE_DELETE_LEVEL1 in trace.procedures()
    assert RANDOM_SETTLE in trace.procedures()
    assert check_invariants(state).ok


@pytest.mark.parametrize('u, v', [(3, 3), (0, 8), (-1, 2)])
def test_insert_rejects_bad_edges(engine, u, v):
    with pytest.raises(GraphUpdateError):
        engine.insert_edge(u, v)


def test_insert_duplicate_and_delete_absent(engine):
    engine.insert_edge(0, 1)
    with pytest.raises(GraphUpdateError):
        engine.insert_edge(1, 0)
    with pytest.raises(GraphUpdateError):
        engine.delete_edge(2, 3)
    assert engine.update_index == 1


def test_edge_between_level1_vertices_goes_to_smaller_id():
    engine = make_engine(6, threshold=1)
    engine.insert_edge(0, 1)
    engine.insert_edge(2, 3)
    state = engine.state
    assert state.level[1] == 1 and state.level[2] == 1
    engine.insert_edge(2, 1)
    assert state.owner_of(1, 2) == 1
    assert check_invariants(state).ok


pairs = st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=60)


@settings(max_examples=150, deadline=None)
@given(pairs=pairs, threshold=st.integers(1, 4), seed=st.integers(0, 2**16))
def test_invariants_hold_after_every_update(pairs, threshold, seed):
    engine = make_engine(9, threshold=threshold, seed=seed)
    for op in toggle_ops(pairs):
        engine.apply(op)
        report = check_invariants(engine.state)
        assert report.ok, report.to_text()


@settings(max_examples=80, deadline=None)
@given(pairs=pairs, seed=st.integers(0, 2**16))
def test_matching_is_three_halves_approximate(pairs, seed):
    engine = make_engine(9, seed=seed)
    graph = nx.Graph()
    graph.add_nodes_from(range(9))
    for op in toggle_ops(pairs):
        engine.apply(op)
        if op.is_insert:
            graph.add_edge(op.u, op.v)
        else:
            graph.remove_edge(op.u, op.v)
        best = len(nx.max_weight_matching(graph, maxcardinality=True))
        assert 2 * best <= 3 * engine.state.matching_size
    assert engine.state.neighbors == adjacency_of(graph, 9)


@settings(max_examples=60, deadline=None)
@given(pairs=pairs, threshold=st.integers(1, 3), seed=st.integers(0, 2**16))
def test_live_epochs_equal_matching_size(pairs, threshold, seed):
    tracker = EpochTracker(threshold)
    engine = make_engine(9, threshold=threshold, seed=seed, observer=tracker)
    for op in toggle_ops(pairs):
        engine.apply(op)
        assert tracker.live_count == engine.state.matching_size
        assert set(tracker.live) == set(engine.state.matched_edges())


PATH_EDGES = [(0, 1), (1, 2), (2, 3)]


@pytest.mark.parametrize('procedure, middle_level, final_level', [
    ('fix_3_aug_path_d', 0, 1),
    ('fix_3_aug_path_d', 1, 1),
    ('fix_3_aug_path', 0, 0),
    ('fix_3_aug_path', 1, 1),
])
def test_augmenting_exchange(procedure, middle_level, final_level):
    state = build_state(4, PATH_EDGES, matching=[(1, 2)],
                        levels={1: middle_level, 2: middle_level})
    engine = MatchingEngine(state)
    before = state.matching_size

    getattr(engine, procedure)(0, 1, 2, 3)
    assert state.matching_size == before + 1
    assert sorted(state.matched_edges()) == [(0, 1), (2, 3)]
    assert [state.level[p] for p in range(4)] == [final_level] * 4
    assert all(index.total == 0 for index in state.free_index)
    assert check_invariants(state).ok


def test_fix_rejects_non_augmenting_path():
    state = build_state(4, PATH_EDGES, matching=[(1, 2)])
    with pytest.raises(PreconditionError):
        MatchingEngine(state).fix_3_aug_path_d(0, 1, 2, 0)


@pytest.mark.parametrize('seed', range(6))
def test_randomised_raise_of_star_center(seed):
    # centre 0 matched to leaf 1 at level 0 with degree at the threshold
    state = build_state(5, [(0, 1), (0, 2), (0, 3), (1, 4)], matching=[(0, 1)],
                        threshold=3, seed=seed)
    engine = MatchingEngine(state)
    engine.randomised_raise_level_to_1(0)

    assert state.level[0] == 1
    assert state.mate[0] in (1, 2, 3)
    # the old mate is matched again, to the centre or to its other neighbour
    assert state.mate[1] in (0, 4)
    assert state.matching_size == 2
    assert engine.trace.procedures()[:2] == [RANDOMISED_RAISE, RANDOM_SETTLE]
    assert check_invariants(state).ok


def test_randomised_raise_needs_heavy_vertex():
    state = build_state(3, [(0, 1), (0, 2)], matching=[(0, 1)], threshold=3)
    with pytest.raises(PreconditionError):
        MatchingEngine(state).randomised_raise_level_to_1(0)


def test_transfer_ownership_from_moves_only_level1_edges():
    state = build_state(3, [(0, 1), (0, 2)], levels={0: 1, 1: 1})
    assert set(state.ownership[0]) == {1, 2}
    MatchingEngine(state).transfer_ownership_from(0)
    assert set(state.ownership[0]) == {2}
    assert set(state.ownership[1]) == {0}


def test_transfer_ownership_to_claims_from_level0_neighbours():
    state = build_state(3, [(0, 2), (1, 2)], levels={1: 1})
    MatchingEngine(state).transfer_ownership_to(2)
    assert set(state.ownership[2]) == {0}
    assert set(state.ownership[1]) == {2}


def test_take_ownership_is_idempotent():
    state = build_state(3, [(0, 2), (1, 2)], levels={1: 1})
    engine = MatchingEngine(state)
    engine.take_ownership(2)
    assert set(state.ownership[2]) == {0, 1}
    assert len(state.ownership[0]) == len(state.ownership[1]) == 0
    engine.take_ownership(2)
    assert set(state.ownership[2]) == {0, 1}


def test_ownership_macros_on_isolated_vertex():
    state = build_state(2, [])
    engine = MatchingEngine(state)
    engine.transfer_ownership_from(0)
    engine.transfer_ownership_to(0)
    engine.take_ownership(0)
    assert len(state.ownership[0]) == len(state.ownership[1]) == 0


def test_f_list_macros():
    state = build_state(4, [(0, 1), (0, 2)], matching=[(0, 1)])
    engine = MatchingEngine(state)
    assert 0 not in state.free_index[1] and 0 not in state.free_index[2]

    engine.insert_to_f_list(0)
    assert 0 in state.free_index[1] and 0 in state.free_index[2]
    engine.delete_from_f_list(0)
    assert state.free_index[1].total == 0
    assert state.free_index[0].members() == {2}

    engine.insert_to_f_list(3)
    assert sum(index.total for index in state.free_index) == 1


def test_insert_raising_owned_list_to_threshold_settles_randomly():
    engine = make_engine(6, threshold=2)
    engine.insert_edge(0, 1)
    trace = engine.insert_edge(0, 2)
    state = engine.state

    assert trace.procedures()[:2] == [HANDLE_INSERT_LEVEL0, RANDOM_SETTLE]
    assert RANDOMISED_RAISE not in trace.procedures()
    assert state.level[0] == 1
    assert state.mate[0] in (1, 2)
    assert check_invariants(state).ok


def test_level1_delete_keeps_other_endpoint_out_of_first_settle():
    # 0-1 matched at level 1; 2-3 matched at level 0; 0-2-3-1 is a path
    state = build_state(4, [(0, 1), (0, 2), (2, 3), (1, 3)], matching=[(0, 1), (2, 3)],
                        threshold=3, levels={0: 1, 1: 1})
    engine = MatchingEngine(state)
    trace = engine.delete_edge(0, 1)

    assert trace.procedures() == [
        HANDLE_DELETE_LEVEL1, NAIVE_SETTLE, HANDLE_DELETE_LEVEL1, NAIVE_SETTLE, FIX_3_AUG_PATH,
    ]
    assert trace.entries[-1].args == (1, 3, 2, 0)
    assert sorted(state.matched_edges()) == [(0, 2), (1, 3)]
    assert [state.level[p] for p in range(4)] == [0, 0, 0, 0]
    assert check_invariants(state).ok


@pytest.mark.parametrize('seed', [19, 3, 7])
def test_seeded_replay_stays_clean_after_every_update(seed):
    engine = make_engine(12, seed=seed)
    for op in gen_random(12, 120, 0.6, seed).ops:
        trace = engine.apply(op)
        report = check_invariants(engine.state)
        assert report.ok, f"{op.to_line()} {trace.procedures()}\n{report.to_text()}"
