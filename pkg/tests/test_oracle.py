"""Bounded explorers: forward closure and phase-bounded backward closure."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cfg, e1_pumped, e1_seed, random_configuration, random_spec
from upstack.core import count_phases, run_trace, step
from upstack.errors import ResourceLimitError
from upstack.oracle import _predecessors, oracle_post, oracle_pre_kphase


def test_forward_closure_contains_pumped_family(e1):
    # Minimal breadth-first depths derived once by running the explorer to
    # saturation: 3, 9, 17 for n = 0, 1, 2.
    for n, depth in ((0, 3), (1, 9), (2, 17)):
        goal = e1_pumped(n)
        got = oracle_post(e1, [e1_seed(n)], depth, goal.total_size)
        assert goal in got
        shallower = oracle_post(e1, [e1_seed(n)], depth - 1, goal.total_size)
        assert goal not in shallower


def test_forward_closure_sizes_are_stable(e1):
    assert len(oracle_post(e1, [e1_seed(1)], 9, 4)) == 15
    assert len(oracle_post(e1, [e1_seed(2)], 17, 6)) == 62


def test_forward_closure_respects_size_cap(e1):
    got = oracle_post(e1, [e1_seed(2)], 17, 5)
    assert all(c.total_size <= 5 for c in got)
    assert e1_pumped(2) not in got


def test_forward_closure_budget_is_honest(e2):
    with pytest.raises(ResourceLimitError) as info:
        oracle_post(e2, [cfg("p", "", "c")], 50, 40, node_budget=100)
    assert info.value.explored >= 100


def test_backward_closure_two_phase_example(e2):
    pre = oracle_pre_kphase(e2, [cfg("p", "a b", "c")], 4, 2, 8)
    assert cfg("p", "b", "c c") in pre
    assert cfg("p", "b", "c c") not in oracle_pre_kphase(e2, [cfg("p", "a b", "c")], 4, 1, 8)


def test_backward_closure_zero_phases_is_identity(e2):
    targets = [cfg("p", "a b", "c"), cfg("p", "", "c")]
    assert oracle_pre_kphase(e2, targets, 6, 0, 8) == frozenset(targets)


def test_backward_closure_four_phase_family_member(e2):
    targets = [cfg("p", "a b " * m, "c") for m in range(3)]
    member = cfg("p", "b b", "c c c")
    assert member in oracle_pre_kphase(e2, targets, 8, 4, 9)
    assert member not in oracle_pre_kphase(e2, targets, 8, 3, 9)


def test_backward_closure_monotone_in_k_and_depth(e2):
    targets = [cfg("p", "a b", "c")]
    sets = [oracle_pre_kphase(e2, targets, 6, k, 8) for k in range(4)]
    for smaller, larger in zip(sets, sets[1:]):
        assert smaller <= larger
    by_depth = [oracle_pre_kphase(e2, targets, d, 2, 8) for d in range(6)]
    for smaller, larger in zip(by_depth, by_depth[1:]):
        assert smaller <= larger


@settings(deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_predecessors_invert_step(seed):
    rng = random.Random(seed)
    spec = random_spec(rng)
    c = random_configuration(rng, spec, max_side=3)
    for rule, pred in _predecessors(spec, c):
        assert (rule, c) in step(spec, pred)
    # And the other way: every successor lists us among its predecessors.
    for rule, succ in step(spec, c):
        assert (rule, c) in _predecessors(spec, succ)


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_backward_closure_agrees_with_forward_replay(seed):
    """Every configuration the backward search returns really reaches a
    target within the phase bound; found by replaying forward."""
    rng = random.Random(seed)
    spec = random_spec(rng)
    targets = {random_configuration(rng, spec, max_side=2) for _ in range(2)}
    k = rng.randint(0, 3)
    pre = oracle_pre_kphase(spec, targets, 6, k, 8)
    for c in pre:
        # Forward breadth-first search for a witness trace.
        frontier = [(c, ())]
        seen = {c}
        witness = (c in targets) and count_phases(()) <= k
        for _ in range(6):
            if witness:
                break
            nxt = []
            for conf, trace in frontier:
                for rule, succ in step(spec, conf):
                    t = trace + (rule,)
                    if succ in targets and count_phases(t) <= k:
                        witness = True
                        break
                    if succ not in seen and succ.total_size <= 8 and len(t) < 6:
                        seen.add(succ)
                        nxt.append((succ, t))
                if witness:
                    break
            frontier = nxt
        assert witness, f"{c} not confirmed forward"


def test_run_trace_replays_backward_example(e2):
    c0, c1, r_a, r_b = e2.rules
    assert run_trace(e2, cfg("p", "b", "c c"), (c0, r_a, r_b)) == cfg("p", "a b", "c")
    assert count_phases((c0, r_a, r_b)) == 2
