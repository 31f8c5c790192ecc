"""Explicit-state bounded explorers.

These are the ground truth the rest of the package is tested against: a
forward breadth-first closure over configurations, and a backward closure
for phase-bounded reachability. Both are exhaustive within their bounds,
deterministic (successors in rule declaration order), and refuse to run
past an explicit node budget rather than silently truncating.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable

from .core import (
    Configuration,
    Rule,
    RuleKind,
    UpdsSpec,
    check_configuration,
    step,
)
from .errors import ResourceLimitError

DEFAULT_NODE_BUDGET = 1_000_000


def oracle_post(
    spec: UpdsSpec,
    initial: Iterable[Configuration],
    depth: int,
    size_cap: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> frozenset[Configuration]:
    """Configurations reachable from `initial` by traces of length <= depth,
    never passing through a configuration whose total stack size exceeds
    size_cap (initial configurations above the cap are discarded too)."""
    seen: set[Configuration] = set()
    frontier: list[Configuration] = []
    for c in initial:
        check_configuration(spec, c)
        if c.total_size <= size_cap and c not in seen:
            seen.add(c)
            frontier.append(c)
    for _ in range(depth):
        if not frontier:
            break
        next_frontier: list[Configuration] = []
        for c in frontier:
            for _, succ in step(spec, c):
                if succ.total_size > size_cap or succ in seen:
                    continue
                if len(seen) >= node_budget:
                    raise ResourceLimitError(len(seen), "forward closure budget")
                seen.add(succ)
                next_frontier.append(succ)
        frontier = next_frontier
    return frozenset(seen)


def oracle_trace(
    spec: UpdsSpec,
    start: Configuration,
    accepts: Callable[[Configuration], bool],
    depth: int,
    size_cap: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[Rule, ...] | None:
    """A shortest rule sequence of length <= depth driving `start` to a
    configuration satisfying `accepts`, never letting the total stack
    size pass size_cap; None if none exists within those bounds."""
    check_configuration(spec, start)
    if accepts(start):
        return ()
    seen = {start}
    frontier: list[tuple[Configuration, tuple[Rule, ...]]] = [(start, ())]
    for _ in range(depth):
        if not frontier:
            break
        next_frontier: list[tuple[Configuration, tuple[Rule, ...]]] = []
        for c, trace in frontier:
            for rule, succ in step(spec, c):
                if succ.total_size > size_cap or succ in seen:
                    continue
                if len(seen) >= node_budget:
                    raise ResourceLimitError(len(seen), "trace search budget")
                seen.add(succ)
                if accepts(succ):
                    return trace + (rule,)
                next_frontier.append((succ, trace + (rule,)))
        frontier = next_frontier
    return None


def _predecessors(
    spec: UpdsSpec, c: Configuration
) -> list[tuple[Rule, Configuration]]:
    """All one-step predecessors of c, i.e. pairs (rule, c') with
    c' -rule-> c, in rule declaration order."""
    preds: list[tuple[Rule, Configuration]] = []
    for rule in spec.rules:
        if rule.to_state != c.state:
            continue
        kind = rule.kind
        if kind is RuleKind.SWITCH:
            if c.lower[:1] == rule.written:
                preds.append(
                    (rule, Configuration(
                        rule.from_state, c.upper, (rule.read_symbol,) + c.lower[1:]
                    ))
                )
        elif kind is RuleKind.POP:
            if c.upper and c.upper[-1] == rule.read_symbol:
                preds.append(
                    (rule, Configuration(
                        rule.from_state, c.upper[:-1], (rule.read_symbol,) + c.lower
                    ))
                )
        else:
            if c.lower[:2] != rule.written:
                continue
            rest = (rule.read_symbol,) + c.lower[2:]
            # The overwritten upper symbol is unconstrained.
            for x in spec.alphabet:
                preds.append(
                    (rule, Configuration(rule.from_state, c.upper + (x,), rest))
                )
            if not c.upper:
                preds.append((rule, Configuration(rule.from_state, (), rest)))
    return preds


def _prepend_phase(runs: int, first: RuleKind | None, kind: RuleKind):
    """Phase skeleton of rule . suffix, given the suffix's skeleton: the
    number of maximal same-kind runs among pops and pushes, plus the kind
    of the leading run."""
    if kind is RuleKind.SWITCH:
        return runs, first
    if first is kind:
        return runs, first
    return runs + 1, kind


def oracle_pre_kphase(
    spec: UpdsSpec,
    targets: Iterable[Configuration],
    depth: int,
    k: int,
    size_cap: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> frozenset[Configuration]:
    """Configurations that reach some target by a trace of length <= depth
    splitting into at most k phases, staying within size_cap.

    Implemented as a backward breadth-first search with inverted rules,
    tracking the phase skeleton of the trace suffix built so far (run
    count plus leading run kind). Total stack size never shrinks along a
    forward trace, so capping every visited configuration at size_cap
    never severs a path between endpoints that are themselves within the
    cap.
    """
    capped = []
    for c in targets:
        check_configuration(spec, c)
        if c.total_size <= size_cap:
            capped.append(c)
    answer: set[Configuration] = set(capped)
    if k <= 0:
        return frozenset(answer)
    State = tuple[Configuration, int, RuleKind | None]
    seen: set[State] = {(c, 0, None) for c in capped}
    frontier: deque[State] = deque(seen)
    explored = len(seen)
    for _ in range(depth):
        if not frontier:
            break
        next_frontier: deque[State] = deque()
        for c, runs, first in frontier:
            for rule, pred in _predecessors(spec, c):
                if pred.total_size > size_cap:
                    continue
                new_runs, new_first = _prepend_phase(runs, first, rule.kind)
                if max(new_runs, 1) > k:
                    continue
                state = (pred, new_runs, new_first)
                if state in seen:
                    continue
                explored += 1
                if explored > node_budget:
                    raise ResourceLimitError(explored, "backward closure budget")
                seen.add(state)
                answer.add(pred)
                next_frontier.append(state)
        frontier = next_frontier
    return frozenset(answer)


def pds_step(
    spec: UpdsSpec, state: str, word: tuple[str, ...]
) -> list[tuple[Rule, tuple[str, tuple[str, ...]]]]:
    """Successors under the lower-stack-only reading: a rule rewrites the
    top of the single stack and no upper stack exists."""
    if not word:
        return []
    return [
        (rule, (rule.to_state, rule.written + word[1:]))
        for rule in spec.rules_reading(state, word[0])
    ]


def pds_closure(
    spec: UpdsSpec,
    initial: Iterable[tuple[str, tuple[str, ...]]],
    size_cap: int,
    depth: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> frozenset[tuple[str, tuple[str, ...]]]:
    """Forward closure of the lower-stack-only semantics, restricted to
    stack words of length <= size_cap. depth=None runs to fixpoint, which
    is exact on the capped region whenever every witness run fits under
    the cap; an integer bounds the trace length instead."""
    seen: set[tuple[str, tuple[str, ...]]] = set()
    frontier: list[tuple[str, tuple[str, ...]]] = []
    for state, word in initial:
        if len(word) <= size_cap and (state, word) not in seen:
            seen.add((state, word))
            frontier.append((state, word))
    layer = 0
    while frontier and (depth is None or layer < depth):
        layer += 1
        next_frontier: list[tuple[str, tuple[str, ...]]] = []
        for state, word in frontier:
            for _, succ in pds_step(spec, state, word):
                if len(succ[1]) > size_cap or succ in seen:
                    continue
                if len(seen) >= node_budget:
                    raise ResourceLimitError(len(seen), "pushdown closure budget")
                seen.add(succ)
                next_frontier.append(succ)
        frontier = next_frontier
    return frozenset(seen)


def pds_reaches(
    spec: UpdsSpec,
    source: tuple[str, tuple[str, ...]],
    targets: Iterable[tuple[str, tuple[str, ...]]],
    size_cap: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> bool:
    """Whether the lower-stack-only semantics can drive `source` into one
    of `targets` without the stack ever growing past size_cap."""
    goal = set(targets)
    return bool(goal & pds_closure(spec, [source], size_cap, node_budget))
