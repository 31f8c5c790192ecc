"""Phase-bounded backward reachability.

A *phase* is a trace that never mixes the two stack-moving directions:
it uses switches freely plus either only pops or only pushes. For a
regular target set, the exact set of configurations that reach it within
one phase is regular again, and this module computes it; iterating and
uniting the two phase kinds gives an under-approximation of the full
backward closure that is exact for traces splitting into at most k
phases.

The constructions work directly on configuration automata. For the pop
phase, a product saturation tracks how far the target automaton has read
the barred image of the symbols popped so far. For the push phase, each
possible lower-top rewrite word is matched in lockstep between the
target automaton and a forward closure of the push/switch fragment, so
that the number of symbols dropped from the upper word equals the
number of pushes; a separate entry mode absorbs the case where the
upper word is exhausted entirely.

The module also ships the translation of a system into an equivalent
two-stack pushdown system whose second stack is the lower word and whose
first stack is the reversed upper word above a bottom marker. The phase
computations do not go through it; it exists as an executable statement
of the correspondence, with a stepper so the equivalence is testable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .configsets import ConfigAutomaton, bar, is_barred, union_sets, equivalent_sets
from .core import Configuration, RuleKind, UpdsSpec, Word, fresh_name
from .errors import MalformedInputError, ResourceLimitError
from .nfa import EPSILON, Nfa
from .pds import pds_post_star, singleton_lower

DEFAULT_NODE_BUDGET = 50_000


class PhaseKind(enum.Enum):
    POP = "pop"
    PUSH = "push"


# -- two-stack encoding ---------------------------------------------------

DEFAULT_BOTTOM = "@bot"


@dataclass(frozen=True, slots=True)
class MpdsRule:
    """(from_state, read_symbol, stack) -> (to_state, written): enabled
    when read_symbol tops the designated stack (1 or 2), which is the only
    stack rewritten."""

    from_state: str
    read_symbol: str
    stack: int
    to_state: str
    written: Word = ()

    def __str__(self) -> str:
        rhs = " ".join((self.to_state,) + self.written) if self.written else self.to_state
        return f"{self.from_state} {self.read_symbol} [{self.stack}] -> {rhs}"


@dataclass(frozen=True)
class Mpds:
    """A two-stack pushdown system. The bottom marker seals stack 1: no
    rule pops it."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    bottom: str
    rules: tuple[MpdsRule, ...]


MpdsConfig = tuple[str, Word, Word]


def upds_to_mpds(spec: UpdsSpec, bottom: str = DEFAULT_BOTTOM) -> Mpds:
    """Encode the system over two stacks: stack 2 is the lower word and
    stack 1 the reversed upper word above `bottom`, so both tops sit at
    the boundary. A switch stays one rule on stack 2. A pop first removes
    its symbol from stack 2, then prepends it to stack 1 from a fresh
    intermediate state. A push first rewrites stack 2, then drops the
    stack-1 top unless only the bottom marker is left. One step of the
    source system is one step here for switches and two otherwise.
    """
    if bottom in spec.alphabet:
        raise MalformedInputError(
            f"bottom marker {bottom!r} collides with a stack symbol"
        )
    used = set(spec.states)
    states = list(spec.states)
    rules: list[MpdsRule] = []
    for index, rule in enumerate(spec.rules):
        p, a, q = rule.from_state, rule.read_symbol, rule.to_state
        kind = rule.kind
        if kind is RuleKind.SWITCH:
            rules.append(MpdsRule(p, a, 2, q, rule.written))
            continue
        mid = fresh_name(used, f"{p}@r{index}")
        states.append(mid)
        if kind is RuleKind.POP:
            rules.append(MpdsRule(p, a, 2, mid, ()))
            for x in spec.alphabet + (bottom,):
                rules.append(MpdsRule(mid, x, 1, q, (a, x)))
        else:
            rules.append(MpdsRule(p, a, 2, mid, rule.written))
            rules.append(MpdsRule(mid, bottom, 1, q, (bottom,)))
            for x in spec.alphabet:
                rules.append(MpdsRule(mid, x, 1, q, ()))
    return Mpds(tuple(states), spec.alphabet + (bottom,), bottom, tuple(rules))


def mpds_step(m: Mpds, config: MpdsConfig) -> list[tuple[MpdsRule, MpdsConfig]]:
    """All one-step successors, in rule declaration order."""
    state, stack1, stack2 = config
    out: list[tuple[MpdsRule, MpdsConfig]] = []
    for rule in m.rules:
        if rule.from_state != state:
            continue
        stack = stack1 if rule.stack == 1 else stack2
        if not stack or stack[0] != rule.read_symbol:
            continue
        rewritten = rule.written + stack[1:]
        if rule.stack == 1:
            out.append((rule, (rule.to_state, rewritten, stack2)))
        else:
            out.append((rule, (rule.to_state, stack1, rewritten)))
    return out


def config_to_mpds(m: Mpds, c: Configuration) -> MpdsConfig:
    """<p, w_u, w_l> becomes (p, reverse(w_u) + bottom, w_l)."""
    return (c.state, tuple(reversed(c.upper)) + (m.bottom,), c.lower)


def mpds_to_config(m: Mpds, config: MpdsConfig) -> Configuration:
    """Inverse of config_to_mpds; rejects stacks that are not in the image
    (bottom marker missing, duplicated, or misplaced)."""
    state, stack1, stack2 = config
    if not stack1 or stack1[-1] != m.bottom:
        raise MalformedInputError(f"stack 1 does not end with {m.bottom!r}")
    body = stack1[:-1]
    if m.bottom in body or m.bottom in stack2:
        raise MalformedInputError(f"stray bottom marker {m.bottom!r}")
    return Configuration(state, tuple(reversed(body)), tuple(stack2))


# -- one-phase backward closures ------------------------------------------

def _checked_components(spec: UpdsSpec, targets: ConfigAutomaton) -> dict[str, Nfa]:
    if set(targets.alphabet) != set(spec.alphabet):
        raise MalformedInputError(
            f"alphabet mismatch: {sorted(targets.alphabet)} vs {sorted(spec.alphabet)}"
        )
    targets.validate()
    out: dict[str, Nfa] = {}
    for state, nfa in targets.components.items():
        if state not in spec.states:
            raise MalformedInputError(f"undeclared state {state!r} in target set")
        if not nfa.is_empty():
            out[state] = nfa
    return out


def _node_key(node) -> str:
    return repr(node)


def _pop_phase_pre(spec: UpdsSpec, components: dict[str, Nfa]) -> dict[str, Nfa]:
    """One pop phase, backwards. A trace of switches and pops from
    <q, w_u, w_l> never shrinks the upper word: it appends the popped
    symbols z and leaves some final lower word, so the target automaton
    must read bar(w_u) bar(z) w_l'. The core automaton has one walker
    node per (predecessor state q, target state, target node): its
    language is the set of current lower words from which some trace
    lands in the target with the target automaton finishing from that
    node. Saturation mirrors the rules: a switch defers to the successor
    state's walker after reading the rewritten symbol; a pop consumes its
    symbol from the input and advances the target automaton over the
    barred copy. Embedded plain-zone copies terminate the walk once the
    trace is exhausted."""
    core = Nfa()
    for p2, t in components.items():
        for r in t.nodes():
            core.add_node(("e", p2, r))
        for src, label, dst in t.edges():
            if label is EPSILON or not is_barred(label):
                core.add_edge(("e", p2, src), label, ("e", p2, dst))
        for r in t.finals:
            core.add_final(("e", p2, r))
    for q in spec.states:
        for p2, t in components.items():
            for r in t.nodes():
                core.add_node(("i", q, p2, r))
    for p2, t in components.items():
        for r in t.nodes():
            core.add_edge(("i", p2, p2, r), EPSILON, ("e", p2, r))
    rules = spec.rules_of_kind(RuleKind.SWITCH, RuleKind.POP)
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for p2, t in components.items():
                for r in t.nodes():
                    src = ("i", rule.from_state, p2, r)
                    if rule.kind is RuleKind.SWITCH:
                        reached = core.step(
                            [("i", rule.to_state, p2, r)], rule.written[0]
                        )
                    else:
                        reached = [
                            ("i", rule.to_state, p2, r2)
                            for r2 in t.step([r], bar(rule.read_symbol))
                        ]
                    for node in sorted(reached, key=_node_key):
                        if not core.has_edge(src, rule.read_symbol, node):
                            core.add_edge(src, rule.read_symbol, node)
                            changed = True
    out: dict[str, Nfa] = {}
    for q in spec.states:
        comp = core.copy()
        for p2, t in components.items():
            for r in t.nodes():
                comp.add_node(("u", p2, r))
            for src, label, dst in t.edges():
                if label is EPSILON or is_barred(label):
                    comp.add_edge(("u", p2, src), label, ("u", p2, dst))
            for r in t.initial:
                comp.add_initial(("u", p2, r))
            for r in t.nodes():
                comp.add_edge(("u", p2, r), EPSILON, ("i", q, p2, r))
        comp = comp.trim()
        if not comp.is_empty():
            out[q] = comp
    return out


def _push_phase_pre(spec: UpdsSpec, components: dict[str, Nfa]) -> dict[str, Nfa]:
    """One push phase, backwards. A trace of switches and pushes from
    <q, g v, w_u> rewrites the lower top g into some word z (one symbol
    per push plus the survivor, so z has one more symbol than there are
    pushes) and drops that many symbols from the right of the upper word,
    bottoming out at empty. The component guesses the split of the input
    upper word into the surviving prefix, read against the target's
    barred zone, and the dropped suffix, consumed during a lockstep walk
    that advances the target automaton and a forward closure of the
    push/switch fragment over the same z, one dropped symbol per step
    except the last. The exit step instead consumes g and hands the
    remaining input to an embedded plain-zone copy of the target. A
    second entry mode starts the lockstep at the component's initial
    nodes for traces that exhaust the upper word, where extra pushes
    advance for free. A verbatim copy of the target component keeps
    empty traces."""
    push_switch = spec.restricted(RuleKind.SWITCH, RuleKind.PUSH)
    out: dict[str, Nfa] = {}
    for q in spec.states:
        comp = Nfa()
        own = components.get(q)
        if own is not None:
            for n in own.nodes():
                comp.add_node(("v", n))
            for src, label, dst in own.edges():
                comp.add_edge(("v", src), label, ("v", dst))
            for n in own.initial:
                comp.add_initial(("v", n))
            for n in own.finals:
                comp.add_final(("v", n))
        for p2, t in components.items():
            for r in t.nodes():
                comp.add_node(("u", p2, r))
                comp.add_node(("e", p2, r))
            for src, label, dst in t.edges():
                if label is EPSILON or is_barred(label):
                    comp.add_edge(("u", p2, src), label, ("u", p2, dst))
                if label is EPSILON or not is_barred(label):
                    comp.add_edge(("e", p2, src), label, ("e", p2, dst))
            for r in t.initial:
                comp.add_initial(("u", p2, r))
            for r in t.finals:
                comp.add_final(("e", p2, r))
        for top in spec.alphabet:
            rewrites = pds_post_star(push_switch, singleton_lower(spec, q, (top,)))
            znfa = rewrites.nfa
            for p2, t in components.items():
                starts = sorted(
                    znfa.eps_closure([rewrites.entries[p2]]), key=_node_key
                )
                if not starts:
                    continue
                pending: list[tuple[object, object, int]] = []
                for r in sorted(t.nodes(), key=_node_key):
                    for z0 in starts:
                        comp.add_edge(
                            ("u", p2, r), EPSILON, ("k", top, p2, r, z0, 0)
                        )
                        pending.append((r, z0, 0))
                for r in sorted(t.eps_closure(t.initial), key=_node_key):
                    for z0 in starts:
                        comp.add_initial(("k", top, p2, r, z0, 1))
                        pending.append((r, z0, 1))
                seen = set(pending)
                while pending:
                    r, z, free = pending.pop()
                    src = ("k", top, p2, r, z, free)
                    for a in spec.alphabet:
                        landings = sorted(t.step([r], a), key=_node_key)
                        advances = sorted(znfa.step([z], a), key=_node_key)
                        for r2 in landings:
                            for z2 in advances:
                                dst = ("k", top, p2, r2, z2, free)
                                for x in spec.alphabet:
                                    comp.add_edge(src, bar(x), dst)
                                if free:
                                    comp.add_edge(src, EPSILON, dst)
                                if z2 in znfa.finals:
                                    comp.add_edge(src, EPSILON, ("x", top, p2, r2))
                                    comp.add_edge(
                                        ("x", top, p2, r2), top, ("e", p2, r2)
                                    )
                                if (r2, z2, free) not in seen:
                                    seen.add((r2, z2, free))
                                    pending.append((r2, z2, free))
        comp = comp.trim()
        if not comp.is_empty():
            out[q] = comp
    return out


def phase_pre(
    spec: UpdsSpec, targets: ConfigAutomaton, kind: PhaseKind
) -> ConfigAutomaton:
    """All configurations from which some target configuration is reached
    by a trace, possibly empty, whose non-switch rules are all pops
    (PhaseKind.POP) or all pushes (PhaseKind.PUSH). Exact."""
    components = _checked_components(spec, targets)
    if kind is PhaseKind.POP:
        built = _pop_phase_pre(spec, components)
    else:
        built = _push_phase_pre(spec, components)
    return ConfigAutomaton(spec.alphabet, built)


def _stationary(a: ConfigAutomaton, b: ConfigAutomaton) -> bool:
    try:
        return equivalent_sets(a, b)
    except ResourceLimitError:
        return False


def bounded_phase_pre_star(
    spec: UpdsSpec,
    targets: ConfigAutomaton,
    k: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ConfigAutomaton:
    """Configurations reaching the target set by traces splitting into at
    most k phases: k rounds of closing under one pop phase and one push
    phase and uniting. Monotone in k; k <= 0 returns the targets. Stops
    early once a round adds nothing."""
    current = targets.compact(node_budget)
    for _ in range(max(k, 0)):
        popped = phase_pre(spec, current, PhaseKind.POP)
        pushed = phase_pre(spec, current, PhaseKind.PUSH)
        grown = union_sets(popped, pushed).compact(node_budget)
        if _stationary(grown, current):
            return grown
        current = grown
    return current
