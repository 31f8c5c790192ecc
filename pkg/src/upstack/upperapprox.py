"""Regular over-approximation of forward reachability.

Exact forward closures of these systems are context-sensitive in
general, so this module settles for a sound regular superset. The key
observation is that the upper word is a function of the rule sequence
alone: pops append their read symbol, pushes drop the rightmost symbol
of a nonempty word, switches leave it alone. Given any regular superset
of the real rule sequences (a *trace automaton*), a small saturation
turns it into an automaton for a superset of the reachable upper words,
and pairing those per-state with the classic regular forward closure of
the lower stack yields a regular superset of the reachable
configurations. Precision is whatever the trace abstraction buys;
soundness never depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .configsets import (
    ConfigAutomaton,
    is_barred,
    project_lower,
    project_upper,
    union_sets,
    upper_lower_product,
)
from .core import Configuration, Rule, RuleKind, UpdsSpec
from .errors import MalformedInputError
from .grammar import single_origin
from .nfa import EPSILON, Nfa
from .pds import pds_post_star, singleton_lower


@dataclass(frozen=True)
class TraceAutomaton:
    """An NFA over rule labels whose language contains every real rule
    sequence. Each node is owned by one control state: an edge labeled
    (p, a) -> (p', w) must leave a node owned by p and enter a node owned
    by p', so runs chain control states the way real traces do. Every
    node is final, making the language prefix-closed."""

    nfa: Nfa
    owner: Mapping[object, str] = field(default_factory=dict)

    def validate(self) -> None:
        for node in self.nfa.nodes():
            if node not in self.owner:
                raise MalformedInputError(f"node {node!r} has no owning state")
            if node not in self.nfa.finals:
                raise MalformedInputError(
                    f"node {node!r} is not final; the language must be prefix-closed"
                )
        for src, label, dst in self.nfa.edges():
            if label is EPSILON:
                continue
            if not isinstance(label, Rule):
                raise MalformedInputError(f"edge label {label!r} is not a rule")
            if self.owner[src] != label.from_state or self.owner[dst] != label.to_state:
                raise MalformedInputError(
                    f"edge {self.owner[src]!r} -> {self.owner[dst]!r} "
                    f"does not match rule {label}"
                )

    def accepts(self, trace) -> bool:
        return self.nfa.accepts(tuple(trace))


@dataclass(frozen=True)
class UpperAutomaton:
    """Shares the trace automaton's nodes plus one fresh entry mirror per
    trace-initial node; its edges spell the upper words the rule
    sequences can leave behind. The words reaching a node owned by p,
    from the entry mirrors, form the slice for p. `entries` maps each
    mirror to the trace node it stands for."""

    nfa: Nfa
    owner: Mapping[object, str] = field(default_factory=dict)
    entries: Mapping[object, object] = field(default_factory=dict)

    def slice(self, state: str) -> Nfa:
        out = self.nfa.copy()
        out.finals.clear()
        for node, owning in self.owner.items():
            if owning == state:
                out.add_final(node)
        return out.trim()


def _first_lower_tops(component: Nfa) -> tuple[list[str], bool]:
    """The possible first lower-stack symbols of accepted configurations,
    plus whether some accepted configuration has an empty lower word.
    Walks the barred zone (barred and epsilon edges) and records the
    plain labels leaving it."""
    tops: dict[str, None] = {}
    empty_lower = False
    seen = set(component.initial)
    stack = list(component.initial)
    while stack:
        node = stack.pop()
        if node in component.finals:
            empty_lower = True
        for label, dst in component.out_edges(node):
            if label is EPSILON or is_barred(label):
                if dst not in seen:
                    seen.add(dst)
                    stack.append(dst)
            else:
                tops[label] = None
    return list(tops), empty_lower


def trace_overapprox(
    spec: UpdsSpec, configs: ConfigAutomaton, refine_top: bool = False
) -> TraceAutomaton:
    """A sound trace automaton for the rule sequences runnable from the
    given configurations. The default abstraction is the control-state
    graph: one node per control state, an edge per rule, initial where
    the configuration set is nonempty. With refine_top, nodes also carry
    an abstract lower-stack top (a symbol, or None for unknown): rules
    fire only on a matching or unknown top, pushes and switches set the
    top to what they wrote, pops forget it. Both are prefix-closed and
    accept every real rule sequence; the refinement is tighter."""
    starts = [
        state for state, nfa in configs.components.items() if not nfa.is_empty()
    ]
    nfa = Nfa()
    owner: dict[object, str] = {}
    if not refine_top:
        for state in spec.states:
            nfa.add_node(state)
            nfa.add_final(state)
            owner[state] = state
        for state in starts:
            nfa.add_initial(state)
        for rule in spec.rules:
            nfa.add_edge(rule.from_state, rule, rule.to_state)
        return TraceAutomaton(nfa, owner)
    pending: list[tuple[str, str | None]] = []
    for state in starts:
        tops, empty_lower = _first_lower_tops(configs.components[state])
        for top in tops:
            pending.append((state, top))
        if empty_lower:
            pending.append((state, None))
    seen = set(pending)
    for node in pending:
        nfa.add_initial(node)
    while pending:
        node = pending.pop()
        state, top = node
        nfa.add_final(node)
        owner[node] = state
        for rule in spec.rules:
            if rule.from_state != state:
                continue
            if top is not None and rule.read_symbol != top:
                continue
            successor = (
                rule.to_state,
                rule.written[0] if rule.written else None,
            )
            nfa.add_edge(node, rule, successor)
            if successor not in seen:
                seen.add(successor)
                pending.append(successor)
    for node in nfa.nodes():
        if node not in owner:
            nfa.add_final(node)
            owner[node] = node[0]
    return TraceAutomaton(nfa, owner)


def saturate_upper(at: TraceAutomaton, origin: Configuration) -> UpperAutomaton:
    """The least edge set over the trace automaton's nodes such that the
    words reaching a node cover the upper words left behind, starting
    from an empty upper word, by the accepted rule sequences ending
    there. Per trace edge q0 -> q1: a pop adds q0 --a--> q1 for its read
    symbol; a switch adds q0 --eps--> q1; a push strips the last symbol,
    so any node q with a plain edge whose target reaches q0 by epsilon
    edges gets q --eps--> q1, and so does any entry node reaching q0 by
    epsilon edges (the word there was empty and stays empty).

    The entry rule is only exact for entry nodes that carry no word but
    the empty one, so an initial node with incoming trace edges is
    represented by a fresh mirror ("@entry", node) that epsilon-steps
    into it; mirrors become the result's initial nodes and nothing ever
    flows back into them."""
    at.validate()
    if origin.upper:
        raise MalformedInputError("origin configuration must have an empty upper word")
    up = Nfa()
    owner = dict(at.owner)
    entries: dict[object, object] = {}
    targeted = {dst for _, _, dst in at.nfa.edges()}
    for node in at.nfa.nodes():
        up.add_node(node)
        up.add_final(node)
    for node in at.nfa.initial:
        if node not in targeted:
            up.add_initial(node)
            continue
        mirror = ("@entry", node)
        entries[mirror] = node
        owner[mirror] = at.owner[node]
        up.add_initial(mirror)
        up.add_final(mirror)
        up.add_edge(mirror, EPSILON, node)
    trace_edges = list(at.nfa.edges())
    changed = True
    while changed:
        changed = False
        for q0, rule, q1 in trace_edges:
            if rule is EPSILON:
                additions = [(q0, EPSILON, q1)]
            elif rule.kind is RuleKind.POP:
                additions = [(q0, rule.read_symbol, q1)]
            elif rule.kind is RuleKind.SWITCH:
                additions = [(q0, EPSILON, q1)]
            else:
                additions = []
                for q in up.nodes():
                    for label, mid in up.out_edges(q):
                        if label is not EPSILON and q0 in up.eps_closure([mid]):
                            additions.append((q, EPSILON, q1))
                            break
                for q in up.initial:
                    if q0 in up.eps_closure([q]):
                        additions.append((q, EPSILON, q1))
            for src, label, dst in additions:
                if not up.has_edge(src, label, dst):
                    up.add_edge(src, label, dst)
                    changed = True
    return UpperAutomaton(up, owner, entries)


def upper_config_set(au: UpperAutomaton) -> dict[str, Nfa]:
    """Per-state upper-word languages; states with empty slices are
    dropped."""
    out: dict[str, Nfa] = {}
    states: dict[str, None] = {}
    for owning in au.owner.values():
        states.setdefault(owning, None)
    for state in states:
        part = au.slice(state)
        if not part.is_empty():
            out[state] = part
    return out


def overapprox_post(
    spec: UpdsSpec, configs: ConfigAutomaton, refine_top: bool = True
) -> ConfigAutomaton:
    """A regular superset of everything reachable from the given set.
    The set is first funneled through the single-origin extension; the
    upper zone comes from saturating a trace over-approximation of the
    extension, the lower zone from its forward pushdown closure, and the
    two are paired per original control state. The configurations' own
    per-state projection product joins the union so members that no rule
    can leave (empty lower word) are kept.

    The trace abstraction defaults to the top-refined one here: the
    funnel's spelling rules are enabled purely by what tops the lower
    stack, so the state-graph abstraction would let their pops run
    unchecked and flood every upper zone; tracking the abstract top keeps
    the funnel honest. Pass refine_top=False to see the coarse result."""
    if set(configs.alphabet) != set(spec.alphabet):
        raise MalformedInputError(
            f"alphabet mismatch: {sorted(configs.alphabet)} vs {sorted(spec.alphabet)}"
        )
    configs.validate()
    own = upper_lower_product(
        spec.alphabet, project_upper(configs), project_lower(configs)
    )
    if configs.is_empty():
        return ConfigAutomaton(spec.alphabet)
    extension = single_origin(spec, configs)
    origin = extension.origin
    seeded = ConfigAutomaton(
        extension.spec.alphabet,
        {origin.state: _singleton_component(origin)},
    )
    traces = trace_overapprox(extension.spec, seeded, refine_top=refine_top)
    uppers = upper_config_set(saturate_upper(traces, origin))
    lower = pds_post_star(
        extension.spec, singleton_lower(extension.spec, origin.state, origin.lower)
    )
    upper_slices: dict[str, Nfa] = {}
    lower_slices: dict[str, Nfa] = {}
    for state in spec.states:
        if state not in uppers:
            continue
        low = lower.slice(state)
        if low.is_empty():
            continue
        upper_slices[state] = uppers[state]
        lower_slices[state] = low
    product = upper_lower_product(spec.alphabet, upper_slices, lower_slices)
    return union_sets(product, own).compact()


def _singleton_component(origin: Configuration) -> Nfa:
    nfa = Nfa()
    nfa.add_initial(0)
    for i, symbol in enumerate(origin.lower):
        nfa.add_edge(i, symbol, i + 1)
    nfa.add_final(len(origin.lower))
    return nfa
