"""Saturation-based reachability for the lower stack alone.

Under the lower-stack-only reading a rule rewrites the top of the single
stack: (p, a) -> (p', w) sends <p, a v> to <p', w v>. Enabledness never
depends on the upper stack, so these closures are exact for the lower
projection of the two-stack semantics as well.

Both directions use P-automaton saturation over one shared NFA whose
entry nodes stand for control states: <p, w> is in the set when w runs
from entry(p) to a final node. Entry nodes carry no incoming edges on
input, which the saturation rules rely on; pds_post_star additionally
introduces one auxiliary node per push rule, named by rule index so
output is reproducible.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .core import UpdsSpec, Word
from .errors import MalformedInputError
from .nfa import EPSILON, Nfa

_ENTRY = "entry"
_SLICE = "slice"
_AUX = "aux"


def entry_node(state: str) -> tuple[str, str]:
    return (_ENTRY, state)


class LowerAutomaton:
    """Per-control-state regular sets of lower-stack words."""

    def __init__(self, alphabet: Iterable[str], nfa: Nfa, entries: Mapping[str, object]):
        self.alphabet: tuple[str, ...] = tuple(alphabet)
        self.nfa = nfa
        self.entries: dict[str, object] = dict(entries)

    @classmethod
    def from_slices(
        cls,
        states: Iterable[str],
        alphabet: Iterable[str],
        slices: Mapping[str, Nfa],
    ) -> "LowerAutomaton":
        """Bundle per-state NFAs into one shared automaton. Every state in
        `states` gets an entry node even when its slice is empty, so
        saturation has an anchor for rules targeting it."""
        alphabet = tuple(alphabet)
        symbols = set(alphabet)
        nfa = Nfa()
        entries: dict[str, object] = {}
        for state in states:
            entries[state] = nfa.add_node(entry_node(state))
        for state, part in slices.items():
            if state not in entries:
                raise MalformedInputError(f"slice for undeclared state {state!r}")
            for node in part.nodes():
                nfa.add_node((_SLICE, state, node))
            for src, label, dst in part.edges():
                if label is not EPSILON and label not in symbols:
                    raise MalformedInputError(
                        f"slice {state!r}: undeclared symbol in label {label!r}"
                    )
                nfa.add_edge((_SLICE, state, src), label, (_SLICE, state, dst))
            for node in part.initial:
                nfa.add_edge(entries[state], EPSILON, (_SLICE, state, node))
            for node in part.finals:
                nfa.add_final((_SLICE, state, node))
        return cls(alphabet, nfa, entries)

    def copy(self) -> "LowerAutomaton":
        return LowerAutomaton(self.alphabet, self.nfa.copy(), self.entries)

    def accepts(self, state: str, word: Word) -> bool:
        entry = self.entries.get(state)
        if entry is None:
            return False
        return self.nfa.accepts(word, start=(entry,))

    def slice(self, state: str) -> Nfa:
        """Standalone NFA for one control state's words."""
        entry = self.entries.get(state)
        out = Nfa()
        if entry is None:
            return out
        for node in self.nfa.nodes():
            out.add_node(node)
        for src, label, dst in self.nfa.edges():
            out.add_edge(src, label, dst)
        out.add_initial(entry)
        for node in self.nfa.finals:
            out.add_final(node)
        return out.trim()

    def slices(self) -> dict[str, Nfa]:
        return {state: self.slice(state) for state in self.entries}

    def words_up_to(self, state: str, max_len: int) -> list[Word]:
        entry = self.entries.get(state)
        if entry is None:
            return []
        return self.nfa.words_up_to(max_len, start=(entry,))


def _node_key(node) -> str:
    return repr(node)


def pds_pre_star(spec: UpdsSpec, targets: LowerAutomaton) -> LowerAutomaton:
    """Backward closure: accepts <p, w> iff some accepted <p', w'> is
    reachable from it. Saturation: for a rule (p, a) -> (p', w) and any
    node n readable as w from entry(p'), add entry(p) --a--> n."""
    out = targets.copy()
    nfa = out.nfa
    changed = True
    while changed:
        changed = False
        for rule in spec.rules:
            src = out.entries[rule.from_state]
            reached = nfa.eps_closure((out.entries[rule.to_state],))
            for symbol in rule.written:
                reached = nfa.step(reached, symbol)
            for node in sorted(reached, key=_node_key):
                if not nfa.has_edge(src, rule.read_symbol, node):
                    nfa.add_edge(src, rule.read_symbol, node)
                    changed = True
    return out


def pds_post_star(spec: UpdsSpec, init: LowerAutomaton) -> LowerAutomaton:
    """Forward closure: accepts <p', w'> iff reachable from some accepted
    <p, w>. Saturation: with n ranging over nodes readable as a from
    entry(p), a switch rule (p, a) -> (p', b) adds entry(p') --b--> n, a
    pop rule adds entry(p') --eps--> n, and a push rule (p, a) -> (p', bc)
    routes entry(p') --b--> aux(rule) --c--> n."""
    out = init.copy()
    nfa = out.nfa
    aux: dict[int, object] = {}
    for index, rule in enumerate(spec.rules):
        if len(rule.written) == 2:
            aux[index] = nfa.add_node((_AUX, index))
    changed = True
    while changed:
        changed = False
        for index, rule in enumerate(spec.rules):
            src = out.entries[rule.to_state]
            reached = nfa.step(
                nfa.eps_closure((out.entries[rule.from_state],)), rule.read_symbol
            )
            for node in sorted(reached, key=_node_key):
                if len(rule.written) == 0:
                    additions = ((src, EPSILON, node),)
                elif len(rule.written) == 1:
                    additions = ((src, rule.written[0], node),)
                else:
                    additions = (
                        (src, rule.written[0], aux[index]),
                        (aux[index], rule.written[1], node),
                    )
                for a, label, b in additions:
                    if not nfa.has_edge(a, label, b):
                        nfa.add_edge(a, label, b)
                        changed = True
    return out


def singleton_lower(spec: UpdsSpec, state: str, word: Word) -> LowerAutomaton:
    """The one-element set {<state, word>}."""
    spec.check_word(word, "lower word")
    part = Nfa()
    part.add_initial(0)
    for i, symbol in enumerate(word):
        part.add_edge(i, symbol, i + 1)
    part.add_final(len(word))
    if state not in spec.states:
        raise MalformedInputError(f"undeclared state {state!r}")
    return LowerAutomaton.from_slices(spec.states, spec.alphabet, {state: part})
