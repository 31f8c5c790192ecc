"""Exact forward reachability for single configurations.

The decision runs in three stages. First the query's regular start set is
folded into the system itself: an extended system with one origin
configuration <origin, eps, $> whose rules first spell a chosen start
configuration onto the lower stack (reading an automaton for the
reversed flattened word), then convert the barred prefix into upper
content, then hand control to the original rules. Second, the extended
system is compiled into a context-sensitive grammar whose terminal words
are exactly the flattened reachable configurations, fenced by endpoint
markers. Third, membership of one word is decided by exhaustive
breadth-first derivation search; every production is noncontracting, so
forms never shrink and the search below the target length terminates.

Start-set members with an empty lower stack cannot be spelled by the
extended system (handing control back reads a plain lower top), but such
configurations also have no successors at all, so is_reachable answers
for them by direct membership in the start set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ._kernel import FOUND, OVER_BUDGET, search_derivation
from .configsets import ConfigAutomaton, is_barred, unbar
from .core import (
    Configuration,
    Rule,
    RuleKind,
    UpdsSpec,
    check_configuration,
    fresh_name,
)
from .errors import MalformedInputError, ResourceLimitError
from .nfa import Nfa

DEFAULT_FORM_BUDGET = 10_000_000

TOP = ("top",)
BOTTOM = ("bottom",)


def state_terminal(state: str) -> tuple:
    return ("st", state)


def symbol_terminal(symbol: str) -> tuple:
    return ("sym", symbol)


def state_marker(state: str) -> tuple:
    return ("B.st", state)


def symbol_marker(symbol: str) -> tuple:
    return ("B.sym", symbol)


@dataclass(frozen=True)
class SingleOriginUpds:
    """Extension of a system whose entire start set collapses to one
    configuration <origin_state, eps, dollar>."""

    spec: UpdsSpec
    origin: Configuration
    original_states: tuple[str, ...]
    original_alphabet: tuple[str, ...]
    bar_names: Mapping[str, str]
    dollar: str


def _spelling_automaton(component: Nfa) -> Nfa:
    """Reverse the flattened-word automaton and normalize it to a single
    initial node 'i' without in-edges and a single final node 'f' without
    out-edges, epsilon-free. The empty word is dropped: spelling it would
    mean an empty-lower start configuration, which the caller excludes."""
    base = component.reverse().eps_eliminate().trim().relabel()
    out = Nfa()
    out.add_initial("i")
    out.add_final("f")
    for node in base.nodes():
        out.add_node(("n", node))
    for src, label, dst in base.edges():
        out.add_edge(("n", src), label, ("n", dst))
        if dst in base.finals:
            out.add_edge(("n", src), label, "f")
        if src in base.initial:
            out.add_edge("i", label, ("n", dst))
            if dst in base.finals:
                out.add_edge("i", label, "f")
    return out.trim()


def single_origin(spec: UpdsSpec, start_set: ConfigAutomaton) -> SingleOriginUpds:
    """Extended system reaching exactly the original post-image of
    start_set on the original control states (empty-lower members of the
    start set excepted; see the module docstring)."""
    start_set.validate()
    used_states = set(spec.states)
    used_symbols = set(spec.alphabet)
    bar_names = {s: fresh_name(used_symbols, s + "~") for s in spec.alphabet}
    dollar = fresh_name(used_symbols, "$")
    origin_state = fresh_name(used_states, "$origin")

    def ext_label(label) -> str:
        return bar_names[unbar(label)] if is_barred(label) else label

    states = list(spec.states) + [origin_state]
    alphabet = list(spec.alphabet) + [bar_names[s] for s in spec.alphabet] + [dollar]
    rules: list[Rule] = list(spec.rules)
    push_targets = list(spec.alphabet) + [bar_names[s] for s in spec.alphabet]

    for state in start_set.states():
        component = start_set.component(state)
        walk = _spelling_automaton(component)
        if walk.is_empty():
            continue
        names = {
            node: fresh_name(used_states, f"{state}@w{i}")
            for i, node in enumerate(walk.nodes())
        }
        final = names["f"]
        halfway = fresh_name(used_states, f"{state}@setting")
        states.extend(names[n] for n in walk.nodes() if n != "i")
        states.append(halfway)
        for src, label, dst in walk.edges():
            symbol = ext_label(label)
            if src == "i":
                rules.append(Rule(origin_state, dollar, names[dst], (symbol,)))
            else:
                for below in push_targets:
                    rules.append(Rule(names[src], below, names[dst], (symbol, below)))
        for s in spec.alphabet:
            rules.append(Rule(final, bar_names[s], halfway, (s,)))
            rules.append(Rule(halfway, s, final, ()))
        for s in spec.alphabet:
            rules.append(Rule(final, s, state, (s,)))

    ext = UpdsSpec(states=tuple(states), alphabet=tuple(alphabet), rules=tuple(rules))
    return SingleOriginUpds(
        spec=ext,
        origin=Configuration(origin_state, (), (dollar,)),
        original_states=spec.states,
        original_alphabet=spec.alphabet,
        bar_names=dict(bar_names),
        dollar=dollar,
    )


@dataclass(frozen=True)
class CsGrammar:
    """Context-sensitive grammar over tagged tuple symbols."""

    terminals: frozenset
    nonterminals: frozenset
    productions: tuple[tuple[tuple, tuple], ...]
    start: tuple

    def noncontracting_violations(self) -> list[tuple[tuple, tuple]]:
        return [(lhs, rhs) for lhs, rhs in self.productions if len(lhs) > len(rhs)]


def encode_config(c: Configuration) -> tuple:
    """Flatten a configuration into the grammar's terminal alphabet."""
    return (
        (TOP,)
        + tuple(symbol_terminal(s) for s in c.upper)
        + (state_terminal(c.state),)
        + tuple(symbol_terminal(s) for s in c.lower)
        + (BOTTOM,)
    )


def build_post_grammar(so: SingleOriginUpds) -> CsGrammar:
    """Grammar deriving exactly {encode(c) : c reachable from so.origin}.

    Each rule of the extended system becomes a small production group
    that walks a tag across the boundary marker; a final group rewrites
    markers into terminals outward from the control-state position, so a
    derivation can stop at any reachable configuration and nowhere else.
    """
    spec = so.spec
    start = ("S",)
    productions: list[tuple[tuple, tuple]] = [
        (
            (start,),
            (
                TOP,
                state_marker(so.origin.state),
                symbol_marker(so.origin.lower[0]),
                BOTTOM,
            ),
        )
    ]
    for index, rule in enumerate(spec.rules):
        p = state_marker(rule.from_state)
        q = state_marker(rule.to_state)
        a = symbol_marker(rule.read_symbol)
        tag = ("r", index)
        if rule.kind is RuleKind.SWITCH:
            b = symbol_marker(rule.written[0])
            productions.append(((p, a), (tag, a)))
            productions.append(((tag, a), (tag, b)))
            productions.append(((tag, b), (q, b)))
        elif rule.kind is RuleKind.POP:
            productions.append(((p, a), (p, tag)))
            productions.append(((p, tag), (a, tag)))
            productions.append(((a, tag), (a, q)))
        else:
            b = symbol_marker(rule.written[0])
            c = symbol_marker(rule.written[1])
            t0 = ("r0", index)
            t1 = ("r1", index)
            productions.append(((p, a), (t0, a)))
            for x in spec.alphabet:
                productions.append(((symbol_marker(x), t0), (t1, t0)))
            productions.append(((TOP, t0), (TOP, t1, t0)))
            productions.append(((t1, t0, a), (t1, t0, c)))
            productions.append(((t1, t0, c), (t1, b, c)))
            productions.append(((t1, b, c), (q, b, c)))
    markers = [(state_marker(p), state_terminal(p)) for p in spec.states]
    markers += [(symbol_marker(s), symbol_terminal(s)) for s in spec.alphabet]
    for marker, terminal in markers:
        if marker[0] == "B.st":
            productions.append(((marker,), (terminal,)))
    for marker, terminal in markers:
        for _, context in markers:
            productions.append(((marker, context), (terminal, context)))
            productions.append(((context, marker), (context, terminal)))
    terminals = (
        {TOP, BOTTOM}
        | {state_terminal(p) for p in spec.states}
        | {symbol_terminal(s) for s in spec.alphabet}
    )
    nonterminals = (
        {start}
        | {m for m, _ in markers}
        | {tag for lhs, rhs in productions for tag in lhs + rhs}
    ) - terminals
    return CsGrammar(
        terminals=frozenset(terminals),
        nonterminals=frozenset(nonterminals),
        productions=tuple(productions),
        start=start,
    )


def _intern(grammar: CsGrammar):
    ids: dict[tuple, int] = {}

    def sid(symbol: tuple) -> int:
        if symbol not in ids:
            if len(ids) >= 0xFFFF:
                raise MalformedInputError("grammar alphabet exceeds 65535 symbols")
            ids[symbol] = len(ids)
        return ids[symbol]

    def pack(word: Iterable[tuple]) -> bytes:
        out = bytearray()
        for symbol in word:
            out += sid(symbol).to_bytes(2, "little")
        return bytes(out)

    packed = [(pack(lhs), pack(rhs)) for lhs, rhs in grammar.productions]
    return packed, pack, ids


def grammar_membership(
    grammar: CsGrammar, word: Iterable[tuple], budget: int = DEFAULT_FORM_BUDGET
) -> bool:
    """Decide start =>* word by breadth-first derivation search."""
    word = tuple(word)
    unknown = [s for s in word if s not in grammar.terminals]
    if unknown:
        raise MalformedInputError(f"not a terminal: {unknown[0]!r}")
    packed, pack, _ = _intern(grammar)
    status, explored = search_derivation(
        packed, pack((grammar.start,)), pack(word), budget
    )
    if status == OVER_BUDGET:
        raise ResourceLimitError(explored, "derivation search budget")
    return status == FOUND


def derivable_forms(
    grammar: CsGrammar, max_len: int, form_budget: int = 500_000
) -> set[tuple]:
    """Every sentential form of length <= max_len, by exhaustive search.
    Test-sized grammars only."""
    seen = {(grammar.start,)}
    queue = [(grammar.start,)]
    while queue:
        form = queue.pop()
        for lhs, rhs in grammar.productions:
            span = len(lhs)
            if len(form) - span + len(rhs) > max_len:
                continue
            for i in range(len(form) - span + 1):
                if form[i : i + span] != lhs:
                    continue
                successor = form[:i] + rhs + form[i + span :]
                if successor in seen:
                    continue
                if len(seen) >= form_budget:
                    raise ResourceLimitError(len(seen), "form enumeration budget")
                seen.add(successor)
                queue.append(successor)
    return seen


def derivable_words(
    grammar: CsGrammar, max_len: int, form_budget: int = 500_000
) -> set[tuple]:
    """Every terminal word of length <= max_len."""
    return {
        form
        for form in derivable_forms(grammar, max_len, form_budget)
        if all(s in grammar.terminals for s in form)
    }


def is_reachable(
    spec: UpdsSpec,
    start_set: ConfigAutomaton,
    config: Configuration,
    budget: int = DEFAULT_FORM_BUDGET,
) -> bool:
    """Whether some member of start_set reaches config."""
    check_configuration(spec, config)
    if start_set.accepts(config):
        return True
    so = single_origin(spec, start_set)
    grammar = build_post_grammar(so)
    return grammar_membership(grammar, encode_config(config), budget)
