"""Safety checkers built from the two one-sided analyses.

A query is a pair of regular configuration sets: the initial set and a
forbidden set. The verdict is Unsafe only when the phase-bounded
under-approximation of the forbidden set's predecessors meets the
initial set AND the hit replays as a concrete trace; Safe only when the
regular over-approximation of the initial set's successors misses the
forbidden set; anything else is Unknown. Both sides are conservative,
so a verdict other than Unknown is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .configsets import ConfigAutomaton, bar, intersect_sets
from .core import Configuration, Rule, UpdsSpec, make_spec
from .errors import MalformedInputError
from .kphase import DEFAULT_NODE_BUDGET, bounded_phase_pre_star
from .model import ModelFile, print_config_literal
from .nfa import EPSILON, Nfa
from .oracle import oracle_trace
from .regex import compile_config_regex
from .upperapprox import overapprox_post

SAFE = "Safe"
UNSAFE = "Unsafe"
UNKNOWN = "Unknown"

TOP_SENTINEL = "@top"
FILLER = "@fill"

DEFAULT_PHASES = 3
DEFAULT_REPLAY_DEPTH = 64


@dataclass(frozen=True)
class Verdict:
    """Outcome plus the analysis parameters it was reached under. An
    Unsafe verdict carries an initial configuration from which a
    forbidden one is reachable, and a replayed trace proving it."""

    outcome: str
    k: int
    node_budget: int
    witness: Configuration | None = None
    trace: tuple[Rule, ...] | None = None
    note: str = ""

    def __post_init__(self):
        if self.outcome not in (SAFE, UNSAFE, UNKNOWN):
            raise MalformedInputError(f"unknown outcome {self.outcome!r}")
        if self.outcome == UNSAFE and (self.witness is None or self.trace is None):
            raise MalformedInputError("an Unsafe verdict needs witness and trace")

    @property
    def exit_code(self) -> int:
        return {SAFE: 0, UNSAFE: 1, UNKNOWN: 2}[self.outcome]

    def describe(self) -> str:
        lines = [f"verdict: {self.outcome} (k={self.k})"]
        if self.witness is not None:
            lines.append(f"witness: {print_config_literal(self.witness)}")
        if self.trace is not None:
            lines.append("trace: " + "; ".join(str(rule) for rule in self.trace))
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines)


def decide_safety(
    spec: UpdsSpec,
    initial: ConfigAutomaton,
    forbidden: ConfigAutomaton,
    k: int = DEFAULT_PHASES,
    node_budget: int = DEFAULT_NODE_BUDGET,
    replay_depth: int = DEFAULT_REPLAY_DEPTH,
) -> Verdict:
    """The shared decision procedure over an initial/forbidden pair."""
    under = bounded_phase_pre_star(spec, forbidden, k, node_budget=node_budget)
    hit = intersect_sets(under, initial)
    if not hit.is_empty():
        witness = hit.shortest_config()
        trace = oracle_trace(
            spec,
            witness,
            forbidden.accepts,
            replay_depth,
            witness.total_size + replay_depth,
        )
        if trace is not None:
            return Verdict(UNSAFE, k, node_budget, witness=witness, trace=trace)
        return Verdict(
            UNKNOWN,
            k,
            node_budget,
            witness=witness,
            note=(
                f"under-approximation reached {print_config_literal(witness)} "
                f"but no replay was found within {replay_depth} steps"
            ),
        )
    over = overapprox_post(spec, initial)
    if intersect_sets(over, forbidden).is_empty():
        return Verdict(SAFE, k, node_budget)
    return Verdict(
        UNKNOWN,
        k,
        node_budget,
        note=(
            "the approximations bracket the forbidden set: no phase-bounded "
            f"witness at k={k}, but the over-approximation meets it"
        ),
    )


def _spec_of(model: ModelFile | UpdsSpec) -> UpdsSpec:
    return model.spec if isinstance(model, ModelFile) else model


def _all_states_set(spec: UpdsSpec, component: Nfa) -> ConfigAutomaton:
    return ConfigAutomaton(
        spec.alphabet, {state: component.copy() for state in spec.states}
    )


def check_stack_overflow(
    model: ModelFile | UpdsSpec,
    m: int,
    lower: str,
    k: int = DEFAULT_PHASES,
    node_budget: int = DEFAULT_NODE_BUDGET,
    replay_depth: int = DEFAULT_REPLAY_DEPTH,
) -> Verdict:
    """Can the stack grow past its bound? The system is run with a
    sentinel on top of the upper zone and m filler cells of headroom
    below it; every starting lower word matches `lower` (a plain
    expression over the declared alphabet, '_' for the empty word).
    Pushes consume the headroom first; a configuration whose upper zone
    lost the sentinel has overwritten memory past the bound."""
    spec = _spec_of(model)
    if m < 0:
        raise MalformedInputError(f"headroom must be nonnegative, got {m}")
    for name in (TOP_SENTINEL, FILLER):
        if name in spec.alphabet or name in spec.states:
            raise MalformedInputError(
                f"{name!r} is reserved for the overflow checker; "
                "it may not be declared, let alone appear in a rule"
            )
    extended = make_spec(
        spec.states,
        spec.alphabet + (TOP_SENTINEL, FILLER),
        [(r.from_state, r.read_symbol, r.to_state, r.written) for r in spec.rules],
    )
    source = " ".join((TOP_SENTINEL, *([FILLER] * m), "^", "(", lower, ")"))
    component = compile_config_regex(source, alphabet=extended.alphabet)
    initial = _all_states_set(extended, component)
    forbidden = _all_states_set(extended, _upper_without(extended, TOP_SENTINEL))
    return decide_safety(extended, initial, forbidden, k, node_budget, replay_depth)


def _upper_without(spec: UpdsSpec, banned: str) -> Nfa:
    """Upper zone: any word avoiding `banned`; lower zone: any word."""
    out = Nfa()
    out.add_initial("u")
    for symbol in spec.alphabet:
        if symbol != banned:
            out.add_edge("u", bar(symbol), "u")
    out.add_edge("u", EPSILON, "l")
    for symbol in spec.alphabet:
        out.add_edge("l", symbol, "l")
    out.add_final("l")
    return out


def _upper_ending_with(spec: UpdsSpec, symbol: str) -> Nfa:
    """Upper zone: any word whose last cell (the one touching the
    boundary) holds `symbol`; lower zone: any word."""
    out = Nfa()
    out.add_initial("u")
    for other in spec.alphabet:
        out.add_edge("u", bar(other), "u")
    out.add_edge("u", bar(symbol), "l")
    for other in spec.alphabet:
        out.add_edge("l", other, "l")
    out.add_final("l")
    return out


def check_upper_read(
    model: ModelFile | UpdsSpec,
    configs: str | ConfigAutomaton,
    symbol: str,
    k: int = DEFAULT_PHASES,
    node_budget: int = DEFAULT_NODE_BUDGET,
    replay_depth: int = DEFAULT_REPLAY_DEPTH,
) -> Verdict:
    """Can `symbol` sit in the cell just above the boundary — where a
    read past the end of the stack would pick it up — in some reachable
    configuration? `configs` is a set name (with a ModelFile) or a
    configuration automaton."""
    spec = _spec_of(model)
    if symbol not in spec.alphabet:
        raise MalformedInputError(f"undeclared symbol {symbol!r}")
    if isinstance(configs, str):
        if not isinstance(model, ModelFile):
            raise MalformedInputError(
                "a set name needs a ModelFile; pass a ConfigAutomaton instead"
            )
        configs = model.config_set(configs)
    forbidden = _all_states_set(spec, _upper_ending_with(spec, symbol))
    return decide_safety(spec, configs, forbidden, k, node_budget, replay_depth)
