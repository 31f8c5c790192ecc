"""Pushdown systems with an upper stack: model and one-step semantics.

A system manipulates two stacks joined at a boundary. The *lower* stack is
the classic pushdown stack; its leftmost symbol is the top. The *upper*
stack records what sits above the boundary: its rightmost symbol is the
one adjacent to the boundary, its leftmost the one farthest away.

Rules read the lower top and are classified by how many symbols they
write back:

* pop (0): the read symbol is removed from the lower stack and appended
  at the right end of the upper word; it remains visible there.
* switch (1): the lower top is rewritten in place; the upper word is
  untouched.
* push (2): the lower top is replaced by two symbols, and the rightmost
  upper symbol is overwritten, i.e. deleted, unless the upper word is
  already empty.

No rule fires on an empty lower stack.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import MalformedInputError, RuleNotEnabledError

Word = tuple[str, ...]


class RuleKind(enum.Enum):
    POP = "pop"
    SWITCH = "switch"
    PUSH = "push"


@dataclass(frozen=True, slots=True)
class Rule:
    """A rewrite rule (from_state, read_symbol) -> (to_state, written)."""

    from_state: str
    read_symbol: str
    to_state: str
    written: Word = ()

    def __post_init__(self) -> None:
        if len(self.written) > 2:
            raise MalformedInputError(
                f"rule may write at most two symbols, got {self.written!r}"
            )

    @property
    def kind(self) -> RuleKind:
        return (RuleKind.POP, RuleKind.SWITCH, RuleKind.PUSH)[len(self.written)]

    def __str__(self) -> str:
        rhs = " ".join((self.to_state,) + self.written)
        return f"{self.from_state} {self.read_symbol} -> {rhs}"


@dataclass(frozen=True)
class UpdsSpec:
    """A system: control states, stack alphabet, rules (in declaration
    order, which tie-breaks every deterministic enumeration downstream)."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    rules: tuple[Rule, ...]
    _by_read: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        for name, ids in (("state", self.states), ("symbol", self.alphabet)):
            seen = set()
            for ident in ids:
                if not ident:
                    raise MalformedInputError(f"empty {name} identifier")
                if ident in seen:
                    raise MalformedInputError(f"duplicate {name} {ident!r}")
                seen.add(ident)
        states = set(self.states)
        symbols = set(self.alphabet)
        seen_rules = set()
        for rule in self.rules:
            for st in (rule.from_state, rule.to_state):
                if st not in states:
                    raise MalformedInputError(f"undeclared state {st!r} in rule {rule}")
            for sym in (rule.read_symbol,) + rule.written:
                if sym not in symbols:
                    raise MalformedInputError(f"undeclared symbol {sym!r} in rule {rule}")
            key = (rule.from_state, rule.read_symbol, rule.to_state, rule.written)
            if key in seen_rules:
                raise MalformedInputError(f"duplicate rule {rule}")
            seen_rules.add(key)
        by_read: dict[tuple[str, str], list[Rule]] = {}
        for rule in self.rules:
            by_read.setdefault((rule.from_state, rule.read_symbol), []).append(rule)
        self._by_read.update(by_read)

    def rules_reading(self, state: str, symbol: str) -> tuple[Rule, ...]:
        return tuple(self._by_read.get((state, symbol), ()))

    def rules_of_kind(self, *kinds: RuleKind) -> tuple[Rule, ...]:
        wanted = set(kinds)
        return tuple(r for r in self.rules if r.kind in wanted)

    def restricted(self, *kinds: RuleKind) -> "UpdsSpec":
        """The same system keeping only rules of the given kinds."""
        return UpdsSpec(self.states, self.alphabet, self.rules_of_kind(*kinds))

    def check_word(self, word: Sequence[str], what: str = "word") -> Word:
        symbols = set(self.alphabet)
        for sym in word:
            if sym not in symbols:
                raise MalformedInputError(f"undeclared symbol {sym!r} in {what}")
        return tuple(word)


@dataclass(frozen=True, slots=True)
class Configuration:
    """A control state plus the two stack words."""

    state: str
    upper: Word
    lower: Word

    @property
    def total_size(self) -> int:
        return len(self.upper) + len(self.lower)

    def __str__(self) -> str:
        up = " ".join(self.upper) if self.upper else "_"
        low = " ".join(self.lower) if self.lower else "_"
        return f"<{self.state}: {up} ^ {low}>"


Trace = tuple[Rule, ...]


def check_configuration(spec: UpdsSpec, c: Configuration) -> Configuration:
    if c.state not in spec.states:
        raise MalformedInputError(f"undeclared state {c.state!r} in configuration")
    spec.check_word(c.upper, "upper word")
    spec.check_word(c.lower, "lower word")
    return c


def apply_rule(rule: Rule, c: Configuration) -> Configuration:
    """Apply an enabled rule; the caller guarantees enabledness."""
    kind = rule.kind
    if kind is RuleKind.POP:
        return Configuration(
            rule.to_state, c.upper + (rule.read_symbol,), c.lower[1:]
        )
    if kind is RuleKind.SWITCH:
        return Configuration(rule.to_state, c.upper, rule.written + c.lower[1:])
    # Push: the slice is () on an empty upper word, which is exactly the
    # empty-upper semantics.
    return Configuration(rule.to_state, c.upper[:-1], rule.written + c.lower[1:])


def step(spec: UpdsSpec, c: Configuration) -> list[tuple[Rule, Configuration]]:
    """All one-step successors of c, in rule declaration order."""
    if not c.lower:
        return []
    return [
        (rule, apply_rule(rule, c))
        for rule in spec.rules_reading(c.state, c.lower[0])
    ]


def run_trace(spec: UpdsSpec, c: Configuration, trace: Sequence[Rule]) -> Configuration:
    """Run a trace from c; raises RuleNotEnabledError at the first step
    whose rule does not read the current state and lower top."""
    current = c
    for index, rule in enumerate(trace):
        if not current.lower:
            raise RuleNotEnabledError(index, f"{rule} on empty lower stack")
        if rule.from_state != current.state or rule.read_symbol != current.lower[0]:
            raise RuleNotEnabledError(
                index, f"{rule} not enabled in {current}"
            )
        current = apply_rule(rule, current)
    return current


def trace_upper_word(spec: UpdsSpec, trace: Sequence[Rule], c: Configuration) -> Word:
    """The upper word after running the trace from c, computed on the rule
    sequence alone (no enabledness check): pops append their read symbol,
    pushes drop the rightmost symbol of a nonempty word, switches keep it.
    """
    upper = c.upper
    for rule in trace:
        kind = rule.kind
        if kind is RuleKind.POP:
            upper = upper + (rule.read_symbol,)
        elif kind is RuleKind.PUSH:
            upper = upper[:-1]
    return upper


def count_phases(trace: Sequence[Rule]) -> int:
    """The least k such that the trace splits into k blocks, each avoiding
    pushes or avoiding pops. Switches join any block; a nonempty all-switch
    trace is one block; the empty trace is zero."""
    runs = 0
    current: RuleKind | None = None
    nonempty = False
    for rule in trace:
        nonempty = True
        kind = rule.kind
        if kind is RuleKind.SWITCH:
            continue
        if kind is not current:
            runs += 1
            current = kind
    if runs:
        return runs
    return 1 if nonempty else 0


def make_spec(
    states: Iterable[str],
    alphabet: Iterable[str],
    rules: Iterable[tuple[str, str, str, Sequence[str]]],
) -> UpdsSpec:
    """Convenience constructor from plain tuples."""
    return UpdsSpec(
        tuple(states),
        tuple(alphabet),
        tuple(Rule(f, r, t, tuple(w)) for f, r, t, w in rules),
    )


def fresh_name(used: set[str], base: str) -> str:
    """A name not in `used`, derived from base by appending primes; the
    chosen name is added to `used`."""
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name
