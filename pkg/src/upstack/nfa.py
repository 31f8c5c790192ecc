"""A small nondeterministic finite automaton toolkit.

Nodes and edge labels are arbitrary hashables; the distinguished EPSILON
label marks silent edges. Insertion order is preserved everywhere and
all worklists iterate in deterministic order, so identical construction
sequences yield identical automata (DOT exports rely on this).
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Iterator

from .errors import MalformedInputError


class _Epsilon:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EPSILON"


EPSILON = _Epsilon()

Node = Hashable
Label = Hashable


def label_key(label: Label) -> str:
    """A deterministic sort key for mixed-type labels."""
    return repr(label)


class Nfa:
    """Mutable while being built; treat as immutable once handed out."""

    def __init__(self, initial: Iterable[Node] = (), finals: Iterable[Node] = ()):
        # node -> label -> dict used as an ordered set of targets
        self._edges: dict[Node, dict[Label, dict[Node, None]]] = {}
        self.initial: dict[Node, None] = {}
        self.finals: dict[Node, None] = {}
        for n in initial:
            self.add_initial(n)
        for n in finals:
            self.add_final(n)

    # -- construction ----------------------------------------------------

    def add_node(self, node: Node) -> Node:
        self._edges.setdefault(node, {})
        return node

    def add_initial(self, node: Node) -> Node:
        self.add_node(node)
        self.initial[node] = None
        return node

    def add_final(self, node: Node) -> Node:
        self.add_node(node)
        self.finals[node] = None
        return node

    def add_edge(self, src: Node, label: Label, dst: Node) -> None:
        self.add_node(src)
        self.add_node(dst)
        self._edges[src].setdefault(label, {})[dst] = None

    def has_edge(self, src: Node, label: Label, dst: Node) -> bool:
        return dst in self._edges.get(src, {}).get(label, ())

    # -- inspection ------------------------------------------------------

    def nodes(self) -> list[Node]:
        return list(self._edges)

    def edges(self) -> Iterator[tuple[Node, Label, Node]]:
        for src, by_label in self._edges.items():
            for label, targets in by_label.items():
                for dst in targets:
                    yield src, label, dst

    def labels(self) -> list[Label]:
        seen: dict[Label, None] = {}
        for _, label, _ in self.edges():
            if label is not EPSILON:
                seen[label] = None
        return list(seen)

    def out_edges(self, src: Node) -> Iterator[tuple[Label, Node]]:
        for label, targets in self._edges.get(src, {}).items():
            for dst in targets:
                yield label, dst

    def targets(self, src: Node, label: Label) -> tuple[Node, ...]:
        return tuple(self._edges.get(src, {}).get(label, ()))

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    # -- runs ------------------------------------------------------------

    def eps_closure(self, nodes: Iterable[Node]) -> frozenset[Node]:
        seen = set(nodes)
        stack = list(seen)
        while stack:
            n = stack.pop()
            for m in self._edges.get(n, {}).get(EPSILON, ()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return frozenset(seen)

    def step(self, nodes: Iterable[Node], label: Label) -> frozenset[Node]:
        """One closed step: epsilon-close, follow label edges, close again."""
        out: set[Node] = set()
        for n in self.eps_closure(nodes):
            out.update(self._edges.get(n, {}).get(label, ()))
        return self.eps_closure(out)

    def run(self, word: Iterable[Label], start: Iterable[Node] | None = None) -> frozenset[Node]:
        current = self.eps_closure(self.initial if start is None else start)
        for sym in word:
            if not current:
                break
            current = self.step(current, sym)
        return current

    def accepts(self, word: Iterable[Label], start: Iterable[Node] | None = None) -> bool:
        return any(n in self.finals for n in self.run(word, start))

    # -- analysis --------------------------------------------------------

    def reachable(self, start: Iterable[Node]) -> set[Node]:
        seen = set(start)
        stack = list(seen)
        while stack:
            n = stack.pop()
            for _, m in self.out_edges(n):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return seen

    def shortest_word(self, start: Iterable[Node] | None = None) -> tuple[Label, ...] | None:
        """A shortest accepted word, or None if the language is empty.
        Zero-one BFS so epsilon edges cost nothing; deterministic."""
        starts = list(self.initial if start is None else start)
        best: dict[Node, tuple[Label, ...]] = {}
        queue: deque[Node] = deque()
        for n in starts:
            if n not in best:
                best[n] = ()
                queue.append(n)
        answer: tuple[Label, ...] | None = None
        while queue:
            n = queue.popleft()
            word = best[n]
            if answer is not None and len(word) >= len(answer):
                continue
            if n in self.finals and (answer is None or len(word) < len(answer)):
                answer = word
                continue
            for label, m in self.out_edges(n):
                nxt = word if label is EPSILON else word + (label,)
                if m not in best or len(nxt) < len(best[m]):
                    best[m] = nxt
                    if label is EPSILON:
                        queue.appendleft(m)
                    else:
                        queue.append(m)
        return answer

    def is_empty(self) -> bool:
        return self.shortest_word() is None

    def words_up_to(self, max_len: int, start: Iterable[Node] | None = None) -> list[tuple[Label, ...]]:
        """All accepted words of length <= max_len (deduplicated, sorted by
        length then label keys). Exponential; test-sized automata only."""
        labels = sorted(self.labels(), key=label_key)
        first = self.eps_closure(self.initial if start is None else start)
        found: dict[tuple[Label, ...], None] = {}
        layer: dict[frozenset[Node], None] = {first: None}
        words: dict[frozenset[Node], list[tuple[Label, ...]]] = {first: [()]}
        for length in range(max_len + 1):
            for nodes, ws in words.items():
                if any(n in self.finals for n in nodes):
                    for w in ws:
                        found[w] = None
            if length == max_len:
                break
            nxt_words: dict[frozenset[Node], list[tuple[Label, ...]]] = {}
            for nodes, ws in words.items():
                for label in labels:
                    stepped = self.step(nodes, label)
                    if not stepped:
                        continue
                    bucket = nxt_words.setdefault(stepped, [])
                    for w in ws:
                        bucket.append(w + (label,))
            words = nxt_words
        return sorted(found, key=lambda w: (len(w), tuple(label_key(s) for s in w)))

    # -- transformations (all build fresh automata) ----------------------

    def copy(self) -> "Nfa":
        out = Nfa(self.initial, self.finals)
        for src, label, dst in self.edges():
            out.add_edge(src, label, dst)
        return out

    def map_labels(self, fn: Callable[[Label], Label]) -> "Nfa":
        """Relabel edges; fn may return EPSILON to erase a label."""
        out = Nfa(self.initial, self.finals)
        for n in self.nodes():
            out.add_node(n)
        for src, label, dst in self.edges():
            out.add_edge(src, fn(label) if label is not EPSILON else EPSILON, dst)
        return out

    def map_nodes(self, fn: Callable[[Node], Node]) -> "Nfa":
        out = Nfa((fn(n) for n in self.initial), (fn(n) for n in self.finals))
        for n in self.nodes():
            out.add_node(fn(n))
        for src, label, dst in self.edges():
            out.add_edge(fn(src), label, fn(dst))
        return out

    def reverse(self) -> "Nfa":
        out = Nfa(self.finals, self.initial)
        for n in self.nodes():
            out.add_node(n)
        for src, label, dst in self.edges():
            out.add_edge(dst, label, src)
        return out

    def trim(self) -> "Nfa":
        """Keep only nodes on some path from an initial to a final node."""
        forward = self.reachable(self.initial)
        backward = self.reverse().reachable(self.finals)
        keep = forward & backward
        out = Nfa(
            (n for n in self.initial if n in keep),
            (n for n in self.finals if n in keep),
        )
        for src, label, dst in self.edges():
            if src in keep and dst in keep:
                out.add_edge(src, label, dst)
        return out

    def eps_eliminate(self) -> "Nfa":
        out = Nfa(self.initial)
        for n in self.nodes():
            out.add_node(n)
            closure = self.eps_closure((n,))
            if any(m in self.finals for m in closure):
                out.add_final(n)
            for m in closure:
                for label, dst in self.out_edges(m):
                    if label is not EPSILON:
                        out.add_edge(n, label, dst)
        return out

    def determinize(self, node_budget: int = 50_000) -> "Nfa":
        """Subset construction (partial: no dead sink). Nodes of the result
        are ints in discovery order. Raises MalformedInputError past the
        node budget."""
        labels = sorted(self.labels(), key=label_key)
        first = self.eps_closure(self.initial)
        numbering: dict[frozenset[Node], int] = {first: 0}
        dfa = Nfa((0,))
        if any(n in self.finals for n in first):
            dfa.add_final(0)
        queue: deque[frozenset[Node]] = deque((first,))
        while queue:
            subset = queue.popleft()
            src = numbering[subset]
            for label in labels:
                stepped = self.step(subset, label)
                if not stepped:
                    continue
                if stepped not in numbering:
                    if len(numbering) >= node_budget:
                        raise MalformedInputError(
                            f"determinization exceeded {node_budget} states"
                        )
                    numbering[stepped] = len(numbering)
                    if any(n in self.finals for n in stepped):
                        dfa.add_final(numbering[stepped])
                    queue.append(stepped)
                dfa.add_edge(src, label, numbering[stepped])
        return dfa

    def minimize(self) -> "Nfa":
        """Partition refinement on a partial DFA (missing edges behave as a
        rejecting sink). The input must be deterministic and epsilon-free."""
        nodes = self.nodes()
        labels = sorted(self.labels(), key=label_key)
        delta: dict[Node, dict[Label, Node]] = {}
        for n in nodes:
            row: dict[Label, Node] = {}
            for label, dst in self.out_edges(n):
                if label is EPSILON:
                    raise MalformedInputError("minimize requires an epsilon-free DFA")
                if label in row and row[label] != dst:
                    raise MalformedInputError("minimize requires a deterministic automaton")
                row[label] = dst
            delta[n] = row
        SINK = object()
        delta[SINK] = {}
        cls: dict[Node, int] = {n: (1 if n in self.finals else 0) for n in nodes}
        cls[SINK] = 0
        all_nodes = [*nodes, SINK]
        while True:
            signatures: dict[tuple, int] = {}
            new_cls: dict[Node, int] = {}
            for n in all_nodes:
                row = delta[n]
                sig = (cls[n], tuple(cls[row.get(label, SINK)] for label in labels))
                if sig not in signatures:
                    signatures[sig] = len(signatures)
                new_cls[n] = signatures[sig]
            stable = len(set(new_cls.values())) == len(set(cls.values()))
            cls = new_cls
            if stable:
                break
        out = Nfa()
        for n in self.initial:
            out.add_initial(cls[n])
        for n in nodes:
            if n in self.finals:
                out.add_final(cls[n])
            for label, dst in delta[n].items():
                out.add_edge(cls[n], label, cls[dst])
        return out.trim()

    def compact(self, node_budget: int = 50_000) -> "Nfa":
        """Language-preserving compression: trim, drop epsilons, determinize
        and minimize; falls back to the trimmed automaton if determinization
        blows the budget."""
        trimmed = self.trim()
        if not trimmed.initial:
            return Nfa()
        try:
            dfa = trimmed.eps_eliminate().trim().determinize(node_budget)
        except MalformedInputError:
            return trimmed
        return dfa.minimize().relabel()

    def relabel(self, by_label: bool = False) -> "Nfa":
        """Rename nodes to consecutive ints in breadth-first discovery order.
        With by_label, successors are explored in label-key order, which
        numbers isomorphic deterministic automata identically."""
        order: dict[Node, int] = {}
        queue: deque[Node] = deque()
        for n in self.initial:
            if n not in order:
                order[n] = len(order)
                queue.append(n)
        while queue:
            n = queue.popleft()
            out = list(self.out_edges(n))
            if by_label:
                out.sort(key=lambda e: label_key(e[0]))
            for _, dst in out:
                if dst not in order:
                    order[dst] = len(order)
                    queue.append(dst)
        for n in self.nodes():
            if n not in order:
                order[n] = len(order)
        return self.map_nodes(lambda n: order[n])


def union(automata: Iterable[Nfa]) -> Nfa:
    """Side-by-side union; nodes are tagged with their operand index."""
    out = Nfa()
    for i, nfa in enumerate(automata):
        for n in nfa.initial:
            out.add_initial((i, n))
        for n in nfa.finals:
            out.add_final((i, n))
        for n in nfa.nodes():
            out.add_node((i, n))
        for src, label, dst in nfa.edges():
            out.add_edge((i, src), label, (i, dst))
    return out


def intersection(a: Nfa, b: Nfa) -> Nfa:
    """Synchronous product; epsilon edges advance either side alone."""
    out = Nfa()
    start = [(x, y) for x in a.initial for y in b.initial]
    queue: deque[tuple[Node, Node]] = deque()
    seen: set[tuple[Node, Node]] = set()
    for pair in start:
        out.add_initial(pair)
        if pair not in seen:
            seen.add(pair)
            queue.append(pair)
    while queue:
        pair = queue.popleft()
        x, y = pair
        if x in a.finals and y in b.finals:
            out.add_final(pair)
        moves: list[tuple[Label, tuple[Node, Node]]] = []
        for label, xd in a.out_edges(x):
            if label is EPSILON:
                moves.append((EPSILON, (xd, y)))
            else:
                for yd in b.targets(y, label):
                    moves.append((label, (xd, yd)))
        for label, yd in b.out_edges(y):
            if label is EPSILON:
                moves.append((EPSILON, (x, yd)))
        for label, nxt in moves:
            out.add_edge(pair, label, nxt)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return out


def from_words(words: Iterable[tuple[Label, ...]]) -> Nfa:
    """An automaton accepting exactly the given words."""
    out = Nfa()
    root = out.add_initial("w")
    for i, word in enumerate(words):
        prev = root
        for j, sym in enumerate(word):
            node = out.add_node(("w", i, j))
            out.add_edge(prev, sym, node)
            prev = node
        out.add_final(prev)
    return out


def canonical_form(nfa: Nfa, node_budget: int = 50_000):
    """A hashable normal form unique to the language: the minimal partial
    DFA with nodes numbered in label-ordered discovery order."""
    trimmed = nfa.trim()
    if not trimmed.initial:
        return ((), (), ())
    d = trimmed.eps_eliminate().trim().determinize(node_budget).minimize()
    d = d.relabel(by_label=True)
    return (
        tuple(sorted(d.initial)),
        tuple(sorted(d.finals)),
        tuple(sorted(((s, label_key(l), t) for s, l, t in d.edges()))),
    )


def equivalent(a: Nfa, b: Nfa, node_budget: int = 50_000) -> bool:
    """Language equality through canonical minimal DFAs."""
    return canonical_form(a, node_budget) == canonical_form(b, node_budget)
