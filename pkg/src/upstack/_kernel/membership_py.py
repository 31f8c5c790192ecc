"""Pure-Python derivation search over encoded sentential forms.

Forms are `bytes`, two little-endian bytes per symbol. Productions are
(lhs, rhs) byte pairs with len(rhs) >= len(lhs) >= 2, so forms never
shrink and the search space below a target length is finite. The search
is a FIFO breadth-first walk with a visited set; productions are indexed
by their first one or two symbols so each position probes only a handful
of candidates.

This module and membership_cy.pyx implement the same function; keep them
in sync.
"""

from __future__ import annotations

from collections import deque

FOUND = 1
EXHAUSTED = 0
OVER_BUDGET = -1


def search_derivation(
    productions: list[tuple[bytes, bytes]],
    start: bytes,
    target: bytes,
    budget: int,
) -> tuple[int, int]:
    """Breadth-first search for a derivation start =>* target.

    Returns (status, explored) where status is FOUND, EXHAUSTED or
    OVER_BUDGET and explored counts distinct forms materialized.
    """
    tlen = len(target)
    if len(start) > tlen:
        return (EXHAUSTED, 0)
    if start == target:
        return (FOUND, 1)
    by_one: dict[bytes, list[tuple[bytes, bytes]]] = {}
    by_two: dict[bytes, list[tuple[bytes, bytes]]] = {}
    for lhs, rhs in productions:
        if len(lhs) == 2:
            by_one.setdefault(lhs, []).append((lhs, rhs))
        else:
            by_two.setdefault(lhs[:4], []).append((lhs, rhs))
    visited = {start}
    queue = deque((start,))
    while queue:
        form = queue.popleft()
        flen = len(form)
        for i in range(0, flen, 2):
            one = form[i : i + 2]
            candidates = by_one.get(one)
            if i + 4 <= flen:
                more = by_two.get(form[i : i + 4])
                if more is not None:
                    candidates = more if candidates is None else candidates + more
            if candidates is None:
                continue
            for lhs, rhs in candidates:
                llen = len(lhs)
                if llen > 2 and not form.startswith(lhs, i):
                    continue
                if flen - llen + len(rhs) > tlen:
                    continue
                successor = form[:i] + rhs + form[i + llen :]
                if successor in visited:
                    continue
                if successor == target:
                    return (FOUND, len(visited) + 1)
                if len(visited) >= budget:
                    return (OVER_BUDGET, len(visited))
                visited.add(successor)
                queue.append(successor)
    return (EXHAUSTED, len(visited))
