"""Lexicographic backtracking over constrained object assignments.

Slots are filled in the given order, always trying the lowest admissible
object first, so the first complete assignment found is the lexicographically
smallest one. This single routine backs the Pareto-improvement search, every
per-coalition blocking test, and the per-group matching tests: a feasibility
check and a deterministic witness are the same computation.
"""

from __future__ import annotations

from collections.abc import Iterator


def lex_first_assignment(
    adj: list[int],
    avail: int,
    strict: list[int] | None = None,
    need_strict: bool = False,
) -> list[int] | None:
    """Find the lex-smallest injective assignment of objects to slots.

    adj[k] is the bitmask of objects slot k may take, avail the bitmask of
    objects available overall. With need_strict, at least one slot must take
    an object from its strict[k] mask. Returns the chosen object per slot,
    or None when no assignment satisfies the constraints.
    """
    n = len(adj)
    # suffix_strict[k]: strict objects any of slots k.. could still claim
    suffix_strict = [0] * (n + 1)
    if need_strict:
        assert strict is not None
        for k in range(n - 1, -1, -1):
            suffix_strict[k] = suffix_strict[k + 1] | strict[k]
    out = [0] * n

    def fill(k: int, pool: int, strict_done: bool) -> bool:
        if k == n:
            return strict_done or not need_strict
        if need_strict and not strict_done and not (suffix_strict[k] & pool):
            return False
        options = adj[k] & pool
        while options:
            bit = options & -options
            options ^= bit
            out[k] = bit.bit_length() - 1
            done = strict_done or (strict is not None and bool(strict[k] & bit))
            if fill(k + 1, pool ^ bit, done):
                return True
        return False

    return out if fill(0, avail, False) else None


def iter_assignments(adj: list[int], avail: int) -> Iterator[list[int]]:
    """Yield every injective assignment, in lexicographic order."""
    n = len(adj)
    out = [0] * n

    def fill(k: int, pool: int) -> Iterator[list[int]]:
        if k == n:
            yield list(out)
            return
        options = adj[k] & pool
        while options:
            bit = options & -options
            options ^= bit
            out[k] = bit.bit_length() - 1
            yield from fill(k + 1, pool ^ bit)

    yield from fill(0, avail)
