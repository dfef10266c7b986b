"""Housing market model: agents, objects, weak preferences, allocations.

Agents and objects are dense integer indices 0..n-1. Coalitions and object
sets are int bitmasks throughout ("bitset semantics"); allocations are tuples
mapping agent index to object index. Preferences are stored as rank vectors:
rank[i][o] is agent i's rank of object o, lower is better, equal ranks mean
indifference. Ranks are normalized on construction to a dense 0..k range so
that equal profiles compare equal.

All types are immutable after construction and all operations are pure
functions, so everything here is safe to share across threads.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator

from ._search import lex_first_assignment
from .errors import EmptyPoolError, MarketDataError

Allocation = tuple[int, ...]

BETTER = "better"
WORSE = "worse"
INDIFFERENT = "indifferent"


def mask_of(items: Iterable[int]) -> int:
    """Pack an iterable of indices into a bitmask."""
    m = 0
    for i in items:
        m |= 1 << i
    return m


def members(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into a sorted tuple of indices."""
    out = []
    while mask:
        bit = mask & -mask
        mask ^= bit
        out.append(bit.bit_length() - 1)
    return tuple(out)


class Market:
    """A housing market: one object per agent, weak-order preferences.

    Parameters
    ----------
    endow:
        endow[i] is the object owned by agent i; must be a bijection.
    ranks:
        ranks[i][o] is agent i's rank for object o (any ints; lower is
        better). Each row is normalized to dense 0..k form.
    """

    __slots__ = (
        "n",
        "endow",
        "rank",
        "owner",
        "all_objects",
        "indiff",
        "strict_upper",
        "weak_upper",
        "accept",
        "_hash",
    )

    def __init__(self, endow: Iterable[int], ranks: Iterable[Iterable[int]]):
        endow = tuple(endow)
        n = len(endow)
        if sorted(endow) != list(range(n)):
            raise MarketDataError(f"endowment is not a bijection on 0..{n - 1}: {endow}")
        rows = []
        for i, row in enumerate(ranks):
            row = tuple(row)
            if len(row) != n:
                raise MarketDataError(f"rank row for agent {i} has {len(row)} entries, expected {n}")
            levels = sorted(set(row))
            dense = {r: k for k, r in enumerate(levels)}
            rows.append(tuple(dense[r] for r in row))
        if len(rows) != n:
            raise MarketDataError(f"{len(rows)} rank rows for {n} agents")

        self.n = n
        self.endow = endow
        self.rank = tuple(rows)
        owner = [0] * n
        for i, o in enumerate(endow):
            owner[o] = i
        self.owner = tuple(owner)
        self.all_objects = (1 << n) - 1

        # per agent, per object: indifference class and strict/weak upper sets
        indiff, strict_upper, weak_upper = [], [], []
        for i in range(n):
            ri = self.rank[i]
            ind_row, s_row, w_row = [], [], []
            for o in range(n):
                ind = s = 0
                for o2 in range(n):
                    if ri[o2] == ri[o]:
                        ind |= 1 << o2
                    elif ri[o2] < ri[o]:
                        s |= 1 << o2
                ind_row.append(ind)
                s_row.append(s)
                w_row.append(ind | s)
            indiff.append(tuple(ind_row))
            strict_upper.append(tuple(s_row))
            weak_upper.append(tuple(w_row))
        self.indiff = tuple(indiff)
        self.strict_upper = tuple(strict_upper)
        self.weak_upper = tuple(weak_upper)
        self.accept = tuple(self.weak_upper[i][endow[i]] for i in range(n))
        self._hash = hash((self.endow, self.rank))

    @classmethod
    def from_pref_rows(cls, endow: Iterable[int], rows: Iterable[Iterable[Iterable[int]]]) -> "Market":
        """Build from ordered indifference classes, best class first.

        Each row must mention every object exactly once.
        """
        endow = tuple(endow)
        n = len(endow)
        ranks = []
        for i, row in enumerate(rows):
            vec = [-1] * n
            for level, cls_objs in enumerate(row):
                for o in cls_objs:
                    if not 0 <= o < n:
                        raise MarketDataError(f"agent {i}: object {o} out of range")
                    if vec[o] != -1:
                        raise MarketDataError(f"agent {i}: object {o} appears twice")
                    vec[o] = level
            if -1 in vec:
                raise MarketDataError(f"agent {i}: object {vec.index(-1)} missing from preference row")
            ranks.append(vec)
        return cls(endow, ranks)

    def omega(self, coalition: int) -> int:
        """Objects owned by a coalition, as a bitmask."""
        out = 0
        endow = self.endow
        while coalition:
            bit = coalition & -coalition
            coalition ^= bit
            out |= 1 << endow[bit.bit_length() - 1]
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Market) and self.endow == other.endow and self.rank == other.rank

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Market(n={self.n}, endow={self.endow}, rank={self.rank})"


def validate_allocation(m: Market, mu: Allocation) -> None:
    """Raise unless mu is a bijection of agents onto objects."""
    if sorted(mu) != list(range(m.n)):
        raise MarketDataError(f"not an allocation over 0..{m.n - 1}: {mu}")


def favorites(m: Market, i: int, pool: int) -> int:
    """Agent i's most preferred objects within a pool (both bitmasks)."""
    if pool == 0 or pool & ~m.all_objects:
        raise EmptyPoolError() if pool == 0 else MarketDataError(f"pool {pool:#x} outside object range")
    ri = m.rank[i]
    best = -1
    out = 0
    p = pool
    while p:
        bit = p & -p
        p ^= bit
        r = ri[bit.bit_length() - 1]
        if best == -1 or r < best:
            best = r
            out = bit
        elif r == best:
            out |= bit
    return out


def indiff_set(m: Market, i: int, o: int) -> int:
    """All objects agent i views as indifferent to o, including o itself."""
    return m.indiff[i][o]


def compare(m: Market, i: int, o: int, o2: int) -> str:
    """Compare two objects for agent i: 'better', 'worse' or 'indifferent'."""
    r, r2 = m.rank[i][o], m.rank[i][o2]
    if r < r2:
        return BETTER
    if r > r2:
        return WORSE
    return INDIFFERENT


def is_individually_rational(m: Market, mu: Allocation) -> bool:
    """Does every agent weakly prefer the assignment to the endowment?"""
    return all(m.rank[i][mu[i]] <= m.rank[i][m.endow[i]] for i in range(m.n))


def equivalent(m: Market, mu: Allocation, mu2: Allocation) -> bool:
    """Welfare equivalence: every agent indifferent between the two."""
    return all(m.rank[i][mu[i]] == m.rank[i][mu2[i]] for i in range(m.n))


def welfare_vector(m: Market, mu: Allocation) -> tuple[int, ...]:
    """Per-agent rank of the assigned object; equal iff allocations equivalent."""
    return tuple(m.rank[i][mu[i]] for i in range(m.n))


def pareto_improvement(m: Market, mu: Allocation) -> Allocation | None:
    """Lex-smallest allocation weakly preferred by all and strictly by one."""
    adj = [m.weak_upper[i][mu[i]] for i in range(m.n)]
    strict = [m.strict_upper[i][mu[i]] for i in range(m.n)]
    found = lex_first_assignment(adj, m.all_objects, strict, need_strict=True)
    return None if found is None else tuple(found)


def is_pareto_efficient(m: Market, mu: Allocation) -> bool:
    return pareto_improvement(m, mu) is None


def enumerate_allocations(m: Market) -> Iterator[Allocation]:
    """All n! allocations, in lexicographic order."""
    return itertools.permutations(range(m.n))


def cycle_groups(m: Market, mu: Allocation) -> list[int]:
    """Coalitions trading their endowments along a single cycle under mu.

    Decomposes the permutation i -> owner(mu(i)) into cycles; the result is a
    partition of agents with mu(T) = omega(T) for each group T and no proper
    nonempty subset of a group with that property. Groups are returned in
    ascending order of their smallest member.
    """
    seen = [False] * m.n
    groups = []
    for start in range(m.n):
        if seen[start]:
            continue
        group = 0
        i = start
        while not seen[i]:
            seen[i] = True
            group |= 1 << i
            i = m.owner[mu[i]]
        groups.append(group)
    return groups
