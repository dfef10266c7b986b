"""Control-rights fixed points and the five blocking notions.

Two layers live here. The predicate functions are literal transcriptions of
the blocking definitions and decide a single (mu, coalition, sigma) triple;
they also revalidate every witness. find_block is the optimized search: it
walks coalitions by size then lexicographic order and, per coalition, runs a
lexicographic backtracking assignment that simultaneously decides feasibility
and produces the smallest blocking counter-allocation.

Core concepts are tagged by name; find_block(m, mu, concept) searches for a
block in the sense that defines that core:

    strong               <- weak blocking (weak improvement, one strict,
                            reallocation of the coalition's endowments)
    weak                 <- strong blocking (all members strictly better)
    exclusion            <- eviction from directly/indirectly controlled
                            objects, all members strictly better
    rectified_exclusion  <- eviction via the indifference-aware control set,
                            unaffected members allowed when the coalition
                            owns their whole indifference class
    rectified_strong     <- weak blocking plus that same ownership condition
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ._search import lex_first_assignment
from .errors import MarketDataError
from .market import Allocation, Market, mask_of, members

CONCEPTS = ("strong", "exclusion", "rectified_exclusion", "rectified_strong", "weak")

MODE_BK = "bk"
MODE_RECTIFIED = "rectified"


@dataclass(frozen=True)
class BlockWitness:
    """A (concept, coalition, counter-allocation) triple proving a block."""

    concept: str
    coalition: int
    counter: Allocation


def make_block_witness(m: Market, mu: Allocation, concept: str, coalition: int, counter: Allocation) -> BlockWitness:
    """Build a witness, revalidating it against the blocking definition."""
    pred = _PREDICATE[concept]
    if not pred(m, mu, coalition, counter):
        raise MarketDataError(
            f"invalid {concept} block witness: coalition {members(coalition)} via {counter} against {mu}"
        )
    return BlockWitness(concept, coalition, counter)


def better_and_same(m: Market, mu: Allocation, sigma: Allocation, coalition: int) -> tuple[int, int]:
    """Split a coalition into strictly-better-off and unaffected members.

    Raises if any member is strictly worse off under sigma; callers only
    invoke this on candidate blocks, where that cannot happen.
    """
    gt = eq = 0
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        r_new, r_old = m.rank[i][sigma[i]], m.rank[i][mu[i]]
        if r_new < r_old:
            gt |= bit
        elif r_new == r_old:
            eq |= bit
        else:
            raise MarketDataError(f"agent {i} is strictly worse off under the candidate block")
    return gt, eq


def control_set(m: Market, coalition: int, mu: Allocation, mode: str = MODE_BK) -> int:
    """Objects a coalition controls in mu, as the least closure fixed point.

    mode "bk": an outside agent joins the closure when his assignment lies in
    the endowments already controlled. mode "rectified": he joins only when
    his entire indifference class at his assignment does. The result is the
    endowment image of the closed agent set, so it always contains the
    coalition's own endowments; the rectified set is contained in the "bk"
    one and is invariant across welfare-equivalent allocations.
    """
    if coalition == 0:
        raise MarketDataError("control set of an empty coalition")
    if mode not in (MODE_BK, MODE_RECTIFIED):
        raise MarketDataError(f"unknown control mode {mode!r}")
    closed = coalition
    omega = m.omega(closed)
    pending = m.all_objects & ~closed  # agent bits not yet absorbed
    changed = True
    while changed and pending:
        changed = False
        p = pending
        while p:
            bit = p & -p
            p ^= bit
            i = bit.bit_length() - 1
            if mode == MODE_BK:
                join = bool((1 << mu[i]) & omega)
            else:
                join = m.indiff[i][mu[i]] & ~omega == 0
            if join:
                closed |= bit
                pending ^= bit
                omega |= 1 << m.endow[i]
                changed = True
    return omega


def weakly_blocks(m: Market, mu: Allocation, coalition: int, sigma: Allocation) -> bool:
    """All members weakly improve, one strictly, reallocating own endowments."""
    got = 0
    strict = False
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        r_new, r_old = m.rank[i][sigma[i]], m.rank[i][mu[i]]
        if r_new > r_old:
            return False
        strict = strict or r_new < r_old
        got |= 1 << sigma[i]
    return strict and got == m.omega(coalition)


def strongly_blocks(m: Market, mu: Allocation, coalition: int, sigma: Allocation) -> bool:
    """Every member strictly improves, reallocating the coalition's endowments."""
    got = 0
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        if m.rank[i][sigma[i]] >= m.rank[i][mu[i]]:
            return False
        got |= 1 << sigma[i]
    return got == m.omega(coalition)


def exclusion_blocks(m: Market, mu: Allocation, coalition: int, sigma: Allocation) -> bool:
    """All members strictly improve; harmed outsiders lose controlled objects."""
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        if m.rank[i][sigma[i]] >= m.rank[i][mu[i]]:
            return False
    ctrl = None
    for j in range(m.n):
        if coalition >> j & 1:
            continue
        if m.rank[j][sigma[j]] > m.rank[j][mu[j]]:  # harmed
            if ctrl is None:
                ctrl = control_set(m, coalition, mu, MODE_BK)
            if not ctrl >> mu[j] & 1:
                return False
    return True


def rectified_exclusion_blocks(m: Market, mu: Allocation, coalition: int, sigma: Allocation) -> bool:
    """Weak improvement inside, rectified-control eviction outside, and the
    coalition owns the full indifference class of each unaffected member."""
    omega = m.omega(coalition)
    strict = False
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        r_new, r_old = m.rank[i][sigma[i]], m.rank[i][mu[i]]
        if r_new > r_old:
            return False
        if r_new < r_old:
            strict = True
        elif m.indiff[i][mu[i]] & ~omega:
            return False
    if not strict:
        return False
    ctrl = None
    for j in range(m.n):
        if coalition >> j & 1:
            continue
        if m.rank[j][sigma[j]] > m.rank[j][mu[j]]:
            if ctrl is None:
                ctrl = control_set(m, coalition, mu, MODE_RECTIFIED)
            if not ctrl >> mu[j] & 1:
                return False
    return True


def rectification_blocks(m: Market, mu: Allocation, coalition: int, sigma: Allocation) -> bool:
    """Weak blocking where unaffected members' whole indifference classes are
    owned by the coalition. Coincides with weak blocking on strict profiles."""
    omega = m.omega(coalition)
    got = 0
    strict = False
    c = coalition
    while c:
        bit = c & -c
        c ^= bit
        i = bit.bit_length() - 1
        r_new, r_old = m.rank[i][sigma[i]], m.rank[i][mu[i]]
        if r_new > r_old:
            return False
        if r_new < r_old:
            strict = True
        elif m.indiff[i][mu[i]] & ~omega:
            return False
        got |= 1 << sigma[i]
    return strict and got == omega


_PREDICATE = {
    "strong": weakly_blocks,
    "weak": strongly_blocks,
    "exclusion": exclusion_blocks,
    "rectified_exclusion": rectified_exclusion_blocks,
    "rectified_strong": rectification_blocks,
}


@lru_cache(maxsize=None)
def coalitions_by_size(n: int) -> tuple[int, ...]:
    """All nonempty coalitions, by size then lexicographic member order."""
    out = []
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            out.append(mask_of(combo))
    return tuple(out)


def find_block(m: Market, mu: Allocation, concept: str) -> BlockWitness | None:
    """First blocking witness against mu under the concept, or None.

    Search order is deterministic: coalitions by size then lexicographic;
    within a coalition, the counter-allocation is the lexicographically
    smallest one satisfying the blocking definition. For the endowment
    reallocation concepts (strong/weak/rectified_strong cores) the
    counter-allocation is built over the coalition only — lexicographic in
    the members' assignments, read in increasing agent order — and extended
    canonically outside, which cannot change the verdict. For the exclusion
    concepts it ranges over all allocations.
    """
    if concept not in _PREDICATE:
        raise MarketDataError(f"unknown core concept {concept!r}")
    n = m.n
    strict_up = [m.strict_upper[i][mu[i]] for i in range(n)]
    weak_up = [m.weak_upper[i][mu[i]] for i in range(n)]
    strictable = mask_of(i for i in range(n) if strict_up[i])

    for coal in coalitions_by_size(n):
        if concept in ("weak", "exclusion"):
            # every member must strictly improve
            if coal & ~strictable:
                continue
        elif not coal & strictable:
            # some member must strictly improve
            continue
        counter = _first_counter(m, mu, concept, coal, strict_up, weak_up)
        if counter is not None:
            return BlockWitness(concept, coal, counter)
    return None


def _first_counter(
    m: Market,
    mu: Allocation,
    concept: str,
    coal: int,
    strict_up: list[int],
    weak_up: list[int],
) -> Allocation | None:
    n = m.n
    omega = m.omega(coal)

    if concept in ("strong", "weak", "rectified_strong"):
        agents = members(coal)
        adj = []
        strict = []
        for i in agents:
            s = strict_up[i] & omega
            if concept == "weak":
                a = s
            elif concept == "strong":
                a = weak_up[i] & omega
            else:  # rectified_strong: unaffected members need their whole
                # indifference class inside the coalition's endowments
                a = (weak_up[i] if m.indiff[i][mu[i]] & ~omega == 0 else strict_up[i]) & omega
            if not a:
                return None
            adj.append(a)
            strict.append(s)
        need_strict = concept != "weak"
        picked = lex_first_assignment(adj, omega, strict if need_strict else None, need_strict)
        if picked is None:
            return None
        return _extend_canonically(m, dict(zip(agents, picked)))

    # exclusion-style concepts: sigma ranges over all allocations
    mode = MODE_BK if concept == "exclusion" else MODE_RECTIFIED
    ctrl = control_set(m, coal, mu, mode)
    adj = []
    strict = []
    for i in range(n):
        if coal >> i & 1:
            if concept == "exclusion":
                a = strict_up[i]
            else:
                a = weak_up[i] if m.indiff[i][mu[i]] & ~omega == 0 else strict_up[i]
            if not a:
                return None
        elif ctrl >> mu[i] & 1:
            a = m.all_objects  # evictable: may end up anywhere
        else:
            a = weak_up[i]  # must not be harmed
        adj.append(a)
        strict.append(strict_up[i] if coal >> i & 1 else 0)
    need_strict = concept == "rectified_exclusion"
    picked = lex_first_assignment(adj, m.all_objects, strict if need_strict else None, need_strict)
    return None if picked is None else tuple(picked)


def _extend_canonically(m: Market, partial: dict[int, int]) -> Allocation:
    """Complete a within-coalition assignment: leftover objects go to the
    remaining agents in ascending order on both sides."""
    sigma = [-1] * m.n
    used = 0
    for i, o in partial.items():
        sigma[i] = o
        used |= 1 << o
    free_objects = [o for o in range(m.n) if not used >> o & 1]
    free_agents = [i for i in range(m.n) if sigma[i] < 0]
    for i, o in zip(free_agents, free_objects):
        sigma[i] = o
    return tuple(sigma)
