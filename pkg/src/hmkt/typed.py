"""Markets where indifference comes from multiple copies of object types.

In this restricted model any two objects are indifferent for one agent
exactly when they are copies of the same type, and then for every agent.
Priority-based top trading cycles let each object type point at its
highest-priority remaining owner; enumerating every priority structure and
collecting the outcomes recovers the exclusion core, and closing it under
welfare equivalence lands inside the rectified exclusion core.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from collections.abc import Iterable, Iterator

from .errors import BudgetExceededError, TypeConsistencyError
from .market import Allocation, Market, enumerate_allocations, members, welfare_vector


@dataclass(frozen=True)
class TypeStructure:
    """Map object -> type id, with per-type copies and owners derived."""

    type_of: tuple[int, ...]

    @property
    def num_types(self) -> int:
        return max(self.type_of) + 1 if self.type_of else 0

    def copies(self, x: int) -> tuple[int, ...]:
        return tuple(o for o, t in enumerate(self.type_of) if t == x)

    def owners(self, m: Market, x: int) -> tuple[int, ...]:
        return tuple(m.owner[o] for o in self.copies(x))


PriorityStructure = tuple[tuple[int, ...], ...]  # per type, agents best first


def validate_types(m: Market, t: TypeStructure) -> list[str]:
    """Check that indifference coincides with sharing a type, for everyone.

    Returns a list of human-readable violations; empty means consistent.
    """
    issues = []
    if len(t.type_of) != m.n:
        return [f"type map covers {len(t.type_of)} objects, market has {m.n}"]
    for i in range(m.n):
        for o in range(m.n):
            for o2 in range(o + 1, m.n):
                same_type = t.type_of[o] == t.type_of[o2]
                indiff = m.rank[i][o] == m.rank[i][o2]
                if same_type and not indiff:
                    issues.append(f"agent {i} ranks copies {o} and {o2} of type {t.type_of[o]} apart")
                elif indiff and not same_type:
                    issues.append(f"agent {i} is indifferent between {o} and {o2} of different types")
    return issues


def infer_type_structure(m: Market) -> TypeStructure:
    """Partition objects by the shared indifference relation.

    Fails loudly when agents disagree about which objects are copies;
    inference can only confirm the model restriction, never repair it.
    """
    type_of = [-1] * m.n
    next_type = 0
    for o in range(m.n):
        if type_of[o] != -1:
            continue
        cls = m.indiff[0][o]
        for o2 in members(cls):
            type_of[o2] = next_type
        next_type += 1
    t = TypeStructure(tuple(type_of))
    issues = validate_types(m, t)
    if issues:
        raise TypeConsistencyError("; ".join(issues[:3]))
    return t


def _require_consistent(m: Market, t: TypeStructure) -> None:
    issues = validate_types(m, t)
    if issues:
        raise TypeConsistencyError("; ".join(issues[:3]))


def typed_ttc(m: Market, t: TypeStructure, priorities: PriorityStructure) -> Allocation:
    """Top trading cycles where each type points at its top-priority owner.

    Types are strictly ordered by every agent, so each remaining agent points
    at his single favorite remaining type; the agent-to-agent graph is
    functional and every round clears all of its cycles, each agent receiving
    the endowment copy of the pointed type's highest-priority owner.
    """
    _require_consistent(m, t)
    for x in range(t.num_types):
        if sorted(priorities[x]) != sorted(t.owners(m, x)):
            raise TypeConsistencyError(f"priority row for type {x} must rank exactly its owners")
    remaining = m.all_objects
    out = [-1] * m.n
    while remaining:
        rem_objects = m.omega(remaining)
        pointee = {}
        for i in members(remaining):
            best = min(members(rem_objects), key=lambda o: m.rank[i][o])
            x = t.type_of[best]
            pointee[i] = next(j for j in priorities[x] if remaining >> j & 1)
        cleared = 0
        for i in members(remaining):
            # walk the functional graph; nodes on the terminal cycle clear
            seen = {i}
            cur = i
            while pointee[cur] not in seen:
                cur = pointee[cur]
                seen.add(cur)
            start = pointee[cur]
            node = start
            while True:
                cleared |= 1 << node
                out[node] = m.endow[pointee[node]]
                node = pointee[node]
                if node == start:
                    break
        remaining &= ~cleared
    return tuple(out)


def enumerate_priorities(m: Market, t: TypeStructure) -> Iterator[PriorityStructure]:
    """Every priority structure: a product of owner orderings per type."""
    per_type = [list(itertools.permutations(t.owners(m, x))) for x in range(t.num_types)]
    for combo in itertools.product(*per_type):
        yield tuple(combo)


def priority_count(m: Market, t: TypeStructure) -> int:
    return math.prod(math.factorial(len(t.copies(x))) for x in range(t.num_types))


def exclusion_core_typed(m: Market, t: TypeStructure, budget: int = 10**6) -> list[Allocation]:
    """All priority-based TTC outcomes; equals the exclusion core here."""
    _require_consistent(m, t)
    total = priority_count(m, t)
    if total > budget:
        raise BudgetExceededError(f"{total} priority structures exceed the budget of {budget}")
    out = {typed_ttc(m, t, p) for p in enumerate_priorities(m, t)}
    return sorted(out)


def equivalence_closure(m: Market, allocations: Iterable[Allocation]) -> list[Allocation]:
    """Everything welfare-equivalent to some member, by scanning."""
    keys = {welfare_vector(m, mu) for mu in allocations}
    if not keys:
        return []
    return sorted(mu for mu in enumerate_allocations(m) if welfare_vector(m, mu) in keys)
