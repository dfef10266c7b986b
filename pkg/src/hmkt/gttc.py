"""Generalized top trading cycles as an auditable state machine.

Each step runs three stages. Departure: groups of agents leave with the
objects they hold whenever every member holds a favorite among the remaining
objects and all of his favorites are held inside the group; the largest such
set is the fixed point of peeling away unsatisfied agents and agents whose
favorites escape the survivor set, and removing it wholesale reaches the same
state as any one-group-at-a-time order. Pointing: among the remaining agents,
each points at every holder of his favorite remaining objects; a rule selects
one cycle through an unsatisfied agent. Trading: the cycle trades, each agent
taking the object held by his pointee. One cycle trades per step.

After a completed departure stage every sink component of the pointing graph
contains an unsatisfied agent — an all-satisfied sink would itself be a
departable group — so a beneficial cycle always exists and the run
terminates: each trade strictly improves at least one held rank and never
worsens any.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from ._graphs import sink_components
from .errors import DeparturePendingError, HmktError, MarketDataError
from .market import Allocation, Market, favorites, is_pareto_efficient, members

Cycle = tuple[int, ...]


@dataclass(frozen=True)
class DepartureRecord:
    """One departing group: who left, with what, and why that was legal."""

    group: int
    fragment: tuple[tuple[int, int], ...]  # (agent, object held at departure)
    evidence: tuple[tuple[int, int, int], ...]  # (agent, held object, favorites mask)


@dataclass(frozen=True)
class GttcStep:
    departures: tuple[DepartureRecord, ...]
    pointing: dict[int, int] | None  # agent -> holders-of-favorites mask
    cycle: Cycle | None
    holdings_after: tuple[int, ...] | None  # -1 for departed agents


@dataclass(frozen=True)
class GttcTrace:
    steps: tuple[GttcStep, ...]


@dataclass(frozen=True)
class GttcState:
    """Immutable snapshot between stages."""

    market: Market
    remaining: int
    holding: tuple[int, ...]  # object held per agent, -1 once departed
    departed: tuple[DepartureRecord, ...] = ()
    step: int = 0

    @property
    def remaining_objects(self) -> int:
        mask = 0
        rem = self.remaining
        while rem:
            bit = rem & -rem
            rem ^= bit
            mask |= 1 << self.holding[bit.bit_length() - 1]
        return mask


def initial_state(m: Market) -> GttcState:
    return GttcState(m, m.all_objects, m.endow)


def satisfied(state: GttcState, i: int) -> bool:
    """Does agent i hold one of his favorite remaining objects?"""
    if not state.remaining >> i & 1:
        raise MarketDataError(f"agent {i} has already departed")
    return bool(favorites(state.market, i, state.remaining_objects) >> state.holding[i] & 1)


def _holder_of(state: GttcState) -> dict[int, int]:
    return {state.holding[i]: i for i in members(state.remaining)}


def departure_fixed_point(state: GttcState) -> int:
    """Largest departable set: every member satisfied, and the holders of all
    his favorites inside the set. Empty mask when nobody may leave."""
    if state.remaining == 0:
        return 0
    m = state.market
    pool = state.remaining_objects
    holder = _holder_of(state)
    holder_mask = {}
    keep = 0
    for i in members(state.remaining):
        fav = favorites(m, i, pool)
        mask = 0
        f = fav
        while f:
            bit = f & -f
            f ^= bit
            mask |= 1 << holder[bit.bit_length() - 1]
        holder_mask[i] = mask
        if fav >> state.holding[i] & 1:
            keep |= 1 << i
    changed = True
    while changed:
        changed = False
        for i in members(keep):
            if holder_mask[i] & ~keep:
                keep ^= 1 << i
                changed = True
    return keep


def _depart(state: GttcState, group: int) -> tuple[GttcState, DepartureRecord]:
    m = state.market
    pool = state.remaining_objects
    fragment = tuple((i, state.holding[i]) for i in members(group))
    evidence = tuple((i, state.holding[i], favorites(m, i, pool)) for i in members(group))
    record = DepartureRecord(group, fragment, evidence)
    holding = list(state.holding)
    for i in members(group):
        holding[i] = -1
    new = GttcState(m, state.remaining & ~group, tuple(holding), state.departed + (record,), state.step)
    return new, record


def run_departure_stage(state: GttcState) -> tuple[GttcState, tuple[DepartureRecord, ...]]:
    """Depart fixed points until none remains; shrinking pools can satisfy
    previously unsatisfied agents, so this loops."""
    records = []
    while True:
        group = departure_fixed_point(state)
        if not group:
            return state, tuple(records)
        state, record = _depart(state, group)
        records.append(record)


def pointing_graph(state: GttcState) -> dict[int, int]:
    """Each remaining agent points at every holder of his favorite remaining
    objects (possibly himself)."""
    m = state.market
    pool = state.remaining_objects
    holder = _holder_of(state)
    succ = {}
    for i in members(state.remaining):
        fav = favorites(m, i, pool)
        mask = 0
        while fav:
            bit = fav & -fav
            fav ^= bit
            mask |= 1 << holder[bit.bit_length() - 1]
        succ[i] = mask
    return succ


def _unsatisfied_mask(state: GttcState) -> int:
    mask = 0
    for i in members(state.remaining):
        if not satisfied(state, i):
            mask |= 1 << i
    return mask


def find_beneficial_cycle(state: GttcState) -> Cycle:
    """Deterministic "min-cycle" selection.

    Requires the departure stage to be complete. Picks the sink component
    holding the lowest-indexed unsatisfied agent and returns the
    lexicographically smallest simple cycle through that agent; everyone on
    it weakly improves by taking the pointee's object, the unsatisfied agent
    strictly.
    """
    if state.remaining == 0:
        raise MarketDataError("no agents remain")
    if departure_fixed_point(state):
        raise DeparturePendingError()
    succ = pointing_graph(state)
    unsat = _unsatisfied_mask(state)
    sinks = sink_components(state.remaining, succ)
    for comp in sinks:
        if not comp & unsat:  # would have departed
            raise HmktError("all-satisfied sink component after departure stage")
    sink_unsat = unsat & _union(sinks)
    start = (sink_unsat & -sink_unsat).bit_length() - 1
    comp = next(c for c in sinks if c >> start & 1)

    path = [start]
    visited = 1 << start

    def dfs(v: int) -> bool:
        nonlocal visited
        # closing first: a closed sequence lex-precedes all its extensions
        if succ[v] >> start & 1 and len(path) > 1:
            return True
        opts = succ[v] & comp & ~visited
        while opts:
            bit = opts & -opts
            opts ^= bit
            w = bit.bit_length() - 1
            path.append(w)
            visited |= bit
            if dfs(w):
                return True
            path.pop()
            visited ^= bit
        return False

    if not dfs(start):  # strong connectivity guarantees a cycle
        raise HmktError("no cycle through the chosen unsatisfied agent")
    return tuple(path)


def _union(masks):
    u = 0
    for m in masks:
        u |= m
    return u


def beneficial_cycles(state: GttcState) -> list[Cycle]:
    """Every simple cycle holding at least one unsatisfied agent, each
    rooted at its smallest member, in lexicographic order."""
    if departure_fixed_point(state):
        raise DeparturePendingError()
    succ = pointing_graph(state)
    unsat = _unsatisfied_mask(state)
    out: list[Cycle] = []
    for start in members(state.remaining):
        path = [start]
        visited = 1 << start

        def dfs(v: int):
            nonlocal visited
            opts = succ[v]
            if opts >> start & 1 and len(path) > 1 and mask_any(path):
                out.append(tuple(path))
            opts &= ~visited
            while opts:
                bit = opts & -opts
                opts ^= bit
                w = bit.bit_length() - 1
                if w < start:  # rooted at the smallest member only
                    continue
                path.append(w)
                visited |= 1 << w
                dfs(w)
                path.pop()
                visited ^= 1 << w

        def mask_any(p):
            return any(unsat >> a & 1 for a in p)

        dfs(start)
    return out


def trade(state: GttcState, cycle: Cycle) -> GttcState:
    """Clear one cycle: each agent takes the object held by his pointee."""
    m = state.market
    holding = list(state.holding)
    k = len(cycle)
    before = sum(m.rank[i][state.holding[i]] for i in cycle)
    for idx, i in enumerate(cycle):
        holding[i] = state.holding[cycle[(idx + 1) % k]]
    after = sum(m.rank[i][holding[i]] for i in cycle)
    if after >= before:
        raise HmktError("trade did not strictly improve any held rank")
    return GttcState(m, state.remaining, tuple(holding), state.departed, state.step + 1)


@dataclass(frozen=True)
class PointingRule:
    """Named per-step cycle selection; custom selectors may be plugged in."""

    name: str
    seed: int | None = None
    selector: Callable[[GttcState, list[Cycle]], Cycle] | None = field(default=None, compare=False)

    def make_chooser(self) -> Callable[[GttcState], Cycle]:
        if self.selector is not None:
            return lambda state: self.selector(state, beneficial_cycles(state))
        if self.name == "min-cycle":
            return find_beneficial_cycle
        if self.name == "seeded-random":
            rng = random.Random(0 if self.seed is None else self.seed)
            return lambda state: rng.choice(beneficial_cycles(state))
        raise MarketDataError(f"unknown pointing rule {self.name!r}")


def run_gttc(m: Market, rule: str | PointingRule = "min-cycle", seed: int | None = None) -> tuple[Allocation, GttcTrace]:
    """Run the full algorithm; the outcome is rational and efficient, and
    every step is recorded so the run can be replayed and audited."""
    if isinstance(rule, str):
        rule = PointingRule(rule, seed)
    elif seed is not None and rule.seed is None:
        rule = PointingRule(rule.name, seed, rule.selector)
    choose = rule.make_chooser()

    state = initial_state(m)
    steps: list[GttcStep] = []
    guard = 0
    while True:
        state, records = run_departure_stage(state)
        if state.remaining == 0:
            steps.append(GttcStep(records, None, None, None))
            break
        succ = pointing_graph(state)
        cycle = choose(state)
        state = trade(state, cycle)
        steps.append(GttcStep(records, succ, cycle, state.holding))
        guard += 1
        if guard > m.n * m.n * max(max(r) for r in m.rank) + m.n + 1:
            raise HmktError("trading failed to terminate")

    outcome = [-1] * m.n
    for record in state.departed:
        for i, o in record.fragment:
            outcome[i] = o
    allocation = tuple(outcome)
    if sorted(allocation) != list(range(m.n)):
        raise HmktError("departures did not assemble into an allocation")
    if not all(m.rank[i][allocation[i]] <= m.rank[i][m.endow[i]] for i in range(m.n)):
        raise HmktError("outcome is not individually rational")
    if not is_pareto_efficient(m, allocation):
        raise HmktError("outcome is not Pareto efficient")
    return allocation, GttcTrace(tuple(steps))


def replay_trace(m: Market, trace: GttcTrace) -> Allocation:
    """Re-apply a trace from the endowment, revalidating every stage.

    Checks that each recorded departure is exactly the deterministic fixed
    point with sound evidence, that each recorded cycle was a valid
    beneficial cycle of the pointing graph at that moment, and that holdings
    evolve as recorded. Returns the reassembled outcome.
    """
    state = initial_state(m)
    for step in trace.steps:
        for record in step.departures:
            group = departure_fixed_point(state)
            if group != record.group:
                raise HmktError(f"departure mismatch: recorded {record.group:#x}, recomputed {group:#x}")
            pool = state.remaining_objects
            holder = _holder_of(state)
            for i, held, fav in record.evidence:
                if state.holding[i] != held or favorites(m, i, pool) != fav:
                    raise HmktError(f"departure evidence for agent {i} does not replay")
                if not fav >> held & 1:
                    raise HmktError(f"agent {i} departed unsatisfied")
                f = fav
                while f:
                    bit = f & -f
                    f ^= bit
                    if not record.group >> holder[bit.bit_length() - 1] & 1:
                        raise HmktError(f"agent {i} departed while a favorite was held outside the group")
            state, _ = _depart(state, record.group)
        if step.cycle is None:
            continue
        if departure_fixed_point(state):
            raise HmktError("recorded trade while a departure was pending")
        succ = pointing_graph(state)
        if step.pointing != succ:
            raise HmktError("pointing graph does not replay")
        cyc = step.cycle
        unsat = _unsatisfied_mask(state)
        if not any(unsat >> i & 1 for i in cyc):
            raise HmktError("recorded cycle has no unsatisfied agent")
        for idx, i in enumerate(cyc):
            if not succ[i] >> cyc[(idx + 1) % len(cyc)] & 1:
                raise HmktError("recorded cycle is not a cycle of the pointing graph")
        state = trade(state, cyc)
        if step.holdings_after != state.holding:
            raise HmktError("holdings do not replay")
    if state.remaining:
        raise HmktError("trace ended with agents remaining")
    outcome = [-1] * m.n
    for record in state.departed:
        for i, o in record.fragment:
            outcome[i] = o
    return tuple(outcome)
