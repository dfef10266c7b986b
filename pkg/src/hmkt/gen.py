"""Random and exhaustive instance generation.

Plain markets draw a uniform random permutation per agent and then merge
each adjacent pair into one indifference class independently with the given
probability, so 0.0 yields strict preferences and 1.0 total indifference.
Typed markets instead draw a random type partition of the objects (same
adjacent-merge process over a shuffled object list) and give every agent a
uniform strict order over types. Endowments are the identity throughout;
relabeling endowments only permutes agent names.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

from .docio import MarketDoc, doc_from_market
from .market import Market
from .typed import PriorityStructure, TypeStructure


def random_rank_rows(rng: random.Random, n: int, indiff: float) -> list[list[int]]:
    rows = []
    for _ in range(n):
        perm = list(range(n))
        rng.shuffle(perm)
        rank = [0] * n
        level = 0
        rank[perm[0]] = 0
        for o in perm[1:]:
            if rng.random() >= indiff:
                level += 1
            rank[o] = level
        rows.append(rank)
    return rows


def random_market(rng: random.Random, n: int, indiff: float) -> Market:
    return Market(tuple(range(n)), random_rank_rows(rng, n, indiff))


def random_typed_market(rng: random.Random, n: int, merge: float) -> tuple[Market, TypeStructure]:
    """Type partition by adjacent merges; agents rank types strictly."""
    objs = list(range(n))
    rng.shuffle(objs)
    type_of = [0] * n
    level = 0
    for k, o in enumerate(objs):
        if k and rng.random() >= merge:
            level += 1
        type_of[o] = level
    rows = []
    for _ in range(n):
        order = list(range(level + 1))
        rng.shuffle(order)
        rank_of_type = {x: k for k, x in enumerate(order)}
        rows.append([rank_of_type[type_of[o]] for o in range(n)])
    return Market(tuple(range(n)), rows), TypeStructure(tuple(type_of))


def random_priorities(rng: random.Random, m: Market, t: TypeStructure) -> PriorityStructure:
    rows = []
    for x in range(t.num_types):
        owners = list(t.owners(m, x))
        rng.shuffle(owners)
        rows.append(tuple(owners))
    return tuple(rows)


def random_market_doc(n: int, indiff: float, seed: int, typed: bool = False) -> MarketDoc:
    """Generator behind the command line; deterministic in the seed."""
    rng = random.Random(seed)
    if typed:
        m, t = random_typed_market(rng, n, indiff)
        return doc_from_market(m, type_structure=t, priorities=random_priorities(rng, m, t))
    return doc_from_market(random_market(rng, n, indiff))


def weak_orders(n_objects: int) -> list[tuple[int, ...]]:
    """Every normalized rank vector over the objects (13 of them for n=3)."""
    out = []
    for vec in itertools.product(range(n_objects), repeat=n_objects):
        top = max(vec)
        if set(vec) == set(range(top + 1)):
            out.append(vec)
    return out


def exhaustive_markets(n: int) -> Iterator[Market]:
    """All preference profiles over n objects, identity endowment."""
    orders = weak_orders(n)
    for rows in itertools.product(orders, repeat=n):
        yield Market(tuple(range(n)), rows)
