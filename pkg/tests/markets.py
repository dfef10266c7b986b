"""Hand-built fixture markets shared across the test suite.

Each market is listed with its named allocations. Agents and objects are
0-indexed here; the .hmkt fixture files carry the 1-based / lettered labels
and are checked against these in the parser tests.
"""

from hmkt.market import Market

# Three strict preferences forming a single trading triangle.
STRICT_TRIANGLE = Market.from_pref_rows(
    (0, 1, 2),
    [
        [[2], [1], [0]],  # agent 0: c > b > a
        [[0], [1], [2]],  # agent 1: a > b > c
        [[1], [2], [0]],  # agent 2: b > c > a
    ],
)
ST_OMEGA = (0, 1, 2)
ST_MU = (1, 0, 2)
ST_SIGMA = (2, 0, 1)
ST_SIGMA_P = (0, 2, 1)

# Agent 1 is indifferent between everything; agents 0 and 2 both want b.
INDIFFERENT_HUB = Market.from_pref_rows(
    (0, 1, 2),
    [
        [[1], [0], [2]],  # b > a > c
        [[0, 1, 2]],  # a ~ b ~ c
        [[1], [2], [0]],  # b > c > a
    ],
)
HUB_OMEGA = (0, 1, 2)
HUB_MU = (1, 0, 2)
HUB_SIGMA_P = (0, 2, 1)

# Every efficient trade is a 3-cycle, so eviction rights become total.
STANDOFF_CYCLE = Market.from_pref_rows(
    (0, 1, 2),
    [
        [[1], [2], [0]],  # b > c > a
        [[0, 2], [1]],  # a ~ c > b
        [[1], [0], [2]],  # b > a > c
    ],
)
SC_MU = (1, 2, 0)
SC_SIGMA = (2, 0, 1)

# Objects a and c are twins for everyone; b is the contested object.
TWIN_OBJECTS = Market.from_pref_rows(
    (0, 1, 2),
    [
        [[1], [0, 2]],  # b > a ~ c
        [[0, 2], [1]],  # a ~ c > b
        [[1], [0, 2]],  # b > a ~ c
    ],
)
TW_MU = (0, 2, 1)
TW_SIGMA = (1, 0, 2)
TW_DELTA = (1, 2, 0)
TW_ETA = (2, 0, 1)
# a and c are copies of one type, b alone of another
TW_TYPE_OF = (0, 1, 0)

# Agent 1 can fall back on his own endowment if evicted from a.
FALLBACK_OWNER = Market.from_pref_rows(
    (0, 1, 2),
    [
        [[1], [2], [0]],  # b > c > a
        [[0, 1], [2]],  # a ~ b > c
        [[1], [2], [0]],  # b > c > a
    ],
)
FB_MU = (2, 0, 1)
FB_SIGMA = (1, 0, 2)

# Five agents; a chain of indirect evictions reaches agent 4's endowment.
# Ranks below the decisive top entries are immaterial and fixed arbitrarily.
EVICTION_CHAIN = Market.from_pref_rows(
    (0, 1, 2, 3, 4),
    [
        [[1], [0], [2], [3], [4]],  # b > a > ...
        [[0, 2], [1], [3], [4]],  # a ~ c > b > ...
        [[1, 3], [2], [0], [4]],  # b ~ d > c > ...
        [[2], [4], [0], [1], [3]],  # c > e > ...
        [[0], [1], [2], [3], [4]],  # a > ...
    ],
)
EC_MU = (1, 2, 3, 4, 0)
EC_SIGMA = (1, 0, 3, 2, 4)

# Two pairs trade; the universally indifferent agent 1 guards the gap
# between the rectified strong core and the rectified exclusion core.
PAIR_SWAP_GAP = Market.from_pref_rows(
    (0, 1, 2, 3),
    [
        [[2], [1], [0], [3]],  # c > b > a > d
        [[0, 1, 2, 3]],  # a ~ b ~ c ~ d
        [[1], [3], [2], [0]],  # b > d > c > a
        [[2], [3], [0], [1]],  # c > d > a > b
    ],
)
PG_MU = (1, 0, 3, 2)
PG_SIGMA = (2, 0, 1, 3)

# Five agents, three object types: a alone, {b, b'}, {c, c'}.
MULTI_COPY = Market.from_pref_rows(
    (0, 1, 2, 3, 4),
    [
        [[1, 2], [0], [3, 4]],  # b ~ b' > a > c ~ c'
        [[0], [3, 4], [1, 2]],  # a > c ~ c' > b ~ b'
        [[0], [3, 4], [1, 2]],
        [[0], [1, 2], [3, 4]],  # a > b ~ b' > c ~ c'
        [[0], [1, 2], [3, 4]],
    ],
)
MC_MU = (1, 3, 4, 0, 2)
MC_SIGMA = (1, 0, 3, 2, 4)
MC_TYPE_OF = (0, 1, 1, 2, 2)

# Agent 1 owns b, occupied by agent 2. Agent 1 can evict agent 2 and take a,
# because agent 0 is indifferent between a and the freed b. The allocation
# below is efficient and its trading cycles can be ordered favorites-first,
# yet it is exclusion blocked: cycle ordering is necessary for membership
# but not sufficient.
HARMLESS_SHUFFLE = Market(
    (0, 1, 2),
    (
        (0, 0, 1),  # a ~ b > c
        (0, 1, 1),  # a > b ~ c
        (0, 0, 1),  # a ~ b > c
    ),
)
HS_MU = (0, 2, 1)
HS_BLOCK = (1, 0, 2)

ALL_FIXTURES = {
    "strict_triangle": STRICT_TRIANGLE,
    "indifferent_hub": INDIFFERENT_HUB,
    "standoff_cycle": STANDOFF_CYCLE,
    "twin_objects": TWIN_OBJECTS,
    "fallback_owner": FALLBACK_OWNER,
    "eviction_chain": EVICTION_CHAIN,
    "pair_swap_gap": PAIR_SWAP_GAP,
    "multi_copy": MULTI_COPY,
}
