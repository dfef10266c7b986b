"""Strongly connected components over bitmask adjacency, plus sink selection.

Nodes are agent indices; succ[i] is the bitmask of successors of i. Only the
nodes set in the `nodes` mask participate; succ bits outside it are ignored.
"""

from __future__ import annotations


def strongly_connected_components(nodes: int, succ: dict[int, int]) -> list[int]:
    """Tarjan's algorithm (iterative). Returns component bitmasks.

    Roots are visited in ascending node order, which fixes the output order
    deterministically.
    """
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[int] = []
    counter = 0

    node_list = _bits(nodes)
    for root in node_list:
        if root in index:
            continue
        # frame: (node, iterator-state as remaining-successor mask)
        work = [(root, None)]
        while work:
            v, remaining = work.pop()
            if remaining is None:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
                remaining = succ.get(v, 0) & nodes
            advanced = False
            rem = remaining
            while rem:
                bit = rem & -rem
                rem ^= bit
                w = bit.bit_length() - 1
                if w not in index:
                    work.append((v, rem))
                    work.append((w, None))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return comps


def sink_components(nodes: int, succ: dict[int, int]) -> list[int]:
    """Components with no edge leaving them, sorted by lowest member."""
    sinks = []
    for comp in strongly_connected_components(nodes, succ):
        out = 0
        for i in _bits(comp):
            out |= succ.get(i, 0) & nodes
        if out & ~comp == 0:
            sinks.append(comp)
    sinks.sort(key=lambda c: c & -c)
    return sinks


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        bit = mask & -mask
        mask ^= bit
        out.append(bit.bit_length() - 1)
    return out
