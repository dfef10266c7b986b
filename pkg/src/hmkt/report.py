"""Rendering: canonical JSON reports and human-readable tables.

JSON output is byte-deterministic for fixed input, flags, and seed: keys are
sorted, floats avoided, and nothing time- or path-dependent is embedded.
No ANSI escapes are emitted anywhere, so NO_COLOR needs no special casing.
"""

from __future__ import annotations

import json
from typing import Any

from .blocking import BlockWitness
from .docio import CompiledMarket, market_digest
from .gttc import GttcTrace
from .market import Allocation, members


def allocation_map(compiled: CompiledMarket, mu: Allocation) -> dict[str, str]:
    return compiled.allocation_labels(mu)


def allocation_literal(compiled: CompiledMarket, mu: Allocation) -> str:
    labels = compiled.allocation_labels(mu)
    return ",".join(f"{a}={labels[a]}" for a in compiled.agent_labels)


def coalition_labels(compiled: CompiledMarket, coalition: int) -> list[str]:
    return [compiled.agent_labels[i] for i in members(coalition)]


def object_labels(compiled: CompiledMarket, mask: int) -> list[str]:
    return [compiled.object_labels[o] for o in members(mask)]


def witness_json(compiled: CompiledMarket, w: BlockWitness) -> dict[str, Any]:
    return {
        "concept": w.concept,
        "coalition": coalition_labels(compiled, w.coalition),
        "counter": allocation_map(compiled, w.counter),
    }


def trace_json(compiled: CompiledMarket, trace: GttcTrace) -> list[dict[str, Any]]:
    steps = []
    for step in trace.steps:
        departures = []
        for record in step.departures:
            departures.append(
                {
                    "group": coalition_labels(compiled, record.group),
                    "fragment": {compiled.agent_labels[i]: compiled.object_labels[o] for i, o in record.fragment},
                    "evidence": [
                        {
                            "agent": compiled.agent_labels[i],
                            "held": compiled.object_labels[o],
                            "favorites": object_labels(compiled, fav),
                        }
                        for i, o, fav in record.evidence
                    ],
                }
            )
        entry: dict[str, Any] = {"departures": departures}
        if step.cycle is not None:
            entry["pointing"] = {
                compiled.agent_labels[i]: coalition_labels(compiled, mask) for i, mask in sorted(step.pointing.items())
            }
            entry["cycle"] = [compiled.agent_labels[i] for i in step.cycle]
            entry["holdings_after"] = {
                compiled.agent_labels[i]: compiled.object_labels[o]
                for i, o in enumerate(step.holdings_after)
                if o >= 0
            }
        steps.append(entry)
    return steps


def json_report(command: str, compiled: CompiledMarket | None, results: Any) -> str:
    payload = {
        "command": command,
        "market_digest": market_digest(compiled.doc) if compiled is not None else None,
        "results": results,
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def allocation_table(compiled: CompiledMarket, rows: list[tuple[str, Allocation]]) -> str:
    """Rows of allocations with agents as columns, endowment-table style."""
    agents = compiled.agent_labels
    name_width = max((len(name) for name, _ in rows), default=0) + 1
    widths = [max(len(a), *(len(compiled.object_labels[mu[i]]) for _, mu in rows)) if rows else len(a) for i, a in enumerate(agents)]
    out = [" " * name_width + "  ".join(a.rjust(w) for a, w in zip(agents, widths))]
    for name, mu in rows:
        cells = "  ".join(compiled.object_labels[mu[i]].rjust(w) for i, w in zip(range(len(agents)), widths))
        out.append(f"{name.ljust(name_width)}{cells}")
    return "\n".join(out)
