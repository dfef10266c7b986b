#!/usr/bin/env python3
"""Regenerate the checked-in JSON snapshots under fixtures/snapshots/.

Run from the repository root after an intentional output-format change, then
review the diff before committing.
"""

from pathlib import Path

from click.testing import CliRunner

from hmkt.cli import main

ROOT = Path(__file__).resolve().parent.parent
SNAPDIR = ROOT / "fixtures" / "snapshots"

def _fx(name: str) -> str:
    return str(ROOT / "fixtures" / f"{name}.hmkt")


SNAPSHOTS = {
    "strict_triangle_cores.json": ["cores", _fx("strict_triangle"), "--format", "json"],
    "indifferent_hub_cores.json": ["cores", _fx("indifferent_hub"), "--format", "json"],
    "standoff_cycle_exclusion.json": [
        "cores", _fx("standoff_cycle"), "--concept", "exclusion", "--format", "json",
    ],
    "twin_objects_cores.json": ["cores", _fx("twin_objects"), "--format", "json"],
    "twin_objects_gttc_trace.json": [
        "gttc", _fx("twin_objects"), "--rule", "seeded-random", "--seed", "1", "--trace", "--format", "json",
    ],
    "twin_objects_typed_enumerate.json": [
        "typed-ttc", _fx("twin_objects"), "--priorities", "enumerate", "--format", "json",
    ],
    "multi_copy_pmss_tts.json": ["pmss", _fx("multi_copy"), "--tts", "--format", "json"],
    "pair_swap_gap_check.json": [
        "check", _fx("pair_swap_gap"),
        "--allocation", "1=b,2=a,3=d,4=c", "--concept", "rectified-exclusion", "--format", "json",
    ],
    "eviction_chain_gttc.json": ["gttc", _fx("eviction_chain"), "--format", "json"],
    "fallback_owner_cores.json": ["cores", _fx("fallback_owner"), "--format", "json"],
}


def main_() -> None:
    runner = CliRunner()
    SNAPDIR.mkdir(parents=True, exist_ok=True)
    for name, args in SNAPSHOTS.items():
        result = runner.invoke(main, args, catch_exceptions=False)
        assert result.exit_code == 0, (name, result.output)
        (SNAPDIR / name).write_text(result.output, encoding="utf-8")
        print(f"wrote {name} ({len(result.output)} bytes)")


if __name__ == "__main__":
    main_()
