"""Recompute the frozen brute-force values the tests compare against.

Values come from an exhaustive bitmask scan (tests/helpers.py) and are
written to tests/data/frozen_oracles.json.  Run after changing a generator
or a fixture:

    python scripts/freeze_oracles.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from helpers import scan_opt, scan_reopt  # noqa: E402

from lagsel.io import encode_number, load_instance, parse_reopt_instance  # noqa: E402
from lagsel.reference import KINDS, random_instance  # noqa: E402

SEEDS = range(20)
SIZE = 10


def main():
    out = {"fixtures": {}, "reopt_fixtures": {}, "random": {}}
    for path in sorted((ROOT / "fixtures").glob("*.json")):
        loaded = load_instance(path)
        if len(loaded.instance) > 16:
            continue
        out["fixtures"][path.name] = encode_number(scan_opt(loaded.instance))
        if loaded.has_delta:
            p, d = scan_reopt(parse_reopt_instance(path.read_text()))
            out["reopt_fixtures"][path.name] = [encode_number(p), d]
    for kind in KINDS:
        out["random"][kind] = [
            encode_number(scan_opt(random_instance(kind, SIZE, seed))) for seed in SEEDS
        ]
    target = ROOT / "tests" / "data" / "frozen_oracles.json"
    target.parent.mkdir(exist_ok=True)
    target.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
