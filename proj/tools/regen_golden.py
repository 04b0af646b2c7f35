#!/usr/bin/env python3
"""Regenerate tests/golden/suite_alarms_noisy.jsonl.

Each suite scenario runs with its "noise" section removed (so default sensor noise applies)
and seed 42. The file holds a {"scenario": NAME} header per scenario followed by its
fall_alarm lines, scenarios in file-name order.
"""

import argparse
import json
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def alarm_lines(text):
    return [line for line in text.splitlines() if '"type":"fall_alarm"' in line]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tana", default=str(ROOT / "build" / "tana"), help="path to the tana binary")
    parser.add_argument("--suite", default=str(ROOT / "scenarios" / "suite"))
    parser.add_argument("--out", default=str(ROOT / "tests" / "golden" / "suite_alarms_noisy.jsonl"))
    args = parser.parse_args()

    doc = []
    with tempfile.TemporaryDirectory() as scratch:
        for path in sorted(Path(args.suite).glob("*.json")):
            scenario = json.loads(path.read_text())
            scenario.pop("noise", None)
            noisy = Path(scratch) / (path.stem + "_noisy.json")
            noisy.write_text(json.dumps(scenario, indent=2))
            out = Path(scratch) / (path.stem + ".jsonl")
            subprocess.run(
                [args.tana, "run", "--scenario", str(noisy), "--out", str(out), "--seed", "42"],
                check=True,
            )
            doc.append(json.dumps({"scenario": path.stem}, separators=(",", ":")))
            doc.extend(alarm_lines(out.read_text()))

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text("\n".join(doc) + "\n")
    print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
