#!/usr/bin/env python3
"""Run the whole pipeline in one go: simulate a cohort, analyze it, and
print every table to stdout.

    python3 scripts/run_study.py --students 400 --seed 42 --data-dir data
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from placetutor.cli import main as cli_main
from placetutor.report import build_report, render_text
from placetutor.store import Study


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--students", type=int, default=400)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--data-dir", type=Path, default=Path("data"))
    parser.add_argument("--force", action="store_true")
    parser.add_argument("--tails", choices=("one", "two"), default="one")
    args = parser.parse_args()

    sim = ["simulate", "--data-dir", str(args.data_dir),
           "--students", str(args.students), "--seed", str(args.seed)]
    if args.force:
        sim.append("--force")
    code = cli_main(sim)
    if code:
        return code
    code = cli_main(["analyze", "--data-dir", str(args.data_dir),
                     "--tails", args.tails])
    if code:
        return code

    study = Study.replay(args.data_dir / "events.log")
    report = build_report(study, tails=args.tails)
    for number in sorted(report.tables):
        print()
        print(render_text(report.tables[number]), end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
