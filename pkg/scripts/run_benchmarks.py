#!/usr/bin/env python3
"""Run the shipped benchmark suite and write the CSV/HTML reports."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from geomcompare.cli import main

if __name__ == "__main__":
    root = Path(__file__).resolve().parent.parent
    suite = root / "benchmarks" / "suite.json"
    out = root / "bench_report"
    sys.exit(main(["bench", str(suite),
                   "--csv", str(out.with_suffix(".csv")),
                   "--html", str(out.with_suffix(".html"))]))
