#!/usr/bin/env python3
"""Inspect one construction end to end: the emitted polynomial system, the
presolve transcript, and both comparison paths.

usage: scripts/explore_case.py benchmarks/medians.gct [timeout]
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from geomcompare import (
    CompareConfig,
    compare_source,
    parse_construction,
    presolve,
    translate,
)
from geomcompare.construction import giac_listing
from geomcompare.pipeline import render_compare_text


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 1
    src = Path(sys.argv[1]).read_text()
    timeout = float(sys.argv[2]) if len(sys.argv) > 2 else 10.0
    prog = parse_construction(src)

    print("== polynomial system (wire text, pre-pinning) ==")
    for chunk in giac_listing(prog).split(","):
        print("  ", chunk)

    print("\n== presolve transcript ==")
    _, report = presolve(translate(prog))
    print(report.transcript)

    print("\n== comparison ==")
    t0 = time.monotonic()
    result = compare_source(src, CompareConfig(timeout=timeout))
    print(render_compare_text(result, prog))
    print(f"variant={result.variant} in {time.monotonic() - t0:.2f}s; phases:",
          {k: f"{v:.0f}ms" for k, v in sorted(result.timings_ms.items())})
    if result.bounds is not None:
        for tag, side in (("inf", result.bounds.inf), ("sup", result.bounds.sup)):
            print(f"  {tag}: {side.attainment}",
                  f"enclosure={side.enclosure}" if side.enclosure else "",
                  f"exact={side.exact.render()}" if side.exact else "")
    return 0


if __name__ == "__main__":
    sys.exit(main())
