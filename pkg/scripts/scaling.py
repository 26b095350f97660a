"""Write the m=2n and m=3n-6 scaling suites and time them.

    python3 scripts/scaling.py --out-dir /tmp/scaling --jobs 2

Prints the per-phase bucket table for each suite and the doubling ratios
t(2n)/t(n) of total wall time.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from p2be.bench import bench_dir, doubling_ratios, format_table
from p2be.generator import build, suite
from p2be.io import write_file


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="scaling-suites")
    ap.add_argument("--sizes", default="10000,20000,40000,80000")
    ap.add_argument("--per-bucket", type=int, default=2)
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--jobs", type=int, default=1, help="parallel workers; 1 gives the cleanest timings")
    args = ap.parse_args(argv)
    sizes = [int(x) for x in args.sizes.split(",")]
    ok = True
    for kind in ("2n", "3n-6"):
        d = Path(args.out_dir) / kind
        d.mkdir(parents=True, exist_ok=True)
        for inst in suite(kind, sizes, args.per_bucket, args.seed):
            path = d / f"{inst.name}.p2be"
            if not path.exists():
                write_file(path, build(inst))
        rows = bench_dir(d, jobs=args.jobs)
        (d / "bench.tsv").write_text("".join(r.tsv() + "\n" for r in rows))
        print(f"== m={kind}")
        print(format_table(rows), end="")
        for n, n2, ratio in doubling_ratios(rows):
            inside = 1.5 <= ratio <= 3.0
            ok &= inside
            print(f"t({n2})/t({n}) = {ratio:.2f}{'' if inside else '  (outside [1.5, 3.0])'}")
        slow = [r for r in rows if r.phase == "total" and not r.instance.startswith("avg:") and r.micros >= 60e6]
        for r in slow:
            ok = False
            print(f"{r.instance}: {r.micros / 1e6:.1f}s exceeds 60s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
