"""Command-line entry point ``p2be``.

Exit codes: 0 positive (or success), 1 negative, 2 bad input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import bench_dir, doubling_ratios, format_table
from .engine import REASONS, Negative
from .generator import SUITE_KINDS, GeneratorExhausted, build, generate, suite
from .graph import biconnected_edge_blocks
from .io import ParseError, format_spine, read_file, write, write_file
from .oracle import DEFAULT_CAP, OracleCapExceeded, brute_force_p2be, verify_book_embedding
from .pipeline import test
from .spqr import build_spqr, to_dot


def _load(path: str):
    try:
        return read_file(path)
    except ParseError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"{path}: {exc.strerror or exc}", file=sys.stderr)
    return None


def cmd_test(args: argparse.Namespace) -> int:
    g = _load(args.path)
    if g is None:
        return 2
    res = test(g, verify=True)
    if isinstance(res, Negative):
        print(f"NEGATIVE reason={res.reason}")
        if args.detail and res.detail:
            print(res.detail)
        return 1
    print("POSITIVE")
    print(format_spine(res.spine))
    if args.verify:
        ok = verify_book_embedding(g, res.spine)
        print(f"verify={'ok' if ok else 'FAILED'}")
        if not ok:
            return 2
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _load(args.path)
    if g is None:
        return 2
    try:
        ok, spine = brute_force_p2be(g, cap=args.cap)
    except OracleCapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if not ok:
        print("NEGATIVE")
        return 1
    print("POSITIVE")
    print(format_spine(spine or []))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        g = generate(args.n, args.m, args.seed)
    except (ValueError, GeneratorExhausted) as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return 2
    comments = [f"generator n={args.n} m={args.m} seed={args.seed}"]
    if args.out:
        write_file(args.out, g, comments)
    else:
        sys.stdout.write(write(g, comments))
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    buckets = [int(x) for x in args.buckets.split(",") if x]
    try:
        insts = suite(args.kind, buckets, args.per_bucket, args.seed)
    except ValueError as exc:
        print(f"suite: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = ["name\tkind\tn\tm\tseed"]
    for inst in insts:
        try:
            g = build(inst)
        except GeneratorExhausted as exc:
            print(f"suite: {inst.name}: {exc}", file=sys.stderr)
            return 2
        write_file(out / f"{inst.name}.p2be", g, [f"generator n={inst.n} m={inst.m} seed={inst.seed}"])
        manifest.append(f"{inst.name}\t{inst.kind}\t{inst.n}\t{inst.m}\t{inst.seed}")
    (out / "manifest.tsv").write_text("\n".join(manifest) + "\n")
    print(f"wrote {len(insts)} instances to {out}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    rows = bench_dir(args.dir, jobs=args.jobs)
    text = "".join(r.tsv() + "\n" for r in rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.table:
        sys.stderr.write(format_table(rows))
        for n, n2, ratio in doubling_ratios(rows):
            sys.stderr.write(f"t({n2})/t({n}) = {ratio:.2f}\n")
    return 0


def cmd_dot(args: argparse.Namespace) -> int:
    g = _load(args.path)
    if g is None:
        return 2
    blocks = [sorted(b) for b in biconnected_edge_blocks(g.n, g.edges)]
    blocks = sorted((b for b in blocks if len(b) >= 2), key=lambda b: b[0])
    if not blocks:
        print("no block with two or more edges", file=sys.stderr)
        return 2
    for blk in blocks:
        sub, verts, eids = g.induced_on_edges(blk)
        ref = args.ref_edge if len(blocks) == 1 else 0
        if not 0 <= ref < sub.m:
            print(f"reference edge must lie in 0..{sub.m - 1}", file=sys.stderr)
            return 2
        if len(blocks) > 1:
            sys.stdout.write(f"// block with global edges {eids}, local vertex i is {verts}\n")
        sys.stdout.write(to_dot(build_spqr(sub, ref)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="p2be", description="Partitioned 2-page book embedding tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("test", help="decide an instance and print a spine order")
    t.add_argument("path")
    t.add_argument("--verify", action="store_true", help="re-check the spine with the pairwise verifier")
    t.add_argument("--detail", action="store_true", help="print where a negative verdict came from")
    t.set_defaults(func=cmd_test)

    o = sub.add_parser("oracle", help="brute-force decision over all circular orders")
    o.add_argument("path")
    o.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n to attempt")
    o.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("generate", help="random positive instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    s = sub.add_parser("suite", help="write a bucketed suite of generated instances")
    s.add_argument("--kind", choices=SUITE_KINDS, required=True)
    s.add_argument("--buckets", required=True, help="comma-separated vertex counts")
    s.add_argument("--per-bucket", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_suite)

    b = sub.add_parser("bench", help="time every *.p2be instance in a directory")
    b.add_argument("dir")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", help="write rows here instead of stdout")
    b.add_argument("--table", action="store_true", help="also print bucket averages to stderr")
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("dot", help="SPQR-tree of each block in DOT format")
    d.add_argument("path")
    d.add_argument("--ref-edge", type=int, default=0)
    d.set_defaults(func=cmd_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "build_parser", "REASONS"]
