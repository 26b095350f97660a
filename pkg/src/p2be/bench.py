"""Benchmark harness: per-phase wall time for every instance in a directory.

Rows are tab-separated ``instance n m phase micros``. Besides the timer phases
there are ``total``, per-node-type times ``node:S`` / ``node:P`` / ``node:R``
and node counts ``nodes:S`` ... ``nodes:Q`` (the last column then holds the
count, not microseconds). Bucket averages use the instance name ``avg:n=<n>``.
"""
from __future__ import annotations

import logging
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .io import ParseError, read_file
from .pipeline import test
from .timing import PHASES, Timer

log = logging.getLogger(__name__)

NODE_KINDS = ("S", "P", "R", "Q")


@dataclass
class BenchRow:
    instance: str
    n: int
    m: int
    phase: str
    micros: int

    def tsv(self) -> str:
        return f"{self.instance}\t{self.n}\t{self.m}\t{self.phase}\t{self.micros}"


def run_instance(path: str) -> list[BenchRow]:
    g = read_file(path)
    timer = Timer()
    t0 = time.perf_counter()
    res = test(g, verify=True, timer=timer)
    total = time.perf_counter() - t0
    name = Path(path).stem
    rows = [BenchRow(name, g.n, g.m, ph, us) for ph, us in sorted(timer.micros().items())]
    rows.append(BenchRow(name, g.n, g.m, "total", int(round(total * 1e6))))
    for k in NODE_KINDS:
        rows.append(BenchRow(name, g.n, g.m, "nodes:" + k, timer.counts.get("nodes:" + k, 0)))
    rows.append(BenchRow(name, g.n, g.m, "positive", int(bool(res))))
    return rows


def bench_dir(directory: str | Path, jobs: int = 1) -> list[BenchRow]:
    """Rows for every ``*.p2be`` file under ``directory`` (unreadable files are
    skipped with a warning), followed by per-size averages."""
    paths = sorted(str(p) for p in Path(directory).glob("*.p2be"))
    rows: list[BenchRow] = []

    def collect(path: str, fn) -> None:
        try:
            rows.extend(fn())
        except (OSError, ParseError, ValueError) as exc:
            log.warning("skipping %s: %s", path, exc)

    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            futs = [(p, pool.submit(run_instance, p)) for p in paths]
            for p, fut in futs:
                collect(p, fut.result)
    else:
        for p in paths:
            collect(p, lambda p=p: run_instance(p))
    return rows + bucket_averages(rows)


def bucket_averages(rows: list[BenchRow]) -> list[BenchRow]:
    acc: dict[tuple[int, str], list[int]] = defaultdict(list)
    ms: dict[int, list[int]] = defaultdict(list)
    seen: set[str] = set()
    for r in rows:
        if r.instance.startswith("avg:"):
            continue
        acc[(r.n, r.phase)].append(r.micros)
        if r.instance not in seen:
            seen.add(r.instance)
            ms[r.n].append(r.m)
    out = []
    for (n, phase), vals in sorted(acc.items()):
        m = round(sum(ms[n]) / len(ms[n]))
        out.append(BenchRow(f"avg:n={n}", n, m, phase, round(sum(vals) / len(vals))))
    return out


def doubling_ratios(rows: list[BenchRow], phase: str = "total") -> list[tuple[int, int, float]]:
    """(n, 2n, t(2n)/t(n)) for consecutive bucket sizes that double."""
    avg = {r.n: r.micros for r in rows if r.instance.startswith("avg:") and r.phase == phase}
    out = []
    for n in sorted(avg):
        if 2 * n in avg and avg[n] > 0:
            out.append((n, 2 * n, avg[2 * n] / avg[n]))
    return out


def format_table(rows: list[BenchRow]) -> str:
    """Human-readable view of the bucket averages."""
    phases = [p for p in PHASES] + ["node:S", "node:P", "node:R", "total"]
    avg = [r for r in rows if r.instance.startswith("avg:")]
    sizes = sorted({r.n for r in avg})
    if not sizes:
        return "(no instances)\n"
    cell = {(r.n, r.phase): r.micros for r in avg}
    head = ["phase"] + [f"n={n}" for n in sizes]
    lines = ["\t".join(head)]
    for ph in phases + [f"nodes:{k}" for k in NODE_KINDS]:
        if any((n, ph) in cell for n in sizes):
            unit = "" if ph.startswith("nodes:") else " ms"
            vals = []
            for n in sizes:
                v = cell.get((n, ph), 0)
                vals.append(str(v) if ph.startswith("nodes:") else f"{v / 1000:.1f}")
            lines.append("\t".join([ph + unit] + vals))
    return "\n".join(lines) + "\n"
