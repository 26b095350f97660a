"""Instance files.

Line 1 is ``p2be <n> <m>``; each of the next ``m`` lines is ``<u> <v> <r|b>``
with 0-based vertex ids. ``#`` starts a comment; blank lines are ignored.
"""
from __future__ import annotations

from pathlib import Path

from .graph import COLOR_NAMES, ColoredGraph


class ParseError(ValueError):
    def __init__(self, line: int, msg: str) -> None:
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse(text: str) -> ColoredGraph:
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    colors: list[int] = []
    seen: set[tuple[int, int]] = set()
    last = 0
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = lineno
        tok = line.split()
        if header is None:
            if len(tok) != 3 or tok[0] != "p2be":
                raise ParseError(lineno, "expected header 'p2be <n> <m>'")
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise ParseError(lineno, "n and m must be integers") from None
            if n < 0 or m < 0:
                raise ParseError(lineno, "n and m must be non-negative")
            header = (n, m)
            continue
        n, m = header
        if len(tok) != 3:
            raise ParseError(lineno, f"expected '<u> <v> <r|b>', got {len(tok)} fields")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(lineno, "vertex ids must be integers") from None
        if tok[2] not in COLOR_NAMES:
            raise ParseError(lineno, f"color must be 'r' or 'b', got {tok[2]!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"vertex id out of range 0..{n - 1}")
        if u == v:
            raise ParseError(lineno, "self-loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(lineno, f"duplicate edge {u} {v}")
        if len(edges) == m:
            raise ParseError(lineno, f"more than the {m} edges announced in the header")
        seen.add(key)
        edges.append((u, v))
        colors.append(COLOR_NAMES.index(tok[2]))
    if header is None:
        raise ParseError(max(last, 1), "missing header 'p2be <n> <m>'")
    if len(edges) != header[1]:
        raise ParseError(last, f"header announces {header[1]} edges, found {len(edges)}")
    return ColoredGraph(header[0], tuple(edges), tuple(colors))


def write(g: ColoredGraph, comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in comments or ()]
    lines.append(f"p2be {g.n} {g.m}")
    lines.extend(f"{a} {b} {COLOR_NAMES[c]}" for (a, b), c in zip(g.edges, g.colors))
    return "\n".join(lines) + "\n"


def read_file(path: str | Path) -> ColoredGraph:
    return parse(Path(path).read_text())


def write_file(path: str | Path, g: ColoredGraph, comments: list[str] | None = None) -> None:
    Path(path).write_text(write(g, comments), newline="\n")


def format_spine(spine: list[int]) -> str:
    return " ".join(map(str, spine))
