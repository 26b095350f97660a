from __future__ import annotations

import contextlib

import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Collects a one-line summary for an acceptance criterion."""

    def __init__(self, number: int, title: str) -> None:
        self.number = number
        self.title = title
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def _open(number: int, title: str):
        c = Criterion(number, title)
        try:
            yield c
        except BaseException as exc:
            c.note(f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            _RESULTS[number] = (title, False, "; ".join(c.notes))
            raise
        _RESULTS[number] = (title, True, "; ".join(c.notes))

    return _open


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, notes = _RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {notes}")
