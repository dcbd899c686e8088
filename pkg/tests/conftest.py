from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from planedom.gf import field_of_order  # noqa: E402
from planedom.plane import _from_line_lists, build_pg2q  # noqa: E402


@lru_cache(maxsize=None)
def pg(q: int):
    return build_pg2q(field_of_order(q))


@lru_cache(maxsize=None)
def hall():
    from oracles import hall_plane_lines

    return _from_line_lists(9, hall_plane_lines(), tag="loaded", source="hall-9")


@pytest.fixture
def plane():
    return pg


def pytest_terminal_summary(terminalreporter):
    """Repeat the one-line acceptance verdicts after the run."""
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            for name, text in getattr(rep, "sections", []):
                if rep.when == "call" and "stdout" in name:
                    lines += [ln for ln in text.splitlines() if ln.startswith("ACCEPTANCE ")]
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(set(lines), key=lambda s: s.split()[1]):
            terminalreporter.write_line(ln)
