from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from rnatopo.diagram import Diagram, build_diagram

ACCEPTANCE_LINES: list[str] = []


def random_diagram(rng: random.Random, max_arcs: int = 12, backbones=(1, 2)) -> Diagram:
    """Uniform-ish random partial matching on 1..n with one or two backbones."""
    b = rng.choice(backbones)
    n_arcs = rng.randint(0, max_arcs)
    n = 2 * n_arcs + rng.randint(0, 4)
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    arcs = [tuple(sorted(verts[2 * k: 2 * k + 2])) for k in range(n_arcs)]
    if b == 1:
        bounds = [(1, n)]
    else:
        cut = rng.randint(0, n)
        bounds = [(1, cut), (cut + 1, n)]
    return build_diagram(n, bounds, arcs)


@st.composite
def diagrams(draw, max_arcs: int = 8, backbones=(1, 2)) -> Diagram:
    seed = draw(st.integers(0, 2**32 - 1))
    return random_diagram(random.Random(seed), max_arcs, backbones)


@st.composite
def sequence_pairs(draw, max_total: int = 10, alphabet: str = "ACGU"):
    from rnatopo.diagram import SequencePair

    total = draw(st.integers(0, max_total))
    n_r = draw(st.integers(0, total))
    r = draw(st.text(alphabet, min_size=n_r, max_size=n_r))
    s = draw(st.text(alphabet, min_size=total - n_r, max_size=total - n_r))
    return SequencePair(r, s)


@pytest.fixture
def acceptance_report():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        print(ACCEPTANCE_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
