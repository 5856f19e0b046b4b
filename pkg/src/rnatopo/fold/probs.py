"""Outside pass and the probabilities derived from it.

Keys use glued 1-based vertex labels: R occupies ``1..n_R`` and S
``n_R+1..n_R+n_S``.  A hybrid is reported as (outer R, inner R, inner S,
outer S); a gap structure as (outer left, inner left, inner right, outer
right) of its outermost and innermost arcs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..diagram import Arc
from .engine import DPState, _require_partition
from .grammar import Block, nonterminal_of


@dataclass
class ProbabilityTables:
    n_r: int
    n_s: int
    pairs: dict[Arc, float] = field(default_factory=dict)
    hybrids: dict[tuple, float] = field(default_factory=dict)
    gaps: dict[tuple, float] = field(default_factory=dict)
    target: dict[tuple, float] = field(default_factory=dict)
    pairing: dict[tuple, float] = field(default_factory=dict)
    cells: dict[Block, float] = field(default_factory=dict, repr=False)

    def pair_kind(self, arc: Arc) -> str:
        i, j = arc
        if j <= self.n_r:
            return "interior-R"
        if i > self.n_r:
            return "interior-S"
        return "exterior"

    def tsv_rows(self):
        """Rows ``(kind, i, j, h, l, p)``; pairs leave ``h, l`` empty."""
        for (i, j), p in sorted(self.pairs.items()):
            yield (self.pair_kind((i, j)), i, j, "", "", p)
        for (i, j, h, l), p in sorted(self.hybrids.items()):
            yield ("hybrid", i, j, h, l, p)
        for (i, j, h, l), p in sorted(self.gaps.items()):
            yield ("gap", i, j, h, l, p)

    def to_json(self) -> dict:
        return {
            "n_r": self.n_r,
            "n_s": self.n_s,
            "pairs": [[i, j, self.pair_kind((i, j)), p] for (i, j), p in sorted(self.pairs.items())],
            "hybrids": [[*k, p] for k, p in sorted(self.hybrids.items())],
            "gaps": [[*k, p] for k, p in sorted(self.gaps.items())],
            "target": [[*k, p] for k, p in sorted(self.target.items())],
            "pairing": [[*k, p] for k, p in sorted(self.pairing.items())],
        }


def _hybrid_key(n_r: int, idx) -> tuple:
    i, j, h, l = idx
    return (i + 1, j, n_r + h + 1, n_r + l)


def _gap_key(n_r: int, side: str, idx) -> tuple:
    a, b, c, d = idx
    off = 0 if side == "R" else n_r
    return (a + 1 + off, b + off, c + 1 + off, d + off)


def pairing_probabilities(st: DPState) -> ProbabilityTables:
    """Marginals of every reachable block plus the derived pair, hybrid,
    gap, target and pairing probabilities."""
    _require_partition(st)
    chart = st.chart()
    q = st.root
    outside = chart.outside()
    n_r = len(st.pair.r)
    res = ProbabilityTables(n_r, len(st.pair.s))
    pairs: dict[Arc, float] = defaultdict(float)
    for b, ob in outside.items():
        ib = st[b]
        if not ob or not ib:
            continue
        sym, idx = b
        if nonterminal_of(sym) is not None:
            res.cells[b] = ib * ob / q
        for p in st.grammar.productions(b):
            if p.arcs:
                w = ob * chart.prod_weight(p) / q
                for a in p.arcs:
                    pairs[a] += w
        if sym == "Hy":
            res.hybrids[_hybrid_key(n_r, idx)] = ib * ob / q
        elif sym in ("G_R", "G_S"):
            res.gaps[_gap_key(n_r, sym[-1], idx)] = ib * ob / q
    res.pairs = dict(pairs)
    target: dict[tuple, float] = defaultdict(float)
    for (i, j, _, _), p in res.hybrids.items():
        target[(i, j)] += p
    pairing: dict[tuple, float] = defaultdict(float)
    for (a, b, _, _), p in res.gaps.items():
        pairing[("R" if b <= n_r else "S", a, b)] += p
    res.target = dict(target)
    res.pairing = dict(pairing)
    return res
