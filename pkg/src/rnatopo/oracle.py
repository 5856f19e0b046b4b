"""Brute-force ground truth for genus-zero interaction structures.

Every partial matching that obeys the pairing rules (and ``theta`` for
interior arcs) is generated and kept iff all of its irreducible shadows have
genus 0.  Nothing here touches the grammar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagram import Arc, SequencePair, can_pair, two_backbones
from .energy import EnergyModel, structure_energy
from .shadows import crossing_components, is_gamma_structure

MAX_TOTAL = 16


class LengthCap(ValueError):
    pass


@dataclass
class OracleResult:
    n_r: int
    n_s: int
    structures: list[tuple[Arc, ...]]
    energies: list[float]
    count: int
    partition: float
    pair_marginals: dict[Arc, float] = field(default_factory=dict)
    hybrid_marginals: dict[tuple, float] = field(default_factory=dict)
    gap_marginals: dict[tuple, float] = field(default_factory=dict)

    def probability(self, idx: int, model: EnergyModel) -> float:
        return math.exp(-self.energies[idx] / model.rt) / self.partition

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "partition": self.partition,
            "structures": [[list(a) for a in s] for s in self.structures],
            "energies": self.energies,
            "pair_marginals": [[i, j, p] for (i, j), p in sorted(self.pair_marginals.items())],
        }


def _matchings(allowed: dict[int, list[int]], verts: list[int]):
    """All partial matchings on ``verts`` using edges ``v -> allowed[v]`` (v < w)."""
    out: list[tuple[Arc, ...]] = []

    def rec(k: int, used: set[int], acc: list[Arc]):
        while k < len(verts) and verts[k] in used:
            k += 1
        if k == len(verts):
            out.append(tuple(acc))
            return
        v = verts[k]
        rec(k + 1, used, acc)
        for w in allowed[v]:
            if w not in used:
                used.add(w)
                acc.append((v, w))
                rec(k + 1, used, acc)
                acc.pop()
                used.discard(w)

    rec(0, set(), [])
    return out


def candidate_arcs(pair: SequencePair, model: EnergyModel) -> dict[int, list[int]]:
    seq = pair.glued
    n_r = len(pair.r)
    n = len(seq)
    allowed: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not can_pair(seq[i - 1], seq[j - 1]):
                continue
            exterior = i <= n_r < j
            if not exterior and j - i - 1 < model.theta:
                continue
            allowed[i].append(j)
    return allowed


def _hybrids(arcs: tuple[Arc, ...], n_r: int) -> list[tuple[int, int, int, int]]:
    """Maximal runs of nested exterior arcs with only unpaired vertices
    between consecutive arcs, reported as (outer R, inner R, inner S, outer S)."""
    used = {v for a in arcs for v in a}
    ext = sorted(a for a in arcs if a[0] <= n_r < a[1])
    nxt: dict[Arc, Arc] = {}
    for a in ext:
        for b in ext:
            if a[0] < b[0] and b[1] < a[1]:
                gap = set(range(a[0] + 1, b[0])) | set(range(b[1] + 1, a[1]))
                if not gap & used:
                    nxt[a] = b
    has_prev = set(nxt.values())
    runs = []
    for a in ext:
        if a in has_prev:
            continue
        b = a
        while b in nxt:
            b = nxt[b]
        runs.append((a[0], b[0], b[1], a[1]))
    return runs


def _gaps(arcs: tuple[Arc, ...], n_r: int, n_s: int) -> list[tuple[int, int, int, int]]:
    """Interior arc classes of crossing components, reported as
    (outer left, inner left, inner right, outer right)."""
    out = []
    for comp in crossing_components(two_backbones(n_r, n_s, arcs)):
        if len(comp) < 2:
            continue
        for on_r in (True, False):
            side = [a for a in comp if (a[1] <= n_r if on_r else a[0] > n_r)]
            if side:
                outer = min(side)
                inner = max(side)
                out.append((outer[0], inner[0], inner[1], outer[1]))
    return out


def enumerate_structures(pair: SequencePair, model: EnergyModel) -> OracleResult:
    n_r, n_s = len(pair.r), len(pair.s)
    if n_r + n_s > MAX_TOTAL:
        raise LengthCap(f"oracle is capped at {MAX_TOTAL} nucleotides")
    allowed = candidate_arcs(pair, model)
    seq = pair.glued
    kept, energies = [], []
    for arcs in _matchings(allowed, list(range(1, n_r + n_s + 1))):
        if not is_gamma_structure(two_backbones(n_r, n_s, arcs), 0):
            continue
        kept.append(tuple(sorted(arcs)))
        energies.append(structure_energy(seq, n_r, arcs, model))

    weights = [math.exp(-e / model.rt) for e in energies]
    q = math.fsum(weights)
    res = OracleResult(n_r, n_s, kept, energies, len(kept), q)
    pm: dict[Arc, list[float]] = {}
    hm: dict[tuple, list[float]] = {}
    gm: dict[tuple, list[float]] = {}
    for arcs, w in zip(kept, weights):
        for g in _gaps(arcs, n_r, n_s):
            gm.setdefault(g, []).append(w)
        for a in arcs:
            pm.setdefault(a, []).append(w)
        for h in _hybrids(arcs, n_r):
            hm.setdefault(h, []).append(w)
    res.pair_marginals = {a: math.fsum(ws) / q for a, ws in pm.items()}
    res.hybrid_marginals = {h: math.fsum(ws) / q for h, ws in hm.items()}
    res.gap_marginals = {g: math.fsum(ws) / q for g, ws in gm.items()}
    return res
