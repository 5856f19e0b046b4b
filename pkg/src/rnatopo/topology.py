"""Fatgraph invariants of arc diagrams.

Boundary components are orbits of ``succ o partner`` on half-edges (arc
endpoints): follow an arc to its other end, then step to the next endpoint
around the collapsed backbone vertex.  Each step traverses one side of one arc,
so the cycle length counts arc-sides.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, NotTwoBackbones, build_diagram


@dataclass(frozen=True)
class FatgraphReport:
    r: int
    boundary_lengths: tuple[int, ...]
    chi: int
    genus_per_component: tuple[int, ...]

    @property
    def genus_total(self) -> int:
        return sum(self.genus_per_component)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "boundary_lengths": list(self.boundary_lengths),
            "chi": self.chi,
            "genus_total": self.genus_total,
            "genus_per_component": list(self.genus_per_component),
        }


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def _face_cycles(succ: dict[int, int], partner: dict[int, int]) -> list[list[int]]:
    seen: set[int] = set()
    cycles = []
    for start in sorted(succ):
        if start in seen:
            continue
        cyc = []
        h = start
        while h not in seen:
            seen.add(h)
            cyc.append(h)
            h = succ[partner[h]]
        cycles.append(cyc)
    return cycles


def boundary_components(d: Diagram) -> FatgraphReport:
    partner = d.partner()
    succ: dict[int, int] = {}
    owner: dict[int, int] = {}
    for k, (lo, hi) in enumerate(d.backbones):
        ends = [v for v in range(lo, hi + 1) if v in partner]
        for x, v in enumerate(ends):
            succ[v] = ends[(x + 1) % len(ends)]
            owner[v] = k
    cycles = _face_cycles(succ, partner)

    dsu = _DSU(d.b)
    for i, j in d.arcs:
        dsu.union(d.backbone_of(i), d.backbone_of(j))
    comps: dict[int, list] = {}
    for k in range(d.b):
        comps.setdefault(dsu.find(k), [0, 0, 0])  # vertices, arcs, faces
        comps[dsu.find(k)][0] += 1
    for i, _ in d.arcs:
        comps[dsu.find(d.backbone_of(i))][1] += 1
    lengths = [len(c) for c in cycles]
    for c in cycles:
        comps[dsu.find(owner[c[0]])][2] += 1
    # a backbone without arcs is bounded by one empty cycle
    for k in range(d.b):
        if not any(owner.get(v) == k for v in range(d.backbones[k][0], d.backbones[k][1] + 1)):
            comps[dsu.find(k)][2] += 1
            lengths.append(0)

    genera = []
    for root in sorted(comps):
        v, e, r = comps[root]
        twice = 2 - r - (v - e)
        assert twice % 2 == 0 and twice >= 0, (d, comps)
        genera.append(twice // 2)
    return FatgraphReport(
        r=len(lengths),
        boundary_lengths=tuple(sorted(lengths)),
        chi=d.b - len(d.arcs),
        genus_per_component=tuple(genera),
    )


def genus(d: Diagram) -> int:
    return boundary_components(d).genus_total


def inflated_genus(d: Diagram) -> int:
    """Genus from the uncollapsed fatgraph: every vertex is a node with
    backbone edges to its neighbours.  Used to cross-check the collapsed walk."""
    # half-edge ids: (v, 'L'|'A'|'R')
    partner = d.partner()
    he_partner: dict[tuple, tuple] = {}
    rot: dict[tuple, tuple] = {}
    nodes = list(range(1, d.n + 1))
    same_bb = {}
    for lo, hi in d.backbones:
        for v in range(lo, hi):
            same_bb[v] = v + 1
    for v in nodes:
        hes = []
        if v in same_bb:
            hes.append((v, "R"))
            he_partner[(v, "R")] = (v + 1, "L")
            he_partner[(v + 1, "L")] = (v, "R")
        if v in partner:
            hes.append((v, "A"))
            he_partner[(v, "A")] = (partner[v], "A")
        if (v - 1) in same_bb and same_bb[v - 1] == v:
            hes.append((v, "L"))
        # counterclockwise at a vertex on a left-to-right line with arcs above
        for x, h in enumerate(hes):
            rot[h] = hes[(x + 1) % len(hes)]
    cycles = _face_cycles(rot, he_partner)

    dsu = _DSU(d.n + 1)
    for h, h2 in he_partner.items():
        dsu.union(h[0], h2[0])
    stats: dict[int, list] = {}
    for v in nodes:
        stats.setdefault(dsu.find(v), [0, 0, 0])[0] += 1
    for h in he_partner:
        stats[dsu.find(h[0])][1] += 1  # counted twice per edge
    for c in cycles:
        stats[dsu.find(c[0][0])][2] += 1
    for v in nodes:
        if not any(h[0] == v for h in rot):
            stats[dsu.find(v)][2] += 1
    total = 0
    for v, e2, r in stats.values():
        twice = 2 - r - (v - e2 // 2)
        assert twice % 2 == 0 and twice >= 0
        total += twice // 2
    # a zero-length backbone has no nodes but still one boundary: genus 0
    return total


def glue_alpha(e: Diagram) -> Diagram:
    if e.b != 2:
        raise NotTwoBackbones("gluing needs two backbones")
    return build_diagram(e.n, [(1, e.n)], e.arcs)


def _split(e: Diagram) -> tuple[int, int]:
    if e.b != 2:
        raise NotTwoBackbones("the product needs two backbones")
    n_r = e.n_r
    return n_r, e.n - n_r


def product_bullet(e1: Diagram, e2: Diagram) -> Diagram:
    """Insert ``e2`` into the gap of ``e1``: R = R1 R2, S = S2 S1."""
    r1, s1 = _split(e1)
    r2, s2 = _split(e2)

    def place1(v):
        return v if v <= r1 else v + r2 + s2

    def place2(v):
        return v + r1

    arcs = [(place1(i), place1(j)) for i, j in e1.arcs]
    arcs += [(place2(i), place2(j)) for i, j in e2.arcs]
    nr = r1 + r2
    n = nr + s1 + s2
    return build_diagram(n, [(1, nr), (nr + 1, n)], arcs)
