"""Shadow projection, irreducible decomposition and gamma classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .diagram import Arc, Diagram, NotTwoBackbones, arcs_cross, build_diagram, crossing_graph
from .topology import genus, glue_alpha


class NoExteriorIrreducible(ValueError):
    """Genus formula needs at least one irreducible two-backbone shadow."""


def _used_order(d: Diagram, arcs: Iterable[Arc]) -> tuple[dict[int, int], dict[int, int]]:
    """Next/previous used endpoint on the same backbone, ignoring isolated vertices."""
    used = sorted(v for a in arcs for v in a)
    nxt, prv = {}, {}
    for u, w in zip(used, used[1:]):
        if d.backbone_of(u) == d.backbone_of(w):
            nxt[u] = w
            prv[w] = u
    return nxt, prv


def _collapse_stacks(d: Diagram, arcs: set[Arc]) -> tuple[set[Arc], list[tuple[Arc, Arc]]]:
    """Collapse every stack to its outermost arc.  Returns the kept arcs and
    the (removed, kept) pairs."""
    nxt, prv = _used_order(d, arcs)
    inner_of = {}
    for i, j in arcs:
        ii, jj = nxt.get(i), prv.get(j)
        if ii is not None and jj is not None and (ii, jj) in arcs:
            inner_of[(i, j)] = (ii, jj)
    outer = set(arcs) - set(inner_of.values())
    removed = []
    for a in sorted(outer):
        b = inner_of.get(a)
        while b is not None:
            removed.append((b, a))
            b = inner_of.get(b)
    kept = set(arcs) - {r for r, _ in removed}
    return kept, removed


def shadow_arcs(d: Diagram, arcs: Optional[Iterable[Arc]] = None) -> set[Arc]:
    """Arcs of ``d`` (original labels) that survive the shadow projection."""
    cur = set(d.arcs if arcs is None else arcs)
    while True:
        adj = crossing_graph(sorted(cur))
        crossing = {a for a in cur if adj[a]}
        kept, _ = _collapse_stacks(d, crossing)
        if kept == cur:
            return cur
        cur = kept


def compact(d: Diagram, arcs: Iterable[Arc], drop_empty: bool = False) -> Diagram:
    """Restrict ``d`` to ``arcs``, delete isolated vertices and relabel 1..n'."""
    arcs = sorted(arcs)
    used = sorted(v for a in arcs for v in a)
    relabel = {v: x + 1 for x, v in enumerate(used)}
    bounds = []
    pos = 0
    for lo, hi in d.backbones:
        cnt = sum(1 for v in used if lo <= v <= hi)
        if cnt == 0 and drop_empty:
            continue
        bounds.append((pos + 1, pos + cnt))
        pos += cnt
    if not bounds:
        bounds = [(1, 0)]
    return build_diagram(pos, bounds, [(relabel[i], relabel[j]) for i, j in arcs])


def shadow(d: Diagram) -> Diagram:
    return compact(d, shadow_arcs(d))


def crossing_components(d: Diagram, arcs: Optional[Iterable[Arc]] = None) -> list[list[Arc]]:
    arcs = sorted(d.arcs if arcs is None else arcs)
    adj = crossing_graph(arcs)
    seen: set[Arc] = set()
    comps = []
    for a in arcs:
        if a in seen:
            continue
        comp, todo = [], [a]
        seen.add(a)
        while todo:
            x = todo.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        comps.append(sorted(comp))
    return comps


def is_irreducible(d: Diagram) -> bool:
    return len(d.arcs) >= 2 and len(crossing_components(d)) == 1


def is_shadow(d: Diagram) -> bool:
    return shadow_arcs(d) == set(d.arcs) and all(
        v in d.partner() for v in range(1, d.n + 1)
    )


@dataclass
class IrreducibleShadow:
    arcs: list[Arc]  # labels of the input diagram
    diagram: Diagram  # compacted shadow; one backbone if all arcs share one
    genus: int
    two_backbone: bool
    glued_genus_delta: int = 0

    @property
    def label(self) -> str:
        if not self.two_backbone:
            return "I1"
        return f"I2_{self.glued_genus_delta}"


@dataclass
class Decomposition:
    I1: list[IrreducibleShadow] = field(default_factory=list)
    I2_0: list[IrreducibleShadow] = field(default_factory=list)
    I2_1: list[IrreducibleShadow] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    @property
    def all(self) -> list[IrreducibleShadow]:
        return self.I1 + self.I2_0 + self.I2_1

    def to_json(self) -> dict:
        return {
            "I1": [s.diagram.to_json() for s in self.I1],
            "I2_0": [s.diagram.to_json() for s in self.I2_0],
            "I2_1": [s.diagram.to_json() for s in self.I2_1],
            "trace": self.trace,
        }


def _component_shadow(d: Diagram, comp: list[Arc]) -> IrreducibleShadow:
    kept = shadow_arcs(d, comp)
    sub = compact(d, kept, drop_empty=True)
    two = sub.b == 2
    g = genus(sub)
    delta = genus(glue_alpha(sub)) - g if two else 0
    return IrreducibleShadow(sorted(comp), sub, g, two, delta)


def _nested_inside(a: list[Arc], b: list[Arc]) -> bool:
    return any(o[0] < x[0] and x[1] < o[1] for x in a for o in b)


def irreducible_shadows(d: Diagram) -> Decomposition:
    """Split the shadow into irreducible pieces and replay the removal order:
    one-backbone pieces bottom to top, then two-backbone pieces from the
    leftmost vertex of the second backbone onwards."""
    base = shadow_arcs(d)
    pieces = [_component_shadow(d, c) for c in crossing_components(d, base)]
    out = Decomposition()
    for p in pieces:
        getattr(out, p.label).append(p)

    s_start = d.backbones[1][0] if d.b == 2 else d.n + 1
    one = [p for p in pieces if not p.two_backbone]
    two = sorted(
        (p for p in pieces if p.two_backbone),
        key=lambda p: min(v for a in p.arcs for v in a if v >= s_start),
    )
    order = []
    pending = list(one)
    while pending:
        ready = [p for p in pending if not any(_nested_inside(p.arcs, q.arcs) for q in pending if q is not p)]
        ready.sort(key=lambda p: p.arcs[0][0])
        nxt = ready[0] if ready else min(pending, key=lambda p: p.arcs[0][0])
        order.append(nxt)
        pending.remove(nxt)
    order += two

    current = set(base)
    for p in order:
        current -= set(p.arcs)
        current, collapsed = _collapse_stacks(d, current)
        out.trace.append(
            {
                "removed": [list(a) for a in p.arcs],
                "class": p.label,
                "genus": p.genus,
                "collapsed": [[list(r), list(k)] for r, k in collapsed],
            }
        )
    return out


def gamma(d: Diagram) -> int:
    return max((p.genus for p in irreducible_shadows(d).all), default=0)


def is_gamma_structure(d: Diagram, g: int) -> bool:
    return gamma(d) <= g


def genus_by_decomposition(e: Diagram) -> int:
    if e.b != 2:
        raise NotTwoBackbones("genus formula is for two backbones")
    dec = irreducible_shadows(e)
    if not dec.I2_0 and not dec.I2_1:
        raise NoExteriorIrreducible("no irreducible two-backbone shadow")
    total = sum(p.genus for p in dec.I1) + sum(p.genus for p in dec.I2_0)
    total += sum(p.genus + 1 for p in dec.I2_1)
    return total if dec.I2_0 else total - 1
