"""Finite atlases of shadows of fixed genus.

Perfect matchings are generated leftmost-point-first.  Three prunings keep
genus 2 tractable: no unit arcs ``(i, i+1)`` (they never cross), no stacks,
and the genus of the arcs chosen so far never exceeds the target (adding an
arc cannot lower the genus of a one-backbone diagram).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit

from .diagram import Diagram, OutOfRange, build_diagram, describe_structure, one_backbone
from .shadows import crossing_components, is_shadow
from .topology import boundary_components, genus, glue_alpha

MAX_ONE_BACKBONE_GENUS = 3
MAX_TWO_BACKBONE_GENUS = 1


class ResourceLimit(RuntimeError):
    """Requested atlas is beyond the supported size."""


class Provenance(str, Enum):
    ENUMERATED = "enumerated"
    CONSTRUCTED = "constructed"
    CUT = "cut-from"


@dataclass(frozen=True)
class AtlasEntry:
    shadow: Diagram
    genus: int
    arc_count: int
    irreducible: bool
    provenance: Provenance
    source: str = ""

    def key(self) -> tuple:
        return (self.shadow.backbones, tuple(self.shadow.sorted_arcs))

    def to_json(self) -> dict:
        out = {
            "structure": describe_structure(self.shadow),
            "diagram": self.shadow.to_json(),
            "genus": self.genus,
            "arcs": self.arc_count,
            "irreducible": self.irreducible,
            "provenance": self.provenance.value,
        }
        if self.source:
            out["source"] = self.source
        return out


# ----------------------------------------------------------------------
# compiled matching search


@njit(cache=True)
def _genus_of(partner, m):
    """Genus of the chosen arcs on one backbone (unmatched points ignored)."""
    used = np.empty(m, dtype=np.int64)
    k = 0
    for v in range(m):
        if partner[v] >= 0:
            used[k] = v
            k += 1
    if k == 0:
        return 0
    succ = np.full(m, -1, dtype=np.int64)
    for x in range(k):
        succ[used[x]] = used[(x + 1) % k]
    seen = np.zeros(m, dtype=np.bool_)
    faces = 0
    for x in range(k):
        s = used[x]
        if seen[s]:
            continue
        faces += 1
        h = s
        while not seen[h]:
            seen[h] = True
            h = succ[partner[h]]
    return (1 + k // 2 - faces) // 2


@njit(cache=True)
def _all_cross(partner, m):
    for a in range(m):
        b = partner[a]
        if b < a:
            continue
        hit = False
        for v in range(a + 1, b):
            w = partner[v]
            if w < a or w > b:
                hit = True
                break
        if not hit:
            return False
    return True


@njit(cache=True)
def _search(n_arcs, gmax, cut):
    """All perfect matchings on ``2*n_arcs`` points in which every arc
    crosses another, there is no unit arc, no stack (arcs straddling ``cut``
    may stack when ``cut >= 0``) and the genus is at most ``gmax``."""
    m = 2 * n_arcs
    partner = np.full(m, -1, dtype=np.int64)
    out = []
    choice = np.full(n_arcs + 1, -1, dtype=np.int64)
    left = np.full(n_arcs + 1, -1, dtype=np.int64)
    depth = 0
    # find leftmost free point for depth 0
    left[0] = 0
    choice[0] = 0
    while depth >= 0:
        p = left[depth]
        if p >= m:  # all matched
            if _all_cross(partner, m):
                out.append(partner.copy())
            depth -= 1
            if depth >= 0:
                q = choice[depth]
                partner[left[depth]] = -1
                partner[q] = -1
            continue
        q = choice[depth] + 1 if choice[depth] > p else p + 2
        placed = False
        while q < m:
            if partner[q] < 0:
                ok = True
                # a stack (p, q), (p-1, q+1): p-1 is matched already
                if p > 0 and q + 1 < m and partner[p - 1] == q + 1:
                    if not (cut >= 0 and (p == cut or q + 1 == cut)):
                        ok = False
                if ok and p + 1 < m and q - 1 > p + 1 and partner[p + 1] == q - 1:
                    if not (cut >= 0 and (p + 1 == cut or q == cut)):
                        ok = False
                if ok:
                    partner[p] = q
                    partner[q] = p
                    if _genus_of(partner, m) <= gmax:
                        placed = True
                        break
                    partner[p] = -1
                    partner[q] = -1
            q += 1
        if not placed:
            choice[depth] = -1
            depth -= 1
            if depth >= 0:
                partner[left[depth]] = -1
                partner[choice[depth]] = -1
            continue
        choice[depth] = q
        nxt = p + 1
        while nxt < m and partner[nxt] >= 0:
            nxt += 1
        depth += 1
        left[depth] = nxt
        choice[depth] = -1
    return out


def _arcs(partner) -> list[tuple[int, int]]:
    return [(int(a) + 1, int(b) + 1) for a, b in enumerate(partner) if a < b]


# ----------------------------------------------------------------------
# one backbone


def enumerate_shadows_one_backbone(g: int) -> list[AtlasEntry]:
    """Every one-backbone shadow of genus ``g`` (empty list for g = 0)."""
    if g < 0:
        raise OutOfRange("genus must be non-negative")
    if g > MAX_ONE_BACKBONE_GENUS:
        raise ResourceLimit(f"one-backbone atlases are capped at genus {MAX_ONE_BACKBONE_GENUS}")
    if g == 0:
        return []
    out = []
    for n in range(2 * g, 6 * g - 1):
        for partner in _search(n, g, -1):
            d = one_backbone(2 * n, _arcs(partner))
            if genus(d) != g:
                continue
            out.append(
                AtlasEntry(d, g, n, len(crossing_components(d)) == 1, Provenance.ENUMERATED)
            )
    return sorted(out, key=lambda e: (e.arc_count, e.shadow.sorted_arcs))


def construct_S_sequence(g: int, length: int) -> Diagram:
    """The shadow with ``length`` arcs grown from ``2g`` mutually crossing arcs.

    Each added arc enters at the 5' end and crosses the arcs of the first
    boundary component so that component loses a triangle.
    """
    if g < 1 or not 2 * g <= length <= 6 * g - 2:
        raise OutOfRange(f"need g >= 1 and {2 * g} <= length <= {6 * g - 2}")
    k = 2 * g
    d = one_backbone(2 * k, [(i, i + k) for i in range(1, k + 1)])
    found = _grow(d, length)
    if found is None:
        raise OutOfRange(f"no admissible insertion sequence reaches {length} arcs")
    return found


def _first_face(d: Diagram) -> list[int]:
    """Boundary component that passes the 5' end of the backbone."""
    partner = d.partner()
    ends = sorted(partner)
    succ = {v: ends[(x + 1) % len(ends)] for x, v in enumerate(ends)}
    cyc, h = [], ends[0]
    while True:
        cyc.append(h)
        h = succ[partner[h]]
        if h == ends[0]:
            return cyc


def _insertions(d: Diagram):
    """Diagrams with one new arc from the 5' end that split a triangle off
    the first boundary component and keep the genus."""
    n = d.n
    g0 = genus(d)
    before = sorted(boundary_components(d).boundary_lengths)
    first = len(_first_face(d))
    expect = list(before)
    expect.remove(first)
    expect = sorted(expect + [3, first - 1])
    for j in range(3, n + 3):
        def place(v, j=j):
            v += 1
            return v + 1 if v >= j else v

        e = one_backbone(n + 2, [(place(a), place(b)) for a, b in d.arcs] + [(1, j)])
        if genus(e) != g0 or not is_shadow(e):
            continue
        if sorted(boundary_components(e).boundary_lengths) != expect:
            continue
        if len(_first_face(e)) != first - 1:
            continue
        yield e


def _grow(d: Diagram, length: int) -> Diagram | None:
    if len(d.arcs) == length:
        return d
    for e in _insertions(d):
        got = _grow(e, length)
        if got is not None:
            return got
    return None


def cut_backbone(s: Diagram, position: int) -> Diagram:
    """Split a one-backbone diagram between vertices ``position`` and ``position + 1``."""
    if s.b != 1:
        raise OutOfRange("cutting needs a single backbone")
    if not 0 < position < s.n:
        raise OutOfRange(f"cut position must lie in 1..{s.n - 1}")
    return build_diagram(s.n, [(1, position), (position + 1, s.n)], s.arcs)


# ----------------------------------------------------------------------
# two backbones


def _two_backbone_entry(d: Diagram, g: int, prov: Provenance, source: str = "") -> AtlasEntry | None:
    if not is_shadow(d) or genus(d) != g:
        return None
    if len(d.arcs) < 2 or len(crossing_components(d)) != 1:
        return None
    return AtlasEntry(d, g, len(d.arcs), True, prov, source)


def irreducible_two_backbone_from_cuts(g: int = 0) -> list[AtlasEntry]:
    """Irreducible genus-``g`` two-backbone shadows obtained by cutting every
    one-backbone shadow of genus ``g + 1`` at every position (deduplicated)."""
    seen: dict[tuple, AtlasEntry] = {}
    for entry in enumerate_shadows_one_backbone(g + 1):
        s = entry.shadow
        for c in range(1, s.n):
            e = _two_backbone_entry(
                cut_backbone(s, c), g, Provenance.CUT, describe_structure(s)
            )
            if e is not None:
                seen.setdefault(e.key(), e)
    return sorted(seen.values(), key=lambda e: (e.arc_count, e.key()))


def enumerate_irreducible_two_backbone(g: int) -> list[AtlasEntry]:
    """Irreducible two-backbone shadows of genus ``g`` by exhaustive search."""
    if g < 0:
        raise OutOfRange("genus must be non-negative")
    if g > MAX_TWO_BACKBONE_GENUS:
        raise ResourceLimit(f"two-backbone atlases are capped at genus {MAX_TWO_BACKBONE_GENUS}")
    out = []
    for n in range(max(2, 2 * g + 1), 6 * (g + 1) - 1):
        for cut in range(1, 2 * n):
            for partner in _search(n, g + 1, cut):
                d = build_diagram(2 * n, [(1, cut), (cut + 1, 2 * n)], _arcs(partner))
                e = _two_backbone_entry(d, g, Provenance.ENUMERATED)
                if e is not None:
                    out.append(e)
    return sorted(out, key=lambda e: (e.arc_count, e.key()))


def glued(entry: AtlasEntry) -> Diagram:
    return glue_alpha(entry.shadow)
