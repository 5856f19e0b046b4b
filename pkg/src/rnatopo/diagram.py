"""Arc diagrams over one or two backbones.

Vertices are labelled ``1..n`` in linear order.  For two backbones the
canonical layout places ``R`` at ``1..n_R`` and ``S`` at ``n_R+1..n`` (both
5'->3'), which is the layout produced by gluing ``R``'s 3' end to ``S``'s 5'
end.  Antiparallel helices therefore appear as nested exterior arcs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

Arc = tuple[int, int]


class DiagramError(ValueError):
    """Base class for malformed diagram input."""


class SharedVertex(DiagramError):
    pass


class OutOfRange(DiagramError):
    pass


class BadPartition(DiagramError):
    pass


class NotTwoBackbones(DiagramError):
    pass


class UnbalancedBrackets(DiagramError):
    pass


class LayerOverflow(DiagramError):
    pass


class InvalidAlphabet(DiagramError):
    pass


class ArcKind(str, Enum):
    INTERIOR_R = "interior-R"
    INTERIOR_S = "interior-S"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class Diagram:
    """Immutable diagram: ``n`` vertices, backbone intervals and a partial matching."""

    n: int
    backbones: tuple[tuple[int, int], ...]
    arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self):
        _validate(self.n, self.backbones, self.arcs)

    @property
    def b(self) -> int:
        return len(self.backbones)

    @property
    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def partner(self) -> dict[int, int]:
        p = {}
        for i, j in self.arcs:
            p[i] = j
            p[j] = i
        return p

    def backbone_of(self, v: int) -> int:
        """0-based index of the backbone containing vertex ``v``."""
        for k, (lo, hi) in enumerate(self.backbones):
            if lo <= v <= hi:
                return k
        raise OutOfRange(f"vertex {v} not in 1..{self.n}")

    def arc_kind(self, arc: Arc) -> ArcKind:
        if self.b != 2:
            raise NotTwoBackbones("arc kinds are defined for two backbones")
        bi, bj = self.backbone_of(arc[0]), self.backbone_of(arc[1])
        if bi != bj:
            return ArcKind.EXTERIOR
        return ArcKind.INTERIOR_R if bi == 0 else ArcKind.INTERIOR_S

    def arcs_by_kind(self) -> dict[ArcKind, list[Arc]]:
        out: dict[ArcKind, list[Arc]] = {k: [] for k in ArcKind}
        for a in self.sorted_arcs:
            out[self.arc_kind(a)].append(a)
        return out

    @property
    def n_r(self) -> int:
        lo, hi = self.backbones[0]
        return hi - lo + 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "backbones": [list(bb) for bb in self.backbones],
            "arcs": [list(a) for a in self.sorted_arcs],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Diagram":
        if isinstance(data, str):
            data = json.loads(data)
        return build_diagram(
            data["n"], [tuple(b) for b in data["backbones"]], [tuple(a) for a in data["arcs"]]
        )


def _validate(n: int, backbones: Sequence[tuple[int, int]], arcs: Iterable[Arc]) -> None:
    if n < 0:
        raise BadPartition("negative vertex count")
    if not 1 <= len(backbones) <= 2:
        raise BadPartition(f"expected 1 or 2 backbones, got {len(backbones)}")
    expect = 1
    for lo, hi in backbones:
        # empty backbones are written (k, k-1)
        if lo != expect or hi < lo - 1:
            raise BadPartition(f"backbones {list(backbones)} do not tile 1..{n}")
        expect = hi + 1
    if expect != n + 1:
        raise BadPartition(f"backbones {list(backbones)} do not tile 1..{n}")
    seen: set[int] = set()
    for i, j in arcs:
        if not i < j:
            raise OutOfRange(f"arc ({i},{j}) must satisfy i < j")
        if i < 1 or j > n:
            raise OutOfRange(f"arc ({i},{j}) outside 1..{n}")
        for v in (i, j):
            if v in seen:
                raise SharedVertex(f"vertex {v} is used by two arcs")
            seen.add(v)


def build_diagram(
    n: int, backbone_bounds: Sequence[tuple[int, int]], arcs: Iterable[Arc]
) -> Diagram:
    arcs = [(min(a), max(a)) if a[0] != a[1] else tuple(a) for a in arcs]
    _validate(n, backbone_bounds, arcs)
    return Diagram(n, tuple(tuple(b) for b in backbone_bounds), frozenset(arcs))


def one_backbone(n: int, arcs: Iterable[Arc] = ()) -> Diagram:
    return build_diagram(n, [(1, n)], arcs)


def two_backbones(n_r: int, n_s: int, arcs: Iterable[Arc] = ()) -> Diagram:
    return build_diagram(n_r + n_s, [(1, n_r), (n_r + 1, n_r + n_s)], arcs)


def arcs_cross(a1: Arc, a2: Arc) -> bool:
    i1, j1 = a1
    i2, j2 = a2
    return i1 < i2 < j1 < j2 or i2 < i1 < j2 < j1


def crossing_graph(arcs: Sequence[Arc]) -> dict[Arc, list[Arc]]:
    adj: dict[Arc, list[Arc]] = {a: [] for a in arcs}
    srt = sorted(arcs)
    for x, a in enumerate(srt):
        for c in srt[x + 1:]:
            if c[0] > a[1]:
                break
            if arcs_cross(a, c):
                adj[a].append(c)
                adj[c].append(a)
    return adj


# --------------------------------------------------------------------------
# zig-zags and AP classification


@dataclass(frozen=True)
class ZigZag:
    r_arc: Arc
    s_arc: Arc
    exterior: Arc


def _subsumed(inner: Arc, outer: Arc, exterior: list[Arc], inner_side: int) -> bool:
    """``inner`` is subsumed in ``outer``: every exterior arc with its
    ``inner_side`` endpoint under ``inner`` has its other endpoint under ``outer``."""
    other = 1 - inner_side
    for e in exterior:
        if inner[0] < e[inner_side] < inner[1] and not outer[0] < e[other] < outer[1]:
            return False
    return True


def detect_zigzag(d: Diagram) -> Optional[ZigZag]:
    """First pair of dependent interior arcs (one per backbone) neither of
    which subsumes the other, together with an exterior arc witnessing the
    dependence.  ``None`` when the diagram is zig-zag free."""
    if d.b != 2:
        raise NotTwoBackbones("zig-zags need two backbones")
    kinds = d.arcs_by_kind()
    ext = kinds[ArcKind.EXTERIOR]
    for ra in kinds[ArcKind.INTERIOR_R]:
        for sa in kinds[ArcKind.INTERIOR_S]:
            witness = None
            for e in ext:
                if ra[0] < e[0] < ra[1] and sa[0] < e[1] < sa[1]:
                    witness = e
                    break
            if witness is None:
                continue
            if not _subsumed(ra, sa, ext, 0) and not _subsumed(sa, ra, ext, 1):
                return ZigZag(ra, sa, witness)
    return None


@dataclass
class APReport:
    is_ap: bool
    violated_clause: Optional[int] = None
    detail: str = ""
    zigzag: Optional[ZigZag] = None


def _noncrossing(arcs: Sequence[Arc]) -> Optional[tuple[Arc, Arc]]:
    for x, a in enumerate(arcs):
        for c in arcs[x + 1:]:
            if arcs_cross(a, c):
                return a, c
    return None


def is_ap_structure(d: Diagram) -> APReport:
    """AP classification: (1) both strands pseudoknot free, (2) exterior arcs
    free of external pseudoknots, (3) no zig-zag.

    Clause 2 is read in the over-under drawing: exterior arcs ``(i, h)`` and
    ``(i', h')`` conflict iff ``i < i'`` and ``h < h'`` (S in 5'->3' order),
    i.e. iff they cross in the linear layout.
    """
    if d.b != 2:
        raise NotTwoBackbones("AP-structures need two backbones")
    kinds = d.arcs_by_kind()
    for kind in (ArcKind.INTERIOR_R, ArcKind.INTERIOR_S):
        bad = _noncrossing(kinds[kind])
        if bad:
            return APReport(False, 1, f"{kind.value} arcs {bad[0]} and {bad[1]} cross")
    ext = kinds[ArcKind.EXTERIOR]
    for x, a in enumerate(ext):
        for c in ext[x + 1:]:
            if (a[0] < c[0]) == (a[1] < c[1]):
                return APReport(False, 2, f"exterior arcs {a} and {c} form an external pseudoknot")
    zz = detect_zigzag(d)
    if zz is not None:
        return APReport(False, 3, f"zig-zag {zz.r_arc}/{zz.s_arc} via {zz.exterior}", zz)
    return APReport(True)


# --------------------------------------------------------------------------
# extended dot-bracket

_OPEN = "([{<"
_CLOSE = ")]}>"


def parse_structure(text: str) -> Diagram:
    parts = text.strip().split("&")
    if len(parts) > 2:
        raise BadPartition("at most two backbones ('&' separated)")
    stacks: list[list[int]] = [[] for _ in _OPEN]
    arcs = []
    pos = 0
    bounds = []
    for part in parts:
        lo = pos + 1
        for ch in part:
            pos += 1
            if ch == ".":
                continue
            if ch in _OPEN:
                stacks[_OPEN.index(ch)].append(pos)
            elif ch in _CLOSE:
                st = stacks[_CLOSE.index(ch)]
                if not st:
                    raise UnbalancedBrackets(f"unmatched {ch!r} at position {pos}")
                arcs.append((st.pop(), pos))
            else:
                raise UnbalancedBrackets(f"unexpected character {ch!r}")
        bounds.append((lo, pos))
    if any(stacks):
        raise UnbalancedBrackets("unclosed bracket(s)")
    return build_diagram(pos, bounds, arcs)


def bracket_layers(arcs: Sequence[Arc]) -> dict[Arc, int]:
    """Greedy colouring of the crossing graph in left-endpoint order."""
    layer: dict[Arc, int] = {}
    adj = crossing_graph(list(arcs))
    for a in sorted(arcs):
        used = {layer[c] for c in adj[a] if c in layer}
        k = next(k for k in range(len(arcs) + 1) if k not in used)
        if k >= len(_OPEN):
            raise LayerOverflow(f"arc {a} needs more than {len(_OPEN)} bracket layers")
        layer[a] = k
    return layer


def render_structure(d: Diagram) -> str:
    chars = ["."] * d.n
    for a, k in bracket_layers(d.sorted_arcs).items():
        chars[a[0] - 1] = _OPEN[k]
        chars[a[1] - 1] = _CLOSE[k]
    pieces = ["".join(chars[lo - 1:hi]) for lo, hi in d.backbones]
    return "&".join(pieces)


def describe_structure(d: Diagram) -> str:
    """Dot-bracket when four bracket layers suffice, otherwise the arc list."""
    try:
        return render_structure(d)
    except LayerOverflow:
        return " ".join(f"{i}-{j}" for i, j in d.sorted_arcs) + f" (n={d.n}, backbones={list(d.backbones)})"


def load_structure(text: str) -> Diagram:
    """Accept either extended dot-bracket or a JSON diagram."""
    s = text.strip()
    if s.startswith("{"):
        return Diagram.from_json(s)
    return parse_structure(s)


# --------------------------------------------------------------------------
# sequences

PAIRS = frozenset({"AU", "UA", "GC", "CG", "GU", "UG"})


@dataclass(frozen=True)
class SequencePair:
    r: str
    s: str

    def __post_init__(self):
        object.__setattr__(self, "r", normalize_sequence(self.r, allow_empty=True))
        object.__setattr__(self, "s", normalize_sequence(self.s, allow_empty=True))

    @property
    def glued(self) -> str:
        return self.r + self.s


def normalize_sequence(seq: str, allow_empty: bool = False) -> str:
    out = seq.strip().upper().replace("T", "U")
    if not out and not allow_empty:
        raise InvalidAlphabet("empty sequence")
    bad = set(out) - set("ACGU")
    if bad:
        raise InvalidAlphabet(f"invalid nucleotides: {''.join(sorted(bad))}")
    return out


def can_pair(x: str, y: str) -> bool:
    return x + y in PAIRS
