"""Production rules of the genus-zero interaction grammar.

Coordinates are local and half-open: ``R[i, j)`` and ``S[h, l)`` with
``0 <= i <= j <= n_R`` and ``0 <= h <= l <= n_S``.  S positions are counted
from the junction with R, so in the glued layout a larger S index lies further
from the cut and antiparallel helices are nested arcs ``(R_i, S_{l-1})``.

Blocks are ``(symbol, index)`` pairs.  The thirteen named symbols are

``I``        interaction structure over ``R[i,j) x S[h,l)``
``PT``       same, whose innermost layer is a tight structure or a hybrid
``T``        tight structure (exact corners ``i, j-1, h, l-1``)
``Hs``       one exterior class: hybrids separated by non-empty loops
``Hy``       maximal hybrid with outer arc ``(i, l-1)`` and inner ``(j-1, h)``
``HyStar``   the remainder of a hybrid after peeling its outer arc
``G``/``GStar``  gap structures on one backbone (``_R`` / ``_S`` suffix)
``U, V, W, X, Y``  the products used to assemble tight structures

Helper tables: ``SEC``/``SECN``/``PAIR``/``SECP`` for secondary structures,
``HsL`` (loop followed by the rest of a class), ``PTt``/``PTh`` (the two
alternatives of ``PT``) and ``INH`` (an ``I`` whose innermost layer may be
followed directly by a hybrid).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..diagram import SequencePair, can_pair
from ..energy import EnergyModel

Block = tuple  # (symbol, index tuple)


class Nonterminal(str, Enum):
    I = "I"
    PT = "PT"
    T = "T"
    Hs = "Hs"
    Hy = "Hy"
    HyStar = "HyStar"
    G = "G"
    GStar = "GStar"
    U = "U"
    V = "V"
    W = "W"
    X = "X"
    Y = "Y"


def nonterminal_of(symbol: str) -> Optional[Nonterminal]:
    """Named symbol behind a table name (``G_R`` -> ``G``); helpers map to None."""
    base = symbol.split("_")[0]
    try:
        return Nonterminal(base)
    except ValueError:
        return None


@dataclass(frozen=True)
class Prod:
    energy: float
    unpaired: int
    arcs: tuple  # glued 1-based arcs created by this production
    children: tuple  # blocks


class ArcTables:
    """Per-arc energies (``None`` = forbidden) in local coordinates."""

    def __init__(self, pair: SequencePair, model: EnergyModel):
        self.pair = pair
        self.model = model
        self.n_r, self.n_s = len(pair.r), len(pair.s)
        self.side = {"R": self._interior(pair.r), "S": self._interior(pair.s)}
        self.ext = [
            [model.pair_energy(x, y, True) for y in pair.s] for x in pair.r
        ]

    def _interior(self, seq: str):
        n = len(seq)
        th = self.model.theta
        out = [[None] * n for _ in range(n)]
        for p in range(n):
            for q in range(p + th + 1, n):
                if can_pair(seq[p], seq[q]):
                    out[p][q] = self.model.pair_energy(seq[p], seq[q], False)
        return out

    def glued(self, side: str, p: int) -> int:
        return p + 1 if side == "R" else self.n_r + p + 1


class Grammar:
    """Enumerates the productions of every block."""

    def __init__(self, pair: SequencePair, model: EnergyModel):
        self.t = ArcTables(pair, model)
        self.n_r, self.n_s = self.t.n_r, self.t.n_s
        self.model = model
        self._memo: dict = {}

    @property
    def root(self) -> Block:
        return ("I", (0, self.n_r, 0, self.n_s))

    def productions(self, block: Block) -> list[Prod]:
        got = self._memo.get(block)
        if got is None:
            sym, idx = block
            base, _, side = sym.partition("_")
            fn = getattr(self, "_p_" + base)
            got = fn(side, *idx) if side else fn(*idx)
            self._memo[block] = got
        return got

    # ------------------------------------------------------------------
    # secondary structures on one backbone

    def _e(self, side, p, q):
        return self.t.side[side][p][q]

    def _p_SEC(self, side, a, b):
        if a == b:
            return [Prod(0.0, 0, (), ())]
        out = [Prod(0.0, 0, (), ((f"SECN_{side}", (a, b)),))]
        if self._e(side, a, b - 1) is not None:
            out.append(Prod(0.0, 0, (), ((f"PAIR_{side}", (a, b)),)))
        return out

    def _p_SECN(self, side, a, b):
        if a == b:
            return [Prod(0.0, 0, (), ())]
        out = [Prod(0.0, 1, (), ((f"SEC_{side}", (a, b - 1)),))]
        for k in range(a + 1, b - 1):
            if self._e(side, k, b - 1) is not None:
                out.append(
                    Prod(0.0, 0, (), ((f"SEC_{side}", (a, k)), (f"PAIR_{side}", (k, b))))
                )
        return out

    def _p_PAIR(self, side, a, b):
        e = self._e(side, a, b - 1)
        if e is None:
            return []
        arc = ((self.t.glued(side, a), self.t.glued(side, b - 1)),)
        out = [Prod(e, 0, arc, ((f"SECN_{side}", (a + 1, b - 1)),))]
        if b - a >= 4 and self._e(side, a + 1, b - 2) is not None:
            out.append(
                Prod(e + self.model.stack_interior, 0, arc, ((f"PAIR_{side}", (a + 1, b - 1)),))
            )
        return out

    def _p_SECP(self, side, a, b):
        if a == b:
            return []
        out = [Prod(0.0, 1, (), ((f"SECP_{side}", (a, b - 1)),))]
        for k in range(a, b - 1):
            if self._e(side, k, b - 1) is not None:
                out.append(
                    Prod(0.0, 0, (), ((f"SEC_{side}", (a, k)), (f"PAIR_{side}", (k, b))))
                )
        return out

    # ------------------------------------------------------------------
    # gap structures: outer arc (a, d-1), inner arc (b-1, c), all on one side

    def _gap(self, side, a, b, c, d, child):
        if not (a < b <= c < d):
            return []
        e = self._e(side, a, d - 1)
        if e is None:
            return []
        arc = ((self.t.glued(side, a), self.t.glued(side, d - 1)),)
        out = []
        if b == a + 1 and c == d - 1:
            out.append(Prod(e, 0, arc, ()))
        for x in range(a + 1, b):
            for y in range(c + 1, d):
                if self._e(side, x, y - 1) is None:
                    continue
                if x == a + 1 and y == d - 1:
                    out.append(
                        Prod(e + self.model.stack_interior, 0, arc, ((f"{child}_{side}", (x, b, c, y)),))
                    )
                else:
                    out.append(
                        Prod(
                            e,
                            0,
                            arc,
                            (
                                (f"SEC_{side}", (a + 1, x)),
                                (f"{child}_{side}", (x, b, c, y)),
                                (f"SEC_{side}", (y, d - 1)),
                            ),
                        )
                    )
        return out

    def _p_G(self, side, a, b, c, d):
        return self._gap(side, a, b, c, d, "GStar")

    def _p_GStar(self, side, a, b, c, d):
        return self._gap(side, a, b, c, d, "GStar")

    def _p_V(self, side, i, j, h, l):
        """Gap structure with secondary structures in its two inner holes."""
        out = []
        for i1 in range(i + 1, j + 1):
            for h1 in range(h, l):
                if self._e(side, i, l - 1) is None or self._e(side, i1 - 1, h1) is None:
                    continue
                out.append(
                    Prod(
                        0.0,
                        0,
                        (),
                        (
                            (f"G_{side}", (i, i1, h1, l)),
                            (f"SEC_{side}", (i1, j)),
                            (f"SEC_{side}", (h, h1)),
                        ),
                    )
                )
        return out

    # ------------------------------------------------------------------
    # hybrids and exterior classes

    def _ext(self, r, s):
        return self.t.ext[r][s]

    def _hy(self, i, j, h, l):
        if not (i < j and h < l):
            return []
        e = self._ext(i, l - 1)
        if e is None:
            return []
        arc = ((self.t.glued("R", i), self.t.glued("S", l - 1)),)
        out = []
        if j == i + 1 and l == h + 1:
            out.append(Prod(e, 0, arc, ()))
        for i1 in range(i + 1, j):
            for l1 in range(h + 1, l):
                if self._ext(i1, l1 - 1) is None:
                    continue
                bonus = self.model.stack_exterior if (i1 == i + 1 and l1 == l - 1) else 0.0
                out.append(
                    Prod(e + bonus, (i1 - i - 1) + (l - 1 - l1), arc, (("HyStar", (i1, j, h, l1)),))
                )
        return out

    def _p_Hy(self, i, j, h, l):
        return self._hy(i, j, h, l)

    def _p_HyStar(self, i, j, h, l):
        return self._hy(i, j, h, l)

    def _hy_ok(self, i, j, h, l):
        return i < j and h < l and self._ext(i, l - 1) is not None and self._ext(j - 1, h) is not None

    def _p_Hs(self, i, j, h, l):
        out = []
        if self._hy_ok(i, j, h, l):
            out.append(Prod(0.0, 0, (), (("Hy", (i, j, h, l)),)))
        for i1 in range(i + 1, j):
            for l1 in range(h + 1, l):
                if self._hy_ok(i, i1, l1, l):
                    out.append(Prod(0.0, 0, (), (("Hy", (i, i1, l1, l)), ("HsL", (i1, j, h, l1)))))
        return out

    def _p_HsL(self, i1, j, h, l1):
        """Non-empty loop R[i1,i2) x S[l2,l1) followed by the rest of the class."""
        out = []
        for i2 in range(i1, j):
            for l2 in range(h + 1, l1 + 1):
                rest = ("Hs", (i2, j, h, l2))
                if i2 > i1:
                    out.append(Prod(0.0, 0, (), (("SECP_R", (i1, i2)), ("SEC_S", (l2, l1)), rest)))
                if l1 > l2:
                    out.append(Prod(0.0, i2 - i1, (), (("SECP_S", (l2, l1)), rest)))
        return out

    # ------------------------------------------------------------------
    # tight structures

    def _p_U(self, i, j, h, l):
        out = []
        for i1 in range(i + 1, j + 1):
            for h1 in range(h + 1, l + 1):
                out.append(
                    Prod(0.0, 0, (), (("Hs", (i, i1, h, h1)), ("SEC_R", (i1, j)), ("SEC_S", (h1, l))))
                )
        return out

    def _p_X(self, i, j, h, l):
        out = []
        for x in range(i + 1, j):
            for y in range(h + 1, l):
                out.append(Prod(0.0, 0, (), (("U", (i, x, h, y)), ("Hs", (x, j, y, l)))))
        return out

    def _wrap_r(self, i, j, h, l, core):
        out = []
        for i1 in range(i + 1, j):
            for j1 in range(i1 + 1, j):
                out.append(Prod(0.0, 0, (), (("V_R", (i, i1, j1, j)), (core, (i1, j1, h, l)))))
        return out

    def _p_W(self, i, j, h, l):
        return self._wrap_r(i, j, h, l, "Hs")

    def _p_Y(self, i, j, h, l):
        return self._wrap_r(i, j, h, l, "X")

    def _p_T(self, i, j, h, l):
        out = [Prod(0.0, 0, (), ((core, (i, j, h, l)),)) for core in ("X", "W", "Y")]
        for h1 in range(h + 1, l):
            for l1 in range(h1 + 1, l):
                for core in ("Hs", "X", "W", "Y"):
                    out.append(Prod(0.0, 0, (), (("V_S", (h, h1, l1, l)), (core, (i, j, h1, l1)))))
        return out

    # ------------------------------------------------------------------
    # layered interaction structures

    def _p_PTt(self, i, j, h, l):
        return [
            Prod(0.0, 0, (), (("I", (i, k1, k2, l)), ("T", (k1, j, h, k2))))
            for k1 in range(i, j)
            for k2 in range(h + 1, l + 1)
        ]

    def _p_PTh(self, i, j, h, l):
        return [
            Prod(0.0, 0, (), (("INH", (i, k1, k2, l)), ("Hy", (k1, j, h, k2))))
            for k1 in range(i, j)
            for k2 in range(h + 1, l + 1)
            if self._hy_ok(k1, j, h, k2)
        ]

    def _p_PT(self, i, j, h, l):
        return [Prod(0.0, 0, (), ((s, (i, j, h, l)),)) for s in ("PTt", "PTh")]

    def _layers(self, i, j, h, l, strict_after_hybrid):
        out = [Prod(0.0, 0, (), (("SEC_R", (i, j)), ("SEC_S", (h, l))))]
        for j1 in range(i + 1, j + 1):
            for h1 in range(h, l):
                out.append(
                    Prod(0.0, 0, (), (("PTt", (i, j1, h1, l)), ("SEC_R", (j1, j)), ("SEC_S", (h, h1))))
                )
                if not strict_after_hybrid:
                    out.append(
                        Prod(0.0, 0, (), (("PTh", (i, j1, h1, l)), ("SEC_R", (j1, j)), ("SEC_S", (h, h1))))
                    )
                    continue
                if j > j1:
                    out.append(
                        Prod(0.0, 0, (), (("PTh", (i, j1, h1, l)), ("SECP_R", (j1, j)), ("SEC_S", (h, h1))))
                    )
                if h1 > h:
                    out.append(Prod(0.0, j - j1, (), (("PTh", (i, j1, h1, l)), ("SECP_S", (h, h1)))))
        return out

    def _p_I(self, i, j, h, l):
        return self._layers(i, j, h, l, False)

    def _p_INH(self, i, j, h, l):
        return self._layers(i, j, h, l, True)
