"""Public folding API: counting, MFE, partition function, probabilities, sampling."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..diagram import Arc, ArcKind, InvalidAlphabet, SequencePair, render_structure, two_backbones
from ..energy import EnergyModel, structure_energy
from .chart import Chart
from .grammar import Block, Grammar
from .kernel import fill_mixed, fill_side
from .semiring import COUNT, MFE, BoltzmannSemiring, Semiring

DEFAULT_LENGTH_CAP = 120


class LengthCap(ValueError):
    """Sequence pair exceeds the configured length cap."""


class RequiresPartitionTables(ValueError):
    """Operation needs tables filled in the Boltzmann semiring."""


class Overflow(ArithmeticError):
    """Boltzmann weights left the double-precision range; pass a smaller ``scale``."""


@dataclass
class InteractionStructure:
    n_r: int
    n_s: int
    arcs: tuple[Arc, ...]  # glued 1-based
    energy: float
    probability: Optional[float] = None

    @property
    def diagram(self):
        return two_backbones(self.n_r, self.n_s, self.arcs)

    def kinds(self) -> dict[Arc, ArcKind]:
        d = self.diagram
        return {a: d.arc_kind(a) for a in self.arcs}

    def dot_bracket(self) -> str:
        return render_structure(self.diagram)

    def to_json(self) -> dict:
        kinds = self.kinds()
        out = {
            "structure": self.dot_bracket(),
            "energy": self.energy,
            "arcs": [[i, j, kinds[(i, j)].value] for i, j in self.arcs],
        }
        if self.probability is not None:
            out["probability"] = self.probability
        return out


# ----------------------------------------------------------------------
# table storage


_MIXED = ("Hy", "Hs", "HsL", "U", "X", "W", "Y", "T", "PTt", "PTh", "PT", "INH", "I")
_ALIAS = {"HyStar": "Hy", "GStar": "G"}


@dataclass
class DPState:
    """Filled tables for one sequence pair in one semiring."""

    pair: SequencePair
    model: EnergyModel
    semiring: Semiring
    tables: dict[str, np.ndarray] = field(repr=False)
    grammar: Grammar = field(repr=False)

    def __getitem__(self, block: Block):
        sym, idx = block
        sym = _ALIAS.get(sym, sym)
        base, _, side = sym.partition("_")
        side = _ALIAS.get(side, side)
        if base in _ALIAS:
            base = _ALIAS[base]
        key = f"{base}_{side}" if side else base
        x = self.tables[key][idx]
        return x.item() if hasattr(x, "item") else x

    def __contains__(self, block) -> bool:
        return True

    def get(self, block, default=None):
        return self[block]

    @property
    def root(self):
        return self[self.grammar.root]

    def dimensions(self) -> dict[str, tuple]:
        return {k: v.shape for k, v in self.tables.items()}

    def chart(self) -> Chart:
        c = Chart(self.grammar, self.semiring)
        c.value = self  # read-only view over the tables
        return c


def _validate(pair: SequencePair, cap: int) -> None:
    if len(pair.r) + len(pair.s) > cap:
        raise LengthCap(f"{len(pair.r)}+{len(pair.s)} nucleotides exceeds the cap of {cap}")


def _weights(g: Grammar, sr: Semiring, dtype, mode: int, p: int):
    t = g.t
    zero = sr.zero if mode != 2 else 0
    one = sr.one if mode != 2 else 1

    def conv(x):
        return x % p if mode == 2 else x

    def arcw(table, rows, cols):
        w = np.full((max(rows, 1), max(cols, 1)), zero, dtype=dtype)
        v = np.zeros((max(rows, 1), max(cols, 1)), dtype=np.bool_)
        for a in range(rows):
            for b in range(cols):
                e = table[a][b]
                if e is not None:
                    w[a, b] = conv(sr.weight(e, 1, 0))
                    v[a, b] = True
        return w, v

    n = len(t.pair.r) + len(t.pair.s)
    upow = np.array([conv(sr.weight(0.0, 0, k)) for k in range(n + 2)], dtype=dtype)
    return {
        "R": arcw(t.side["R"], t.n_r, t.n_r),
        "S": arcw(t.side["S"], t.n_s, t.n_s),
        "X": arcw(t.ext, t.n_r, t.n_s),
        "st_int": conv(sr.weight(g.model.stack_interior, 0, 0)),
        "st_ext": conv(sr.weight(g.model.stack_exterior, 0, 0)),
        "upow": upow,
        "zero": zero,
        "one": one,
    }


def _fill(g: Grammar, sr: Semiring, mode: int, dtype, p: int = 1) -> dict[str, np.ndarray]:
    w = _weights(g, sr, dtype, mode, p)
    out = {}
    for side, n in (("R", g.n_r), ("S", g.n_s)):
        wt, vt = w[side]
        sec, secn, pair, secp, gap, v = fill_side(
            mode, p, n, wt, vt, dtype(w["st_int"]), w["upow"], dtype(w["zero"]), dtype(w["one"])
        )
        out.update({f"SEC_{side}": sec, f"SECN_{side}": secn, f"PAIR_{side}": pair,
                    f"SECP_{side}": secp, f"G_{side}": gap, f"V_{side}": v})
    wx, vx = w["X"]
    mixed = fill_mixed(
        mode, p, g.n_r, g.n_s, wx, vx, dtype(w["st_ext"]), w["upow"], dtype(w["zero"]), dtype(w["one"]),
        out["SEC_R"], out["SECP_R"], out["V_R"], out["SEC_S"], out["SECP_S"], out["V_S"],
    )
    out.update(dict(zip(_MIXED, mixed)))
    return out


def _primes(count: int) -> list[int]:
    out, c = [], (1 << 31) - 1
    while len(out) < count:
        if all(c % d for d in range(3, int(c ** 0.5) + 1, 2)):
            out.append(c)
        c -= 2
    return out


class _CRTTable:
    """Exact counts rebuilt on access from residues modulo several primes."""

    def __init__(self, residues: list[np.ndarray], primes: list[int]):
        self.residues = residues
        self.primes = primes
        self.modulus = math.prod(primes)
        self.coef = [(self.modulus // p) * pow(self.modulus // p, -1, p) for p in primes]
        self.shape = residues[0].shape

    def __getitem__(self, idx) -> int:
        return sum(int(r[idx]) * c for r, c in zip(self.residues, self.coef)) % self.modulus


def fill_tables(pair: SequencePair, model: Optional[EnergyModel] = None, semiring: str = "partition",
                scale: float = 1.0, length_cap: int = DEFAULT_LENGTH_CAP) -> DPState:
    """Fill every table for ``pair`` in the ``count``, ``mfe`` or ``partition`` semiring."""
    model = model or EnergyModel()
    if not isinstance(pair, SequencePair):
        raise InvalidAlphabet("expected a SequencePair")
    _validate(pair, length_cap)
    g = Grammar(pair, model)
    if semiring == "partition":
        sr = BoltzmannSemiring(model.rt, scale)
        tables = _fill(g, sr, 0, np.float64)
        root = tables["I"][0, g.n_r, 0, g.n_s]
        if not math.isfinite(root):
            raise Overflow("partition function overflowed; retry with scale < 1")
        return DPState(pair, model, sr, tables, g)
    if semiring == "mfe":
        return DPState(pair, model, MFE, _fill(g, MFE, 1, np.float64), g)
    if semiring == "count":
        return DPState(pair, model, COUNT, _count_tables(g), g)
    raise ValueError(f"unknown semiring {semiring!r}")


def _count_tables(g: Grammar) -> dict[str, _CRTTable]:
    approx = _fill(g, COUNT, 0, np.float64)
    top = max(float(np.max(a)) for a in approx.values())
    bits = (math.log2(top) if math.isfinite(top) and top > 0 else 4 * (g.n_r + g.n_s + 1) ** 1.5) + 8
    primes = _primes(max(1, math.ceil(bits / 30)))
    residues = [_fill(g, COUNT, 2, np.int64, p) for p in primes]
    return {key: _CRTTable([r[key] for r in residues], primes) for key in residues[0]}


# ----------------------------------------------------------------------
# operations


def count_structures(pair: SequencePair, model: Optional[EnergyModel] = None, **kw) -> int:
    return int(fill_tables(pair, model, "count", **kw).root)


def partition_function(pair: SequencePair, model: Optional[EnergyModel] = None, scale: float = 1.0,
                       **kw) -> float:
    st = fill_tables(pair, model, "partition", scale=scale, **kw)
    return st.root / scale ** (len(pair.r) + len(pair.s))


def _structure(st: DPState, arcs) -> InteractionStructure:
    arcs = tuple(sorted(arcs))
    e = structure_energy(st.pair.glued, len(st.pair.r), arcs, st.model)
    return InteractionStructure(len(st.pair.r), len(st.pair.s), arcs, e)


def traceback(st: DPState) -> InteractionStructure:
    """Optimal structure from min-plus tables; ties go to the first production."""
    if st.semiring is not MFE:
        raise ValueError("traceback needs min-plus tables")
    chart = st.chart()
    arcs: list[Arc] = []
    todo = [st.grammar.root]
    while todo:
        b = todo.pop()
        target = st[b]
        for p in st.grammar.productions(b):
            w = chart.prod_weight(p)
            if math.isclose(w, target, rel_tol=1e-12, abs_tol=1e-9):
                arcs.extend(p.arcs)
                todo.extend(reversed(p.children))
                break
        else:  # pragma: no cover - tables and productions disagree
            raise RuntimeError(f"no production reproduces {b}")
    return _structure(st, arcs)


def mfe(pair: SequencePair, model: Optional[EnergyModel] = None, **kw) -> tuple[float, InteractionStructure]:
    st = fill_tables(pair, model, "mfe", **kw)
    s = traceback(st)
    return st.root, s


def _require_partition(st) -> BoltzmannSemiring:
    if not isinstance(st, DPState) or not isinstance(st.semiring, BoltzmannSemiring):
        raise RequiresPartitionTables("fill the tables with the partition semiring first")
    return st.semiring


def boltzmann_sample(st_or_pair, model: Optional[EnergyModel] = None, k: int = 1,
                     seed: Optional[int] = None) -> list[InteractionStructure]:
    """Stochastic traceback: a stack of pending blocks is expanded by choosing
    each production with probability proportional to its weight."""
    if isinstance(st_or_pair, SequencePair):
        st = fill_tables(st_or_pair, model, "partition")
    else:
        st = st_or_pair
    _require_partition(st)
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = random.Random(seed)
    chart = st.chart()
    cache: dict[Block, tuple[list, list]] = {}
    q = st.root
    out = []
    for _ in range(k):
        stack = [st.grammar.root]
        pairs: list[Arc] = []
        while stack:
            b = stack.pop()
            if b not in cache:
                prods = [p for p in st.grammar.productions(b)]
                ws = [chart.prod_weight(p) for p in prods]
                cum, acc = [], 0.0
                for w in ws:
                    acc += w
                    cum.append(acc)
                cache[b] = (prods, cum)
            prods, cum = cache[b]
            x = rng.random() * cum[-1]
            pick = next((n for n, c in enumerate(cum) if x < c), len(cum) - 1)
            p = prods[pick]
            pairs.extend(p.arcs)
            stack.extend(p.children)
        s = _structure(st, pairs)
        s.probability = math.exp(-s.energy / st.model.rt) * st.semiring.scale ** (
            len(st.pair.r) + len(st.pair.s)) / q
        out.append(s)
    return out
