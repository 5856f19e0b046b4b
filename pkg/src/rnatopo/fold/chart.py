"""Reference evaluation of the grammar in any semiring.

Blocks are evaluated lazily from the root; children always finish before
their parents, so ``order`` is a valid bottom-up order for the outside pass.
This path is exact and simple.  It is used as the ground truth for the
vectorised tables and directly for short sequences.
"""

from __future__ import annotations

from .grammar import Block, Grammar, Prod
from .semiring import Semiring


class Chart:
    def __init__(self, grammar: Grammar, semiring: Semiring):
        self.g = grammar
        self.sr = semiring
        self.value: dict[Block, object] = {}
        self.order: list[Block] = []

    def prod_weight(self, p: Prod):
        sr = self.sr
        w = sr.weight(p.energy, len(p.arcs), p.unpaired)
        for c in p.children:
            w = sr.mul(w, self.value[c])
        return w

    def inside(self, block: Block | None = None):
        block = block or self.g.root
        if block in self.value:
            return self.value[block]
        stack = [block]
        while stack:
            b = stack[-1]
            if b in self.value:
                stack.pop()
                continue
            todo = [
                c for p in self.g.productions(b) for c in p.children if c not in self.value
            ]
            if todo:
                stack.extend(todo)
                continue
            stack.pop()
            acc = self.sr.zero
            for p in self.g.productions(b):
                acc = self.sr.add(acc, self.prod_weight(p))
            self.value[b] = acc
            self.order.append(b)
        return self.value[block]

    def reachable(self) -> list[Block]:
        """Blocks reachable from the root through non-zero productions,
        children before parents."""
        root = self.g.root
        expanded: set[Block] = set()
        order: list[Block] = []
        stack = [(root, False)]
        while stack:
            b, done = stack.pop()
            if done:
                order.append(b)
                continue
            if b in expanded:
                continue
            expanded.add(b)
            stack.append((b, True))
            for p in self.g.productions(b):
                if self.sr.is_zero(self.prod_weight(p)):
                    continue
                stack.extend((c, False) for c in p.children if c not in expanded)
        return order

    def outside(self) -> dict[Block, float]:
        """Outside values (sum-product semirings only)."""
        root = self.g.root
        self.inside(root)
        order = self.order if self.order else self.reachable()
        out: dict[Block, float] = {root: self.sr.one}
        for b in reversed(order):
            ob = out.get(b)
            if not ob:
                continue
            for p in self.g.productions(b):
                base = self.sr.weight(p.energy, len(p.arcs), p.unpaired)
                kids = p.children
                for x, c in enumerate(kids):
                    w = ob * base
                    for y, c2 in enumerate(kids):
                        if y != x:
                            w *= self.value[c2]
                    if w:
                        out[c] = out.get(c, 0.0) + w
        return out
