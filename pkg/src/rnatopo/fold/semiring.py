"""Semirings used to evaluate the grammar.

A production contributes ``weight(energy) * unpaired**k * prod(children)``.
Energies are the summed arc energies (plus stacking bonuses) introduced by the
production itself; ``k`` counts vertices it leaves unpaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class Semiring:
    name = "abstract"
    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def weight(self, energy: float, n_arcs: int, n_unpaired: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero


class CountSemiring(Semiring):
    """Arbitrary-precision structure counting."""

    name = "count"
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def weight(self, energy, n_arcs, n_unpaired):
        return 1


class MinPlusSemiring(Semiring):
    """Minimum free energy."""

    name = "mfe"
    zero = math.inf
    one = 0.0

    def add(self, a, b):
        return a if a <= b else b

    def mul(self, a, b):
        return a + b

    def weight(self, energy, n_arcs, n_unpaired):
        return energy


@dataclass
class BoltzmannSemiring(Semiring):
    """Sum-product over Boltzmann weights.

    ``scale`` multiplies the weight of every vertex (paired or not); the true
    partition function is the computed value divided by ``scale ** n``.  A
    value below one keeps long sequences with strong pairs representable.
    """

    rt: float = 0.6
    scale: float = 1.0
    name = "partition"
    zero = 0.0
    one = 1.0

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def weight(self, energy, n_arcs, n_unpaired):
        return math.exp(-energy / self.rt) * self.scale ** (2 * n_arcs + n_unpaired)


COUNT = CountSemiring()
MFE = MinPlusSemiring()
