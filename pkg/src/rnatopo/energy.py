"""Arc-additive energy model shared by the fold engine and the oracle."""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

from .diagram import PAIRS

ENV_CONFIG = "RNATOPO_ENERGY_CONFIG"

# pair family per canonical pair
_FAMILY = {"GC": "GC", "CG": "GC", "AU": "AU", "UA": "AU", "GU": "GU", "UG": "GU"}


def _defaults() -> dict[str, float]:
    return {"GC": -3.0, "AU": -2.0, "GU": -1.0}


@dataclass(frozen=True)
class EnergyModel:
    """Energies in kcal/mol.

    ``interior``/``exterior`` map a pair family (``GC``, ``AU``, ``GU``) to the
    energy of one arc; ``stack_*`` is added once for every pair of adjacent
    parallel arcs ``(i, j), (i+1, j-1)`` of the same kind.  Interior arcs need
    at least ``theta`` unpaired vertices between their ends.
    """

    interior: dict = field(default_factory=_defaults)
    exterior: dict = field(default_factory=_defaults)
    stack_interior: float = 0.0
    stack_exterior: float = 0.0
    rt: float = 0.6
    theta: int = 3

    def __post_init__(self):
        for table in (self.interior, self.exterior):
            if set(table) != {"GC", "AU", "GU"}:
                raise ValueError(f"energy table needs keys GC, AU, GU: {table}")
            if not all(math.isfinite(v) for v in table.values()):
                raise ValueError("energies must be finite")
        if not self.rt > 0:
            raise ValueError("RT must be positive")
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if not (math.isfinite(self.stack_interior) and math.isfinite(self.stack_exterior)):
            raise ValueError("stacking bonus must be finite")

    def pair_energy(self, x: str, y: str, exterior: bool) -> Optional[float]:
        """Energy of pairing nucleotides ``x`` and ``y``; ``None`` if they cannot pair."""
        fam = _FAMILY.get(x + y)
        if fam is None:
            return None
        return (self.exterior if exterior else self.interior)[fam]

    @classmethod
    def uniform(cls, value: float = 0.0, **kw) -> "EnergyModel":
        e = {k: value for k in ("GC", "AU", "GU")}
        return cls(interior=dict(e), exterior=dict(e), **kw)

    def with_(self, **kw) -> "EnergyModel":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return {
            "interior": dict(self.interior),
            "exterior": dict(self.exterior),
            "stack_interior": self.stack_interior,
            "stack_exterior": self.stack_exterior,
            "rt": self.rt,
            "theta": self.theta,
        }


def load_energy_config(path: Optional[str] = None) -> EnergyModel:
    """Read an ``[energy]`` key-value file.

    Recognised keys: ``interior_GC``, ``interior_AU``, ``interior_GU``,
    ``exterior_GC``, ``exterior_AU``, ``exterior_GU``, ``stack_interior``,
    ``stack_exterior``, ``RT``, ``theta``.  Missing keys keep their defaults.
    Without ``path`` the ``RNATOPO_ENERGY_CONFIG`` variable is consulted.
    """
    path = path or os.environ.get(ENV_CONFIG)
    if not path:
        return EnergyModel()
    cp = configparser.ConfigParser()
    cp.optionxform = str
    with open(path) as fh:
        text = fh.read()
    if not text.lstrip().startswith("["):
        text = "[energy]\n" + text
    cp.read_string(text)
    sec = cp["energy"]
    interior, exterior = _defaults(), _defaults()
    for fam in ("GC", "AU", "GU"):
        if f"interior_{fam}" in sec:
            interior[fam] = sec.getfloat(f"interior_{fam}")
        if f"exterior_{fam}" in sec:
            exterior[fam] = sec.getfloat(f"exterior_{fam}")
    known = {f"{side}_{fam}" for side in ("interior", "exterior") for fam in ("GC", "AU", "GU")}
    known |= {"stack_interior", "stack_exterior", "RT", "theta"}
    unknown = set(sec) - known
    if unknown:
        raise ValueError(f"unknown energy keys: {sorted(unknown)}")
    return EnergyModel(
        interior=interior,
        exterior=exterior,
        stack_interior=sec.getfloat("stack_interior", 0.0),
        stack_exterior=sec.getfloat("stack_exterior", 0.0),
        rt=sec.getfloat("RT", 0.6),
        theta=sec.getint("theta", 3),
    )


def structure_energy(seq: str, n_r: int, arcs, model: EnergyModel) -> float:
    """Energy of a structure given as 1-based arcs over the glued sequence."""
    arcset = set(arcs)
    total = 0.0
    for i, j in arcset:
        ext = i <= n_r < j
        e = model.pair_energy(seq[i - 1], seq[j - 1], ext)
        if e is None:
            raise ValueError(f"arc ({i},{j}) is not a valid pair")
        total += e
        inner = (i + 1, j - 1)
        if inner in arcset and inner[0] < inner[1]:
            inner_ext = inner[0] <= n_r < inner[1]
            same_side = (i <= n_r) == (i + 1 <= n_r) and (j <= n_r) == (j - 1 <= n_r)
            if inner_ext == ext and same_side:
                total += model.stack_exterior if ext else model.stack_interior
    return total


__all__ = ["EnergyModel", "load_energy_config", "structure_energy", "ENV_CONFIG", "PAIRS"]
