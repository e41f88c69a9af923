"""Buckingham-Coulomb parameters that pin a pair energy to a chosen value."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

from .core import INF, ForceField, PairTable, pair_key
from .errors import DuplicatePairError


@dataclass(frozen=True)
class SynthesisRequest:
    target: float
    distance: float
    qi: int
    qj: int

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance!r}")
        if self.qi == 0 or self.qj == 0:
            raise ValueError("charges must be non-zero")
        if not math.isfinite(self.target):
            raise ValueError("only finite targets can be synthesized")


def synthesize_bc_params(req: SynthesisRequest) -> ForceField:
    """Return (A, B=0, C) so that U_BC(req.distance) == req.target.

    With B = 0 the potential reduces to ``A - C/r**6 + qq/r``. The Coulomb
    term is cancelled through C when the charges repel and through A when
    they attract; the target then goes into A (positive) or C (non-positive).
    """
    a, r = float(req.target), float(req.distance)
    qq = req.qi * req.qj
    if a > 0:
        if qq > 0:
            return ForceField(a=a, b=0.0, c=qq * r**5)
        return ForceField(a=a + abs(qq) / r, b=0.0, c=0.0)
    if qq > 0:
        return ForceField(a=0.0, b=0.0, c=abs(a) * r**6 + qq * r**5)
    return ForceField(a=abs(qq) / r, b=0.0, c=abs(a) * r**6)


def build_pair_table(entries: Iterable[Tuple[Tuple[int, int], float]]) -> PairTable:
    """Build a :class:`PairTable`; ``inf`` targets become forbidden pairs.

    Coverage of every ion pair is checked later, when the table is attached
    to a :class:`~charge_removal.core.CrystalGraph`.
    """
    table = {}
    for (i, j), e in entries:
        key = pair_key(i, j)
        if key in table:
            raise DuplicatePairError(f"pair {key} listed twice")
        e = float(e)
        table[key] = INF if e == INF else e
    return PairTable(table)
