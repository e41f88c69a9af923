"""Ions, crystal graphs and pairwise energy evaluation.

Energies are extended reals: IEEE ``float`` with ``math.inf`` standing for a
forbidden pair. ``inf`` is absorbing under addition because no term is ever
``-inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Tuple, Union

import numpy as np

from .errors import (
    InvalidGraphError,
    MissingForceFieldError,
    UnknownIonError,
)

INF = math.inf
EPS = 1e-9

Position = Tuple[float, float, float]


@dataclass(frozen=True)
class Ion:
    id: int
    species: str
    charge: int
    position: Position
    label: Optional[str] = None

    def __post_init__(self):
        if int(self.charge) != self.charge:
            raise InvalidGraphError(f"ion {self.id}: charge must be an integer")
        if self.charge == 0:
            raise InvalidGraphError(f"ion {self.id}: charge must be non-zero")
        object.__setattr__(self, "charge", int(self.charge))
        object.__setattr__(self, "species", str(self.species))
        pos = tuple(float(x) for x in self.position)
        if len(pos) != 3:
            raise InvalidGraphError(f"ion {self.id}: position needs 3 coordinates")
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True)
class ForceField:
    """Buckingham parameters for one unordered species pair.

    ``log_a`` optionally mirrors ``log(a)`` so that ``a * exp(-b r)`` can be
    evaluated as ``exp(log_a - b r)`` when ``a`` itself would overflow.
    """

    a: float
    b: float
    c: float
    log_a: Optional[float] = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not v >= 0:
                raise InvalidGraphError(f"force field parameter {name}={v!r} must be >= 0")

    def repulsion(self, r: float) -> float:
        if self.log_a is not None:
            return math.exp(self.log_a - self.b * r)
        if self.a == 0.0:
            return 0.0
        return self.a * math.exp(-self.b * r)

    def buckingham(self, r: float) -> float:
        return self.repulsion(r) - self.c / r**6


def species_key(s1: str, s2: str) -> Tuple[str, str]:
    s1, s2 = str(s1), str(s2)
    return (s1, s2) if s1 <= s2 else (s2, s1)


def pair_key(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Coulomb:
    kind = "coulomb"


@dataclass(frozen=True)
class BuckinghamCoulomb:
    fields: Mapping[Tuple[str, str], ForceField]
    kind = "buckingham_coulomb"

    def __post_init__(self):
        table = {}
        for (s1, s2), ff in dict(self.fields).items():
            key = species_key(s1, s2)
            if key in table and table[key] != ff:
                raise InvalidGraphError(f"conflicting force fields for species pair {key}")
            table[key] = ff
        object.__setattr__(self, "fields", MappingProxyType(table))

    def field_for(self, s1: str, s2: str) -> ForceField:
        try:
            return self.fields[species_key(s1, s2)]
        except KeyError:
            raise MissingForceFieldError(
                f"no force field for species pair {species_key(s1, s2)}"
            ) from None


@dataclass(frozen=True)
class PairTable:
    """Explicit energy per unordered ion-id pair; ``inf`` marks a forbidden pair."""

    pairs: Mapping[Tuple[int, int], float]
    kind = "pair_table"

    def __post_init__(self):
        table = {}
        for (i, j), e in dict(self.pairs).items():
            if i == j:
                raise InvalidGraphError(f"pair table entry ({i}, {j}) is a self-pair")
            e = float(e)
            if math.isnan(e) or e == -INF:
                raise InvalidGraphError(f"pair ({i}, {j}) energy {e!r} is not allowed")
            table[pair_key(int(i), int(j))] = e
        object.__setattr__(self, "pairs", MappingProxyType(table))


EnergySpec = Union[Coulomb, BuckinghamCoulomb, PairTable]


@dataclass(frozen=True)
class CrystalGraph:
    ions: Tuple[Ion, ...]
    energy: EnergySpec = field(default_factory=Coulomb)
    cell: Optional[Position] = None

    def __post_init__(self):
        ions = tuple(self.ions)
        object.__setattr__(self, "ions", ions)
        index = {}
        for k, ion in enumerate(ions):
            if ion.id in index:
                raise InvalidGraphError(f"duplicate ion id {ion.id}")
            index[ion.id] = k
        object.__setattr__(self, "_index", MappingProxyType(index))

        for a in range(len(ions)):
            for b in range(a + 1, len(ions)):
                if ions[a].position == ions[b].position:
                    raise InvalidGraphError(
                        f"ions {ions[a].id} and {ions[b].id} share a position"
                    )
        if self.cell is not None:
            cell = tuple(float(x) for x in self.cell)
            if len(cell) != 3 or any(not x > 0 for x in cell):
                raise InvalidGraphError("cell bounds must be three positive reals")
            object.__setattr__(self, "cell", cell)
            for ion in ions:
                if any(not 0 <= x <= lim for x, lim in zip(ion.position, cell)):
                    raise InvalidGraphError(f"ion {ion.id} lies outside the cell")

        total = sum(ion.charge for ion in ions)
        if total != 0:
            raise InvalidGraphError(f"graph is not neutral (total charge {total})")

        if isinstance(self.energy, BuckinghamCoulomb):
            for a in range(len(ions)):
                for b in range(a, len(ions)):
                    self.energy.field_for(ions[a].species, ions[b].species)
        elif isinstance(self.energy, PairTable):
            for a in range(len(ions)):
                for b in range(a + 1, len(ions)):
                    if pair_key(ions[a].id, ions[b].id) not in self.energy.pairs:
                        raise InvalidGraphError(
                            f"pair table has no entry for ions ({ions[a].id}, {ions[b].id})"
                        )
        elif not isinstance(self.energy, Coulomb):
            raise InvalidGraphError(f"unsupported energy spec {self.energy!r}")

    def __len__(self):
        return len(self.ions)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(ion.id for ion in self.ions)

    def index_of(self, ion_id: int) -> int:
        try:
            return self._index[ion_id]
        except KeyError:
            raise UnknownIonError(f"unknown ion id {ion_id!r}") from None

    def ion(self, ion_id: int) -> Ion:
        return self.ions[self.index_of(ion_id)]

    def distance(self, i: int, j: int) -> float:
        return math.dist(self.ion(i).position, self.ion(j).position)

    @cached_property
    def energy_matrix(self) -> np.ndarray:
        """Symmetric matrix of pairwise energies in ion order, zero diagonal."""
        n = len(self.ions)
        m = np.zeros((n, n))
        for a in range(n):
            for b in range(a + 1, n):
                m[a, b] = m[b, a] = _pair_energy(self, self.ions[a], self.ions[b])
        m.setflags(write=False)
        return m


def _pair_energy(g: CrystalGraph, x: Ion, y: Ion) -> float:
    spec = g.energy
    if isinstance(spec, PairTable):
        return spec.pairs[pair_key(x.id, y.id)]
    r = math.dist(x.position, y.position)
    coulomb = x.charge * y.charge / r
    if isinstance(spec, Coulomb):
        return coulomb
    return spec.field_for(x.species, y.species).buckingham(r) + coulomb


def pairwise_energy(g: CrystalGraph, i: int, j: int) -> float:
    """Energy U_ij between ions with ids ``i`` and ``j``."""
    if i == j:
        raise ValueError("pairwise energy needs two distinct ions")
    x, y = g.ion(i), g.ion(j)
    # evaluate in a fixed id order so U_ij and U_ji are bit-identical
    if x.id > y.id:
        x, y = y, x
    return _pair_energy(g, x, y)


def _sum_pairs(g: CrystalGraph, keep: Iterable[int]) -> float:
    idx = sorted(keep)
    m = g.energy_matrix
    terms = [m[a, b] for k, a in enumerate(idx) for b in idx[k + 1:]]
    if any(t == INF for t in terms):
        return INF
    return math.fsum(terms)


def total_energy(g: CrystalGraph) -> float:
    return _sum_pairs(g, range(len(g.ions)))


def remaining_energy(g: CrystalGraph, removed: Iterable[int]) -> float:
    """Energy of the subgraph induced on the ions not in ``removed``."""
    drop = {g.index_of(i) for i in removed}
    return _sum_pairs(g, (k for k in range(len(g.ions)) if k not in drop))
