"""Coulomb-only instances from 0/1 knapsack, and decoding removals into packings."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import List, Tuple

from .clique import ReductionOutput
from .core import Coulomb, CrystalGraph, Ion
from .errors import TriviallySatisfiable
from .verification import RemovalInstance, RemovalSolution, Variant

PRECISION_GAP = 0.5


class HalfPairWarning(UserWarning):
    """A removal kept one ion of an item and dropped the other."""


@dataclass(frozen=True)
class KnapsackInstance:
    items: Tuple[Tuple[int, int], ...]
    capacity: int
    goal_value: int = 0

    def __post_init__(self):
        items = tuple((int(w), int(p)) for w, p in self.items)
        if any(w < 1 or p < 1 for w, p in items):
            raise ValueError("item weights and values must be positive integers")
        object.__setattr__(self, "items", items)
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")

    @property
    def total_weight(self) -> int:
        return sum(w for w, _ in self.items)


@dataclass(frozen=True)
class KnapsackReductionNotes:
    u: float
    alpha: float
    k: int
    goal_energy: float
    alpha_bound: float
    distances: Tuple[float, ...]
    spacing: float


def reduce_knapsack(inst: KnapsackInstance) -> Tuple[ReductionOutput, KnapsackReductionNotes]:
    """At-least-k Coulomb instance whose goal -g + u is met iff a packing reaches value g.

    Item i becomes charges +w_i / -w_i a vertical distance w_i^2/p_i apart,
    so the pair energy is exactly -p_i. Items sit on the x-axis far enough
    apart that all cross-item energy together stays below u.
    """
    items = inst.items
    n = len(items)
    if n == 0 or inst.capacity >= inst.total_weight:
        raise TriviallySatisfiable("every item fits; the packing of all items is optimal")
    w_max = max(w for w, _ in items)
    u = PRECISION_GAP
    alpha_bound = 4.0 * n * n * w_max * w_max
    alpha = alpha_bound / u + 1.0
    distances = tuple(w * w / p for w, p in items)
    spacing = alpha + max(distances)

    ions: List[Ion] = []
    for i, (w, _) in enumerate(items):
        ions.append(Ion(i, f"item{i}+", w, (i * spacing, 0.0, 0.0), f"item{i}"))
    for i, (w, _) in enumerate(items):
        ions.append(Ion(n + i, f"item{i}-", -w, (i * spacing, 0.0, distances[i]), f"item{i}"))
    graph = CrystalGraph(tuple(ions), Coulomb())

    k = inst.total_weight - inst.capacity
    goal = -float(inst.goal_value) + u
    rinst = RemovalInstance(graph, Variant.AT_LEAST_K, k, goal)
    notes = KnapsackReductionNotes(u, alpha, k, goal, alpha_bound, distances, spacing)
    decode = {a: a % n for a in range(2 * n)}
    meta = {
        "items": [list(it) for it in items],
        "capacity": inst.capacity,
        "goal_value": inst.goal_value,
        "u": u,
        "alpha": alpha,
        "alpha_bound": alpha_bound,
        "k": k,
        "goal_energy": goal,
        "distances": list(distances),
        "spacing": spacing,
    }
    return ReductionOutput(rinst, decode, meta), notes


@dataclass(frozen=True)
class Packing:
    items: Tuple[int, ...]
    weight: int
    value: int
    half_pairs: Tuple[int, ...] = ()


def decode_packing(out: ReductionOutput, sol: RemovalSolution) -> Packing:
    """Items whose two ions both survive the removal."""
    items = [tuple(it) for it in out.notes["items"]]
    g = out.instance.graph
    survivors = {i: 0 for i in range(len(items))}
    for ion in g.ions:
        if ion.id not in sol.removed:
            survivors[out.decode[ion.id]] += 1
    kept = tuple(i for i, c in survivors.items() if c == 2)
    half = tuple(i for i, c in survivors.items() if c == 1)
    if half:
        warnings.warn(f"half-pairs kept for items {list(half)}", HalfPairWarning, stacklevel=2)
    return Packing(
        kept,
        sum(items[i][0] for i in kept),
        sum(items[i][1] for i in kept),
        half,
    )


def cross_item_leakage(out: ReductionOutput) -> float:
    """Sum of |U| over every ion pair belonging to different items."""
    g = out.instance.graph
    m = g.energy_matrix
    total = 0.0
    for a, b in itertools.combinations(range(len(g.ions)), 2):
        if out.decode[g.ions[a].id] != out.decode[g.ions[b].id]:
            total += abs(m[a, b])
    return total


def within_pair_energies(out: ReductionOutput) -> List[float]:
    g = out.instance.graph
    n = len(g.ions) // 2
    return [float(g.energy_matrix[i, n + i]) for i in range(n)]
