"""Seeded instance generators and reduction round-trip checks.

Instance ``i`` of a suite seeded with ``seed`` draws from
``numpy.random.Generator(PCG64(SeedSequence([seed, i])))``, so any single
instance can be regenerated without replaying the ones before it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .clique import (
    clique_goal,
    embed_kcr_into_weighted_k_clique,
    reduce_clique_arbitrary_charges,
    reduce_clique_to_kcr,
)
from .core import Coulomb, CrystalGraph, Ion, PairTable
from .graphs import SimpleGraph
from .knapsack import KnapsackInstance, reduce_knapsack
from .penny import PennyRealization, build_two_plane_instance, validate_penny_realization
from .solvers import (
    brute_force_k_clique,
    brute_force_removal,
    independent_set_bf,
    knapsack_dp,
)
from .verification import RemovalInstance, Variant


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


@dataclass
class RoundTripReport:
    agree: int = 0
    disagree: int = 0
    checks: int = 0
    failures: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "agree": self.agree,
            "disagree": self.disagree,
            "checks": self.checks,
            "failures": self.failures,
        }

    def merge_instance(self, results: Sequence[Tuple[bool, Dict]]) -> None:
        """Count one instance; it agrees only if every one of its checks does."""
        self.checks += len(results)
        bad = [info for ok, info in results if not ok]
        if bad:
            self.disagree += 1
            self.failures.extend(bad)
        else:
            self.agree += 1


# ---- generators -------------------------------------------------------------

def random_graph(rng: np.random.Generator, n_max: int = 6, n_min: int = 1) -> SimpleGraph:
    n = int(rng.integers(n_min, n_max + 1))
    p = float(rng.uniform(0.2, 0.95))
    edges = frozenset(
        (a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p
    )
    return SimpleGraph(n, edges)


def all_graphs(n_max: int = 4) -> Iterator[SimpleGraph]:
    """Every labelled simple graph on 1..n_max vertices."""
    for n in range(1, n_max + 1):
        slots = list(itertools.combinations(range(n), 2))
        for bits in range(1 << len(slots)):
            yield SimpleGraph(n, frozenset(e for i, e in enumerate(slots) if bits >> i & 1))


def random_penny_realization(
    rng: np.random.Generator, max_pennies: int = 4, grid: int = 3
) -> PennyRealization:
    """Pennies of radius 1/2 on distinct points of a unit lattice (orthogonal realization)."""
    m = int(rng.integers(1, max_pennies + 1))
    cells = rng.choice(grid * grid, size=m, replace=False)
    centers = tuple((float(c % grid), float(c // grid)) for c in sorted(cells))
    return PennyRealization(centers, 0.5)


def random_knapsack(rng: np.random.Generator, n_max: int = 6, w_max: int = 9, p_max: int = 9) -> KnapsackInstance:
    while True:
        n = int(rng.integers(1, n_max + 1))
        items = tuple(
            (int(rng.integers(1, w_max + 1)), int(rng.integers(1, p_max + 1))) for _ in range(n)
        )
        total_w = sum(w for w, _ in items)
        if total_w >= 2:
            break
    capacity = int(rng.integers(1, total_w))
    goal = int(rng.integers(0, sum(p for _, p in items) + 2))
    return KnapsackInstance(items, capacity, goal)


def random_balanced_instance(
    rng: np.random.Generator, per_side: int, c: int = 1, coulomb: bool = False
) -> CrystalGraph:
    """``per_side`` ions of charge +c and as many of -c, random finite energies."""
    ions = []
    taken = set()
    for i in range(2 * per_side):
        while True:
            pos = tuple(float(x) for x in rng.integers(0, 6, size=3))
            if pos not in taken:
                break
        taken.add(pos)
        q = c if i < per_side else -c
        ions.append(Ion(i, f"s{i}", q, pos))
    if coulomb:
        return CrystalGraph(tuple(ions), Coulomb())
    table = {
        (a, b): float(np.round(rng.uniform(-5.0, 5.0), 6))
        for a, b in itertools.combinations(range(2 * per_side), 2)
    }
    return CrystalGraph(tuple(ions), PairTable(table))


# ---- individual checks -----------------------------------------------------

def clique_check(g: SimpleGraph, k: int, c: int, tol: float = 1e-9) -> Tuple[bool, Dict]:
    expected = brute_force_k_clique(g, k) is not None
    out = reduce_clique_to_kcr(g, k, c)
    res = brute_force_removal(out.instance)
    got = res.meets(clique_goal(k), tol)
    return expected == got, _info(g, k, expected, got, c=c, optimum=res.energy)


def arbitrary_charge_check(g: SimpleGraph, k: int, charges: Sequence[int]) -> Tuple[bool, Dict]:
    expected = brute_force_k_clique(g, k) is not None
    out = reduce_clique_arbitrary_charges(g, k, charges)
    res = brute_force_removal(out.instance)
    got = res.meets(out.instance.goal, 1e-9)
    return expected == got, _info(g, k, expected, got, charges=list(charges), optimum=res.energy)


def penny_check(p: PennyRealization, k: int, tol: float = 1e-6) -> Tuple[bool, Dict]:
    expected, _ = independent_set_bf(validate_penny_realization(p), k)
    out = build_two_plane_instance(p, k)
    res = brute_force_removal(out.instance)
    got = res.meets(out.instance.goal, tol)
    info = {
        "centers": [list(c) for c in p.centers],
        "k": k,
        "expected": expected,
        "got": got,
        "optimum": res.energy,
        "goal": out.instance.goal,
    }
    return expected == got, info


def knapsack_check(inst: KnapsackInstance, tol: float = 1e-9) -> Tuple[bool, Dict]:
    best, _ = knapsack_dp(inst)
    expected = best >= inst.goal_value
    out, notes = reduce_knapsack(inst)
    res = brute_force_removal(out.instance)
    got = res.meets(notes.goal_energy, tol)
    info = {
        "items": [list(it) for it in inst.items],
        "capacity": inst.capacity,
        "goal": inst.goal_value,
        "dp_best": best,
        "expected": expected,
        "got": got,
        "optimum": res.energy,
    }
    return expected == got, info


def embedding_check(inst: RemovalInstance, tol: float = 1e-6) -> Tuple[bool, Dict]:
    emb = embed_kcr_into_weighted_k_clique(inst)
    clique = brute_force_k_clique(emb.graph, emb.k_prime, weighted=True)
    res = brute_force_removal(inst)
    if clique is None or not res.feasible:
        ok = clique is None and not res.feasible
        return ok, {"clique": None if clique is None else clique.weight, "optimum": res.energy}
    ok = math.isfinite(res.energy) and abs(clique.weight + res.energy) <= tol
    return ok, {"k_prime": emb.k_prime, "clique_weight": clique.weight, "optimum": res.energy}


def _info(g: SimpleGraph, k: int, expected: bool, got: bool, **extra) -> Dict:
    return {"n": g.n, "edges": sorted(list(e) for e in g.edges), "k": k, "expected": expected, "got": got, **extra}


# ---- suites ----------------------------------------------------------------

def _clique_instance(g: SimpleGraph, cs: Sequence[int] = (1, 2)) -> List[Tuple[bool, Dict]]:
    return [clique_check(g, k, c) for k in range(1, g.n + 1) for c in cs]


def roundtrip_clique(seed: int, count: int, n_max: int = 6, exhaustive_upto: int = 0) -> RoundTripReport:
    report = RoundTripReport()
    for g in all_graphs(exhaustive_upto) if exhaustive_upto else ():
        report.merge_instance(_clique_instance(g))
    for i in range(count):
        report.merge_instance(_clique_instance(random_graph(rng_for(seed, i), n_max)))
    return report


def roundtrip_arbitrary_charges(
    seed: int, count: int, charge_sets: Sequence[Sequence[int]] = ((2, -1), (3, -2)), n_max: int = 4
) -> RoundTripReport:
    report = RoundTripReport()
    for i in range(count):
        g = random_graph(rng_for(seed, i), n_max)
        report.merge_instance(
            [arbitrary_charge_check(g, k, cs) for cs in charge_sets for k in range(1, g.n + 1)]
        )
    return report


def roundtrip_penny(seed: int, count: int, max_pennies: int = 4) -> RoundTripReport:
    report = RoundTripReport()
    for i in range(count):
        p = random_penny_realization(rng_for(seed, i), max_pennies)
        report.merge_instance([penny_check(p, k) for k in range(1, p.n + 1)])
    return report


def roundtrip_knapsack(seed: int, count: int) -> RoundTripReport:
    report = RoundTripReport()
    for i in range(count):
        report.merge_instance([knapsack_check(random_knapsack(rng_for(seed, i)))])
    return report


def roundtrip_embedding(seed: int, count: int) -> RoundTripReport:
    report = RoundTripReport()
    for i in range(count):
        rng = rng_for(seed, i)
        per_side = int(rng.integers(3, 5))
        c = int(rng.integers(1, 3))
        graph = random_balanced_instance(rng, per_side, c, coulomb=bool(rng.integers(0, 4) == 0))
        k_prime = int(rng.integers(2, per_side + 1))
        inst = RemovalInstance(graph, Variant.EXACT_K, c * (per_side - k_prime))
        report.merge_instance([embedding_check(inst)])
    return report


SUITES: Dict[str, Callable[[int, int], RoundTripReport]] = {
    "clique": roundtrip_clique,
    "penny": roundtrip_penny,
    "knapsack": roundtrip_knapsack,
}
