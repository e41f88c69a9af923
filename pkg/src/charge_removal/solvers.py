"""Exhaustive and dynamic-programming oracles.

These are the only exact solvers in the package. They are deliberately
simple so that they can certify the reductions independently of how the
reductions were built.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .core import INF, remaining_energy
from .errors import OracleCapExceeded
from .graphs import SimpleGraph
from .verification import (
    DEFAULT_MAX_ABS_CHARGE,
    RemovalInstance,
    RemovalSolution,
    Variant,
    is_minimal_charges,
    meets_goal,
)

if TYPE_CHECKING:
    from .knapsack import KnapsackInstance

DEFAULT_MAX_IONS = 22
MAX_CLIQUE_VERTICES = 16
MAX_IS_VERTICES = 20
KNAPSACK_BUDGET = 10**7

_CHUNK = 1 << 14


def max_ions_cap() -> int:
    env = os.environ.get("CHARGE_REMOVAL_MAX_IONS")
    return int(env) if env else DEFAULT_MAX_IONS


@dataclass(frozen=True)
class OracleResult:
    """Outcome of :func:`brute_force_removal`.

    ``feasible`` is False when no removal satisfies the charge conditions;
    ``energy`` is then ``inf`` and ``removed`` is None.
    """

    feasible: bool
    energy: float
    removed: Optional[FrozenSet[int]]

    @property
    def solution(self) -> Optional[RemovalSolution]:
        return None if self.removed is None else RemovalSolution(self.removed)

    def meets(self, goal: float, eps: float = 1e-9) -> bool:
        return self.feasible and meets_goal(self.energy, goal, eps)


def _subset_sums(values: Sequence[int]) -> np.ndarray:
    # entry m holds the sum over set bits of m (bit i <-> values[i])
    sums = np.zeros(1, dtype=np.int64)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return sums


def brute_force_removal(
    inst: RemovalInstance,
    max_ions: Optional[int] = None,
    max_abs_charge: int = DEFAULT_MAX_ABS_CHARGE,
) -> OracleResult:
    """Minimum remaining energy over every removal allowed by the instance.

    Ties are broken towards the lexicographically smallest sorted tuple of
    removed ion ids. The goal is not consulted.
    """
    g = inst.graph
    n = len(g)
    cap = max_ions_cap() if max_ions is None else max_ions
    if n > cap:
        raise OracleCapExceeded(f"{n} ions exceed the oracle cap of {cap}")

    charges = [ion.charge for ion in g.ions]
    total = _subset_sums(charges)
    positive = _subset_sums([max(q, 0) for q in charges])
    ok = total == 0
    if inst.variant is Variant.EXACT_K:
        ok &= positive == inst.k
    else:
        ok &= positive >= inst.k
    candidates = np.flatnonzero(ok)
    if inst.variant is Variant.MINIMAL_AT_LEAST_K:
        keep = [
            m
            for m in candidates
            if is_minimal_charges(
                [q for i, q in enumerate(charges) if m >> i & 1], inst.k, max_abs_charge
            )
        ]
        candidates = np.asarray(keep, dtype=np.int64)
    if candidates.size == 0:
        return OracleResult(False, INF, None)

    u = g.energy_matrix
    forbidden = np.triu(u == INF, 1).astype(float)
    finite = np.triu(np.where(u == INF, 0.0, u), 1)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)

    best = INF
    tied: List[int] = []
    for start in range(0, candidates.size, _CHUNK):
        block = candidates[start:start + _CHUNK]
        keep = ((block[:, None] & bits) == 0).astype(float)
        energy = ((keep @ finite) * keep).sum(axis=1)
        energy[((keep @ forbidden) * keep).sum(axis=1) > 0] = INF
        low = energy.min()
        if low < best - _tie_tol(low):
            best, tied = low, []
        if low <= best + _tie_tol(best):
            tied.extend(block[energy <= best + _tie_tol(best)].tolist())

    ids = g.ids
    winners = [tuple(sorted(ids[i] for i in range(n) if m >> i & 1)) for m in tied]
    removed = frozenset(min(winners))
    return OracleResult(True, remaining_energy(g, removed), removed)


def _tie_tol(e: float) -> float:
    return 0.0 if e == INF else 1e-11 * max(1.0, abs(e))


def subset_sum_dp(values: Sequence[int], target: int) -> Tuple[bool, Optional[List[int]]]:
    """Decide whether some subset of ``values`` sums to ``target``.

    Returns ``(found, witness)`` where the witness lists indices into
    ``values``; lower indices are preferred when several subsets work.
    """
    if target < 0:
        raise ValueError("target must be non-negative")
    if any(v <= 0 for v in values):
        raise ValueError("values must be positive integers")
    rows = [np.zeros(target + 1, dtype=bool)]
    rows[0][0] = True
    for v in values:
        prev = rows[-1]
        cur = prev.copy()
        if v <= target:
            cur[v:] |= prev[: target + 1 - v]
        rows.append(cur)
    if not rows[-1][target]:
        return False, None
    witness, t = [], target
    for i in range(len(values), 0, -1):
        if not rows[i - 1][t]:
            witness.append(i - 1)
            t -= values[i - 1]
    return True, sorted(witness)


@dataclass(frozen=True)
class CliqueResult:
    vertices: Tuple[int, ...]
    weight: float
    count: int


def brute_force_k_clique(
    g: SimpleGraph, k: int, weighted: bool = False
) -> Optional[CliqueResult]:
    """Best k-clique by total edge weight (edge count when unweighted).

    Returns None when no k-clique exists. ``count`` is the number of k-cliques.
    """
    if g.n > MAX_CLIQUE_VERTICES:
        raise OracleCapExceeded(f"{g.n} vertices exceed the clique oracle cap")
    best: Optional[Tuple[int, ...]] = None
    best_w = -INF
    count = 0
    for combo in itertools.combinations(range(g.n), k):
        if not g.is_clique(combo):
            continue
        count += 1
        w = sum(
            g.weight(a, b) if weighted else 1.0 for a, b in itertools.combinations(combo, 2)
        )
        if w > best_w:
            best, best_w = combo, w
    if best is None:
        return None
    return CliqueResult(best, best_w, count)


def knapsack_dp(inst: "KnapsackInstance") -> Tuple[int, List[int]]:
    """Optimal value and packing (item indices) for a 0/1 knapsack."""
    n, cap = len(inst.items), max(inst.capacity, 0)
    if (n + 1) * (cap + 1) > KNAPSACK_BUDGET:
        raise OracleCapExceeded("knapsack table exceeds the DP budget")
    table = np.zeros((n + 1, cap + 1), dtype=np.int64)
    for i, (w, p) in enumerate(inst.items, start=1):
        table[i] = table[i - 1]
        if w <= cap:
            table[i, w:] = np.maximum(table[i - 1, w:], table[i - 1, : cap + 1 - w] + p)
    packing, c = [], cap
    for i in range(n, 0, -1):
        if table[i, c] != table[i - 1, c]:
            packing.append(i - 1)
            c -= inst.items[i - 1][0]
    return int(table[n, cap]), sorted(packing)


def independent_set_bf(g: SimpleGraph, k: int) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    if g.n > MAX_IS_VERTICES:
        raise OracleCapExceeded(f"{g.n} vertices exceed the independent-set oracle cap")
    for combo in itertools.combinations(range(g.n), k):
        if g.is_independent(combo):
            return True, combo
    return False, None
