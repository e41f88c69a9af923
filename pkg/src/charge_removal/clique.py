"""Clique-family gadgets and the embedding of ±c instances into weighted k-clique."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .core import INF, CrystalGraph, Ion, PairTable, pair_key
from .errors import InvalidGraphError, NoBalancedSolution
from .graphs import SimpleGraph
from .verification import RemovalInstance, Variant

__all__ = [
    "SimpleGraph",
    "ReductionOutput",
    "EmbeddingResult",
    "clique_goal",
    "reduce_clique_to_kcr",
    "reduce_max_weight_clique_to_kcr",
    "reduce_clique_arbitrary_charges",
    "build_minimality_gadget",
    "embed_kcr_into_weighted_k_clique",
]


@dataclass(frozen=True)
class ReductionOutput:
    instance: RemovalInstance
    decode: Dict[int, int]
    notes: Dict[str, Any] = field(default_factory=dict)


def clique_goal(k: int) -> float:
    # 2k surviving ions, every one of the k(2k-1) pairs at -1
    return -float(k * (2 * k - 1))


def _vertex_ions(n: int, q_first: int, q_second: int) -> List[Ion]:
    """Two ions per source vertex; first row ids 0..n-1, second row n..2n-1."""
    ions = [Ion(v, f"s{v}", q_first, (float(v), 0.0, 0.0), f"v{v}") for v in range(n)]
    ions += [
        Ion(n + v, f"s{n + v}", q_second, (float(v), 1.0, 0.0), f"v{v}") for v in range(n)
    ]
    return ions


def _check_k(g: SimpleGraph, k: int) -> None:
    if k > g.n:
        raise ValueError(f"k={k} exceeds the vertex count {g.n}")
    if k < 1:
        raise ValueError("k must be at least 1")


def _gadget_table(g: SimpleGraph) -> Dict[Tuple[int, int], float]:
    n = g.n
    table = {}
    for a, b in itertools.combinations(range(2 * n), 2):
        va, vb = a % n, b % n
        table[(a, b)] = -1.0 if va == vb or g.adjacent(va, vb) else INF
    return table


def reduce_clique_to_kcr(g: SimpleGraph, k: int, c: int = 1) -> ReductionOutput:
    """Exact-k instance that meets goal -k(2k-1) iff ``g`` has a k-clique."""
    _check_k(g, k)
    if c < 1:
        raise ValueError("c must be a positive integer")
    n = g.n
    graph = CrystalGraph(tuple(_vertex_ions(n, c, -c)), PairTable(_gadget_table(g)))
    k_prime = c * (n - k)
    goal = clique_goal(k)
    inst = RemovalInstance(graph, Variant.EXACT_K, k_prime, goal)
    decode = {a: a % n for a in range(2 * n)}
    return ReductionOutput(inst, decode, {"n": n, "k": k, "c": c, "k_prime": k_prime, "goal": goal})


def reduce_max_weight_clique_to_kcr(
    g: SimpleGraph, k: int, v: float, c: int = 1, cap: Optional[float] = None
) -> ReductionOutput:
    """Exact-k instance meeting goal ``-k*cap - v`` iff some k-clique weighs >= v.

    Each edge weight is charged once, on the pair of first-row ions; the
    other three ion pairs of an edge get energy 0. Same-vertex pairs carry
    ``-cap``, so any survivor set that splits a vertex's two ions is beaten
    by the matching full-pair set on the same first-row vertices.
    """
    _check_k(g, k)
    if c < 1:
        raise ValueError("c must be a positive integer")
    n = g.n
    weights = [g.weight(a, b) for a, b in g.edges]
    max_w = max(weights, default=0.0)
    if cap is None:
        cap = 1.0 + max(max_w, 0.0)
    if not cap > max_w or not cap > 0:
        raise ValueError(f"cap={cap} must be positive and exceed every edge weight")
    table = {}
    for a, b in itertools.combinations(range(2 * n), 2):
        va, vb = a % n, b % n
        if va == vb:
            table[(a, b)] = -float(cap)
        elif not g.adjacent(va, vb):
            table[(a, b)] = INF
        elif a < n and b < n:
            table[(a, b)] = -g.weight(va, vb)
        else:
            table[(a, b)] = 0.0
    graph = CrystalGraph(tuple(_vertex_ions(n, c, -c)), PairTable(table))
    k_prime = c * (n - k)
    goal = -k * float(cap) - float(v)
    inst = RemovalInstance(graph, Variant.EXACT_K, k_prime, goal)
    decode = {a: a % n for a in range(2 * n)}
    notes = {"n": n, "k": k, "c": c, "v": float(v), "cap": float(cap), "k_prime": k_prime, "goal": goal}
    return ReductionOutput(inst, decode, notes)


def _pick_charges(charges: Iterable[int]) -> Tuple[int, int]:
    opts = sorted(set(int(q) for q in charges if q != 0))
    pairs = [(c, d) for c in opts for d in opts if c * d < 0 and abs(c) >= abs(d)]
    if not pairs:
        raise NoBalancedSolution("charge set has no pair of opposite signs")
    return min(pairs, key=lambda cd: (abs(cd[0]) - abs(cd[1]), abs(cd[0]), -cd[0]))


def _smallest_multiplier(step: int, offset: int, modulus: int) -> int:
    """Smallest x >= 0 with (x*step + offset) % modulus == 0."""
    for x in range(modulus):
        if (x * step + offset) % modulus == 0:
            return x
    raise NoBalancedSolution(
        f"no x with {step}x + {offset} divisible by {modulus}"
    )


def reduce_clique_arbitrary_charges(
    g: SimpleGraph, k: int, charges: Iterable[int]
) -> ReductionOutput:
    """Clique reduction when the allowed charges differ in magnitude.

    Uses charges c, d of opposite sign with |c| > |d| and the smallest gap.
    Two dummy sets rebalance the cell: the first (zero energy to everything)
    absorbs the deficiency left by a k-clique, the second (forbidden with
    everything) absorbs the remaining deficiency and must be removed.
    """
    _check_k(g, k)
    c, d = _pick_charges(charges)
    if abs(c) == abs(d):
        out = reduce_clique_to_kcr(g, k, abs(c))
        out.notes["delegated"] = True
        return out
    n = g.n
    mc, md = abs(c), abs(d)
    gap = mc - md

    t_c = _smallest_multiplier(mc, k * gap, md)
    t = t_c * mc
    t_d = (k * gap + t) // md
    u_c = _smallest_multiplier(mc, mc * t_c + n * gap, md)
    u = mc * (u_c + t_c)
    u_d = (u + n * gap) // md - t_d
    if u_d < 0:
        raise NoBalancedSolution("second dummy set would need a negative count")

    ions = _vertex_ions(n, c, d)
    first, second = [], []
    nxt = 2 * n
    for count, q, row in ((t_c, c, 2.0), (t_d, d, 3.0)):
        for x in range(count):
            first.append(Ion(nxt, f"s{nxt}", q, (float(x), row, 0.0), "dummy-zero"))
            nxt += 1
    for count, q, row in ((u_c, c, 4.0), (u_d, d, 5.0)):
        for x in range(count):
            second.append(Ion(nxt, f"s{nxt}", q, (float(x), row, 0.0), "dummy-forbidden"))
            nxt += 1
    ions += first + second

    table = _gadget_table(g)
    gadget_ids = range(2 * n)
    first_ids = [ion.id for ion in first]
    second_ids = [ion.id for ion in second]
    for a in first_ids:
        for b in itertools.chain(gadget_ids, first_ids):
            if a != b:
                table[pair_key(a, b)] = 0.0
    for a in second_ids:
        for ion in ions:
            if ion.id != a:
                table[pair_key(a, ion.id)] = INF

    graph = CrystalGraph(tuple(ions), PairTable(table))
    k_prime = mc * (n + u_c - k)
    goal = clique_goal(k)
    inst = RemovalInstance(graph, Variant.EXACT_K, k_prime, goal)
    decode = {a: a % n for a in range(2 * n)}
    notes = {
        "n": n, "k": k, "c": c, "d": d, "t": t, "t_c": t_c, "t_d": t_d,
        "u": u, "u_c": u_c, "u_d": u_d, "deficiency": n * gap,
        "k_prime": k_prime, "goal": goal, "delegated": False,
    }
    return ReductionOutput(inst, decode, notes)


def build_minimality_gadget(s: List[int], k: int) -> Tuple[RemovalInstance, frozenset]:
    """Instance whose full ion set is minimal iff no subset of ``s`` sums to ``k``."""
    s = [int(x) for x in s]
    if not s or any(x <= 0 for x in s):
        raise ValueError("s must be a non-empty list of positive integers")
    total = sum(s)
    if not 0 < k < total:
        raise ValueError(f"need 0 < k < sum(s) = {total}, got k={k}")
    m = len(s)
    ions = [Ion(i, f"s{i}", x, (float(i), 0.0, 0.0), f"elem{i}") for i, x in enumerate(s)]
    ions.append(Ion(m, f"s{m}", -k, (0.0, 1.0, 0.0), "neg-k"))
    ions.append(Ion(m + 1, f"s{m + 1}", -(total - k), (1.0, 1.0, 0.0), "neg-rest"))
    table = {(a, b): 0.0 for a, b in itertools.combinations(range(m + 2), 2)}
    graph = CrystalGraph(tuple(ions), PairTable(table))
    k_prime = max(k, total - k)
    inst = RemovalInstance(graph, Variant.MINIMAL_AT_LEAST_K, k_prime, 0.0)
    return inst, frozenset(range(m + 2))


@dataclass(frozen=True)
class EmbeddingResult:
    graph: SimpleGraph
    k_prime: int
    goal: float
    vertices: Tuple[Tuple[int, int], ...]
    notes: Dict[str, Any] = field(default_factory=dict)


def embed_kcr_into_weighted_k_clique(inst: RemovalInstance) -> EmbeddingResult:
    """Weighted-graph view of a ±c instance.

    Product vertices are (positive ion, negative ion) pairs; two product
    vertices are joined when their four ions are distinct. A k'-clique picks
    k' positives and k' negatives, and its total weight is minus the energy
    of exactly those survivors: cross terms appear once per edge and each
    within-pair term is spread over the k'-1 edges at its vertex.
    """
    if inst.variant is Variant.AT_LEAST_K:
        raise ValueError("embedding needs the exact or minimal-at-least variant")
    g = inst.graph
    mags = {abs(ion.charge) for ion in g.ions}
    if len(mags) != 1:
        raise InvalidGraphError("embedding needs every charge to be +c or -c")
    (c,) = mags
    u = g.energy_matrix
    if not all(math.isfinite(x) for x in u.flat):
        raise InvalidGraphError("embedding needs every pair energy to be finite")
    pos = [i for i, ion in enumerate(g.ions) if ion.charge > 0]
    neg = [i for i, ion in enumerate(g.ions) if ion.charge < 0]
    removed_pairs = -(-inst.k // c)
    k_prime = len(pos) - removed_pairs
    if k_prime <= 1:
        raise ValueError(f"k'={k_prime} leaves nothing to spread within-pair energy over")

    verts = [(i, j) for i in pos for j in neg]
    edges = []
    for a, b in itertools.combinations(range(len(verts)), 2):
        (i, kk), (j, l) = verts[a], verts[b]
        if i == j or kk == l:
            continue
        w = -(u[i, j] + u[i, l] + u[j, kk] + u[kk, l] + (u[i, kk] + u[j, l]) / (k_prime - 1))
        edges.append((a, b, float(w)))
    wg = SimpleGraph.from_weighted_edges(len(verts), edges)
    ids = g.ids
    notes = {
        "c": c,
        "k_prime": k_prime,
        "k_prime_literal": (len(pos) - inst.k) // c,
        "exact_solvable": inst.k % c == 0,
    }
    return EmbeddingResult(
        wg, k_prime, -inst.goal, tuple((ids[i], ids[j]) for i, j in verts), notes
    )
