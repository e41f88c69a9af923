"""JSON documents: instances, reductions, verdicts and problem inputs.

Extended reals are written as numbers, with ``"inf"`` / ``"-inf"`` for the
infinities. Unordered ion pairs are always stored with ``i < j``.
"""
from __future__ import annotations

import math
from typing import Any, Dict, Mapping

from .clique import EmbeddingResult, ReductionOutput
from .core import (
    BuckinghamCoulomb,
    Coulomb,
    CrystalGraph,
    ForceField,
    Ion,
    PairTable,
)
from .graphs import SimpleGraph
from .knapsack import KnapsackInstance
from .penny import PennyRealization
from .verification import RemovalInstance, RemovalSolution, Variant, Verdict


class DocumentError(ValueError):
    """A JSON document is missing keys or has the wrong shape."""


def ext_to_json(x: float):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def ext_from_json(x) -> float:
    if isinstance(x, str):
        if x in ("inf", "+inf"):
            return math.inf
        if x == "-inf":
            return -math.inf
        raise DocumentError(f"bad extended real {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"bad extended real {x!r}")
    return float(x)


def sanitize(obj):
    """Recursively replace infinities so ``json.dumps`` output stays strict."""
    if isinstance(obj, float):
        return ext_to_json(obj)
    if isinstance(obj, Mapping):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [sanitize(v) for v in items]
    return obj


def _require(d: Mapping, key: str):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise DocumentError(f"missing key {key!r}") from None


def graph_to_dict(g: CrystalGraph) -> Dict[str, Any]:
    ions = []
    for ion in g.ions:
        d = {"id": ion.id, "species": ion.species, "charge": ion.charge, "pos": list(ion.position)}
        if ion.label is not None:
            d["label"] = ion.label
        ions.append(d)
    e = g.energy
    if isinstance(e, Coulomb):
        energy: Dict[str, Any] = {"kind": "coulomb"}
    elif isinstance(e, BuckinghamCoulomb):
        fields = []
        for (s1, s2), ff in sorted(e.fields.items()):
            f = {"s1": s1, "s2": s2, "A": ext_to_json(ff.a), "B": ff.b, "C": ff.c}
            if ff.log_a is not None:
                f["logA"] = ff.log_a
            fields.append(f)
        energy = {"kind": "buckingham_coulomb", "fields": fields}
    else:
        energy = {
            "kind": "pair_table",
            "pairs": [{"i": i, "j": j, "e": ext_to_json(v)} for (i, j), v in sorted(e.pairs.items())],
        }
    out: Dict[str, Any] = {"ions": ions, "energy": energy}
    if g.cell is not None:
        out["cell"] = list(g.cell)
    return out


def graph_from_dict(d: Mapping) -> CrystalGraph:
    ions = []
    for raw in _require(d, "ions"):
        charge = _require(raw, "charge")
        if isinstance(charge, bool) or not isinstance(charge, int):
            raise DocumentError(f"ion charge must be an integer, got {charge!r}")
        pos = _require(raw, "pos")
        if not isinstance(pos, list) or len(pos) != 3:
            raise DocumentError("ion pos must be a list of three numbers")
        ions.append(
            Ion(int(_require(raw, "id")), str(_require(raw, "species")), charge, tuple(pos), raw.get("label"))
        )
    e = _require(d, "energy")
    kind = _require(e, "kind")
    if kind == "coulomb":
        energy = Coulomb()
    elif kind == "buckingham_coulomb":
        table = {}
        for f in _require(e, "fields"):
            ff = ForceField(
                ext_from_json(_require(f, "A")),
                float(_require(f, "B")),
                float(_require(f, "C")),
                log_a=f.get("logA"),
            )
            table[(str(_require(f, "s1")), str(_require(f, "s2")))] = ff
        energy = BuckinghamCoulomb(table)
    elif kind == "pair_table":
        pairs = {}
        for p in _require(e, "pairs"):
            i, j = int(_require(p, "i")), int(_require(p, "j"))
            if i > j:
                i, j = j, i
            if (i, j) in pairs:
                raise DocumentError(f"pair ({i}, {j}) listed twice")
            pairs[(i, j)] = ext_from_json(_require(p, "e"))
        energy = PairTable(pairs)
    else:
        raise DocumentError(f"unknown energy kind {kind!r}")
    cell = d.get("cell")
    return CrystalGraph(tuple(ions), energy, tuple(cell) if cell is not None else None)


def instance_to_dict(inst: RemovalInstance) -> Dict[str, Any]:
    d = graph_to_dict(inst.graph)
    d.update({"variant": inst.variant.value, "k": inst.k, "goal": ext_to_json(inst.goal)})
    return d


def instance_from_dict(d: Mapping) -> RemovalInstance:
    """Parse an instance document, or the ``instance`` member of a reduction document."""
    if "instance" in d:
        d = d["instance"]
    try:
        variant = Variant(d.get("variant", Variant.EXACT_K.value))
    except ValueError:
        raise DocumentError(f"unknown variant {d.get('variant')!r}") from None
    goal = ext_from_json(d.get("goal", "inf"))
    return RemovalInstance(graph_from_dict(d), variant, int(_require(d, "k")), goal)


def reduction_to_dict(out: ReductionOutput) -> Dict[str, Any]:
    return {
        "instance": instance_to_dict(out.instance),
        "decode": {str(k): v for k, v in sorted(out.decode.items())},
        "notes": sanitize(out.notes),
    }


def solution_from_dict(d) -> RemovalSolution:
    if isinstance(d, list):
        return RemovalSolution(frozenset(int(i) for i in d))
    return RemovalSolution(frozenset(int(i) for i in _require(d, "removed")))


def verdict_to_dict(v: Verdict) -> Dict[str, Any]:
    d: Dict[str, Any] = {"valid": v.valid, "remaining": ext_to_json(v.remaining)}
    if v.reason is not None:
        d["reason"] = v.reason
    return d


def simple_graph_from_dict(d: Mapping) -> SimpleGraph:
    n = int(_require(d, "n"))
    edges = _require(d, "edges")
    if any(len(e) == 3 for e in edges):
        return SimpleGraph.from_weighted_edges(n, ((int(a), int(b), float(w)) for a, b, w in edges))
    return SimpleGraph(n, frozenset((int(a), int(b)) for a, b in edges))


def embedding_to_dict(e: EmbeddingResult) -> Dict[str, Any]:
    return {
        "n": e.graph.n,
        "edges": [[a, b, e.graph.weights[(a, b)]] for a, b in sorted(e.graph.edges)],
        "vertices": [list(v) for v in e.vertices],
        "k": e.k_prime,
        "goal": ext_to_json(e.goal),
        "notes": sanitize(e.notes),
    }


def penny_from_dict(d: Mapping) -> PennyRealization:
    centers = _require(d, "centers")
    if any(len(c) != 2 for c in centers):
        raise DocumentError("penny centres must be [x, y] pairs")
    return PennyRealization(tuple(tuple(c) for c in centers), float(_require(d, "radius")))


def knapsack_from_dict(d: Mapping) -> KnapsackInstance:
    items = tuple((int(_require(it, "w")), int(_require(it, "p"))) for it in _require(d, "items"))
    return KnapsackInstance(items, int(_require(d, "capacity")), int(d.get("goal", 0)))


def knapsack_to_dict(inst: KnapsackInstance) -> Dict[str, Any]:
    return {
        "items": [{"w": w, "p": p} for w, p in inst.items],
        "capacity": inst.capacity,
        "goal": inst.goal_value,
    }
