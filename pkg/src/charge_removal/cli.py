"""Command-line front end: reductions, oracles, verification, certificates, round trips.

Exit status is 0 on success, 1 on invalid input or an oracle disagreement,
and 2 on an unexpected internal error. Every failure prints ``{"error": ...}``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import jsonio
from .clique import (
    ReductionOutput,
    build_minimality_gadget,
    embed_kcr_into_weighted_k_clique,
    reduce_clique_to_kcr,
    reduce_max_weight_clique_to_kcr,
)
from .errors import ChargeRemovalError
from .knapsack import reduce_knapsack
from .penny import build_two_plane_instance, certify_inequalities, synthesize_penny_params
from .roundtrip import SUITES
from .solvers import brute_force_removal
from .verification import verify_solution

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2

Table = Tuple[List[str], List[List[Any]]]


class InputError(Exception):
    """Bad input file or document; reported with exit status 1."""


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _parse(path: str, parser: Callable[[Any], Any]):
    doc = _read_json(path)
    try:
        return doc, parser(doc)
    except (ChargeRemovalError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid document {path}: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(jsonio.sanitize(obj), sort_keys=True, allow_nan=False)


# ---- reduce -----------------------------------------------------------------

def _reduce_clique(doc) -> ReductionOutput:
    g = jsonio.simple_graph_from_dict(doc)
    return reduce_clique_to_kcr(g, int(doc["k"]), int(doc.get("c", 1)))


def _reduce_maxwclique(doc) -> ReductionOutput:
    g = jsonio.simple_graph_from_dict(doc)
    cap = doc.get("cap")
    return reduce_max_weight_clique_to_kcr(
        g, int(doc["k"]), float(doc["v"]), int(doc.get("c", 1)), None if cap is None else float(cap)
    )


def _reduce_penny(doc) -> ReductionOutput:
    p = jsonio.penny_from_dict(doc)
    return build_two_plane_instance(p, int(doc["k"]), rescale=bool(doc.get("rescale", True)))


def _reduce_knapsack(doc) -> ReductionOutput:
    out, _ = reduce_knapsack(jsonio.knapsack_from_dict(doc))
    return out


def _reduce_min_gadget(doc) -> ReductionOutput:
    s = [int(x) for x in doc["s"]]
    k = int(doc["k"])
    inst, full = build_minimality_gadget(s, k)
    decode = {i: i for i in range(len(s))}
    return ReductionOutput(inst, decode, {"s": s, "k": k, "candidate": sorted(full)})


REDUCERS: Dict[str, Callable[[Any], ReductionOutput]] = {
    "clique": _reduce_clique,
    "maxwclique": _reduce_maxwclique,
    "penny": _reduce_penny,
    "knapsack": _reduce_knapsack,
    "min-gadget": _reduce_min_gadget,
}


def cmd_reduce(args) -> Tuple[Dict, Optional[Table], int]:
    _, out = _parse(args.input, REDUCERS[args.problem])
    doc = jsonio.reduction_to_dict(out)
    # closed loop: what we write must read back as a valid instance
    jsonio.instance_from_dict(json.loads(_dump(doc)))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(_dump(doc) + "\n")
    inst = out.instance
    table = (
        ["problem", "ions", "variant", "k", "goal"],
        [[args.problem, len(inst.graph.ions), inst.variant.value, inst.k, inst.goal]],
    )
    return doc, table, EXIT_OK


# ---- solve / verify ---------------------------------------------------------

def cmd_solve(args) -> Tuple[Dict, Optional[Table], int]:
    _, inst = _parse(args.instance, jsonio.instance_from_dict)
    res = brute_force_removal(inst)
    doc = {
        "oracle": args.oracle,
        "feasible": res.feasible,
        "energy": res.energy,
        "removed": sorted(res.removed) if res.removed is not None else None,
        "meets_goal": res.meets(inst.goal),
    }
    removed = " ".join(map(str, doc["removed"])) if doc["removed"] is not None else ""
    table = (
        ["feasible", "energy", "meets_goal", "removed"],
        [[res.feasible, res.energy, doc["meets_goal"], removed]],
    )
    return doc, table, EXIT_OK


def cmd_verify(args) -> Tuple[Dict, Optional[Table], int]:
    _, inst = _parse(args.instance, jsonio.instance_from_dict)
    _, sol = _parse(args.solution, jsonio.solution_from_dict)
    verdict = verify_solution(inst, sol)
    doc = jsonio.verdict_to_dict(verdict)
    table = (["valid", "remaining", "reason"], [[verdict.valid, verdict.remaining, verdict.reason or ""]])
    return doc, table, EXIT_OK


# ---- certificates and round trips -------------------------------------------

def cmd_certify_penny(args) -> Tuple[Dict, Optional[Table], int]:
    n = args.n
    r_max = 10.0 * n if args.rmax is None else args.rmax
    try:
        params = synthesize_penny_params(n)
        cert = certify_inequalities(params, n, r_max, points=args.points)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    doc = cert.to_dict()
    doc["params"] = {
        "A11": params.a11, "B11": params.b11, "C11": params.c11, "logA11": params.log_a11,
        "A12": params.a12, "B12": params.b12, "C12": params.c12,
    }
    rows = []
    for name in ("ineq1", "ineq2", "ineq3", "repulsion_bound", "dispersion_bound"):
        r = getattr(cert, name)
        rows.append([name, r.passed, r.worst_margin, r.at_r])
    return doc, (["check", "passed", "worst_margin", "at_r"], rows), EXIT_OK if cert.passed else EXIT_INVALID


def cmd_roundtrip(args) -> Tuple[Dict, Optional[Table], int]:
    if args.count < 0:
        raise InputError("--count must be non-negative")
    report = SUITES[args.problem](args.seed, args.count)
    doc: Dict[str, Any] = {"agree": report.agree, "disagree": report.disagree, "checks": report.checks}
    if report.failures:
        doc["failures"] = report.failures
    table = (
        ["problem", "seed", "count", "agree", "disagree", "checks"],
        [[args.problem, args.seed, args.count, report.agree, report.disagree, report.checks]],
    )
    return doc, table, EXIT_OK if report.disagree == 0 else EXIT_INVALID


def cmd_embed_wkc(args) -> Tuple[Dict, Optional[Table], int]:
    _, inst = _parse(args.instance, jsonio.instance_from_dict)
    try:
        emb = embed_kcr_into_weighted_k_clique(inst)
    except (ChargeRemovalError, ValueError) as exc:
        raise InputError(str(exc)) from None
    doc = jsonio.embedding_to_dict(emb)
    table = (
        ["vertices", "edges", "k", "goal"],
        [[emb.graph.n, len(emb.graph.edges), emb.k_prime, emb.goal]],
    )
    return doc, table, EXIT_OK


# ---- plumbing ---------------------------------------------------------------

def _fmt_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return str(jsonio.ext_to_json(x)) if math.isinf(x) else repr(x)
    return str(x)


def render_tsv(table: Table) -> str:
    header, rows = table
    lines = ["\t".join(header)]
    lines += ["\t".join(_fmt_cell(c) for c in row) for row in rows]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charge-removal", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("json", "tsv"), default="json", help="output format")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="build a charge-removal instance from a source problem")
    p.add_argument("problem", choices=sorted(REDUCERS))
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="exact optimum by exhaustive search")
    p.add_argument("instance")
    p.add_argument("--oracle", choices=("bf",), default="bf")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a removal against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify-penny", help="numerically certify the penny parameters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rmax", type=float)
    p.add_argument("--points", type=int, default=10_000)
    p.set_defaults(func=cmd_certify_penny)

    p = sub.add_parser("roundtrip", help="compare source and reduced oracles on seeded instances")
    p.add_argument("problem", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("embed-wkc", help="weighted k-clique view of a +-c instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_embed_wkc)

    for sp in sub.choices.values():
        sp.add_argument("--format", choices=("json", "tsv"), default=argparse.SUPPRESS)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, table, code = args.func(args)
    except (InputError, ChargeRemovalError) as exc:
        print(_dump({"error": str(exc)}))
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(_dump({"error": f"internal error: {type(exc).__name__}: {exc}"}))
        return EXIT_INTERNAL
    if args.format == "tsv" and table is not None:
        print(render_tsv(table))
    else:
        print(_dump(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
