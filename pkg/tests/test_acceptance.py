"""Acceptance suite: one PASS/FAIL line per criterion, printed in the run summary.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""
import itertools
import math
import time

import numpy as np
import pytest

from charge_removal.clique import build_minimality_gadget
from charge_removal.knapsack import KnapsackInstance, reduce_knapsack
from charge_removal.penny import certify_inequalities, synthesize_penny_params
from charge_removal.roundtrip import (
    rng_for,
    roundtrip_arbitrary_charges,
    roundtrip_clique,
    roundtrip_embedding,
    roundtrip_knapsack,
    roundtrip_penny,
)
from charge_removal.synthesis import SynthesisRequest, synthesize_bc_params
from charge_removal.verification import is_minimal, is_minimal_charges

SEED = 20240917


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_clique_round_trip(acceptance_log):
    report, secs = timed(roundtrip_clique, SEED, 200, n_max=6, exhaustive_upto=4)
    ok = report.disagree == 0 and report.agree == 75 + 200 and secs < 300
    acceptance_log(1, "clique round-trip", ok,
                   f"{report.agree} graphs agree, {report.disagree} disagree, {report.checks} checks, {secs:.1f}s")
    assert ok, report.failures[:5]


def test_arbitrary_charges(acceptance_log):
    report = roundtrip_arbitrary_charges(SEED + 1, 50, ((2, -1), (3, -2)), n_max=4)
    ok = report.disagree == 0 and report.agree == 50
    acceptance_log(2, "arbitrary-charge round-trip", ok,
                   f"{report.agree} agree, {report.disagree} disagree, {report.checks} checks")
    assert ok, report.failures[:5]


def test_penny_round_trip(acceptance_log):
    report, secs = timed(roundtrip_penny, SEED + 2, 50, max_pennies=4)
    ok = report.disagree == 0 and report.agree == 50 and secs < 600
    acceptance_log(3, "penny round-trip", ok,
                   f"{report.agree} agree, {report.disagree} disagree, {report.checks} checks, {secs:.1f}s")
    assert ok, report.failures[:5]


def test_penny_constants(acceptance_log):
    worst_pair = worst_zero = 0.0
    failed = []
    for n in range(6, 13):
        p = synthesize_penny_params(n)
        worst_pair = max(worst_pair, abs(p.within_pair() + 1.0))
        lhs = math.exp(p.log_a11 - p.b11 * math.sqrt(2.0) * n)
        rhs = p.c11 / (8.0 * n**6)
        worst_zero = max(worst_zero, abs(lhs - rhs) / rhs)
        if not certify_inequalities(p, n, 10.0 * n).passed:
            failed.append(n)
    ok = worst_pair <= 1e-12 and worst_zero <= 1e-9 and not failed
    acceptance_log(4, "penny constants", ok,
                   f"pair err {worst_pair:.1e}, zero rel err {worst_zero:.1e}, certificate failures {failed}")
    assert ok


def test_knapsack(acceptance_log):
    report = roundtrip_knapsack(SEED + 3, 200)
    _, notes = reduce_knapsack(KnapsackInstance(((9, 3), (6, 2), (3, 3)), 12, 6))
    constants = notes.distances == (27.0, 18.0, 3.0) and notes.alpha_bound == 2916.0
    ok = report.disagree == 0 and report.agree == 200 and constants
    acceptance_log(5, "knapsack round-trip and constants", ok,
                   f"{report.agree} agree, {report.disagree} disagree, distances {notes.distances}, "
                   f"alpha bound {notes.alpha_bound:g}")
    assert ok, report.failures[:5]


def test_synthesis(acceptance_log):
    rng = rng_for(SEED + 4, 0)
    charges = [q for q in range(-5, 6) if q]
    worst = 0.0
    branches = set()
    for _ in range(1000):
        a = float(rng.uniform(-1e3, 1e3))
        r = float(rng.uniform(0.1, 50.0))
        qi, qj = (int(x) for x in rng.choice(charges, size=2))
        ff = synthesize_bc_params(SynthesisRequest(a, r, qi, qj))
        u = ff.a * math.exp(-ff.b * r) - ff.c / r**6 + qi * qj / r
        worst = max(worst, abs(u - a) / max(1.0, abs(a)))
        branches.add((a > 0, qi * qj > 0))
    ok = worst <= 1e-9 and len(branches) == 4
    acceptance_log(6, "parameter synthesis", ok, f"worst scaled error {worst:.1e}, branches {len(branches)}/4")
    assert ok


def _random_neutral(rng, max_size=15, max_q=6):
    while True:
        n_pos = int(rng.integers(1, 8))
        pos = [int(x) for x in rng.integers(1, max_q + 1, size=n_pos)]
        neg, left = [], sum(pos)
        while left:
            q = int(rng.integers(1, min(max_q, left) + 1))
            neg.append(-q)
            left -= q
        if len(pos) + len(neg) <= max_size:
            charges = pos + neg
            rng.shuffle(charges)
            return charges, int(rng.integers(1, sum(pos) + 1))


def _minimal_by_enumeration(charges, k):
    # every strict subset at once: sums and positive sums per mask
    q = np.asarray(charges, dtype=np.int64)
    m = len(q)
    masks = np.arange((1 << m) - 1, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(m)) & 1).astype(np.int64)
    total = bits @ q
    positive = bits @ np.maximum(q, 0)
    return not bool(np.any((total == 0) & (positive >= k)))


def _subset_sum_exhaustive(s, target):
    return any(sum(c) == target for r in range(len(s) + 1) for c in itertools.combinations(s, r))


def test_minimality(acceptance_log):
    mismatches = minimal_count = 0
    for i in range(500):
        charges, k = _random_neutral(rng_for(SEED + 5, i))
        got = is_minimal_charges(charges, k)
        minimal_count += got
        mismatches += got != _minimal_by_enumeration(charges, k)
    gadget_bad = 0
    for i in range(100):
        rng = rng_for(SEED + 6, i)
        while True:
            s = [int(x) for x in rng.integers(1, 13, size=int(rng.integers(1, 7)))]
            if 2 <= sum(s) <= 40:
                break
        k = int(rng.integers(1, sum(s)))
        inst, full = build_minimality_gadget(s, k)
        gadget_bad += is_minimal(inst.graph, full, inst.k) == _subset_sum_exhaustive(s, k)
    ok = mismatches == 0 and gadget_bad == 0
    acceptance_log(7, "minimality", ok,
                   f"{mismatches}/500 set mismatches ({minimal_count} minimal), {gadget_bad}/100 gadget mismatches")
    assert ok


def test_embedding(acceptance_log):
    report = roundtrip_embedding(SEED + 7, 20)
    ok = report.disagree == 0 and report.agree == 20
    acceptance_log(8, "weighted k-clique embedding", ok, f"{report.agree} agree, {report.disagree} disagree")
    assert ok, report.failures[:5]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
