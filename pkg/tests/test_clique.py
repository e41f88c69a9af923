import itertools
import math

import pytest

from charge_removal.clique import (
    build_minimality_gadget,
    clique_goal,
    embed_kcr_into_weighted_k_clique,
    reduce_clique_arbitrary_charges,
    reduce_clique_to_kcr,
    reduce_max_weight_clique_to_kcr,
)
from charge_removal.core import INF, total_energy
from charge_removal.errors import InvalidGraphError, NoBalancedSolution
from charge_removal.graphs import SimpleGraph
from charge_removal.roundtrip import random_balanced_instance, rng_for
from charge_removal.solvers import brute_force_k_clique, brute_force_removal, subset_sum_dp
from charge_removal.verification import RemovalInstance, Variant, is_minimal

from conftest import unit_pair_table


def satisfiable(out):
    return brute_force_removal(out.instance).meets(out.instance.goal)


class TestPlainGadget:
    def test_k3_full(self, k3):
        out = reduce_clique_to_kcr(k3, 3)
        inst = out.instance
        assert len(inst.graph) == 6 and inst.k == 0 and inst.goal == -15.0
        assert total_energy(inst.graph) == -15.0
        assert satisfiable(out)

    def test_p3_unsat(self, p3):
        out = reduce_clique_to_kcr(p3, 3)
        assert brute_force_removal(out.instance).energy == INF
        assert not satisfiable(out)

    def test_k4_scaled_charges(self, k4):
        out = reduce_clique_to_kcr(k4, 2, c=2)
        assert out.instance.k == 4 and out.instance.goal == -6.0
        assert {abs(i.charge) for i in out.instance.graph.ions} == {2}
        assert satisfiable(out)

    @pytest.mark.parametrize("k,goal", [(1, -1.0), (2, -6.0), (3, -15.0), (4, -28.0)])
    def test_goal(self, k, goal):
        assert clique_goal(k) == goal

    def test_decode(self, k3):
        out = reduce_clique_to_kcr(k3, 2)
        assert out.decode == {0: 0, 1: 1, 2: 2, 3: 0, 4: 1, 5: 2}

    @pytest.mark.parametrize("k", [0, 4])
    def test_bad_k(self, k3, k):
        with pytest.raises(ValueError):
            reduce_clique_to_kcr(k3, k)


class TestMaxWeight:
    def test_unit_triangle(self, k3):
        wk3 = SimpleGraph.from_weighted_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
        out = reduce_max_weight_clique_to_kcr(wk3, 3, 3.0)
        assert out.notes["cap"] == 2.0 and out.instance.goal == -9.0
        assert satisfiable(out)

    @pytest.mark.parametrize("v,sat", [(9.0, True), (10.0, False)])
    def test_weighted_triangle(self, v, sat):
        g = SimpleGraph.from_weighted_edges(3, [(0, 1, 2.0), (0, 2, 3.0), (1, 2, 4.0)])
        assert satisfiable(reduce_max_weight_clique_to_kcr(g, 3, v)) is sat

    def test_empty_graph(self):
        assert satisfiable(reduce_max_weight_clique_to_kcr(SimpleGraph(2), 1, 0.0))

    def test_cap_must_exceed_weights(self):
        g = SimpleGraph.from_weighted_edges(2, [(0, 1, 5.0)])
        with pytest.raises(ValueError):
            reduce_max_weight_clique_to_kcr(g, 2, 0.0, cap=5.0)

    @pytest.mark.parametrize("seed", range(12))
    def test_threshold_matches_best_clique(self, seed):
        rng = rng_for(1000, seed)
        n = int(rng.integers(2, 6))
        edges = [(a, b, float(rng.integers(1, 6))) for a, b in itertools.combinations(range(n), 2)
                 if rng.random() < 0.7]
        g = SimpleGraph.from_weighted_edges(n, edges)
        k = int(rng.integers(1, n + 1))
        c = int(rng.integers(1, 3))
        best = brute_force_k_clique(g, k, weighted=True)
        if best is None:
            assert not satisfiable(reduce_max_weight_clique_to_kcr(g, k, 0.0, c))
            return
        assert satisfiable(reduce_max_weight_clique_to_kcr(g, k, best.weight, c))
        assert not satisfiable(reduce_max_weight_clique_to_kcr(g, k, best.weight + 0.5, c))


class TestArbitraryCharges:
    def test_two_minus_one(self, k3):
        out = reduce_clique_arbitrary_charges(k3, 2, {2, -1})
        n = out.notes
        assert (n["deficiency"], n["t"], n["t_c"], n["t_d"]) == (3, 0, 0, 2)
        assert satisfiable(out)

    def test_three_minus_two(self, k4):
        out = reduce_clique_arbitrary_charges(k4, 2, {3, -2})
        n = out.notes
        assert (n["t"], n["t_c"], n["t_d"]) == (0, 0, 1)
        assert satisfiable(out)

    def test_equal_magnitude_delegates(self, k3):
        out = reduce_clique_arbitrary_charges(k3, 2, {1, -1})
        assert out.notes["delegated"]
        assert out.instance == reduce_clique_to_kcr(k3, 2, 1).instance

    def test_no_opposite_signs(self, k3):
        with pytest.raises(NoBalancedSolution):
            reduce_clique_arbitrary_charges(k3, 2, {1, 2})

    @pytest.mark.parametrize("charges", [{2, -1}, {3, -2}, {-3, 1}, {5, -3}])
    def test_balanced_and_consistent(self, p3, charges):
        out = reduce_clique_arbitrary_charges(p3, 2, charges)
        g = out.instance.graph
        assert sum(i.charge for i in g.ions) == 0
        assert satisfiable(out)
        assert not satisfiable(reduce_clique_arbitrary_charges(p3, 3, charges))


class TestMinimalityGadget:
    def test_degenerate(self):
        with pytest.raises(ValueError):
            build_minimality_gadget([1, 2], 3)

    @pytest.mark.parametrize("s,k,negs,kp,minimal", [([2, 3, 7], 5, (-5, -7), 7, False), ([2, 4, 8], 5, (-5, -9), 9, True)])
    def test_examples(self, s, k, negs, kp, minimal):
        inst, full = build_minimality_gadget(s, k)
        qs = [inst.graph.ion(i).charge for i in sorted(full)]
        assert tuple(qs[len(s):]) == negs and inst.k == kp
        assert is_minimal(inst.graph, full, inst.k) is minimal
        assert subset_sum_dp(s, k)[0] is not minimal


class TestEmbedding:
    def test_two_plus_two(self):
        emb = embed_kcr_into_weighted_k_clique(RemovalInstance(unit_pair_table(2, 2), Variant.EXACT_K, 0))
        assert emb.graph.n == 4 and len(emb.graph.edges) == 2 and emb.k_prime == 2

    def test_three_by_three_shape(self):
        emb = embed_kcr_into_weighted_k_clique(RemovalInstance(unit_pair_table(3, 3), Variant.EXACT_K, 0))
        assert emb.graph.n == 9
        cliques = [c for c in itertools.combinations(range(9), 3) if emb.graph.is_clique(c)]
        assert len(cliques) == 6  # 3! perfect matchings
        for c in cliques:
            ps = {emb.vertices[v][0] for v in c}
            ns = {emb.vertices[v][1] for v in c}
            assert len(ps) == 3 and len(ns) == 3

    @pytest.mark.parametrize("seed", range(6))
    def test_weight_is_minus_energy(self, seed):
        rng = rng_for(77, seed)
        g = random_balanced_instance(rng, 3)
        inst = RemovalInstance(g, Variant.EXACT_K, 0)
        emb = embed_kcr_into_weighted_k_clique(inst)
        best = brute_force_k_clique(emb.graph, 3, weighted=True)
        assert math.isclose(best.weight, -brute_force_removal(inst).energy, abs_tol=1e-9)

    def test_rejects_mixed_magnitudes(self):
        inst, _ = build_minimality_gadget([2, 3], 2)
        with pytest.raises(InvalidGraphError):
            embed_kcr_into_weighted_k_clique(inst)

    def test_rejects_forbidden(self, k3):
        with pytest.raises(InvalidGraphError):
            embed_kcr_into_weighted_k_clique(reduce_clique_to_kcr(SimpleGraph(3), 1).instance)

    def test_rejects_at_least(self):
        with pytest.raises(ValueError):
            embed_kcr_into_weighted_k_clique(RemovalInstance(unit_pair_table(3, 3), Variant.AT_LEAST_K, 1))
