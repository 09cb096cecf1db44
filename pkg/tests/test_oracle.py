from itertools import combinations

import numpy as np
import pytest

from tltim.catalog import Relation
from tltim.engine import init_state, run_to_quiescence
from tltim.graph import Graph
from tltim.influence import EvalMode, SeedPlan, joint_influence
from tltim.oracle import (brute_force_bounds, brute_force_conditional,
                          brute_force_influence, brute_force_opt,
                          check_counterexamples, counterexample_fixtures, iter_seed_plans,
                          random_instance)
from tltim.seeders import c_tier

from conftest import make_catalog, thr_matrix


class TestBruteForceInfluence:
    def test_agrees_with_engine_on_all_path3_subsets(self, path3, single_catalog):
        thr = thr_matrix([0.9, 0.4, 0.5])
        for size in range(4):
            for seeds in combinations(range(3), size):
                plan = SeedPlan([list(seeds)], [3])
                eng = joint_influence(path3, single_catalog, 0, plan,
                                      EvalMode.fixed(thr))
                orc = brute_force_influence(path3, single_catalog, 0, plan.seeds, thr)
                assert eng == orc

    def test_empty_plan_zero(self, path3, single_catalog):
        got = brute_force_influence(path3, single_catalog, 0, [[]],
                                    thr_matrix([0.5] * 3))
        assert got == 0

    def test_competing_submodular_counts(self):
        fx = [f for f in counterexample_fixtures() if f.name == "competing-submodular"][0]
        counts = [brute_force_influence(fx.graph, fx.catalog, 0, c.plan().seeds,
                                        fx.thresholds) for c in fx.cases]
        assert counts == [2, 3, 2, 4]

    def test_size_cap(self, single_catalog):
        g = Graph(13, [(0, 1, 0.5)])
        with pytest.raises(ValueError):
            brute_force_influence(g, single_catalog, 0, [[0]], np.zeros((13, 1)) + 0.5)


class TestBruteForceOpt:
    def test_full_budget_equals_all_seeded(self, path3, single_catalog):
        thr = thr_matrix([0.9, 0.4, 0.5])
        best, val = brute_force_opt(path3, single_catalog, 0, SeedPlan.empty(1),
                                    3, thr)
        assert best == {0, 1, 2} and val == 3

    def test_path3_singleton_optimum(self, path3, single_catalog):
        best, val = brute_force_opt(path3, single_catalog, 0, SeedPlan.empty(1),
                                    1, thr_matrix([0.9, 0.4, 0.5]))
        assert (best, val) == ({0}, 3)

    def test_optimum_dominates_greedy(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            g, cat, thr = random_instance(rng, n_nodes=7)
            opp = SeedPlan.empty(cat.n_products)
            res = c_tier(g, cat, 0, opp, 2, EvalMode.fixed(thr))
            greedy_val = brute_force_conditional(g, cat, 0, res.seeds, opp.seeds, thr)
            _, opt = brute_force_opt(g, cat, 0, opp, 2, thr)
            assert opt >= greedy_val


class TestBounds:
    def test_single_product_maxmin_equals_maxmax_equals_opt(self, path3, single_catalog):
        thr = thr_matrix([0.9, 0.4, 0.5])
        bounds = brute_force_bounds(path3, single_catalog, 0, [1], thr)
        _, opt = brute_force_opt(path3, single_catalog, 0, SeedPlan.empty(1), 1, thr)
        assert bounds.maxmin == bounds.maxmax == opt

    def test_fixture_ordering_and_independent_collapse(self):
        for fx in counterexample_fixtures():
            bounds = brute_force_bounds(fx.graph, fx.catalog, 0, [1, 1], fx.thresholds)
            assert bounds.maxmin <= bounds.maxmax
            indep = make_catalog(["target", "other"], "target",
                                 [("other", "target", Relation.INDEPENDENT)])
            for k in (1, 2):
                b2 = brute_force_bounds(fx.graph, indep, 0, [k, 1], fx.thresholds)
                assert b2.maxmin == b2.maxmax

    def test_bounds_cap(self, single_catalog):
        g = Graph(12, [(0, 1, 0.5)])
        cat = make_catalog(["a", "b", "c"], "a")
        with pytest.raises(ValueError):
            brute_force_bounds(g, cat, 0, [6, 6, 6], np.full((12, 3), 0.5))


class TestCounterexampleSuite:
    def test_all_fixtures_pass(self):
        report = check_counterexamples()
        assert report.passed, "\n" + str(report)

    def test_report_has_all_rows(self):
        report = check_counterexamples()
        assert len(report.rows) == 12
        assert len(report.inequality_rows) == 4


class TestOracleEngineAgreement:
    def test_random_instances_all_plans(self):
        rng = np.random.default_rng(99)
        for _ in range(30):
            g, cat, thr = random_instance(rng)
            for seeds in iter_seed_plans(g.node_count, cat.n_products, 2):
                plan = SeedPlan(seeds, [g.node_count] * cat.n_products)
                eng = joint_influence(g, cat, 0, plan, EvalMode.fixed(thr))
                orc = brute_force_influence(g, cat, 0, plan.seeds, thr)
                assert eng == orc


class TestIterSeedPlans:
    def test_counts_small_case(self):
        plans = list(iter_seed_plans(3, 2, 1))
        # empty plan + 3 singletons for each of the 2 products
        assert len(plans) == 1 + 3 * 2

    def test_respects_total(self):
        for seeds in iter_seed_plans(4, 2, 2):
            assert sum(len(s) for s in seeds) <= 2
