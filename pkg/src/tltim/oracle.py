"""Brute-force oracles and certified counterexample fixtures.

The oracles re-implement the diffusion semantics independently of the
engine: plain Python loops, full rescans each step, thresholds recomputed
from the initial draw and the set of active products every time.  They are
capped to tiny instances and exist to cross-validate the engine and the
greedy selectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

import numpy as np

from .catalog import CatalogSpec, Relation, RelationSpec, build_catalog
from .graph import Graph
from .influence import EvalMode, SeedPlan, joint_influence

__all__ = [
    "brute_force_influence",
    "brute_force_conditional",
    "brute_force_opt",
    "brute_force_bounds",
    "BoundsResult",
    "Fixture",
    "FixtureCase",
    "counterexample_fixtures",
    "check_counterexamples",
    "CounterexampleReport",
    "random_instance",
    "iter_seed_plans",
]

MAX_ORACLE_NODES = 12
MAX_OPT_SETS = 100_000
MAX_BOUND_EVALS = 1_000_000


def _in_lists(graph, weights, n_products):
    """Per-product in-neighbour lists [(v, w), ...] built from scratch."""
    if weights is None:
        weights = [graph.out_w] * n_products
    elif isinstance(weights, np.ndarray) and weights.ndim == 1:
        weights = [weights] * n_products
    lists = []
    for j in range(n_products):
        wj = weights[j]
        inn = [[] for _ in range(graph.node_count)]
        for e in range(graph.edge_count):
            inn[int(graph.dst[e])].append((int(graph.src[e]), float(wj[e])))
        lists.append(inn)
    return lists


def _theta_now(catalog, theta0, u, j, active):
    th = theta0[u][j]
    for l in range(catalog.n_products):
        if l != j and u in active[l]:
            th *= catalog.coefficient(u, l, j)
    return th


def _sync_pass(catalog, inn, theta0, active, products):
    """One synchronous pass; returns per-product sets of new activations."""
    new = {}
    for j in products:
        got = set()
        for u in range(len(theta0)):
            if u in active[j]:
                continue
            acc = 0.0
            seen = False
            for (v, w) in inn[j][u]:
                if v in active[j]:
                    acc += w
                    seen = True
            if seen and acc >= _theta_now(catalog, theta0, u, j, active):
                got.add(u)
        if got:
            new[j] = got
    return new


def _check_cap(graph):
    if graph.node_count > MAX_ORACLE_NODES:
        raise ValueError(f"oracle capped at {MAX_ORACLE_NODES} nodes")


def brute_force_influence(graph, catalog, target, plan, thresholds, weights=None):
    """Quiescent active count for ``target`` with all products seeded at
    step 0 together (joint semantics), by repeated full rescans."""
    _check_cap(graph)
    p = catalog.n_products
    theta0 = np.asarray(thresholds, dtype=np.float64)
    inn = _in_lists(graph, weights, p)
    seed_lists = getattr(plan, "seeds", plan)
    active = [set(s) for s in seed_lists]
    while True:
        new = _sync_pass(catalog, inn, theta0, active, range(p))
        if not new:
            break
        for j, got in new.items():
            active[j] |= got
    return len(active[target])


def brute_force_conditional(graph, catalog, target, seed_set, opponents, thresholds,
                            weights=None):
    """Conditional semantics: opponents propagate to quiescence first, then
    the target spreads alone on the rescaled thresholds."""
    _check_cap(graph)
    p = catalog.n_products
    theta0 = np.asarray(thresholds, dtype=np.float64)
    inn = _in_lists(graph, weights, p)
    opp_lists = getattr(opponents, "seeds", opponents)
    if opp_lists[target]:
        raise ValueError("opponent plan must leave the target product empty")
    active = [set(s) for s in opp_lists]
    while True:
        new = _sync_pass(catalog, inn, theta0, active, range(p))
        if not new:
            break
        for j, got in new.items():
            active[j] |= got
    active[target] = set(seed_set)
    while True:
        new = _sync_pass(catalog, inn, theta0, active, [target])
        if not new:
            break
        active[target] |= new[target]
    return len(active[target])


def brute_force_opt(graph, catalog, target, opponents, k, thresholds, weights=None):
    """Exhaustive conditional optimum over all size-k target seed sets.

    Returns ``(best_set, best_value)``; ties go to the lexicographically
    first combination.
    """
    _check_cap(graph)
    n = graph.node_count
    if k > n:
        raise ValueError("k exceeds node count")
    if math.comb(n, k) > MAX_OPT_SETS:
        raise ValueError("too many candidate sets for exhaustive search")
    best_set, best_val = None, -1
    for combo in combinations(range(n), k):
        val = brute_force_conditional(graph, catalog, target, combo, opponents,
                                      thresholds, weights=weights)
        if val > best_val:
            best_set, best_val = set(combo), val
    return best_set, best_val


@dataclass
class BoundsResult:
    maxmin: int
    maxmin_set: set
    maxmax: int
    maxmax_set: set


def brute_force_bounds(graph, catalog, target, budgets, thresholds, weights=None):
    """Exact worst-case and best-case joint influence over all opponent
    strategies of the given sizes, by nested enumeration."""
    _check_cap(graph)
    n = graph.node_count
    p = catalog.n_products
    budgets = list(budgets)
    opponents = [j for j in range(p) if j != target]
    spaces = [list(combinations(range(n), budgets[o])) for o in opponents]
    n_grid = 1
    for s in spaces:
        n_grid *= len(s)
    total = math.comb(n, budgets[target]) * n_grid
    if total > MAX_BOUND_EVALS:
        raise ValueError("bounds enumeration exceeds the evaluation cap")
    maxmin, maxmin_set = -1, None
    maxmax, maxmax_set = -1, None
    for combo in combinations(range(n), budgets[target]):
        worst, best = None, None
        for opp_combo in iproduct(*spaces):
            seeds = [[] for _ in range(p)]
            seeds[target] = list(combo)
            for o, s in zip(opponents, opp_combo):
                seeds[o] = list(s)
            val = brute_force_influence(graph, catalog, target, seeds, thresholds,
                                        weights=weights)
            worst = val if worst is None else min(worst, val)
            best = val if best is None else max(best, val)
        if worst > maxmin:
            maxmin, maxmin_set = worst, set(combo)
        if best > maxmax:
            maxmax, maxmax_set = best, set(combo)
    return BoundsResult(maxmin, maxmin_set, maxmax, maxmax_set)


# -- counterexample fixtures ----------------------------------------------
#
# Four scripted two-product instances on users A,B,C,D (ids 0..3) whose
# joint-influence counts certify that the joint function is neither monotone
# nor submodular once a competing or complementary product is present.  The
# complementary-submodular instance needs the extra B->D edge and the 0.55
# threshold at D to make its gain gap strict; the other three are pinned by
# their expected counts alone.

A, B, C, D = 0, 1, 2, 3


@dataclass
class FixtureCase:
    label: str
    target_seeds: list[int]
    opponent_seeds: list[int]
    expected: int

    def plan(self):
        k = max(len(self.target_seeds), len(self.opponent_seeds), 1)
        return SeedPlan([list(self.target_seeds), list(self.opponent_seeds)], [k, k])


@dataclass
class Fixture:
    name: str
    graph: Graph
    catalog: object
    thresholds: np.ndarray
    cases: list[FixtureCase]
    # inequality over case influences, as (kind, indices); "gt": I[a] > I[b],
    # "gap": I[a] - I[b] < I[c] - I[d]
    inequality: tuple

    def case_influences(self, evaluate=None):
        evaluate = evaluate or (lambda case: joint_influence(
            self.graph, self.catalog, 0, case.plan(), EvalMode.fixed(self.thresholds)))
        return [evaluate(case) for case in self.cases]


def _fixture(name, edges, target_theta, relation, phi, cases, inequality):
    graph = Graph(4, edges)
    spec = CatalogSpec(
        products=["target", "other"],
        target="target",
        relations=[RelationSpec("other", "target", relation, override=phi)],
        budgets={"target": 4, "other": 4},
    )
    catalog = build_catalog(spec, rng_seed=0)
    thresholds = np.column_stack([np.asarray(target_theta), np.full(4, 0.99)])
    return Fixture(name, graph, catalog, thresholds, cases, inequality)


def counterexample_fixtures():
    comp_m = _fixture(
        "competing-monotone",
        [(A, B, 0.3), (A, C, 0.5)],
        [0.99, 0.25, 0.45, 0.45],
        Relation.COMPETING, 11.0 / 9.0,
        [FixtureCase("seeds {A} vs {D}", [A], [D], 3),
         FixtureCase("seeds {A,B} vs {C}", [A, B], [C], 2)],
        ("gt", 0, 1),
    )
    cpl_m = _fixture(
        "complementary-monotone",
        [(A, B, 0.3), (A, C, 0.4)],
        [0.99, 0.25, 0.45, 0.45],
        Relation.COMPLEMENTARY, 7.0 / 9.0,
        [FixtureCase("seeds {A} vs {C}", [A], [C], 3),
         FixtureCase("seeds {A,B} vs {D}", [A, B], [D], 2)],
        ("gt", 0, 1),
    )
    comp_s = _fixture(
        "competing-submodular",
        [(A, B, 0.3), (A, C, 0.4), (C, D, 0.5)],
        [0.99, 0.25, 0.45, 0.45],
        Relation.COMPETING, 11.0 / 9.0,
        [FixtureCase("T={A} vs {D}", [A], [D], 2),
         FixtureCase("T+u={A,C} vs {D}", [A, C], [D], 3),
         FixtureCase("S={A,B} vs {C}", [A, B], [C], 2),
         FixtureCase("S+u={A,B,C} vs {C}", [A, B, C], [C], 4)],
        ("gap", 1, 0, 3, 2),
    )
    cpl_s = _fixture(
        "complementary-submodular",
        [(A, B, 0.3), (A, C, 0.4), (B, D, 0.1), (C, D, 0.5)],
        [0.99, 0.35, 0.45, 0.55],
        Relation.COMPLEMENTARY, 7.0 / 9.0,
        [FixtureCase("T={A} vs {D}", [A], [D], 1),
         FixtureCase("T+u={A,C} vs {C}", [A, C], [C], 2),
         FixtureCase("S={A,B} vs {D}", [A, B], [D], 2),
         FixtureCase("S+u={A,B,C} vs {C}", [A, B, C], [C], 4)],
        ("gap", 1, 0, 3, 2),
    )
    return [comp_m, cpl_m, comp_s, cpl_s]


@dataclass
class CounterexampleReport:
    rows: list = field(default_factory=list)  # (fixture, label, expected, engine, oracle, ok)
    inequality_rows: list = field(default_factory=list)  # (fixture, text, ok)

    @property
    def passed(self):
        return (all(r[-1] for r in self.rows)
                and all(r[-1] for r in self.inequality_rows))

    def lines(self):
        out = []
        for fixture, label, expected, eng, orc, ok in self.rows:
            out.append(f"[{'PASS' if ok else 'FAIL'}] {fixture}: {label}: "
                       f"expected {expected}, engine {eng}, oracle {orc}")
        for fixture, text, ok in self.inequality_rows:
            out.append(f"[{'PASS' if ok else 'FAIL'}] {fixture}: {text}")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def check_counterexamples():
    """Replay all four fixtures through both the engine and the oracle and
    assert the expected counts and strict inequalities."""
    report = CounterexampleReport()
    for fx in counterexample_fixtures():
        mode = EvalMode.fixed(fx.thresholds)
        values = []
        for case in fx.cases:
            eng = joint_influence(fx.graph, fx.catalog, 0, case.plan(), mode)
            orc = brute_force_influence(fx.graph, fx.catalog, 0, case.plan().seeds,
                                        fx.thresholds)
            ok = eng == case.expected and orc == case.expected
            report.rows.append((fx.name, case.label, case.expected, eng, orc, ok))
            values.append(eng)
        if fx.inequality[0] == "gt":
            _, a, b = fx.inequality
            ok = values[a] > values[b]
            text = f"I[{fx.cases[a].label}]={values[a]} > I[{fx.cases[b].label}]={values[b]}"
        else:
            _, a, b, c, d = fx.inequality
            ok = values[a] - values[b] < values[c] - values[d]
            text = (f"gain {values[a]}-{values[b]} < gain {values[c]}-{values[d]}")
        report.inequality_rows.append((fx.name, text, ok))
    return report


# -- random desk-scale instances -------------------------------------------


def random_instance(rng, n_nodes=None, n_products=None, edge_prob=0.35):
    """Small random instance: digraph with uniform weights, random relation
    classes, thresholds on a 0.05 grid.  Deterministic given ``rng``."""
    n = int(n_nodes) if n_nodes else int(rng.integers(4, 9))
    p = int(n_products) if n_products else int(rng.integers(1, 4))
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < edge_prob:
                edges.append((u, v, float(rng.random())))
    graph = Graph(n, edges)
    names = [f"prod{j}" for j in range(p)]
    relations = []
    classes = [Relation.INDEPENDENT, Relation.COMPETING, Relation.COMPLEMENTARY]
    for a in range(p):
        for b in range(a + 1, p):
            rel = classes[int(rng.integers(3))]
            relations.append(RelationSpec(names[a], names[b], rel))
    spec = CatalogSpec(products=names, target=names[0], relations=relations,
                       budgets={nm: n for nm in names})
    catalog = build_catalog(spec, rng_seed=int(rng.integers(2 ** 31)))
    thresholds = rng.integers(0, 21, size=(n, p)) / 20.0
    return graph, catalog, thresholds


def iter_seed_plans(n_nodes, n_products, max_total):
    """Every seed plan whose lists are disjoint-free per product and whose
    total size is at most ``max_total`` (the empty plan included)."""
    per_product = []
    for size in range(max_total + 1):
        per_product.extend(combinations(range(n_nodes), size))

    def rec(j, remaining):
        if j == n_products:
            yield []
            return
        for s in per_product:
            if len(s) > remaining:
                continue
            for rest in rec(j + 1, remaining - len(s)):
                yield [list(s)] + rest

    yield from rec(0, max_total)
