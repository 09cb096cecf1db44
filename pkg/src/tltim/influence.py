"""Conditional and joint influence functions and marginal gains.

Conditional influence runs in two phases: the opponents' seeds propagate
first (all products, threshold updates applied), then the target's seeds
spread as a classic single-product cascade on the resulting network.  Joint
influence activates every product's seeds at step 0 and lets all products
propagate together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import init_state, run_to_quiescence

__all__ = [
    "SeedPlan",
    "EvalMode",
    "conditional_influence",
    "joint_influence",
    "marginal_gain",
    "target_gain",
    "joint_gain",
    "ConditionalEvaluator",
]


@dataclass
class SeedPlan:
    """Per-product ordered seed lists with budgets.

    A user may seed several products at once, but never appears twice in one
    product's list, and no list exceeds its budget.
    """

    seeds: list[list[int]]
    budgets: list[int]

    def __post_init__(self):
        if len(self.seeds) != len(self.budgets):
            raise ValueError("seeds and budgets must align")
        self.seeds = [list(s) for s in self.seeds]
        self.budgets = [int(b) for b in self.budgets]
        for j, s in enumerate(self.seeds):
            if len(set(s)) != len(s):
                raise ValueError(f"duplicate seed for product {j}")
            if len(s) > self.budgets[j]:
                raise ValueError(f"product {j} exceeds its budget")

    @classmethod
    def empty(cls, n_products, budgets=None):
        budgets = list(budgets) if budgets is not None else [0] * n_products
        return cls([[] for _ in range(n_products)], budgets)

    def replaced(self, j, seed_list):
        seeds = [list(s) for s in self.seeds]
        budgets = list(self.budgets)
        seeds[j] = list(seed_list)
        budgets[j] = max(budgets[j], len(seed_list))
        return SeedPlan(seeds, budgets)

    def total_seeds(self):
        return sum(len(s) for s in self.seeds)


@dataclass
class EvalMode:
    """How influence is evaluated: one fixed threshold draw, an explicit
    threshold matrix, or the mean over R independent draws."""

    kind: str = "fixed"  # "fixed" | "expected"
    rng_seed: int | None = None
    samples: int = 1
    thresholds: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("fixed", "expected"):
            raise ValueError(f"unknown eval mode {self.kind!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.kind == "fixed" and self.rng_seed is None and self.thresholds is None:
            raise ValueError("fixed mode needs rng_seed or an explicit threshold matrix")
        if self.kind == "expected" and self.rng_seed is None:
            raise ValueError("expected mode needs rng_seed")

    @classmethod
    def fixed(cls, thresholds):
        return cls(kind="fixed", thresholds=np.asarray(thresholds, dtype=np.float64))

    @classmethod
    def fixed_draw(cls, rng_seed):
        return cls(kind="fixed", rng_seed=rng_seed)

    @classmethod
    def expected(cls, rng_seed, samples):
        return cls(kind="expected", rng_seed=rng_seed, samples=int(samples))

    def draw_thresholds(self, n, p):
        """The threshold matrices this mode evaluates over (same draws are
        reused across all candidate evaluations; common random numbers)."""
        if self.thresholds is not None:
            t = self.thresholds
            if t.shape != (n, p):
                raise ValueError(f"threshold matrix must be shape {(n, p)}")
            return [t]
        rng = np.random.default_rng(self.rng_seed)
        count = self.samples if self.kind == "expected" else 1
        return [rng.random((n, p)) for _ in range(count)]


# -- singleton-gain fast paths -------------------------------------------
#
# Both helpers require a quiescent state (empty frontier / recheck for the
# products they touch).  They return the exact count delta that committing
# the candidate would produce; the common no-cascade case is decided from
# the candidate's out-edges alone, without forking the state.


def target_gain(state, target, u, return_state=False):
    """Gain in the target's active count from seeding ``u``, propagating the
    target product only (opponent statuses stay frozen)."""
    if state.status[target][u]:
        return (0, None) if return_state else 0
    g = state.graph
    s, e = g.out_ptr[u], g.out_ptr[u + 1]
    nbrs = g.out_idx[s:e]
    w = state.weights[target][s:e]
    crossed = ((~state.status[target][nbrs])
               & (state.insum[target][nbrs] + w >= state.theta[target][nbrs]))
    if not crossed.any():
        return (1, None) if return_state else 1
    before = state.active_count(target)
    forked = state.fork()
    forked.activate(target, np.asarray([u], dtype=np.int64))
    run_to_quiescence(forked, products=[target])
    gain = forked.active_count(target) - before
    return (gain, forked) if return_state else gain


def joint_gain(state, product, u, return_state=False):
    """Gain in ``product``'s active count from seeding ``u`` and letting all
    products propagate together."""
    if state.status[product][u]:
        return (0, None) if return_state else 0
    g = state.graph
    s, e = g.out_ptr[u], g.out_ptr[u + 1]
    nbrs = g.out_idx[s:e]
    w = state.weights[product][s:e]
    cascade = bool(((~state.status[product][nbrs])
                    & (state.insum[product][nbrs] + w
                       >= state.theta[product][nbrs])).any())
    if not cascade:
        # threshold drops at u itself may fire other products
        for l in range(state.p):
            if l == product or state.status[l][u] or state.incnt[l][u] == 0:
                continue
            phi = state._phi[product][l]
            if isinstance(phi, float):
                if phi == 1.0:
                    continue
                scaled = state.theta[l][u] * phi
            else:
                scaled = state.theta[l][u] * phi[u]
            if state.insum[l][u] >= scaled:
                cascade = True
                break
    if not cascade:
        return (1, None) if return_state else 1
    before = state.active_count(product)
    forked = state.fork()
    forked.activate(product, np.asarray([u], dtype=np.int64))
    run_to_quiescence(forked)
    gain = forked.active_count(product) - before
    return (gain, forked) if return_state else gain


class ConditionalEvaluator:
    """Conditional influence with the opponents' propagation cached.

    Holds one phase-1 state per threshold draw; evaluations fork from those
    states, so repeated calls (greedy scans) never re-run the opponents.
    ``commit`` advances the cached states by a chosen seed, which keeps
    incremental greedy selection exact.
    """

    def __init__(self, graph, catalog, target, opponents, mode, weights=None):
        opponents = opponents if opponents is not None else SeedPlan.empty(catalog.n_products)
        if opponents.seeds[target]:
            raise ValueError("opponent plan must leave the target product empty")
        self.graph = graph
        self.catalog = catalog
        self.target = target
        self.mode = mode
        self.runs = []
        for thr in mode.draw_thresholds(graph.node_count, catalog.n_products):
            st = init_state(graph, catalog, thr, seeds=opponents, weights=weights)
            run_to_quiescence(st)
            self.runs.append(st)
        self.committed = []

    def phase1_states(self):
        return self.runs

    def influence(self, seed_set):
        """Influence of ``seed_set`` from the committed baseline."""
        total = 0.0
        for st in self.runs:
            forked = st.fork()
            forked.activate(self.target, np.asarray(sorted(seed_set), dtype=np.int64))
            run_to_quiescence(forked, products=[self.target])
            total += forked.active_count(self.target)
        return total / len(self.runs)

    def gain(self, u):
        """Marginal gain of seeding ``u`` on top of the committed seeds."""
        return sum(target_gain(st, self.target, u) for st in self.runs) / len(self.runs)

    def commit(self, u):
        for st in self.runs:
            st.activate(self.target, np.asarray([u], dtype=np.int64))
            run_to_quiescence(st, products=[self.target])
        self.committed.append(u)

    def committed_influence(self):
        return sum(st.active_count(self.target) for st in self.runs) / len(self.runs)


def conditional_influence(graph, catalog, target, seed_set, opponents, mode, weights=None):
    """Target influence after the opponents' seeds have fully propagated.

    Returns an exact count in fixed mode and a mean over draws in expected
    mode.  The target's entry in ``opponents`` must be empty.
    """
    ev = ConditionalEvaluator(graph, catalog, target, opponents, mode, weights=weights)
    value = ev.influence(set(seed_set))
    return int(value) if mode.kind == "fixed" else value


def joint_influence(graph, catalog, target, plan, mode, weights=None):
    """Target influence when every product's seeds start at step 0 together."""
    total = 0.0
    draws = mode.draw_thresholds(graph.node_count, catalog.n_products)
    for thr in draws:
        st = init_state(graph, catalog, thr, seeds=plan, weights=weights)
        run_to_quiescence(st)
        total += st.active_count(target)
    value = total / len(draws)
    return int(value) if mode.kind == "fixed" else value


def marginal_gain(evaluate, seeds, u):
    """Gain of adding ``u`` to ``seeds`` under the same evaluation draw.

    ``evaluate`` maps a seed set to an influence value; ``u`` must not be
    seeded already.
    """
    seeds = set(seeds)
    if u in seeds:
        raise ValueError(f"user {u} is already a seed")
    return evaluate(seeds | {u}) - evaluate(seeds)
