"""Seed selection: greedy conditional picking, the multi-product selection
game with opponent inference, and the classic structural baselines."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .catalog import Relation
from .engine import init_state, run_to_quiescence
from .influence import ConditionalEvaluator, EvalMode, SeedPlan, joint_gain

__all__ = [
    "GameScope",
    "SelectionResult",
    "TraceRow",
    "JTierResult",
    "c_tier",
    "lt_greedy",
    "top_pagerank",
    "top_indegree",
    "random_seeds",
    "infer_next_seed",
    "j_tier",
    "write_trace_csv",
]


class GameScope(str, Enum):
    """Which opponents a selector models in the seeding game."""

    ALL = "all"
    COMPETING_ONLY = "competing-only"
    COMPLEMENTARY_ONLY = "complementary-only"
    INDEPENDENT_ONLY = "independent-only"


@dataclass
class SelectionResult:
    seeds: list[int]
    gains: list[float]
    truncated: bool = False

    def __iter__(self):
        return iter(self.seeds)

    def __len__(self):
        return len(self.seeds)


def _argmax_gain(gain_of, n, exclude):
    """Max-gain user outside ``exclude``; ties go to the smallest id."""
    best_u = None
    best_g = -np.inf
    for u in range(n):
        if u in exclude:
            continue
        g = gain_of(u)
        if g > best_g:
            best_u, best_g = u, g
    return best_u, best_g


def c_tier(graph, catalog, target, opponents, k, mode, weights=None):
    """Greedy conditional seed selection for the target product.

    The opponents' propagation runs once and is cached; each of the ``k``
    rounds commits the user with the largest marginal conditional influence
    (naive full scan, ties to the smallest id).  ``k`` beyond the node count
    truncates with a flag.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    n = graph.node_count
    truncated = k > n
    rounds = min(k, n)
    ev = ConditionalEvaluator(graph, catalog, target, opponents, mode, weights=weights)
    chosen, gains = [], []
    exclude = set()
    for _ in range(rounds):
        u, g = _argmax_gain(ev.gain, n, exclude)
        if u is None:
            truncated = True
            break
        ev.commit(u)
        chosen.append(u)
        gains.append(g)
        exclude.add(u)
    return SelectionResult(chosen, gains, truncated)


def _single_product_catalog():
    from .catalog import CatalogSpec, build_catalog

    return build_catalog(CatalogSpec(products=["only"], target="only"), rng_seed=0)


def lt_greedy(graph, k, mode=None, thresholds=None, weights=None):
    """Classic greedy selection under static single-product thresholds.

    ``thresholds`` is a per-user vector; if omitted, one is drawn from the
    mode.  Matches :func:`c_tier` exactly when every opponent is independent
    and the threshold draws agree.
    """
    cat = _single_product_catalog()
    if thresholds is not None:
        thr = np.asarray(thresholds, dtype=np.float64).reshape(graph.node_count, 1)
        mode = EvalMode.fixed(thr)
    elif mode is None:
        raise ValueError("need mode or explicit thresholds")
    return c_tier(graph, cat, 0, SeedPlan.empty(1), k, mode, weights=weights)


def top_pagerank(g, k, damping=0.85):
    from .graph import pagerank

    if not 0 <= k <= g.node_count:
        raise ValueError(f"k must be in [0, {g.node_count}]")
    scores, _ = pagerank(g, damping=damping)
    order = sorted(range(g.node_count), key=lambda u: (-scores[u], u))
    return order[:k]


def top_indegree(g, k):
    from .graph import in_degree_rank

    if not 0 <= k <= g.node_count:
        raise ValueError(f"k must be in [0, {g.node_count}]")
    return in_degree_rank(g)[:k]


def random_seeds(g, k, rng_seed):
    if not 0 <= k <= g.node_count:
        raise ValueError(f"k must be in [0, {g.node_count}]")
    rng = np.random.default_rng(rng_seed)
    return rng.choice(g.node_count, size=k, replace=False).tolist()


def infer_next_seed(state, plan, product):
    """The next seed a selfish product would pick on the current game state.

    Evaluates marginal joint influence on forks of the (quiescent) state;
    returns None when the product's budget or the candidate pool is
    exhausted.
    """
    seeds = plan.seeds[product]
    if len(seeds) >= plan.budgets[product] or len(seeds) >= state.n:
        return None
    exclude = set(seeds)
    u, _ = _argmax_gain(lambda v: joint_gain(state, product, v), state.n, exclude)
    return u


@dataclass
class TraceRow:
    round: int
    product: int
    product_name: str
    user: int
    gain_estimate: float
    cumulative: int


@dataclass
class JTierResult:
    plan: SeedPlan
    trace: list[TraceRow] = field(default_factory=list)
    participants: list[int] = field(default_factory=list)

    def target_rows(self, target):
        return [r for r in self.trace if r.product == target]


def _scope_participants(catalog, scope):
    target = catalog.target
    if scope == GameScope.ALL:
        return list(range(catalog.n_products))
    wanted = {
        GameScope.COMPETING_ONLY: Relation.COMPETING,
        GameScope.COMPLEMENTARY_ONLY: Relation.COMPLEMENTARY,
        GameScope.INDEPENDENT_ONLY: Relation.INDEPENDENT,
    }[scope]
    others = [o for o in range(catalog.n_products)
              if o != target and catalog.relation(o, target) is wanted]
    return sorted([target] + others)


def j_tier(graph, catalog, budgets, scope, mode, rng_seed, weights=None):
    """Round-based selfish seeding game over all in-scope products.

    Each round draws a random order over the products still under budget.
    On its turn a product infers every other participant's next greedy pick
    on the live state, adds those picks to a hypothetical clone, selects its
    own seed as the best marginal joint gain against that clone, and commits
    the pick to the real state (activate, propagate, update thresholds).
    Returns all products' seed lists plus the per-pick trace.
    """
    scope = GameScope(scope)
    if mode.kind != "fixed":
        raise ValueError("the seeding game needs a fixed threshold draw")
    n, p = graph.node_count, catalog.n_products
    thresholds = mode.draw_thresholds(n, p)[0]
    participants = _scope_participants(catalog, scope)
    plan = SeedPlan.empty(p, budgets)
    state = init_state(graph, catalog, thresholds, seeds=None, weights=weights)
    run_to_quiescence(state)
    rng = np.random.default_rng(rng_seed)
    trace = []
    exhausted = set()
    round_no = 0
    while True:
        open_products = [i for i in participants
                         if i not in exhausted and len(plan.seeds[i]) < plan.budgets[i]]
        if not open_products:
            break
        round_no += 1
        order = [open_products[i] for i in rng.permutation(len(open_products))]
        for i in order:
            if len(plan.seeds[i]) >= plan.budgets[i] or i in exhausted:
                continue
            inferred = []
            for o in participants:
                if o == i or o in exhausted:
                    continue
                guess = infer_next_seed(state, plan, o)
                if guess is not None:
                    inferred.append((o, guess))
            hyp = state.fork()
            for o, guess in inferred:
                hyp.activate(o, np.asarray([guess], dtype=np.int64))
            if inferred:
                run_to_quiescence(hyp)
            pick, gain = _argmax_gain(lambda v: joint_gain(hyp, i, v),
                                      n, set(plan.seeds[i]))
            if pick is None:
                exhausted.add(i)
                continue
            state.activate(i, np.asarray([pick], dtype=np.int64))
            run_to_quiescence(state)
            plan.seeds[i].append(pick)
            trace.append(TraceRow(round_no, i, catalog.products[i], pick,
                                  gain, state.active_count(i)))
    return JTierResult(plan, trace, participants)


def write_trace_csv(trace, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "product", "user", "gain_estimate", "cumulative"])
        for r in trace:
            writer.writerow([r.round, r.product_name, r.user, r.gain_estimate, r.cumulative])
