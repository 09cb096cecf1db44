"""Experiment protocols: conditional and game-based sweeps, seed-set
intersection tables, per-seed marginal influence, all emitted as CSV.

Outputs are a pure function of the config: rows are sorted canonically and
all randomness flows through the named seeds, so re-running a config yields
byte-identical files.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import prepare_experiment
from .engine import init_state, run_to_quiescence
from .influence import ConditionalEvaluator, EvalMode, SeedPlan
from .seeders import (GameScope, c_tier, j_tier, lt_greedy, random_seeds,
                      top_indegree, top_pagerank)

__all__ = [
    "CTIM_METHODS",
    "JTIM_METHODS",
    "run_ctim",
    "run_jtim",
    "run_intersections",
    "run_per_seed",
    "SWEEP_HEADER",
    "PER_SEED_HEADER",
]

CTIM_METHODS = ["c_tier", "lt_greedy", "pagerank", "indegree", "random"]
JTIM_METHODS = ["j_tier", "g_comp", "g_cpl", "g_indep"]

SWEEP_HEADER = ["method", "k", "influence"]
PER_SEED_HEADER = ["index", "user", "marginal", "cumulative"]
TRACE_HEADER = ["round", "product", "user", "gain_estimate", "cumulative"]


def _write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _eval_mode(cfg, thresholds):
    if cfg.eval_mode == "expected":
        return EvalMode.expected(cfg.rng.thresholds, cfg.eval_samples)
    return EvalMode.fixed(thresholds)


# -- conditional sweep -------------------------------------------------------


def _opponent_plan(exp, size):
    """LT-greedy seeds of the given size for every non-target product,
    selected on the static network with each product's own thresholds."""
    seeds = [[] for _ in range(exp.catalog.n_products)]
    budgets = [0] * exp.catalog.n_products
    for o in exp.catalog.opponent_indexes():
        res = lt_greedy(exp.graph, size, thresholds=exp.thresholds[:, o])
        seeds[o] = res.seeds
        budgets[o] = size
    budgets[exp.target] = 0
    return SeedPlan(seeds, budgets)


def _ctim_select(exp, method, max_k, opponents):
    cfg = exp.cfg
    if method == "c_tier":
        return c_tier(exp.graph, exp.catalog, exp.target, opponents, max_k,
                      _eval_mode(cfg, exp.thresholds)).seeds
    if method == "lt_greedy":
        return lt_greedy(exp.graph, max_k,
                         thresholds=exp.thresholds[:, exp.target]).seeds
    if method == "pagerank":
        return top_pagerank(exp.graph, max_k)
    if method == "indegree":
        return top_indegree(exp.graph, max_k)
    if method == "random":
        return random_seeds(exp.graph, max_k, cfg.rng.random_baseline)
    raise ValueError(f"unknown method {method!r}")


def _ctim_select_worker(args):
    cfg, method = args
    exp = prepare_experiment(cfg)
    opponents = _opponent_plan(exp, cfg.opponent_size)
    return method, _ctim_select(exp, method, max(cfg.k_values), opponents)


def ctim_selections(cfg, threads=1):
    """Target seed lists for every comparison method at the largest k."""
    exp = prepare_experiment(cfg)
    opponents = _opponent_plan(exp, cfg.opponent_size)
    max_k = max(cfg.k_values)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = dict(pool.map(_ctim_select_worker,
                                 [(cfg, m) for m in CTIM_METHODS]))
        selections = {m: done[m] for m in CTIM_METHODS}
    else:
        selections = {m: _ctim_select(exp, m, max_k, opponents)
                      for m in CTIM_METHODS}
    return exp, opponents, selections


def run_ctim(cfg, out_dir=None, threads=1):
    """Conditional sweep: opponents propagate first, every method's seed
    prefix is evaluated on the resulting network.  Writes ctim.csv."""
    out_dir = Path(out_dir or cfg.output_dir)
    exp, opponents, selections = ctim_selections(cfg, threads=threads)
    evaluator = ConditionalEvaluator(exp.graph, exp.catalog, exp.target,
                                     opponents, _eval_mode(cfg, exp.thresholds))
    rows = []
    for method in CTIM_METHODS:
        for k in cfg.k_values:
            value = evaluator.influence(set(selections[method][:k]))
            rows.append([method, k, _fmt(value)])
    return _write_csv(out_dir / "ctim.csv", SWEEP_HEADER, rows)


def _fmt(value):
    return int(value) if float(value).is_integer() else repr(float(value))


# -- joint-game sweep --------------------------------------------------------


_SCOPES = {
    "j_tier": GameScope.ALL,
    "g_comp": GameScope.COMPETING_ONLY,
    "g_cpl": GameScope.COMPLEMENTARY_ONLY,
    "g_indep": GameScope.INDEPENDENT_ONLY,
}


def _jtim_game_worker(args):
    cfg, method = args
    exp = prepare_experiment(cfg)
    result = _run_game(exp, _SCOPES[method])
    return method, result


def _run_game(exp, scope):
    cfg = exp.cfg
    budgets = [cfg.budgets[name] for name in exp.catalog.products]
    return j_tier(exp.graph, exp.catalog, budgets, scope,
                  EvalMode.fixed(exp.thresholds), cfg.rng.game_order)


def _replay(exp, target_list, opponent_lists, game_order_seed):
    """Turn-based evaluation: products commit seeds in random round order,
    propagating and rescaling thresholds after every pick."""
    p = exp.catalog.n_products
    lists = [list(s) for s in opponent_lists]
    lists[exp.target] = list(target_list)
    state = init_state(exp.graph, exp.catalog, exp.thresholds)
    rng = np.random.default_rng(game_order_seed)
    cursor = [0] * p
    while True:
        open_products = [j for j in range(p) if cursor[j] < len(lists[j])]
        if not open_products:
            break
        order = [open_products[i] for i in rng.permutation(len(open_products))]
        for j in order:
            user = lists[j][cursor[j]]
            cursor[j] += 1
            state.activate(j, np.asarray([user], dtype=np.int64))
            run_to_quiescence(state)
    return state.active_count(exp.target)


def jtim_games(cfg, threads=1):
    """The full game plus the partial-opponent variants."""
    exp = prepare_experiment(cfg)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = dict(pool.map(_jtim_game_worker,
                                 [(cfg, m) for m in JTIM_METHODS]))
        games = {m: done[m] for m in JTIM_METHODS}
    else:
        games = {m: _run_game(exp, _SCOPES[m]) for m in JTIM_METHODS}
    return exp, games


def run_jtim(cfg, out_dir=None, threads=1):
    """Game sweep: opponents keep their full-game seeds, the target's list
    is swapped per method and truncated to k, then the game is replayed.
    Writes jtim.csv and the full-game trace jtim_trace.csv."""
    out_dir = Path(out_dir or cfg.output_dir)
    exp, games = jtim_games(cfg, threads=threads)
    full = games["j_tier"]
    opponent_lists = [list(s) for s in full.plan.seeds]
    opponent_lists[exp.target] = []
    rows = []
    for method in JTIM_METHODS:
        target_list = games[method].plan.seeds[exp.target]
        for k in cfg.k_values:
            value = _replay(exp, target_list[:k], opponent_lists, cfg.rng.game_order)
            rows.append([method, k, _fmt(value)])
    sweep = _write_csv(out_dir / "jtim.csv", SWEEP_HEADER, rows)
    trace_rows = [[r.round, r.product_name, r.user, _fmt(r.gain_estimate), r.cumulative]
                  for r in full.trace]
    _write_csv(out_dir / "jtim_trace.csv", TRACE_HEADER, trace_rows)
    return sweep


# -- seed-set intersections ---------------------------------------------------


def run_intersections(cfg, out_dir=None, threads=1):
    """Pairwise seed-set overlaps of the conditional methods at the largest
    k; symmetric with k on the diagonal.  Writes intersect.csv."""
    out_dir = Path(out_dir or cfg.output_dir)
    _, _, selections = ctim_selections(cfg, threads=threads)
    rows = []
    for a in CTIM_METHODS:
        row = [a]
        for b in CTIM_METHODS:
            row.append(len(set(selections[a]) & set(selections[b])))
        rows.append(row)
    return _write_csv(out_dir / "intersect.csv", ["method"] + CTIM_METHODS, rows)


# -- per-seed marginal influence ---------------------------------------------


def run_per_seed(cfg, out_dir=None, threads=1):
    """Marginal influence of each committed target seed in the full game,
    as consecutive differences of the recorded cumulative counts (so the
    marginals telescope to the last recorded cumulative influence)."""
    out_dir = Path(out_dir or cfg.output_dir)
    exp = prepare_experiment(cfg)
    full = _run_game(exp, GameScope.ALL)
    rows = []
    prev = 0
    for i, row in enumerate(full.target_rows(exp.target), start=1):
        rows.append([i, row.user, row.cumulative - prev, row.cumulative])
        prev = row.cumulative
    return _write_csv(out_dir / "per_seed.csv", PER_SEED_HEADER, rows)
