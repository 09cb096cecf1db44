"""Synchronous multi-product threshold diffusion with dynamic thresholds.

Dynamics per step: for every product, every inactive user with at least one
active in-neighbour activates when the summed weights of its active
in-neighbours reach its current threshold.  All activations in a step are
decided against the start-of-step snapshot and applied together; the
threshold rescaling triggered by a user's activation (multiply the user's
thresholds for all other products by the catalog coefficients) takes effect
from the next step on.  Seed activations rescale thresholds the same way,
before the first step.
"""

from __future__ import annotations

import csv

import numpy as np

__all__ = [
    "DiffusionState",
    "init_state",
    "step",
    "run_to_quiescence",
    "activate",
    "dump_state_csv",
]

_EMPTY = np.empty(0, dtype=np.int64)


def _as_weight_list(graph, weights, n_products):
    """Normalize the per-product weight argument to one vector per product."""
    if weights is None:
        return [graph.out_w] * n_products
    if isinstance(weights, np.ndarray) and weights.ndim == 1:
        return [weights] * n_products
    weights = list(weights)
    if len(weights) != n_products:
        raise ValueError("need one weight vector per product")
    return [np.asarray(w, dtype=np.float64) for w in weights]


def _compact_phi(catalog, n):
    """phi(u, l, j) per ordered pair as scalar (or per-user vector)."""
    p = catalog.n_products
    out = [[None] * p for _ in range(p)]
    for l in range(p):
        for j in range(p):
            if l == j:
                continue
            if catalog.mode == "per-user":
                vec = np.asarray(catalog.phi_row(l, j, n), dtype=np.float64)
                out[l][j] = 1.0 if np.all(vec == 1.0) else vec
            else:
                out[l][j] = catalog.coefficient(0, l, j)
    return out


class DiffusionState:
    """Per-user per-product activation status and current thresholds.

    States are cheap to fork for speculative evaluation: product arrays are
    shared copy-on-write between a state and its forks, so cloning costs a
    few list copies until a product is actually touched.
    """

    def __init__(self, graph, catalog, thresholds, weights=None):
        n = graph.node_count
        p = catalog.n_products
        thresholds = np.asarray(thresholds, dtype=np.float64)
        if thresholds.shape != (n, p):
            raise ValueError(f"threshold matrix must be shape {(n, p)}")
        if (thresholds < 0).any() or (thresholds > 1).any():
            raise ValueError("initial thresholds must lie in [0, 1]")
        self.graph = graph
        self.catalog = catalog
        self.n = n
        self.p = p
        self.weights = _as_weight_list(graph, weights, p)
        self.theta0 = thresholds.T.copy()  # (p, n), immutable initial draw
        self.status = [np.zeros(n, dtype=bool) for _ in range(p)]
        self.theta = [self.theta0[j].copy() for j in range(p)]
        self.insum = [np.zeros(n) for _ in range(p)]
        self.incnt = [np.zeros(n, dtype=np.int64) for _ in range(p)]
        self.frontier = [_EMPTY] * p
        self.recheck = [[] for _ in range(p)]
        self.step_counter = 0
        self._phi = _compact_phi(catalog, n)
        self._owned = [True] * p

    # -- copy-on-write forking -------------------------------------------

    def fork(self):
        """Cheap speculative copy; arrays are copied lazily on first write."""
        child = object.__new__(DiffusionState)
        child.graph = self.graph
        child.catalog = self.catalog
        child.n = self.n
        child.p = self.p
        child.weights = self.weights
        child.theta0 = self.theta0
        child.status = list(self.status)
        child.theta = list(self.theta)
        child.insum = list(self.insum)
        child.incnt = list(self.incnt)
        child.frontier = list(self.frontier)
        child.recheck = [list(r) for r in self.recheck]
        child.step_counter = self.step_counter
        child._phi = self._phi
        child._owned = [False] * self.p
        self._owned = [False] * self.p  # parent must also copy before writing
        return child

    def _own(self, j):
        if not self._owned[j]:
            self.status[j] = self.status[j].copy()
            self.theta[j] = self.theta[j].copy()
            self.insum[j] = self.insum[j].copy()
            self.incnt[j] = self.incnt[j].copy()
            self._owned[j] = True

    # -- queries -----------------------------------------------------------

    def active_count(self, j):
        return int(self.status[j].sum())

    def active_set(self, j):
        return np.flatnonzero(self.status[j])

    def is_active(self, u, j):
        return bool(self.status[j][u])

    # -- mutation ----------------------------------------------------------

    def activate(self, j, users):
        """Activate ``users`` for product j (skipping already-active ones),
        push their influence to followers and rescale their thresholds for
        the other products.  Used for seeds and for applying a step."""
        users = np.asarray(users, dtype=np.int64)
        if len(users) == 0:
            return users
        if users.min() < 0 or users.max() >= self.n:
            raise ValueError("user id out of range")
        users = users[~self.status[j][users]]
        if len(users) == 0:
            return users
        self._own(j)
        self.status[j][users] = True
        g = self.graph
        if len(users) == 1:
            u = int(users[0])
            idx = g.out_idx[g.out_ptr[u]:g.out_ptr[u + 1]]
            w = self.weights[j][g.out_ptr[u]:g.out_ptr[u + 1]]
        else:
            idx = np.concatenate([g.out_idx[g.out_ptr[u]:g.out_ptr[u + 1]] for u in users])
            w = np.concatenate([self.weights[j][g.out_ptr[u]:g.out_ptr[u + 1]] for u in users])
        if len(idx):
            np.add.at(self.insum[j], idx, w)
            np.add.at(self.incnt[j], idx, 1)
        self.frontier[j] = (users if len(self.frontier[j]) == 0
                            else np.concatenate([self.frontier[j], users]))
        # threshold rescaling for every other product, effective next step
        if self.p > 1:
            ulist = users.tolist()
            for l in range(self.p):
                if l == j:
                    continue
                phi = self._phi[j][l]
                if isinstance(phi, float):
                    if phi == 1.0:
                        continue
                    self._own(l)
                    self.theta[l][users] *= phi
                else:
                    self._own(l)
                    self.theta[l][users] *= phi[users]
                self.recheck[l].extend(ulist)
        return users


def init_state(graph, catalog, thresholds, seeds=None, weights=None):
    """Fresh state with the given initial threshold draw and seed plan.

    ``seeds`` is a per-product list of user lists (or a SeedPlan).  Seed
    users are active at step 0 and their threshold updates are applied
    before the first step.
    """
    state = DiffusionState(graph, catalog, thresholds, weights=weights)
    if seeds is not None:
        seed_lists = getattr(seeds, "seeds", seeds)
        if len(seed_lists) != catalog.n_products:
            raise ValueError("need one seed list per product")
        for j, users in enumerate(seed_lists):
            state.activate(j, np.asarray(list(users), dtype=np.int64))
    return state


def step(state, graph=None, catalog=None, products=None):
    """One synchronous step; returns True if any user activated.

    ``products`` restricts which products' activation rules fire (threshold
    updates from their activations still apply to all products).  The
    ``graph``/``catalog`` arguments, when given, must be the ones the state
    was built with.
    """
    if graph is not None and graph is not state.graph:
        raise ValueError("state belongs to a different graph")
    if catalog is not None and catalog is not state.catalog:
        raise ValueError("state belongs to a different catalog")
    scan = range(state.p) if products is None else products
    g = state.graph
    newly = []
    for j in scan:
        cand_parts = []
        front = state.frontier[j]
        if len(front):
            cand_parts.extend(g.out_idx[g.out_ptr[u]:g.out_ptr[u + 1]] for u in front)
        if state.recheck[j]:
            cand_parts.append(np.asarray(state.recheck[j], dtype=np.int64))
        if not cand_parts:
            newly.append(None)
            continue
        cand = np.unique(np.concatenate(cand_parts))
        cand = cand[~state.status[j][cand]]
        cand = cand[state.incnt[j][cand] > 0]
        cand = cand[state.insum[j][cand] >= state.theta[j][cand]]
        newly.append(cand if len(cand) else None)
    # consume the scanned frontiers before applying, so that rescaling
    # effects recorded by this step's activations survive into the next one
    for j in scan:
        state.frontier[j] = _EMPTY
        state.recheck[j] = []
    changed = False
    for j, users in zip(scan, newly):
        if users is not None:
            state.activate(j, users)
            changed = True
    state.step_counter += 1
    return changed


def run_to_quiescence(state, graph=None, catalog=None, products=None):
    """Step until a full step changes nothing for the scanned products."""
    while step(state, graph, catalog, products=products):
        pass
    return state


def activate(state, product, users):
    """Module-level convenience: seed extra users into a running state."""
    return state.activate(product, users)


def dump_state_csv(state, path):
    """Debug dump: user, product, status, theta_initial, theta_current."""
    names = state.catalog.products
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "product", "status", "theta_initial", "theta_current"])
        for u in range(state.n):
            for j in range(state.p):
                writer.writerow([
                    u, names[j],
                    "active" if state.status[j][u] else "inactive",
                    repr(float(state.theta0[j][u])),
                    repr(float(state.theta[j][u])),
                ])
