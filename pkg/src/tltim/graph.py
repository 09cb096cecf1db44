"""Directed influence graph: loading, weighting and structural rankings.

Edge orientation convention used everywhere in this package: an edge
``u -> v`` means "u influences v", equivalently "v follows u".  The
out-neighbours of ``u`` are therefore u's followers, and the in-neighbours
of ``v`` are the users v follows.
"""

from __future__ import annotations

import csv

import numpy as np

__all__ = [
    "Graph",
    "GraphParseError",
    "load_edge_list",
    "save_edge_list",
    "save_label_map",
    "jaccard_weights",
    "with_uniform_weights",
    "pagerank",
    "in_degree_rank",
    "scale_free_graph",
]


class GraphParseError(ValueError):
    """Raised on malformed edge-list input."""


class Graph:
    """Immutable directed graph with one weight per edge.

    Nodes are dense ids ``0..node_count-1``.  The original labels from the
    input file (if any) are kept in ``labels``.  Adjacency is stored in CSR
    form for both directions; duplicate (src, dst) pairs and self-loops are
    not allowed.
    """

    def __init__(self, node_count, edges, labels=None):
        if node_count <= 0:
            raise ValueError("graph must have at least one node")
        edges = sorted(edges)
        src = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
        dst = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
        w = np.fromiter((e[2] for e in edges), dtype=np.float64, count=len(edges))
        if len(edges):
            if src.min() < 0 or max(src.max(), dst.max()) >= node_count:
                raise ValueError("edge endpoint out of range")
            if (src == dst).any():
                raise ValueError("self-loops are not allowed")
            if (w < 0).any():
                raise ValueError("negative edge weight")
            pairs = src * node_count + dst
            if len(np.unique(pairs)) != len(pairs):
                raise ValueError("duplicate (src, dst) edge")
        self.node_count = int(node_count)
        self.src = src
        self.dst = dst
        self.weights = w
        self.labels = list(labels) if labels is not None else None
        self._build_adjacency()

    def _build_adjacency(self):
        n, m = self.node_count, len(self.src)
        # out-CSR: edges already sorted by (src, dst)
        self.out_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.out_ptr, self.src + 1, 1)
        np.cumsum(self.out_ptr, out=self.out_ptr)
        self.out_idx = self.dst.copy()
        self.out_w = self.weights.copy()
        # in-CSR: re-sort by (dst, src)
        order = np.lexsort((self.src, self.dst))
        self.in_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self.in_ptr, self.dst + 1, 1)
        np.cumsum(self.in_ptr, out=self.in_ptr)
        self.in_idx = self.src[order]
        self.in_w = self.weights[order]
        self._in_edge_pos = order  # position of each in-edge in the out/global order
        self.edge_count = m

    # -- basic accessors -------------------------------------------------

    def out_neighbors(self, u):
        return self.out_idx[self.out_ptr[u]:self.out_ptr[u + 1]]

    def in_neighbors(self, v):
        return self.in_idx[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_degree(self, u=None):
        d = np.diff(self.out_ptr)
        return d if u is None else int(d[u])

    def in_degree(self, v=None):
        d = np.diff(self.in_ptr)
        return d if v is None else int(d[v])

    def follower_count(self, u=None):
        """Number of followers, i.e. users this node influences."""
        return self.out_degree(u)

    def edge_set(self):
        return set(zip(self.src.tolist(), self.dst.tolist()))

    def replace_weights(self, new_weights):
        """Return a copy of this graph with a different weight vector."""
        new_weights = np.asarray(new_weights, dtype=np.float64)
        if new_weights.shape != self.weights.shape:
            raise ValueError("weight vector length mismatch")
        edges = zip(self.src.tolist(), self.dst.tolist(), new_weights.tolist())
        return Graph(self.node_count, edges, labels=self.labels)

    def relabel(self, perm):
        """Return the graph with node ids permuted by ``perm`` (old -> new)."""
        perm = np.asarray(perm, dtype=np.int64)
        edges = zip(perm[self.src].tolist(), perm[self.dst].tolist(), self.weights.tolist())
        labels = None
        if self.labels is not None:
            labels = [None] * self.node_count
            for old, new in enumerate(perm):
                labels[new] = self.labels[old]
        return Graph(self.node_count, edges, labels=labels)

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"


def _sort_labels(labels):
    # SNAP files use integer labels; sort numerically when possible so the
    # dense-id assignment does not depend on file order.
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)


def load_edge_list(path, treat_as="directed"):
    """Load a whitespace edge list ("src dst" per line, '#' comments).

    Undirected inputs produce both orientations.  Labels are compacted to
    dense ids (numeric order when all labels are integers); duplicate pairs
    are collapsed and self-loops dropped.
    """
    if treat_as not in ("directed", "undirected"):
        raise ValueError(f"treat_as must be 'directed' or 'undirected', got {treat_as!r}")
    pairs = []
    seen_labels = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"{path}:{lineno}: expected 'src dst', got {line!r}")
            pairs.append(parts)
            seen_labels.update(parts)
    if not pairs:
        raise GraphParseError(f"{path}: no edges found")
    labels = _sort_labels(seen_labels)
    ids = {lab: i for i, lab in enumerate(labels)}
    edge_pairs = set()
    for a, b in pairs:
        u, v = ids[a], ids[b]
        if u == v:
            continue
        edge_pairs.add((u, v))
        if treat_as == "undirected":
            edge_pairs.add((v, u))
    if not edge_pairs:
        raise GraphParseError(f"{path}: no usable edges (self-loops only)")
    edges = ((u, v, 1.0) for u, v in sorted(edge_pairs))
    return Graph(len(labels), edges, labels=labels)


def save_edge_list(g, path):
    """Write the edge set back out as "src dst" lines (original labels)."""
    labels = g.labels or [str(i) for i in range(g.node_count)]
    with open(path, "w") as fh:
        for u, v in zip(g.src.tolist(), g.dst.tolist()):
            fh.write(f"{labels[u]} {labels[v]}\n")


def save_label_map(g, path):
    """Emit the original-label to dense-id side map as CSV."""
    labels = g.labels or [str(i) for i in range(g.node_count)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "id"])
        for i, lab in enumerate(labels):
            writer.writerow([lab, i])


def jaccard_weights(g):
    """Reweight each edge u->v by the Jaccard overlap of u's followers
    and the users v follows; 0 when the union is empty."""
    out_sets = [set(g.out_neighbors(u).tolist()) for u in range(g.node_count)]
    in_sets = [set(g.in_neighbors(v).tolist()) for v in range(g.node_count)]
    w = np.zeros(g.edge_count, dtype=np.float64)
    for e in range(g.edge_count):
        a = out_sets[g.src[e]]
        b = in_sets[g.dst[e]]
        union = len(a | b)
        if union:
            w[e] = len(a & b) / union
    return g.replace_weights(w)


def with_uniform_weights(g, weight):
    """Set every edge weight to the same constant."""
    if weight < 0:
        raise ValueError("weight must be non-negative")
    return g.replace_weights(np.full(g.edge_count, float(weight)))


def pagerank(g, damping=0.85, tol=1e-10, max_iter=200):
    """PageRank scores on the follower orientation (reverse of influence).

    Users that many others follow accumulate rank.  Power iteration with
    uniform teleport and dangling-mass redistribution; returns
    ``(scores, converged)`` where scores sum to 1 within tol.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    n = g.node_count
    # follower-graph edge v->u exists for every influence edge u->v, so a
    # node's follower out-degree equals its influence in-degree.
    follow_deg = np.diff(g.in_ptr).astype(np.float64)
    dangling = follow_deg == 0
    x = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iter):
        contrib = np.where(dangling, 0.0, x / np.where(dangling, 1.0, follow_deg))
        new = np.zeros(n)
        np.add.at(new, g.src, contrib[g.dst])
        new = (1.0 - damping) / n + damping * (new + x[dangling].sum() / n)
        if np.abs(new - x).sum() < tol:
            x = new
            converged = True
            break
        x = new
    return x, converged


def in_degree_rank(g):
    """All nodes ordered by follower count descending, ties by ascending id."""
    counts = g.follower_count()
    return sorted(range(g.node_count), key=lambda u: (-counts[u], u))


def scale_free_graph(n, attach, rng_seed):
    """Synthetic scale-free graph by preferential attachment.

    Grows an undirected graph where each new node attaches to ``attach``
    distinct existing nodes chosen proportionally to degree, then emits both
    orientations.  Edge weights default to 1.0 (apply a weighting scheme
    afterwards).
    """
    if attach < 1 or n <= attach:
        raise ValueError("need n > attach >= 1")
    rng = np.random.default_rng(rng_seed)
    repeated = []  # endpoint multiset, degree-proportional sampling
    und = set()
    for v in range(attach + 1):  # small seed clique
        for u in range(v):
            und.add((u, v))
            repeated += [u, v]
    for v in range(attach + 1, n):
        targets = set()
        while len(targets) < attach:
            pick = repeated[rng.integers(len(repeated))]
            targets.add(int(pick))
        for u in targets:
            und.add((min(u, v), max(u, v)))
            repeated += [u, v]
    edges = []
    for u, v in sorted(und):
        edges.append((u, v, 1.0))
        edges.append((v, u, 1.0))
    return Graph(n, edges)
