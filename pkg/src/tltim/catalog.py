"""Product catalog: relation classes and threshold-updating coefficients.

A coefficient ``phi(u, l, j)`` rescales user u's threshold for product j
when u becomes active for product l.  Ranges by relation class of l to j:
exactly 1 for independent, strictly above 1 for competing, strictly between
0 and 1 for complementary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Relation",
    "RelationSpec",
    "CatalogSpec",
    "ProductCatalog",
    "CatalogError",
    "build_catalog",
    "coefficient",
    "COMPLEMENTARY_MIN",
]

# Smallest complementary coefficient drawn; keeps the class strictly positive.
COMPLEMENTARY_MIN = 1e-6


class CatalogError(ValueError):
    pass


class Relation(str, Enum):
    INDEPENDENT = "independent"
    COMPETING = "competing"
    COMPLEMENTARY = "complementary"


def _check_range(rel, value):
    if rel is Relation.INDEPENDENT and value != 1.0:
        raise CatalogError(f"independent coefficient must be 1.0, got {value}")
    if rel is Relation.COMPETING and not value > 1.0:
        raise CatalogError(f"competing coefficient must be > 1, got {value}")
    if rel is Relation.COMPLEMENTARY and not 0.0 < value < 1.0:
        raise CatalogError(f"complementary coefficient must be in (0, 1), got {value}")


@dataclass(frozen=True)
class RelationSpec:
    """Declared relation between two products.

    Applies to both ordered directions unless ``directed`` is set, in which
    case it covers only (a -> b).  ``override`` pins the coefficient instead
    of drawing it from the class range.
    """

    a: str
    b: str
    relation: Relation
    override: float | None = None
    directed: bool = False


@dataclass
class CatalogSpec:
    """Config fragment describing the product set."""

    products: list[str]
    target: str
    relations: list[RelationSpec] = field(default_factory=list)
    budgets: dict[str, int] = field(default_factory=dict)
    mode: str = "per-pair"  # or "per-user"
    competing_range: tuple[float, float] = (1.0, 2.0)
    complementary_range: tuple[float, float] = (COMPLEMENTARY_MIN, 1.0)


class ProductCatalog:
    """Product set with pairwise relations and coefficient provider.

    Immutable after construction.  ``relation(l, j)`` and
    ``coefficient(u, l, j)`` take product indexes; names are in
    ``products`` and ``index_of`` maps back.
    """

    def __init__(self, products, target, relations, phi, budgets, mode):
        self.products = list(products)
        self.n_products = len(self.products)
        if self.n_products == 0:
            raise CatalogError("catalog needs at least one product")
        if len(set(self.products)) != self.n_products:
            raise CatalogError("duplicate product names")
        self.index_of = {name: i for i, name in enumerate(self.products)}
        if target not in self.index_of:
            raise CatalogError(f"target {target!r} not among products")
        self.target = self.index_of[target]
        self.target_name = target
        self._relations = relations  # (p, p) array of Relation
        self._phi = phi  # (p, p) floats, or (p, p, n) in per-user mode
        self.budgets = budgets  # list aligned with products
        self.mode = mode

    def relation(self, l, j):
        if l == j:
            raise CatalogError("relation of a product to itself is undefined")
        return self._relations[l][j]

    def coefficient(self, u, l, j):
        """Threshold-updating coefficient applied to product j's threshold
        at user u when u activates for product l.  Pure and deterministic."""
        if l == j:
            raise CatalogError("coefficient of a product to itself is undefined")
        if self.mode == "per-user":
            return float(self._phi[l, j, u])
        return float(self._phi[l, j])

    def phi_row(self, l, j, n_users):
        """Vector of phi(u, l, j) over all users (engine fast path)."""
        if l == j:
            raise CatalogError("coefficient of a product to itself is undefined")
        if self.mode == "per-user":
            return self._phi[l, j]
        return np.full(n_users, self._phi[l, j])

    def budget(self, j):
        return self.budgets[j]

    def opponent_indexes(self, j=None):
        j = self.target if j is None else j
        return [i for i in range(self.n_products) if i != j]

    def __repr__(self):
        return f"ProductCatalog(products={self.products}, target={self.target_name!r})"


def _draw(rng, rel, competing_range, complementary_range):
    if rel is Relation.INDEPENDENT:
        return 1.0
    if rel is Relation.COMPETING:
        lo, hi = competing_range
        # half-open (lo, hi]: strictly competing even at the low end
        return hi - rng.random() * (hi - lo)
    lo, hi = complementary_range
    return lo + rng.random() * (hi - lo)


def _draw_many(rng, rel, n, competing_range, complementary_range):
    if rel is Relation.INDEPENDENT:
        return np.ones(n)
    if rel is Relation.COMPETING:
        lo, hi = competing_range
        return hi - rng.random(n) * (hi - lo)
    lo, hi = complementary_range
    return lo + rng.random(n) * (hi - lo)


def build_catalog(spec, rng_seed, node_count=None):
    """Build a replayable catalog from a spec fragment.

    Per-pair mode draws one coefficient per ordered product pair; per-user
    mode draws one per (user, ordered pair) and requires ``node_count``.
    Draws come from a dedicated stream keyed by ``rng_seed``.
    """
    p = len(spec.products)
    idx = {name: i for i, name in enumerate(spec.products)}
    for name in idx:
        if not name:
            raise CatalogError("empty product name")
    if spec.mode not in ("per-pair", "per-user"):
        raise CatalogError(f"unknown coefficient mode {spec.mode!r}")
    if spec.mode == "per-user" and node_count is None:
        raise CatalogError("per-user mode needs node_count")

    relations = [[Relation.INDEPENDENT] * p for _ in range(p)]
    overrides = {}
    for rs in spec.relations:
        if rs.a not in idx or rs.b not in idx:
            raise CatalogError(f"relation references unknown product: {rs.a!r}/{rs.b!r}")
        if rs.a == rs.b:
            raise CatalogError("relation of a product with itself")
        if rs.override is not None:
            _check_range(rs.relation, rs.override)
        dirs = [(idx[rs.a], idx[rs.b])]
        if not rs.directed:
            dirs.append((idx[rs.b], idx[rs.a]))
        for (l, j) in dirs:
            relations[l][j] = rs.relation
            if rs.override is not None:
                overrides[(l, j)] = rs.override

    rng = np.random.default_rng(rng_seed)
    if spec.mode == "per-pair":
        phi = np.ones((p, p))
        for l in range(p):
            for j in range(p):
                if l == j:
                    continue
                if (l, j) in overrides:
                    phi[l, j] = overrides[(l, j)]
                else:
                    phi[l, j] = _draw(rng, relations[l][j],
                                      spec.competing_range, spec.complementary_range)
    else:
        phi = np.ones((p, p, node_count))
        for l in range(p):
            for j in range(p):
                if l == j:
                    continue
                if (l, j) in overrides:
                    phi[l, j, :] = overrides[(l, j)]
                else:
                    phi[l, j, :] = _draw_many(rng, relations[l][j], node_count,
                                              spec.competing_range, spec.complementary_range)

    budgets = [int(spec.budgets.get(name, 0)) for name in spec.products]
    if any(b < 0 for b in budgets):
        raise CatalogError("budgets must be >= 0")
    return ProductCatalog(spec.products, spec.target, relations, phi, budgets, spec.mode)


def coefficient(catalog, u, l, j):
    """Module-level alias for :meth:`ProductCatalog.coefficient`."""
    return catalog.coefficient(u, l, j)
