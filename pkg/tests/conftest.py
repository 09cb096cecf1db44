import numpy as np
import pytest

from tltim.catalog import CatalogSpec, Relation, RelationSpec, build_catalog
from tltim.graph import Graph


@pytest.fixture
def path3():
    """A -> B -> C with weight 0.5 on both edges."""
    return Graph(3, [(0, 1, 0.5), (1, 2, 0.5)])


def make_catalog(products, target, relations=(), mode="per-pair", seed=0, node_count=None,
                 budgets=None):
    spec = CatalogSpec(
        products=list(products),
        target=target,
        relations=[RelationSpec(*r) if not isinstance(r, RelationSpec) else r
                   for r in relations],
        budgets=budgets or {p: 50 for p in products},
        mode=mode,
    )
    return build_catalog(spec, rng_seed=seed, node_count=node_count)


@pytest.fixture
def single_catalog():
    return make_catalog(["solo"], "solo")


@pytest.fixture
def indep_pair():
    return make_catalog(["tgt", "other"], "tgt",
                        [("other", "tgt", Relation.INDEPENDENT)])


def thr_matrix(*columns):
    return np.column_stack([np.asarray(c, dtype=np.float64) for c in columns])
