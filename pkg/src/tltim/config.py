"""Experiment configuration: INI-style, fully deterministic.

Every stochastic element has a mandatory named seed, so a config fully
determines every output byte.  See ``examples`` in the repo README for a
complete file.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .catalog import CatalogSpec, Relation, RelationSpec, build_catalog
from .graph import jaccard_weights, load_edge_list, scale_free_graph, with_uniform_weights

__all__ = ["ConfigError", "RngSeeds", "ExperimentConfig", "load_config", "prepare_experiment"]


class ConfigError(ValueError):
    pass


@dataclass
class RngSeeds:
    thresholds: int
    coefficients: int
    game_order: int
    random_baseline: int
    graph: int | None = None


@dataclass
class ExperimentConfig:
    source: str                      # "synthetic" or an edge-list path
    treat_as: str = "directed"
    nodes: int = 0                   # synthetic only
    attach: int = 0                  # synthetic only
    weight_scheme: str = "jaccard"   # jaccard | uniform
    uniform_weight: float = 0.1
    products: list[str] = field(default_factory=list)
    target: str = ""
    budgets: dict[str, int] = field(default_factory=dict)
    relations: list[RelationSpec] = field(default_factory=list)
    coefficient_mode: str = "per-pair"
    competing_range: tuple[float, float] = (1.0, 2.0)
    complementary_range: tuple[float, float] = (1e-6, 1.0)
    rng: RngSeeds = None
    k_values: list[int] = field(default_factory=list)
    opponent_size: int = 50
    eval_mode: str = "fixed"
    eval_samples: int = 1
    output_dir: str = "out"

    def catalog_spec(self):
        return CatalogSpec(
            products=list(self.products),
            target=self.target,
            relations=list(self.relations),
            budgets=dict(self.budgets),
            mode=self.coefficient_mode,
            competing_range=self.competing_range,
            complementary_range=self.complementary_range,
        )


def _parse_relation_key(key):
    if "->" in key:
        a, b = key.split("->", 1)
        return a.strip(), b.strip(), True
    if "--" in key:
        a, b = key.split("--", 1)
        return a.strip(), b.strip(), False
    raise ConfigError(f"relation key must be 'a -- b' or 'a -> b', got {key!r}")


def _parse_relation_value(value):
    override = None
    if "@" in value:
        value, over = value.split("@", 1)
        try:
            override = float(over.strip())
        except ValueError as exc:
            raise ConfigError(f"bad coefficient override {over!r}") from exc
    try:
        rel = Relation(value.strip())
    except ValueError as exc:
        raise ConfigError(f"unknown relation {value.strip()!r}") from exc
    return rel, override


def _require(parser, section, option, cast=str):
    if not parser.has_option(section, option):
        raise ConfigError(f"missing [{section}] {option}")
    raw = parser.get(section, option)
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {option}: {raw!r}") from exc


def load_config(path):
    parser = configparser.ConfigParser(delimiters=("=",), interpolation=None)
    parser.optionxform = str
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")

    if not parser.has_section("dataset"):
        raise ConfigError("missing [dataset] section")
    source = _require(parser, "dataset", "source")
    cfg = ExperimentConfig(source=source)
    cfg.treat_as = parser.get("dataset", "treat_as", fallback="directed")
    if cfg.treat_as not in ("directed", "undirected"):
        raise ConfigError(f"bad treat_as {cfg.treat_as!r}")
    if source == "synthetic":
        cfg.nodes = _require(parser, "dataset", "nodes", int)
        cfg.attach = _require(parser, "dataset", "attach", int)
    cfg.weight_scheme = parser.get("dataset", "weight_scheme", fallback="jaccard")
    if cfg.weight_scheme not in ("jaccard", "uniform"):
        raise ConfigError(f"bad weight_scheme {cfg.weight_scheme!r}")
    if cfg.weight_scheme == "uniform":
        cfg.uniform_weight = _require(parser, "dataset", "uniform_weight", float)

    cfg.products = [p.strip() for p in _require(parser, "products", "names").split(",")]
    if len(cfg.products) != len(set(cfg.products)):
        raise ConfigError("duplicate product names")
    cfg.target = _require(parser, "products", "target")
    if cfg.target not in cfg.products:
        raise ConfigError(f"target {cfg.target!r} not in products")

    if not parser.has_section("budgets"):
        raise ConfigError("missing [budgets] section")
    for name in cfg.products:
        cfg.budgets[name] = _require(parser, "budgets", name, int)

    if parser.has_section("relations"):
        for key, value in parser.items("relations"):
            a, b, directed = _parse_relation_key(key)
            for nm in (a, b):
                if nm not in cfg.products:
                    raise ConfigError(f"relation references unknown product {nm!r}")
            rel, override = _parse_relation_value(value)
            cfg.relations.append(RelationSpec(a, b, rel, override=override,
                                              directed=directed))

    if parser.has_section("coefficients"):
        cfg.coefficient_mode = parser.get("coefficients", "mode", fallback="per-pair")
        if cfg.coefficient_mode not in ("per-pair", "per-user"):
            raise ConfigError(f"bad coefficient mode {cfg.coefficient_mode!r}")
        lo = parser.getfloat("coefficients", "competing_low", fallback=1.0)
        hi = parser.getfloat("coefficients", "competing_high", fallback=2.0)
        cfg.competing_range = (lo, hi)
        lo = parser.getfloat("coefficients", "complementary_low", fallback=1e-6)
        hi = parser.getfloat("coefficients", "complementary_high", fallback=1.0)
        cfg.complementary_range = (lo, hi)

    if not parser.has_section("rng"):
        raise ConfigError("missing [rng] section (all seeds are mandatory)")
    cfg.rng = RngSeeds(
        thresholds=_require(parser, "rng", "thresholds", int),
        coefficients=_require(parser, "rng", "coefficients", int),
        game_order=_require(parser, "rng", "game_order", int),
        random_baseline=_require(parser, "rng", "random_baseline", int),
        graph=(parser.getint("rng", "graph") if parser.has_option("rng", "graph") else None),
    )
    if source == "synthetic" and cfg.rng.graph is None:
        raise ConfigError("synthetic datasets need an [rng] graph seed")

    ks = _require(parser, "sweep", "k_values")
    try:
        cfg.k_values = sorted({int(x) for x in ks.split(",")})
    except ValueError as exc:
        raise ConfigError(f"bad k_values {ks!r}") from exc
    if not cfg.k_values or min(cfg.k_values) < 0:
        raise ConfigError("k_values must be non-negative integers")
    cfg.opponent_size = parser.getint("sweep", "opponent_size", fallback=50)

    if parser.has_section("eval"):
        cfg.eval_mode = parser.get("eval", "mode", fallback="fixed")
        if cfg.eval_mode not in ("fixed", "expected"):
            raise ConfigError(f"bad eval mode {cfg.eval_mode!r}")
        cfg.eval_samples = parser.getint("eval", "samples", fallback=1)

    if parser.has_section("output"):
        cfg.output_dir = parser.get("output", "dir", fallback="out")
    return cfg


@dataclass
class Experiment:
    """Materialized config: weighted graph, catalog, threshold matrix."""

    cfg: ExperimentConfig
    graph: object
    catalog: object
    thresholds: np.ndarray

    @property
    def target(self):
        return self.catalog.target


def prepare_experiment(cfg):
    if cfg.source == "synthetic":
        graph = scale_free_graph(cfg.nodes, cfg.attach, cfg.rng.graph)
    else:
        if not Path(cfg.source).exists():
            raise ConfigError(f"dataset file not found: {cfg.source}")
        graph = load_edge_list(cfg.source, treat_as=cfg.treat_as)
    if cfg.weight_scheme == "jaccard":
        graph = jaccard_weights(graph)
    else:
        graph = with_uniform_weights(graph, cfg.uniform_weight)
    catalog = build_catalog(cfg.catalog_spec(), cfg.rng.coefficients,
                            node_count=graph.node_count)
    rng = np.random.default_rng(cfg.rng.thresholds)
    thresholds = rng.random((graph.node_count, catalog.n_products))
    return Experiment(cfg, graph, catalog, thresholds)
