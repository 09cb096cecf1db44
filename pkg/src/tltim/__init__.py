"""Multi-product threshold diffusion and intertwined influence maximization.

Several products spread through one directed social graph at once; a user's
activation for one product rescales their thresholds for the others
(competing products raise them, complementary ones lower them).  The
package provides the diffusion engine, conditional and joint influence
functions, greedy and game-based seed selectors, brute-force verification
oracles, and a reproducible experiment harness.
"""

from .catalog import (CatalogSpec, ProductCatalog, Relation, RelationSpec,
                      build_catalog, coefficient)
from .engine import (DiffusionState, dump_state_csv, init_state,
                     run_to_quiescence, step)
from .graph import (Graph, in_degree_rank, jaccard_weights, load_edge_list,
                    pagerank, save_edge_list, save_label_map,
                    scale_free_graph, with_uniform_weights)
from .influence import (ConditionalEvaluator, EvalMode, SeedPlan,
                        conditional_influence, joint_influence, marginal_gain)
from .oracle import (brute_force_bounds, brute_force_conditional,
                     brute_force_influence, brute_force_opt,
                     check_counterexamples, counterexample_fixtures)
from .seeders import (GameScope, c_tier, infer_next_seed, j_tier, lt_greedy,
                      random_seeds, top_indegree, top_pagerank)

__version__ = "0.1.0"
