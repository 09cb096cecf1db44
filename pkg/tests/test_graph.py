import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tltim.graph import (Graph, GraphParseError, in_degree_rank, jaccard_weights,
                         load_edge_list, pagerank, save_edge_list, save_label_map,
                         scale_free_graph, with_uniform_weights)


def write(tmp_path, text, name="edges.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadEdgeList:
    def test_directed_two_edges(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n1 2\n"), treat_as="directed")
        assert g.node_count == 3
        assert g.edge_set() == {(0, 1), (1, 2)}

    def test_undirected_gives_both_orientations(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n"), treat_as="undirected")
        assert g.edge_set() == {(0, 1), (1, 0)}

    def test_comments_and_label_compaction(self, tmp_path):
        g = load_edge_list(write(tmp_path, "# snap header\n10 30\n30 20\n"))
        assert g.node_count == 3
        assert g.labels == ["10", "20", "30"]
        assert g.edge_set() == {(0, 2), (2, 1)}

    def test_duplicates_collapsed_and_self_loops_dropped(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n0 1\n1 1\n"))
        assert g.edge_set() == {(0, 1)}

    def test_malformed_line_reports_line_number(self, tmp_path):
        with pytest.raises(GraphParseError, match=":2:"):
            load_edge_list(write(tmp_path, "0 1\n0 1 2\n"))

    def test_empty_input_rejected(self, tmp_path):
        with pytest.raises(GraphParseError):
            load_edge_list(write(tmp_path, "# nothing\n"))

    @settings(max_examples=30, deadline=None)
    @given(st.sets(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=40))
    def test_round_trip_preserves_edge_set(self, pairs):
        import tempfile
        from pathlib import Path

        pairs = {(a, b) for a, b in pairs if a != b}
        if not pairs:
            return
        with tempfile.TemporaryDirectory() as tmp:
            src = Path(tmp) / "in.txt"
            src.write_text("".join(f"{a} {b}\n" for a, b in pairs))
            g = load_edge_list(src)
            out = Path(tmp) / "out.txt"
            save_edge_list(g, out)
            g2 = load_edge_list(out)
        labels = lambda gr, e: {(gr.labels[u], gr.labels[v]) for u, v in e}
        assert labels(g, g.edge_set()) == labels(g2, g2.edge_set())
        assert labels(g, g.edge_set()) == {(str(a), str(b)) for a, b in pairs}

    def test_label_map_csv(self, tmp_path):
        g = load_edge_list(write(tmp_path, "7 3\n"))
        out = tmp_path / "map.csv"
        save_label_map(g, out)
        assert out.read_text().splitlines() == ["label,id", "3,0", "7,1"]


class TestJaccardWeights:
    def test_triangle_hand_evaluation(self):
        g = jaccard_weights(Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
        w = {(u, v): wt for u, v, wt in zip(g.src, g.dst, g.weights)}
        assert w[(0, 1)] == 0.0       # followers(0)={1,2} vs followees(1)={0}
        assert w[(1, 2)] == 0.0       # followers(1)={2} vs followees(2)={0,1}
        assert w[(0, 2)] == pytest.approx(1 / 3)  # {1,2} vs {0,1}: share {1} of {0,1,2}

    def test_shared_neighbourhood_fraction(self):
        # followers(0)={1,2}, followees(1)={0,2}: share {2} out of {0,1,2}
        g = jaccard_weights(Graph(3, [(0, 1, 1), (0, 2, 1), (2, 1, 1)]))
        w = {(u, v): wt for u, v, wt in zip(g.src, g.dst, g.weights)}
        assert w[(0, 1)] == pytest.approx(1 / 3)

    def test_isolated_pair_weight_zero(self):
        g = jaccard_weights(Graph(2, [(0, 1, 1), (1, 0, 1)]))
        assert set(g.weights.tolist()) == {0.0}

    def test_idempotent_and_in_range(self):
        rng = np.random.default_rng(0)
        edges = {(int(a), int(b)) for a, b in rng.integers(0, 12, size=(60, 2)) if a != b}
        g = Graph(12, [(a, b, 1.0) for a, b in edges])
        g1 = jaccard_weights(g)
        g2 = jaccard_weights(g1)
        assert np.array_equal(g1.weights, g2.weights)
        assert ((g1.weights >= 0) & (g1.weights <= 1)).all()


class TestPageRank:
    def test_symmetric_two_cycle(self):
        scores, converged = pagerank(Graph(2, [(0, 1, 1), (1, 0, 1)]))
        assert converged
        assert scores == pytest.approx([0.5, 0.5])

    def test_star_hub_scores_highest_vs_linear_solve(self):
        # hub 0 influences 1 and 2 (they follow the hub)
        g = Graph(3, [(0, 1, 1), (0, 2, 1)])
        scores, _ = pagerank(g, damping=0.85)
        assert scores[0] > scores[1] and scores[0] > scores[2]
        # independent oracle: solve the stationary equations directly.
        # follower graph: 1 -> 0, 2 -> 0; node 0 is dangling.
        d, n = 0.85, 3
        A = np.zeros((n, n))
        A[0, 1] = A[0, 2] = 1.0  # followers contribute whole rank (out-deg 1)
        A[:, 0] = 1.0 / n  # dangling mass spread uniformly
        M = d * A + (1 - d) / n
        vals, vecs = np.linalg.eig(M)
        stat = np.real(vecs[:, np.argmax(np.real(vals))])
        stat = stat / stat.sum()
        assert scores == pytest.approx(stat, abs=1e-8)

    def test_scores_sum_to_one(self):
        g = scale_free_graph(80, 3, rng_seed=1)
        scores, converged = pagerank(g)
        assert converged
        assert scores.sum() == pytest.approx(1.0, abs=1e-9)

    def test_permutation_equivariance(self):
        g = scale_free_graph(40, 2, rng_seed=3)
        perm = np.random.default_rng(5).permutation(40)
        scores, _ = pagerank(g)
        scores_p, _ = pagerank(g.relabel(perm))
        assert scores_p[perm] == pytest.approx(scores, abs=1e-9)

    def test_bad_damping_rejected(self):
        with pytest.raises(ValueError):
            pagerank(Graph(2, [(0, 1, 1)]), damping=1.0)


class TestInDegreeRank:
    def test_star_hub_first(self):
        g = Graph(6, [(0, v, 1.0) for v in range(1, 6)])
        assert in_degree_rank(g)[0] == 0

    def test_all_equal_degrees_ascending_ids(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
        assert in_degree_rank(g) == [0, 1, 2]

    def test_top_matches_one_pass_counter(self):
        g = scale_free_graph(100, 3, rng_seed=9)
        counts = [0] * 100
        for u in g.src.tolist():  # one-pass follower counter
            counts[u] += 1
        top = in_degree_rank(g)[0]
        assert counts[top] == max(counts)


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 0, 1.0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 1, 1.0), (0, 1, 0.5)])

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 1, -0.1)])

    def test_uniform_weights(self):
        g = with_uniform_weights(Graph(2, [(0, 1, 1.0)]), 0.3)
        assert g.weights.tolist() == [0.3]

    def test_scale_free_deterministic(self):
        a = scale_free_graph(50, 2, rng_seed=4)
        b = scale_free_graph(50, 2, rng_seed=4)
        assert a.edge_set() == b.edge_set()
        assert a.node_count == 50
