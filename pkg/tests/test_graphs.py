import numpy as np
import pytest

from tvglearn import graphs

import oracles


class TestEdgeIndexing:
    def test_pair_order_n3(self):
        i_idx, j_idx = graphs.edge_pairs(3)
        assert list(zip(i_idx, j_idx)) == [(0, 1), (0, 2), (1, 2)]

    def test_pair_order_n4_row_major(self):
        i_idx, j_idx = graphs.edge_pairs(4)
        assert list(zip(i_idx, j_idx)) == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        ]

    def test_edge_count_roundtrip(self):
        for n in range(2, 30):
            assert graphs.n_nodes_for_edges(graphs.n_edges(n)) == n

    def test_bad_edge_count(self):
        with pytest.raises(ValueError):
            graphs.n_nodes_for_edges(4)


class TestLaplacian:
    def test_empty_graph(self):
        assert np.array_equal(graphs.laplacian([0.0]), np.zeros((2, 2)))

    def test_single_edge(self):
        expected = np.array([[1.0, -1.0], [-1.0, 1.0]])
        assert np.array_equal(graphs.laplacian([1.0]), expected)

    def test_three_node_assembly(self):
        lap = graphs.laplacian([0.5, 0.0, 0.25])
        expected = np.array(
            [[0.5, -0.5, 0.0], [-0.5, 0.75, -0.25], [0.0, -0.25, 0.25]]
        )
        np.testing.assert_allclose(lap, expected, atol=0)
        np.testing.assert_allclose(lap.sum(axis=1), 0.0, atol=1e-15)
        assert np.linalg.eigvalsh(lap).min() >= -1e-10

    def test_degree_matrix(self):
        np.testing.assert_array_equal(graphs.degree_matrix([0.0]), np.zeros((2, 2)))
        np.testing.assert_array_equal(graphs.degree_matrix([1.0]), np.eye(2))
        np.testing.assert_allclose(
            np.diag(graphs.degree_matrix([0.5, 0.0, 0.25])), [0.5, 0.75, 0.25]
        )

    def test_random_laplacians_symmetric_psd(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 5, 8):
            w = rng.uniform(0.0, 1.0, size=graphs.n_edges(n))
            lap = graphs.laplacian(w)
            np.testing.assert_array_equal(lap, lap.T)
            np.testing.assert_allclose(lap.sum(axis=1), 0.0, atol=1e-12)
            assert np.linalg.eigvalsh(lap).min() >= -1e-10
            np.testing.assert_allclose(lap, oracles.dense_laplacian(w), atol=1e-15)


class TestTerms:
    def test_smoothness_zero_signal(self):
        assert graphs.smoothness_term([0.3, 0.7, 0.1], np.zeros((3, 4))) == 0.0

    def test_smoothness_two_nodes(self):
        assert graphs.smoothness_term([1.0], np.array([[1.0], [0.0]])) == 1.0

    def test_smoothness_hand_value(self):
        x = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
        assert graphs.smoothness_term([0.5, 0.0, 0.25], x) == pytest.approx(2.25)

    def test_energy_zero_signal(self):
        assert graphs.energy_penalty_term([1.0], np.zeros((2, 3))) == 0.0

    def test_energy_two_nodes(self):
        assert graphs.energy_penalty_term([1.0], np.array([[3.0], [4.0]])) == 25.0

    def test_energy_hand_value(self):
        x = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]])
        assert graphs.energy_penalty_term([0.5, 0.0, 0.25], x) == pytest.approx(3.25)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            graphs.smoothness_term([1.0], np.zeros((3, 4)))
        with pytest.raises(ValueError):
            graphs.energy_penalty_term([1.0, 0.0, 0.0], np.zeros((2, 4)))

    def test_trace_identities_random(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            s = int(rng.integers(1, 7))
            w = rng.uniform(0.0, 1.0, size=graphs.n_edges(n))
            x = rng.normal(size=(n, s))
            smooth_edge = graphs.smoothness_term(w, x)
            smooth_trace = graphs.smoothness_term_dense(w, x)
            assert smooth_edge == pytest.approx(smooth_trace, rel=1e-10, abs=1e-12)
            energy_deg = graphs.energy_penalty_term(w, x)
            energy_pair = graphs.energy_penalty_term_pairwise(w, x)
            assert energy_deg == pytest.approx(energy_pair, rel=1e-10, abs=1e-12)


class TestObjective:
    def test_all_zero(self):
        y = np.zeros((2, 2, 3))
        w = np.full((2, 1), 0.5)
        assert graphs.objective(y, y, w, gamma=1.0, eta=0.2, alpha=3.0) == 0.0

    def test_pure_fidelity(self):
        rng = np.random.default_rng(0)
        y = rng.normal(size=(1, 4, 5))
        x = np.zeros_like(y)
        w = np.full((1, 6), 0.1)
        value = graphs.objective(y, x, w, gamma=0.0, eta=0.0, alpha=0.0)
        assert value == pytest.approx(float((y * y).sum()))

    def test_hand_value_two_windows(self):
        # Y = X = [1, 0]^T in both windows, W goes from [1] to [0]
        y = np.array([[[1.0], [0.0]], [[1.0], [0.0]]])
        w = np.array([[1.0], [0.0]])
        value = graphs.objective(y, y, w, gamma=1.0, eta=0.0, alpha=2.0)
        assert value == pytest.approx(3.0)

    def test_affine_in_single_weight(self):
        # second difference of an affine function vanishes (away from the
        # l1 kinks, so only well-separated coordinates are probed)
        rng = np.random.default_rng(42)
        h = 1e-4
        for _ in range(20):
            n, s, b = 4, 3, 2
            m = graphs.n_edges(n)
            y = rng.normal(size=(b, n, s))
            x = rng.normal(size=(b, n, s))
            w = rng.uniform(0.0, 1.0, size=(b, m))
            gaps = np.abs(w[0] - w[1])
            e = int(np.argmax(gaps))
            assert gaps[e] > 1e-2

            def value(delta):
                w_mod = w.copy()
                w_mod[0, e] += delta
                return graphs.objective(
                    y, x, w_mod, gamma=0.7, eta=0.05, alpha=0.4
                )

            second_diff = value(h) - 2.0 * value(0.0) + value(-h)
            assert abs(second_diff) <= 1e-8


class TestWindowing:
    def test_shapes_and_remainder_drop(self):
        y = np.arange(2 * 7, dtype=float).reshape(2, 7)
        blocks = graphs.window_signals(y, 3)
        assert blocks.shape == (2, 2, 3)
        np.testing.assert_array_equal(blocks[0], y[:, 0:3])
        np.testing.assert_array_equal(blocks[1], y[:, 3:6])

    def test_too_short(self):
        with pytest.raises(ValueError):
            graphs.window_signals(np.zeros((3, 4)), 5)

    def test_signal_validation(self):
        with pytest.raises(ValueError):
            graphs.as_signal_matrix(np.zeros((1, 5)))
        with pytest.raises(ValueError):
            graphs.as_signal_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            graphs.as_signal_matrix(np.zeros(5))
