"""Ground-truth scenario generator and recovery metrics.

Builds piecewise-constant sequences of random sparse graphs together with
signals that are smooth on the active graph, so that solver output can be
scored against a known answer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import InfeasibleBudgetError
from .graphs import edge_pairs, laplacian, n_edges, temporal_variation

__all__ = ["ScenarioSpec", "GroundTruth", "generate", "edge_f1", "change_profile"]


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of a synthetic piecewise-constant graph scenario."""

    n_nodes: int
    k_true: int
    n_segments: int = 2
    windows_per_segment: int = 4
    window_len: int = 100
    noise_sigma: float = 0.1
    smooth_gamma: float = 5.0
    zero_node_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("need at least 2 nodes")
        if not 0 < self.k_true <= n_edges(self.n_nodes):
            raise InfeasibleBudgetError(
                f"k_true={self.k_true} outside (0, {n_edges(self.n_nodes)}]"
            )
        if self.n_segments < 1 or self.windows_per_segment < 1:
            raise ValueError("need at least one segment and one window")
        if self.window_len < 1:
            raise ValueError("window_len must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        if self.smooth_gamma <= 0:
            raise ValueError("smooth_gamma must be positive")
        if not 0.0 <= self.zero_node_fraction < 1.0:
            raise ValueError("zero_node_fraction must be in [0, 1)")

    @property
    def n_windows(self) -> int:
        return self.n_segments * self.windows_per_segment

    @property
    def n_samples(self) -> int:
        return self.n_windows * self.window_len


@dataclass(frozen=True)
class GroundTruth:
    """Noisy record, its clean version, and the graphs that generated it.

    ``boundaries`` holds the indices t at which windows t and t+1 straddle a
    segment change, matching the indexing of :func:`change_profile`.
    """

    segments: np.ndarray  # (n_segments, n_edges) 0/1 edge vectors
    signals: np.ndarray  # (n_nodes, n_samples) noisy record
    clean: np.ndarray  # (n_nodes, n_samples) noiseless record
    boundaries: tuple
    window_len: int

    def segment_of_window(self, t: int) -> int:
        windows_per_segment = (
            self.signals.shape[1] // self.window_len
        ) // self.segments.shape[0]
        return t // windows_per_segment


def generate(spec: ScenarioSpec) -> GroundTruth:
    """Draw a scenario; deterministic for a fixed spec (seed included)."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_nodes
    m = n_edges(n)
    i_idx, j_idx = edge_pairs(n)

    n_zero = int(spec.zero_node_fraction * n)
    zero_nodes = rng.choice(n, size=n_zero, replace=False) if n_zero else np.empty(0, int)
    zero_mask = np.zeros(n, dtype=bool)
    zero_mask[zero_nodes] = True
    allowed = np.flatnonzero(~zero_mask[i_idx] & ~zero_mask[j_idx])
    if spec.k_true > allowed.size:
        raise InfeasibleBudgetError(
            f"k_true={spec.k_true} cannot fit in the {allowed.size} edges "
            f"left after excluding {n_zero} zero nodes"
        )

    segments = np.zeros((spec.n_segments, m))
    for s in range(spec.n_segments):
        chosen = rng.choice(allowed, size=spec.k_true, replace=False)
        segments[s, chosen] = 1.0

    clean = np.empty((n, spec.n_samples))
    for s in range(spec.n_segments):
        lap = laplacian(segments[s])
        a = np.eye(n) + spec.smooth_gamma * lap
        factor = cho_factor(a, lower=True)
        for b in range(spec.windows_per_segment):
            eps = rng.standard_normal((n, spec.window_len))
            start = (s * spec.windows_per_segment + b) * spec.window_len
            clean[:, start : start + spec.window_len] = cho_solve(factor, eps)
    clean[zero_mask] = 0.0

    noise = rng.standard_normal(clean.shape)
    signals = clean + spec.noise_sigma * noise

    boundaries = tuple(
        s * spec.windows_per_segment - 1 for s in range(1, spec.n_segments)
    )
    return GroundTruth(
        segments=segments,
        signals=signals,
        clean=clean,
        boundaries=boundaries,
        window_len=spec.window_len,
    )


def edge_f1(estimated, truth, k: int) -> float:
    """F1 score of the top-k estimated edges against a binary truth vector.

    Ties in the estimate break toward the lower edge index.
    """
    estimated = np.asarray(estimated, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimated.shape != truth.shape:
        raise ValueError("estimate and truth must have the same edge count")
    if not np.all((truth == 0.0) | (truth == 1.0)):
        raise ValueError("truth must be a 0/1 edge vector")
    if not 0 < k <= estimated.shape[0]:
        raise ValueError(f"k={k} outside (0, {estimated.shape[0]}]")

    top = np.argsort(-estimated, kind="stable")[:k]
    true_set = truth > 0.0
    hits = int(true_set[top].sum())
    n_true = int(true_set.sum())
    if hits == 0:
        return 0.0
    precision = hits / k
    recall = hits / n_true
    return 2.0 * precision * recall / (precision + recall)


def change_profile(w_seq) -> np.ndarray:
    """l1 change ||W_t - W_{t+1}||_1 between consecutive graphs."""
    w_seq = np.asarray(w_seq, dtype=np.float64)
    if w_seq.ndim != 2 or w_seq.shape[0] < 2:
        raise ValueError("need a (n_windows >= 2, n_edges) graph sequence")
    return temporal_variation(w_seq)
