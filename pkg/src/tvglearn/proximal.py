"""Closed-form proximal operator for f(z) = alpha*||z||_1 + <beta, z>."""

from __future__ import annotations

import numpy as np

__all__ = ["soft_threshold", "prox_l1_linear"]


def soft_threshold(a, s):
    """Shrink ``a`` toward zero by ``s``: sign(a) * max(|a| - s, 0)."""
    a = np.asarray(a, dtype=np.float64)
    return np.sign(a) * np.maximum(np.abs(a) - s, 0.0)


def prox_l1_linear(v, alpha: float, beta, lam: float):
    """prox_{lam*f}(v) for f(z) = alpha*||z||_1 + <beta, z>.

    The linear term shifts the argument, after which the l1 part separates
    into per-coordinate soft thresholding:

        prox(v) = soft(v - lam*beta, lam*alpha)

    Exact in closed form; no inner iteration.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if alpha < 0.0:
        raise ValueError("alpha must be non-negative")
    v = np.asarray(v, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != v.shape:
        raise ValueError(f"beta shape {beta.shape} does not match v {v.shape}")
    return soft_threshold(v - lam * beta, lam * alpha)
