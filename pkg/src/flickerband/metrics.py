"""Regression loss for banding confidence maps and the zero-init check.

fa_mse scores a predicted continuous confidence map against the ground-truth
amplitude maps the renderer emits.  The injection check demonstrates that a
linear input layer widened with zero-initialized columns computes exactly
what the original layer computed, no matter what flows through the new
channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def clamp_confidence(values: np.ndarray) -> np.ndarray:
    """Ingest an externally produced confidence map: clip into [0, 1]."""
    return np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)


def fa_mse(pred: np.ndarray, truth: np.ndarray) -> float:
    """Mean squared error over all elements of two equally shaped tensors.

    The reduction is numpy's pairwise sum, so the result is identical from
    run to run for the same inputs.
    """
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs truth {truth.shape}")
    if pred.size == 0:
        raise ValueError("cannot average over zero elements")
    diff = pred - truth
    return float(np.mean(diff * diff))


@dataclass(frozen=True)
class InjectionWeights:
    """An input weight matrix widened by an appended block for a new channel."""

    original: np.ndarray   # (out_dim, in_dim)
    appended: np.ndarray   # (out_dim, extra_dim)

    @property
    def widened(self) -> np.ndarray:
        return np.concatenate([self.original, self.appended], axis=1)


def zero_init_augment(weights: np.ndarray, extra_dim: int = 1) -> InjectionWeights:
    """Widen a weight matrix with exactly-zero columns for a new input channel."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 2:
        raise ValueError(f"expected a 2D weight matrix, got shape {weights.shape}")
    if not np.all(np.isfinite(weights)):
        raise ValueError("weight matrix must be finite")
    if extra_dim < 1:
        raise ValueError(f"extra_dim must be >= 1, got {extra_dim}")
    return InjectionWeights(weights.copy(), np.zeros((weights.shape[0], extra_dim)))


def _ordered_matmul(matrix: np.ndarray, operand: np.ndarray) -> np.ndarray:
    """Matrix product accumulated strictly left to right over the shared axis.

    BLAS kernels regroup the summation depending on operand sizes, which
    leaks ~1e-15 noise between a widened product and the original (measured
    on this stack).  A fixed accumulation order makes appended zero terms
    true no-ops, so the identity below holds bit for bit.
    """
    out = np.zeros((matrix.shape[0], operand.shape[1]))
    for j in range(matrix.shape[1]):
        out += matrix[:, j, None] * operand[None, j, :]
    return out


def verify_injection_identity(weights: InjectionWeights, activations: np.ndarray,
                              prior: np.ndarray) -> float:
    """Max |widened @ [activations; prior] - original @ activations|.

    Exactly 0.0 for zero-initialized weights and any finite prior.
    """
    activations = np.asarray(activations, dtype=np.float64)
    prior = np.asarray(prior, dtype=np.float64)
    if activations.ndim == 1:
        activations = activations[:, None]
    if prior.ndim == 1:
        prior = prior[:, None]
    if activations.shape[0] != weights.original.shape[1]:
        raise ValueError(f"activations have {activations.shape[0]} rows, "
                         f"weights expect {weights.original.shape[1]}")
    if prior.shape[0] != weights.appended.shape[1]:
        raise ValueError(f"prior has {prior.shape[0]} rows, "
                         f"appended block expects {weights.appended.shape[1]}")
    if activations.shape[1] != prior.shape[1]:
        raise ValueError("activations and prior must have the same column count")
    stacked = np.concatenate([activations, prior], axis=0)
    widened_out = _ordered_matmul(weights.widened, stacked)
    original_out = _ordered_matmul(weights.original, activations)
    return float(np.max(np.abs(widened_out - original_out)))
