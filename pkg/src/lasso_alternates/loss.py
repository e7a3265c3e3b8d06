"""Smooth convex losses ``f(z, y)`` of the linear predictor ``z = X @ beta``.

Two kinds are supported:

* ``squared``:  ``f(z, y) = 0.5 * sum((z - y)**2)``
* ``logistic``: ``f(z, y) = sum(log(exp(-y * z) + 1))`` with ``y`` in {-1, +1}

``curvature_bound`` gives a constant ``L`` with
``d^2/dt^2 f(z + t * x, y) <= L`` for every ``z``; it is the step-size
constant used by both coordinate descent and the univariate solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .datamodel import CLASSIFICATION, REGRESSION

SQUARED = "squared"
LOGISTIC = "logistic"
KINDS = (SQUARED, LOGISTIC)
_KIND_CODE = {SQUARED: 0, LOGISTIC: 1}


@dataclass(frozen=True)
class LossModel:
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}; expected one of {KINDS}")

    @property
    def code(self) -> int:
        """Integer tag used by the compiled kernels."""
        return _KIND_CODE[self.kind]

    @property
    def task(self) -> str:
        return CLASSIFICATION if self.kind == LOGISTIC else REGRESSION

    def value(self, z, y) -> float:
        return loss_value(self, z, y)

    def gradient(self, z, y) -> np.ndarray:
        return loss_gradient(self, z, y)

    def curvature_bound(self, values) -> float:
        return curvature_bound(self, values)


def _check(z, y) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if z.shape != y.shape or z.ndim != 1:
        raise ValueError(f"length mismatch: z has shape {z.shape}, y has shape {y.shape}")
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite input to loss")
    return z, y


def pointwise_loss(model: LossModel, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-observation loss terms (unchecked)."""
    if model.kind == SQUARED:
        return 0.5 * (z - y) ** 2
    # log(exp(-u) + 1) == logaddexp(0, -u), stable for any finite u
    return np.logaddexp(0.0, -y * z)


def loss_value(model: LossModel, z, y) -> float:
    z, y = _check(z, y)
    return float(np.sum(pointwise_loss(model, z, y)))


def loss_gradient(model: LossModel, z, y) -> np.ndarray:
    """Gradient of ``f`` with respect to its first argument."""
    z, y = _check(z, y)
    if model.kind == SQUARED:
        return z - y
    return -y * expit(-y * z)


def curvature_bound(model: LossModel, values) -> float:
    """Upper bound on the second derivative of ``t -> f(z + t * x, y)``.

    ``values`` are the stored entries of the column ``x`` (zeros contribute
    nothing, so the sparse values alone suffice).
    """
    sq = float(np.dot(values, values))
    return sq if model.kind == SQUARED else 0.25 * sq
