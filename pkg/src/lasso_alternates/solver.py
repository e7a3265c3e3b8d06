"""Lasso fitting by cyclic coordinate descent plus the one-coordinate subproblem.

The objective is ``L(beta) = f(X beta, y) + rho * ||beta||_1``.  Every
coordinate update minimizes the quadratic majorizer built from
``curvature_bound`` and soft-thresholds it, which is an exact coordinate
minimization for the squared loss and a monotone upper-bound Newton step for
the logistic loss.  Convergence is declared on the KKT residual.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .datamodel import Dataset, FeatureMatrix
from .loss import LossModel, SQUARED, pointwise_loss

logger = logging.getLogger(__name__)

REFRESH_EVERY = 100


class IncompatibleLossError(ValueError):
    """The loss kind does not match the dataset's task."""


class NonConvergenceError(RuntimeError):
    def __init__(self, message: str, last_iterate: float):
        super().__init__(message)
        self.last_iterate = last_iterate


class NonConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class RegParam:
    """Regularization weight; with ``per_sample`` the penalty is ``rho * n``."""

    rho: float
    per_sample: bool = False

    def __post_init__(self):
        if not (self.rho >= 0.0 and np.isfinite(self.rho)):
            raise ValueError(f"rho must be a finite nonnegative number, got {self.rho!r}")

    def effective(self, n: int) -> float:
        return self.rho * n if self.per_sample else float(self.rho)


@dataclass(frozen=True)
class SolverOptions:
    kkt_tolerance: float = 1e-6
    max_sweeps: int = 10_000
    univariate_tolerance: float = 1e-10
    max_prox_iters: int = 10_000

    def __post_init__(self):
        for name in ("kkt_tolerance", "max_sweeps", "univariate_tolerance", "max_prox_iters"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def entry_slack(self) -> float:
        # zero coordinates ignore gradient excess this small; keeps round-off
        # on duplicated columns from creating dust coefficients
        return 1e-3 * self.kkt_tolerance


@dataclass(eq=False)
class LassoSolution:
    beta: np.ndarray
    objective: float
    fitted: np.ndarray
    rho: float
    loss: str
    sweeps_used: int = 0
    converged: bool = True
    kkt: float = 0.0
    objective_history: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.beta)

    @property
    def p(self) -> int:
        return self.beta.shape[0]

    @property
    def n(self) -> int:
        return self.fitted.shape[0]

    def to_dict(self) -> dict:
        return {
            "rho": float(self.rho),
            "loss": self.loss,
            "n": int(self.n),
            "p": int(self.p),
            "beta": {str(int(j)): float(self.beta[j]) for j in self.support},
            "objective": float(self.objective),
            "converged": bool(self.converged),
        }

    @classmethod
    def from_dict(cls, doc: dict, dataset: Dataset) -> "LassoSolution":
        """Rebuild a solution against ``dataset``; the fitted vector is recomputed."""
        X = dataset.matrix
        n, p = int(doc["n"]), int(doc["p"])
        if (n, p) != X.shape:
            raise ValueError(f"solution was fitted on a {n}x{p} matrix, dataset is {X.n}x{X.p}")
        beta = np.zeros(p)
        for key, value in doc["beta"].items():
            j = int(key)
            if not 0 <= j < p:
                raise ValueError(f"coefficient index {j} out of range for p={p}")
            beta[j] = float(value)
        fitted = K.matvec(X.n, X.indptr, X.indices, X.data, beta)
        return cls(beta=beta, objective=float(doc["objective"]), fitted=fitted,
                   rho=float(doc["rho"]), loss=str(doc["loss"]),
                   converged=bool(doc["converged"]))


def objective_value(loss: LossModel, z: np.ndarray, y: np.ndarray, beta: np.ndarray, rho: float) -> float:
    return float(np.sum(pointwise_loss(loss, z, y)) + rho * np.sum(np.abs(beta)))


def null_threshold(dataset: Dataset, loss: LossModel) -> float:
    """Smallest rho for which ``beta = 0`` is optimal: ``||X^T grad f(0, y)||_inf``."""
    g = loss.gradient(np.zeros(dataset.n), dataset.y)
    c = dataset.matrix.rmatvec(g)
    return float(np.max(np.abs(c))) if c.size else 0.0


def _check_compatible(dataset: Dataset, loss: LossModel) -> None:
    if loss.task != dataset.task:
        raise IncompatibleLossError(
            f"{loss.kind} loss needs a {loss.task} response, dataset is {dataset.task}")


def _bounds(matrix: FeatureMatrix, loss: LossModel) -> np.ndarray:
    sq = np.asarray(matrix.column_sq_norms)
    return sq if loss.kind == SQUARED else 0.25 * sq


def kkt_residual(dataset: Dataset, loss: LossModel, reg: RegParam, beta) -> float:
    """Largest violation of the l1 stationarity conditions at ``beta``.

    Per coordinate with ``g_j = X_j^T grad f(X beta, y)``: ``|g_j + rho sign(beta_j)|``
    if ``beta_j != 0`` and ``max(0, |g_j| - rho)`` otherwise.  Zero columns count 0.
    """
    X = dataset.matrix
    beta = np.ascontiguousarray(beta, dtype=np.float64)
    if beta.shape != (X.p,):
        raise ValueError(f"beta must have length {X.p}")
    z = K.matvec(X.n, X.indptr, X.indices, X.data, beta)
    rho = reg.effective(X.n)
    return max(0.0, K.kkt_max(loss.code, X.indptr, X.indices, X.data, _bounds(X, loss),
                              dataset.y, z, beta, rho))


def fit_lasso(dataset: Dataset, loss: LossModel, reg: RegParam,
              opts: SolverOptions = SolverOptions()) -> LassoSolution:
    """Minimize ``f(X beta, y) + rho ||beta||_1`` from ``beta = 0``.

    Coordinates are visited in index order, so among exactly duplicated
    columns the lower index absorbs the signal.  A run that exhausts
    ``max_sweeps`` returns with ``converged=False`` and emits a
    :class:`NonConvergenceWarning`.
    """
    _check_compatible(dataset, loss)
    X, y = dataset.matrix, dataset.y
    rho = reg.effective(X.n)
    bounds = _bounds(X, loss)
    beta = np.zeros(X.p)
    z = np.zeros(X.n)
    args = (X.indptr, X.indices, X.data, bounds, y)

    history = [objective_value(loss, z, y, beta, rho)]
    kkt = K.kkt_max(loss.code, *args, z, beta, rho)
    sweeps = 0
    while sweeps < opts.max_sweeps:
        if kkt <= opts.kkt_tolerance:
            z = K.matvec(X.n, X.indptr, X.indices, X.data, beta)
            kkt = K.kkt_max(loss.code, *args, z, beta, rho)
            if kkt <= opts.kkt_tolerance:
                break
        K.cd_sweep(loss.code, *args, z, beta, rho, opts.entry_slack)
        sweeps += 1
        if sweeps % REFRESH_EVERY == 0:
            z = K.matvec(X.n, X.indptr, X.indices, X.data, beta)
        history.append(objective_value(loss, z, y, beta, rho))
        kkt = K.kkt_max(loss.code, *args, z, beta, rho)

    z = K.matvec(X.n, X.indptr, X.indices, X.data, beta)
    kkt = max(0.0, K.kkt_max(loss.code, *args, z, beta, rho))
    converged = kkt <= opts.kkt_tolerance
    if not converged:
        warnings.warn(f"coordinate descent stopped after {sweeps} sweeps with KKT residual "
                      f"{kkt:.3g} > {opts.kkt_tolerance:g}", NonConvergenceWarning, stacklevel=2)
    logger.debug("fit_lasso: %d sweeps, kkt=%.3g, support=%d", sweeps, kkt, np.count_nonzero(beta))
    return LassoSolution(beta=beta, objective=objective_value(loss, z, y, beta, rho), fitted=z,
                         rho=rho, loss=loss.kind, sweeps_used=sweeps, converged=converged,
                         kkt=kkt, objective_history=np.array(history))


def solve_univariate(loss: LossModel, z, y, column, reg: RegParam,
                     opts: SolverOptions = SolverOptions(), method: str = "auto") -> float:
    """Minimize ``b -> f(z + x b, y) + rho |b|`` for one sparse column ``x``.

    ``column`` is a ``(rows, values)`` pair.  ``method="auto"`` uses the
    soft-threshold closed form for the squared loss and proximal gradient
    with step ``1 / curvature_bound`` otherwise; ``"prox"`` forces the
    iteration for either loss.
    """
    rows, vals = column
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    rho = reg.effective(z.shape[0])
    L = loss.curvature_bound(vals)
    if L <= 0.0:
        return 0.0
    zr = np.ascontiguousarray(z[rows])
    yr = np.ascontiguousarray(y[rows])
    if method == "auto":
        method = "closed" if loss.kind == SQUARED else "prox"
    if method == "closed":
        if loss.kind != SQUARED:
            raise ValueError("closed-form univariate solve exists only for the squared loss")
        return K.soft_threshold(float(vals @ (yr - zr)), rho) / L
    if method != "prox":
        raise ValueError(f"unknown method {method!r}")
    beta, ok, iters = K.univariate_prox(loss.code, vals, zr, yr, L, rho,
                                        opts.univariate_tolerance, opts.max_prox_iters)
    if not ok:
        raise NonConvergenceError(
            f"proximal gradient did not reach tolerance {opts.univariate_tolerance:g} "
            f"in {opts.max_prox_iters} iterations", beta)
    return beta


def univariate_residual(loss: LossModel, z, y, column, rho: float, beta: float) -> float:
    """Stationarity violation of the one-coordinate problem at ``beta``."""
    rows, vals = column
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    h = K.univariate_grad(loss.code, vals, np.ascontiguousarray(np.asarray(z)[rows]),
                          np.ascontiguousarray(np.asarray(y)[rows]), float(beta))
    return K.univariate_residual(h, float(beta), rho)
