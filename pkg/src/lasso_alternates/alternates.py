"""Alternate features of a Lasso solution.

For a selected feature ``i`` and an unselected feature ``j`` the alternate
coefficient is the minimizer of ``f(z_i + X_j b, y) + rho |b|`` where
``z_i = X beta* - X_i beta*_i``.  A candidate ``j`` is screened out without
solving whenever ``|X_j^T grad f(z_i, y)| <= rho``, since ``b = 0`` then
already satisfies the optimality condition.  Surviving candidates with a
nonzero coefficient become pairs, scored by how much swapping ``i`` for
``j`` raises the Lasso objective.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .datamodel import Dataset, FeatureMatrix
from .loss import LossModel, pointwise_loss
from .solver import (
    LassoSolution,
    NonConvergenceError,
    RegParam,
    SolverOptions,
    _check_compatible,
    solve_univariate,
)


@dataclass(frozen=True, eq=False)
class PartialPrediction:
    """Fitted values with the contribution of feature ``origin_index`` removed."""

    origin_index: int
    z: np.ndarray


@dataclass(frozen=True, order=True)
class AlternatePair:
    original: int
    alternate: int
    coefficient: float
    score: float


@dataclass(frozen=True, order=True)
class FailedSolve:
    original: int
    alternate: int
    last_iterate: float


@dataclass(frozen=True, eq=False)
class AlternateReport:
    pairs: tuple[AlternatePair, ...]
    naive_solve_count: int
    actual_solve_count: int
    failures: tuple[FailedSolve, ...] = ()
    names: Mapping[int, str] = field(default_factory=dict)

    def label(self, j: int) -> str | int:
        return self.names.get(j, j)

    def origins(self) -> list[int]:
        return sorted({pr.original for pr in self.pairs})

    def ranked(self, origin: int, top_k: int | None = None) -> list[AlternatePair]:
        return rank_alternates(self, origin, top_k)

    def ranked_views(self, top_k: int | None = None) -> dict[int, list[AlternatePair]]:
        return {i: self.ranked(i, top_k) for i in self.origins()}

    def index_of(self, label: str | int) -> int | None:
        """Resolve a feature name (or index / index string) appearing in the report."""
        for j, name in self.names.items():
            if name == label:
                return j
        try:
            return int(label)
        except (TypeError, ValueError):
            return None

    @property
    def reduction(self) -> float:
        return self.actual_solve_count / self.naive_solve_count if self.naive_solve_count else 0.0


def partial_prediction(matrix: FeatureMatrix, solution: LassoSolution, i: int) -> PartialPrediction:
    """``z_i = sum_{k != i} X_k beta*_k``, taken as the cached fit minus one column."""
    if not 0 <= i < solution.p or solution.beta[i] == 0.0:
        raise ValueError(f"feature {i} is not in the support of the solution")
    z = np.array(solution.fitted, dtype=np.float64)
    rows, vals = matrix.column(i)
    z[rows] -= vals * solution.beta[i]
    return PartialPrediction(i, z)


def candidate_correlations(matrix: FeatureMatrix, loss: LossModel, y, zpart: PartialPrediction) -> np.ndarray:
    """``X^T grad f(z_i, y)``; the gradient is formed once and reused for every column."""
    return matrix.rmatvec(loss.gradient(zpart.z, y))


def screen_candidates(matrix: FeatureMatrix, loss: LossModel, y, zpart: PartialPrediction,
                      reg: RegParam, beta) -> np.ndarray:
    """Unselected, nonzero-norm columns whose correlation with the gradient exceeds rho.

    Every column not returned has an alternate coefficient of exactly zero.
    """
    rho = reg.effective(matrix.n)
    corr = candidate_correlations(matrix, loss, y, zpart)
    keep = (np.asarray(beta) == 0.0) & (matrix.column_sq_norms > 0.0) & (np.abs(corr) > rho)
    return np.flatnonzero(keep)


def score_pair(loss: LossModel, dataset: Dataset, solution: LassoSolution,
               zpart: PartialPrediction, j: int, coefficient: float) -> float:
    """Objective increase ``L(beta^{i->j}) - L(beta*)``.

    The swapped fit is ``z_i + X_j * coefficient``; the loss difference is
    summed row by row so rows untouched by the swap cancel exactly.
    """
    i = zpart.origin_index
    rows, vals = dataset.matrix.column(j)
    z_swap = zpart.z.copy()
    z_swap[rows] += vals * coefficient
    y = dataset.y
    dloss = np.sum(pointwise_loss(loss, z_swap, y) - pointwise_loss(loss, solution.fitted, y))
    return float(dloss + solution.rho * (abs(coefficient) - abs(solution.beta[i])))


def rank_alternates(report: AlternateReport, origin: int, top_k: int | None = None) -> list[AlternatePair]:
    """Pairs for ``origin`` by ascending score (closest alternate first), ties by index."""
    chosen = sorted((pr for pr in report.pairs if pr.original == origin),
                    key=lambda pr: (pr.score, pr.alternate))
    return chosen if top_k is None else chosen[:max(top_k, 0)]


def _one_origin(dataset, loss, solution, reg, opts, method, i):
    X = dataset.matrix
    zpart = partial_prediction(X, solution, i)
    candidates = screen_candidates(X, loss, dataset.y, zpart, reg, solution.beta)
    pairs, failures = [], []
    for j in candidates:
        j = int(j)
        try:
            b = solve_univariate(loss, zpart.z, dataset.y, X.column(j), reg, opts, method=method)
        except NonConvergenceError as exc:
            failures.append(FailedSolve(i, j, float(exc.last_iterate)))
            continue
        if abs(b) <= opts.univariate_tolerance:
            continue
        pairs.append(AlternatePair(i, j, float(b), score_pair(loss, dataset, solution, zpart, j, b)))
    return pairs, failures, len(candidates)


def find_alternates(dataset: Dataset, loss: LossModel, solution: LassoSolution, reg: RegParam,
                    opts: SolverOptions = SolverOptions(), threads: int = 1,
                    method: str = "auto") -> AlternateReport:
    """Screen, solve and score every (selected, unselected) feature pair.

    Origins are processed independently (optionally on ``threads`` workers);
    output is sorted by ``(original, alternate)`` so it does not depend on
    scheduling.
    """
    _check_compatible(dataset, loss)
    if not solution.converged:
        raise ValueError("alternates require a converged Lasso solution")
    if solution.beta.shape[0] != dataset.p or solution.fitted.shape[0] != dataset.n:
        raise ValueError("solution dimensions do not match the dataset")
    if not np.isclose(reg.effective(dataset.n), solution.rho, rtol=1e-12, atol=0.0):
        raise ValueError(f"rho {reg.effective(dataset.n)!r} differs from the solution's {solution.rho!r}")
    X = dataset.matrix
    support = [int(i) for i in solution.support]
    eligible = int(np.count_nonzero((solution.beta == 0.0) & (X.column_sq_norms > 0.0)))

    def work(i):
        return _one_origin(dataset, loss, solution, reg, opts, method, i)

    if threads > 1 and len(support) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, support))
    else:
        results = [work(i) for i in support]

    pairs = sorted(pr for res in results for pr in res[0])
    failures = sorted(f for res in results for f in res[1])
    names = {}
    if X.feature_names is not None:
        for pr in pairs:
            names[pr.original] = X.feature_names[pr.original]
            names[pr.alternate] = X.feature_names[pr.alternate]
        for f in failures:
            names[f.original] = X.feature_names[f.original]
            names[f.alternate] = X.feature_names[f.alternate]
    return AlternateReport(
        pairs=tuple(pairs),
        naive_solve_count=len(support) * eligible,
        actual_solve_count=sum(res[2] for res in results),
        failures=tuple(failures),
        names=dict(sorted(names.items())),
    )
