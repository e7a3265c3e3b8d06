"""Random problem generators used by the tests and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import CLASSIFICATION, REGRESSION, Dataset, FeatureMatrix


@dataclass(frozen=True)
class FactorDesign:
    """Correlated design: ``n_factors`` latent signals, each copied ``copies`` times
    with independent noise, padded with independent noise features.

    Like topics in a corpus, latent factor ``f`` lives on its own block of
    rows (``n / n_factors`` observations) and so do its copies, so columns of
    different factors are exactly orthogonal.  Padding columns are sparse
    (each entry nonzero with probability ``noise_density``), resembling rare
    words in a bag-of-words matrix.
    """

    n: int = 1000
    p: int = 10_000
    n_factors: int = 20
    copies: int = 5
    copy_noise: float = 0.3
    response_noise: float = 0.1
    noise_density: float = 0.005
    seed: int = 0


def factor_dataset(design: FactorDesign = FactorDesign()) -> tuple[Dataset, np.ndarray]:
    """Return the dataset and ``factor_of`` (latent id per column, -1 for noise).

    Copy columns are spread over the index range in a seeded random order so
    that the solver's cyclic order carries no hidden structure.
    """
    rng = np.random.default_rng(design.seed)
    n, p = design.n, design.p
    n_signal = design.n_factors * design.copies
    if n_signal > p:
        raise ValueError("more copy columns than features")
    block = np.arange(n) * design.n_factors // n
    latent = np.zeros((n, design.n_factors))
    latent[np.arange(n), block] = rng.standard_normal(n)

    X = rng.standard_normal((n, p)) * (rng.random((n, p)) < design.noise_density)
    factor_of = np.full(p, -1, dtype=np.int64)
    slots = rng.permutation(p)[:n_signal]
    for k, col in enumerate(slots):
        f = k // design.copies
        rows = block == f
        X[:, col] = 0.0
        X[rows, col] = latent[rows, f] + design.copy_noise * rng.standard_normal(rows.sum())
        factor_of[col] = f
    y = latent.sum(axis=1) + design.response_noise * rng.standard_normal(n)
    return Dataset(FeatureMatrix.from_dense(X), y, REGRESSION), factor_of


def gaussian_regression(rng: np.random.Generator, n: int, p: int, n_true: int = 5,
                        noise: float = 0.5) -> Dataset:
    X = rng.standard_normal((n, p))
    coef = np.zeros(p)
    coef[rng.choice(p, size=min(n_true, p), replace=False)] = rng.choice([-2.0, -1.0, 1.0, 2.0], size=min(n_true, p))
    y = X @ coef + noise * rng.standard_normal(n)
    return Dataset(FeatureMatrix.from_dense(X), y, REGRESSION)


def gaussian_classification(rng: np.random.Generator, n: int, p: int, n_true: int = 5,
                            noise: float = 1.0) -> Dataset:
    X = rng.standard_normal((n, p))
    coef = np.zeros(p)
    coef[rng.choice(p, size=min(n_true, p), replace=False)] = rng.choice([-2.0, -1.0, 1.0, 2.0], size=min(n_true, p))
    score = X @ coef + noise * rng.standard_normal(n)
    y = np.where(score >= 0.0, 1.0, -1.0)
    if np.all(y == y[0]):
        y[0] = -y[0]
    return Dataset(FeatureMatrix.from_dense(X), y, CLASSIFICATION)
