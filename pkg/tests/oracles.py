"""Independent reference computations; deliberately naive and dense."""

import math

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def dense_loss(kind, z, y):
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    if kind == "squared":
        return 0.5 * float(np.sum((z - y) ** 2))
    return float(sum(math.log(math.exp(-ym * zm) + 1.0) if -ym * zm < 700 else -ym * zm
                     for zm, ym in zip(z, y)))


def dense_grad(kind, z, y):
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    if kind == "squared":
        return z - y
    return np.array([-ym / (1.0 + math.exp(ym * zm)) if ym * zm < 700 else 0.0
                     for zm, ym in zip(z, y)])


def dense_objective(kind, X, y, beta, rho):
    X = np.asarray(X, dtype=float)
    return dense_loss(kind, X @ beta, y) + rho * float(np.sum(np.abs(beta)))


def dense_kkt(kind, X, y, beta, rho):
    X = np.asarray(X, dtype=float)
    g = X.T @ dense_grad(kind, X @ beta, y)
    worst = 0.0
    for j in range(X.shape[1]):
        if not np.any(X[:, j]):
            continue
        if beta[j] != 0:
            worst = max(worst, abs(g[j] + rho * np.sign(beta[j])))
        else:
            worst = max(worst, abs(g[j]) - rho)
    return worst


def golden_section(f, a, b, tol=1e-12, max_iter=500):
    """Minimize a unimodal ``f`` on ``[a, b]``."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def univariate_objective(kind, z, y, x, rho):
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    return lambda b: dense_loss(kind, z + x * b, y) + rho * abs(b)


def brute_univariate(kind, z, y, x, rho, radius=50.0):
    """Coarse grid to bracket the minimizer, then golden-section inside the bracket.

    Zero is compared explicitly because the kink at 0 is where a bracketed
    search loses most precision.
    """
    f = univariate_objective(kind, z, y, x, rho)
    grid = np.linspace(-radius, radius, 4001)
    vals = np.array([f(b) for b in grid])
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    b = golden_section(f, lo, hi)
    return 0.0 if f(0.0) <= f(b) else b
