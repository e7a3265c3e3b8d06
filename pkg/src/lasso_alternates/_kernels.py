"""Compiled inner loops over CSC columns.

Loss kinds are passed as integer codes (0 = squared, 1 = logistic) so one
kernel covers both.  All kernels are deterministic: fixed iteration order,
no parallel reductions.
"""

import math

import numpy as np
from numba import njit

SQUARED = 0
LOGISTIC = 1


@njit(cache=True, nogil=True)
def sigmoid(t):
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


@njit(cache=True, nogil=True)
def softplus(u):
    # log(1 + exp(u))
    if u > 0.0:
        return u + math.log1p(math.exp(-u))
    return math.log1p(math.exp(u))


@njit(cache=True, nogil=True)
def point_grad(code, z, y):
    if code == SQUARED:
        return z - y
    return -y * sigmoid(-y * z)


@njit(cache=True, nogil=True)
def point_loss(code, z, y):
    if code == SQUARED:
        d = z - y
        return 0.5 * d * d
    return softplus(-y * z)


@njit(cache=True, nogil=True)
def loss_sum(code, z, y):
    s = 0.0
    for m in range(z.shape[0]):
        s += point_loss(code, z[m], y[m])
    return s


@njit(cache=True, nogil=True)
def soft_threshold(u, t):
    if u > t:
        return u - t
    if u < -t:
        return u + t
    return 0.0


@njit(cache=True, nogil=True)
def matvec(n, indptr, indices, data, beta):
    z = np.zeros(n)
    for j in range(indptr.shape[0] - 1):
        b = beta[j]
        if b == 0.0:
            continue
        for k in range(indptr[j], indptr[j + 1]):
            z[indices[k]] += data[k] * b
    return z


@njit(cache=True, nogil=True)
def column_grad(code, indptr, indices, data, j, z, y):
    """``X_j^T grad f(z, y)`` touching only the rows stored in column ``j``."""
    g = 0.0
    for k in range(indptr[j], indptr[j + 1]):
        m = indices[k]
        g += data[k] * point_grad(code, z[m], y[m])
    return g


@njit(cache=True, nogil=True)
def column_step_change(code, indptr, indices, data, j, z, y, delta):
    """Change of ``f`` when coordinate ``j`` moves by ``delta`` (rows of column j only)."""
    s = 0.0
    for k in range(indptr[j], indptr[j + 1]):
        m = indices[k]
        s += point_loss(code, z[m] + data[k] * delta, y[m]) - point_loss(code, z[m], y[m])
    return s


@njit(cache=True, nogil=True)
def cd_sweep(code, indptr, indices, data, bounds, y, z, beta, rho, entry_slack):
    """One cyclic pass of coordinate updates, in place.

    The base step minimizes the ``bounds[j]`` quadratic majorizer (exact for
    the squared loss).  For the logistic loss a prox-Newton step with the
    local curvature is also tried, and whichever lowers the objective more
    is kept; the majorizer step alone already guarantees descent.
    A coordinate at zero is left untouched while ``|g_j| <= rho + entry_slack``.
    """
    for j in range(beta.shape[0]):
        L = bounds[j]
        if L <= 0.0:
            continue
        g = 0.0
        H = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            m = indices[k]
            x = data[k]
            if code == SQUARED:
                g += x * (z[m] - y[m])
            else:
                s = sigmoid(-y[m] * z[m])
                g += -x * y[m] * s
                H += x * x * s * (1.0 - s)
        old = beta[j]
        if old == 0.0 and abs(g) <= rho + entry_slack:
            continue
        new = soft_threshold(old - g / L, rho / L)
        if code != SQUARED and H > 0.0 and H < L:
            newton = soft_threshold(old - g / H, rho / H)
            if newton != new:
                d_bound = (column_step_change(code, indptr, indices, data, j, z, y, new - old)
                           + rho * (abs(new) - abs(old)))
                d_newton = (column_step_change(code, indptr, indices, data, j, z, y, newton - old)
                            + rho * (abs(newton) - abs(old)))
                if d_newton < d_bound:
                    new = newton
        delta = new - old
        if delta != 0.0:
            for k in range(indptr[j], indptr[j + 1]):
                z[indices[k]] += data[k] * delta
            beta[j] = new


@njit(cache=True, nogil=True)
def kkt_max(code, indptr, indices, data, bounds, y, z, beta, rho):
    n = z.shape[0]
    grad = np.empty(n)
    for m in range(n):
        grad[m] = point_grad(code, z[m], y[m])
    worst = 0.0
    for j in range(beta.shape[0]):
        if bounds[j] <= 0.0:
            continue
        g = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            g += data[k] * grad[indices[k]]
        b = beta[j]
        if b > 0.0:
            r = abs(g + rho)
        elif b < 0.0:
            r = abs(g - rho)
        else:
            r = abs(g) - rho
        if r > worst:
            worst = r
    return worst


@njit(cache=True, nogil=True)
def univariate_grad(code, vals, zrows, yrows, beta):
    h = 0.0
    for k in range(vals.shape[0]):
        h += vals[k] * point_grad(code, zrows[k] + vals[k] * beta, yrows[k])
    return h


@njit(cache=True, nogil=True)
def univariate_residual(h, beta, rho):
    if beta > 0.0:
        return abs(h + rho)
    if beta < 0.0:
        return abs(h - rho)
    return max(0.0, abs(h) - rho)


@njit(cache=True, nogil=True)
def univariate_prox(code, vals, zrows, yrows, L, rho, tol, max_iter):
    """Proximal gradient with step ``1/L`` on ``b -> f(z + x b) + rho |b|``.

    Only the rows where the column is nonzero matter, so ``zrows``/``yrows``
    are the restriction of ``z``/``y`` to those rows.  Returns
    ``(beta, converged, iterations)``.
    """
    beta = 0.0
    for it in range(max_iter + 1):
        h = univariate_grad(code, vals, zrows, yrows, beta)
        if univariate_residual(h, beta, rho) <= tol:
            return beta, True, it
        if it == max_iter:
            break
        beta = soft_threshold(beta - h / L, rho / L)
    return beta, False, max_iter
