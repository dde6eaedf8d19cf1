"""Block-weighted lasso by cyclic coordinate descent.

The per-joint regression solves

    min_beta 1/2 ||y - X beta||^2 + lambda * sum_j w_j * ||beta_j||_1

where beta_j is the lag block of joint j and w_j its adaptive weight
(1 / max(||beta_j^mle||_1, floor)). Plain lasso is the special case of
all weights equal to one. With the half on the residual term the
subgradient conditions come out factor-free:

    stationarity: |X_k^T r| <= lambda u_k        where beta_k = 0,
                  X_k^T r = lambda u_k sign(beta_k)  elsewhere,

with u_k the weight of the block containing column k and r = y - X beta
the residual, and coordinate descent updates

    beta_k <- soft(X_k^T r_{-k}, lambda u_k) / ||X_k||^2.

(Dropping the half only relabels the path: the minimizer at penalty
lambda equals the no-half minimizer at 2 lambda.) The solver works on
the Gram matrix (X^T X and X^T y are formed once) and returns only
after certifying the solution against the subgradient conditions, so a
returned beta is a verified minimizer up to kkt_tol.
"""

import numpy as np
import scipy.linalg

from ..errors import DimensionMismatch, NonConvergence


def soft_threshold(x, thr):
    """Shrink x toward zero by thr, elementwise; exact zero inside [-thr, thr]."""
    return np.sign(x) * np.maximum(np.abs(x) - thr, 0.0)


def _design_values(design):
    values = design.values if hasattr(design, "values") else design
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise DimensionMismatch("design must be 2-d")
    return values


def _target_values(target, n_rows):
    values = target.values if hasattr(target, "values") else target
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.shape[0] != n_rows:
        raise DimensionMismatch(
            "target has shape %r, expected (%d,)" % (values.shape, n_rows))
    return values


def expand_weights(weights, n_cols, lag=None, design=None):
    """Per-column penalty factors from per-block or per-column weights.

    A weight vector of length n_cols is taken as already per-column; a
    vector of length n_cols / lag is repeated across each joint's lag
    block. Weights must be strictly positive.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1:
        raise DimensionMismatch("weights must be 1-d")
    if lag is None:
        lag = design.lag if design is not None and hasattr(design, "lag") else 1
    if weights.shape[0] == n_cols:
        out = weights.copy()
    elif weights.shape[0] * lag == n_cols:
        out = np.repeat(weights, lag)
    else:
        raise DimensionMismatch(
            "weights length %d fits neither %d columns nor %d blocks of lag %d"
            % (weights.shape[0], n_cols, n_cols // max(lag, 1), lag))
    if not np.all(out > 0):
        raise ValueError("weights must be strictly positive")
    return out


def _cd_gram(gram, xty, thr, beta0, max_sweeps, coef_tol, kkt_tol):
    """Coordinate descent on precomputed Gram quantities.

    thr holds lambda * u_k per column. Returns beta once the max
    coefficient move in a sweep falls below coef_tol and the subgradient
    residual (computed from a fresh gradient) is at most kkt_tol.
    """
    n_cols = gram.shape[0]
    diag = np.diagonal(gram).copy()
    beta = np.zeros(n_cols) if beta0 is None else beta0.astype(float).copy()
    q = gram @ beta if beta0 is not None else np.zeros(n_cols)
    for sweep in range(1, max_sweeps + 1):
        delta_max = 0.0
        for k in range(n_cols):
            dk = diag[k]
            if dk <= 0.0:
                continue
            rho = xty[k] - q[k] + dk * beta[k]
            new = soft_threshold(rho, thr[k]) / dk
            step = new - beta[k]
            if step != 0.0:
                q += gram[:, k] * step
                beta[k] = new
                astep = abs(step)
                if astep > delta_max:
                    delta_max = astep
        if delta_max < coef_tol:
            q = gram @ beta
            grad = q - xty
            if _kkt_from_grad(grad, beta, thr) <= kkt_tol:
                return beta
    raise NonConvergence(
        "coordinate descent did not converge in %d sweeps" % max_sweeps)


def _kkt_from_grad(grad, beta, lam_u):
    """Max subgradient violation given grad = X^T (X beta - y)."""
    active = beta != 0.0
    viol = np.where(
        active,
        np.abs(grad + lam_u * np.sign(beta)),
        np.maximum(np.abs(grad) - lam_u, 0.0),
    )
    return float(viol.max()) if viol.size else 0.0


def adaptive_lasso_fit(design, target, weights, lam, *, max_sweeps=10000,
                       coef_tol=1e-9, kkt_tol=1e-6, warm_start=None):
    """Solve the block-weighted lasso for one target.

    Parameters
    ----------
    design : DesignMatrix or (N, c) array
    target : FlatTarget or (N,) array
    weights : per-block (length c/lag) or per-column (length c) factors
    lam : penalty level, >= 0
    warm_start : optional initial beta (length c)

    Returns the coefficient vector; raises NonConvergence when the sweep
    budget runs out before the subgradient certificate holds.
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    u = expand_weights(weights, x.shape[1], design=design if hasattr(design, "lag") else None)
    gram = x.T @ x
    xty = x.T @ y
    thr = lam * u
    return _cd_gram(gram, xty, thr, warm_start, max_sweeps, coef_tol, kkt_tol)


def kkt_residual(design, target, beta, weights, lam):
    """Max violation of the lasso subgradient conditions at beta.

    Zero (up to tolerance) certifies beta as the solution: for columns
    with beta_k = 0 it measures max(0, |X_k^T r| - lambda u_k), and on
    the active set |X_k^T r - lambda u_k sign(beta_k)|.
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (x.shape[1],):
        raise DimensionMismatch("beta has shape %r, expected (%d,)"
                                % (beta.shape, x.shape[1]))
    u = expand_weights(weights, x.shape[1], design=design if hasattr(design, "lag") else None)
    grad = x.T @ (x @ beta - y)
    return _kkt_from_grad(grad, beta, lam * u)


def full_shrinkage_lambda(design, target, weights):
    """Smallest penalty at which the all-zero vector is a solution.

    At beta = 0 the stationarity condition reads |X_k^T y| <= lambda u_k
    for every column, so the bound is max_k |X_k^T y| / u_k; for any lam
    at or above it the solver returns exact zeros.
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    u = expand_weights(weights, x.shape[1], design=design if hasattr(design, "lag") else None)
    if x.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(x.T @ y) / u))


def mle_estimate(design, target, ridge_scale=1e-6):
    """Unpenalized least-squares coefficients, stabilized when needed.

    Solves the normal equations by Cholesky. When the Gram matrix is not
    comfortably positive definite (factorisation fails, or the factor's
    diagonal spans more than eight orders of magnitude), the system is
    re-solved with a ridge of ridge_scale * mean(diag(X^T X)), which is
    always solvable. Well-posed problems take the plain path, so e.g.
    orthonormal designs return exactly X^T y.
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    gram = x.T @ x
    xty = x.T @ y
    if gram.shape[0] == 0:
        return np.zeros(0)
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True)
        fdiag = np.diagonal(factor[0])
        if fdiag.min() > 1e-8 * fdiag.max():
            return scipy.linalg.cho_solve(factor, xty)
    except scipy.linalg.LinAlgError:
        pass
    ridge = ridge_scale * float(np.mean(np.diagonal(gram)))
    if ridge <= 0.0:
        return np.zeros(gram.shape[0])
    stabilized = gram + ridge * np.eye(gram.shape[0])
    return scipy.linalg.cho_solve(
        scipy.linalg.cho_factor(stabilized, lower=True), xty)
