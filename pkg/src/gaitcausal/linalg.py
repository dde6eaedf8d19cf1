"""Dense singular value decomposition by one-sided Jacobi rotations.

The operator-norm and singular-value based graph distances need singular
values of small dense matrices, often for thousands of matrices of the
same shape at once. They are computed here with a one-sided Jacobi
iteration written against plain numpy: columns of each working matrix are
rotated in pairs until all pairwise inner products vanish relative to the
column norms, at which point the column norms are the singular values.

Pairs are visited in the round-robin (tournament) ordering, so each round
touches every column at most once through disjoint pairs; the rotations of
a round therefore commute and are applied in one vectorized step across
the whole batch. Matrices that finish a sweep without rotating are
converged and drop out of the batch.
"""

from functools import lru_cache

import numpy as np

from .errors import EigenFailure

_EPS = np.finfo(float).eps


@lru_cache(maxsize=64)
def _round_robin_rounds(n):
    """Disjoint-pair rounds covering all column pairs of an n-column matrix.

    Returns a tuple of (i_idx, j_idx) int arrays; each round pairs every
    column with exactly one other (one sits out when n is odd) and the
    rounds together cover each unordered pair exactly once.
    """
    items = list(range(n))
    if n % 2:
        items.append(-1)
    m = len(items)
    rounds = []
    arr = items[:]
    for _ in range(m - 1):
        ii = []
        jj = []
        for k in range(m // 2):
            a, b = arr[k], arr[m - 1 - k]
            if a >= 0 and b >= 0:
                ii.append(min(a, b))
                jj.append(max(a, b))
        rounds.append((np.asarray(ii, dtype=np.intp),
                       np.asarray(jj, dtype=np.intp)))
        arr = [arr[0], arr[-1]] + arr[1:-1]
    return tuple(rounds)


def _sweep(u, v, rounds, tol, floor):
    """One Jacobi sweep over a batch; returns per-matrix rotation flags."""
    rotated = np.zeros(u.shape[0], dtype=bool)
    for ii, jj in rounds:
        ui = u[:, :, ii]
        uj = u[:, :, jj]
        gam = np.einsum("bki,bki->bi", ui, uj)
        alp = np.einsum("bki,bki->bi", ui, ui)
        bet = np.einsum("bki,bki->bi", uj, uj)
        need = (np.abs(gam) > tol * np.sqrt(alp * bet)) \
            & (alp > floor[:, None]) & (bet > floor[:, None])
        if not need.any():
            continue
        rotated |= need.any(axis=1)
        gam_safe = np.where(need, gam, 1.0)
        zeta = np.where(need, (bet - alp) / (2.0 * gam_safe), 0.0)
        t = np.sign(zeta + (zeta == 0.0)) / (np.abs(zeta)
                                             + np.hypot(1.0, zeta))
        c = np.where(need, 1.0 / np.sqrt(1.0 + t * t), 1.0)
        s = np.where(need, c * t, 0.0)
        cb = c[:, None, :]
        sb = s[:, None, :]
        u[:, :, ii] = cb * ui - sb * uj
        u[:, :, jj] = sb * ui + cb * uj
        if v is not None:
            vi = v[:, :, ii]
            vj = v[:, :, jj]
            v[:, :, ii] = cb * vi - sb * vj
            v[:, :, jj] = sb * vi + cb * vj
    return rotated


def _column_norms(u):
    return np.sqrt(np.einsum("bki,bki->bi", u, u))


def _batched_singular_values(stack, tol, max_sweeps):
    """Singular values for a (B, m, n) stack with m >= n, rows sorted."""
    u = stack.astype(float).copy()
    nb, m, n = u.shape
    out = np.empty((nb, n))
    if n > 1:
        rounds = _round_robin_rounds(n)
        floor_scale = (16.0 * _EPS) ** 2
        live = np.arange(nb)
        for _ in range(max_sweeps):
            # Columns collapsed to roundoff are exact zeros of the
            # decomposition; rotating them against live columns only
            # stirs noise and never settles, so they sit out the sweep.
            floor = floor_scale * np.einsum("bki,bki->bi", u, u).max(axis=1)
            rotated = _sweep(u, None, rounds, tol, floor)
            done = ~rotated
            if done.any():
                out[live[done]] = _column_norms(u[done])
                live = live[rotated]
                u = u[rotated]
                if live.size == 0:
                    break
        if live.size:
            raise EigenFailure(
                "one-sided Jacobi SVD did not converge in %d sweeps"
                % max_sweeps)
    else:
        out[:] = _column_norms(u)
    return -np.sort(-out, axis=1)


def jacobi_svd(a, tol=1e-12, max_sweeps=1000):
    """Singular value decomposition of a real matrix.

    Parameters
    ----------
    a : array_like, shape (m, n)
        Matrix to decompose.
    tol : float
        Relative off-diagonal tolerance: columns i, j count as orthogonal
        once |u_i . u_j| <= tol * ||u_i|| * ||u_j||.
    max_sweeps : int
        Sweep budget; exceeding it raises EigenFailure.

    Returns
    -------
    (u, s, vt) with a = u @ diag(s) @ vt, singular values sorted in
    nonincreasing order, u with orthonormal columns on the nonzero
    singular directions and vt orthogonal.
    """
    a = _checked(a)
    m, n = a.shape
    if n == 0 or m == 0:
        return np.eye(m), np.zeros(min(m, n)), np.eye(n)
    if m < n:
        u, s, vt = jacobi_svd(a.T, tol=tol, max_sweeps=max_sweeps)
        return vt.T, s, u.T

    u = a[None].astype(float).copy()
    v = np.eye(n)[None].copy()
    if n > 1:
        rounds = _round_robin_rounds(n)
        floor_scale = (16.0 * _EPS) ** 2
        for _ in range(max_sweeps):
            floor = floor_scale * np.einsum("bki,bki->bi", u, u).max(axis=1)
            if not _sweep(u, v, rounds, tol, floor).any():
                break
        else:
            raise EigenFailure(
                "one-sided Jacobi SVD did not converge in %d sweeps"
                % max_sweeps)

    uu = u[0]
    vv = v[0]
    norms = np.sqrt(np.einsum("ki,ki->i", uu, uu))
    order = np.argsort(-norms, kind="stable")
    s = norms[order]
    uu = uu[:, order]
    vv = vv[:, order]
    pos = s > 0
    uu[:, pos] = uu[:, pos] / s[pos]
    uu[:, ~pos] = 0.0
    return uu, s, vv.T


def singular_values(a, tol=1e-12, max_sweeps=1000):
    """Singular values of a real matrix, nonincreasing."""
    a = _checked(a)
    return singular_values_batch(a[None], tol=tol, max_sweeps=max_sweeps)[0]


def singular_values_batch(stack, tol=1e-12, max_sweeps=1000):
    """Singular values for a stack of same-shape matrices.

    Parameters
    ----------
    stack : array_like, shape (B, m, n)

    Returns
    -------
    ndarray of shape (B, min(m, n)), each row nonincreasing.

    This is the hot path for distance computations over archives: the
    rotations of every sweep are applied to the whole batch at once.
    """
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3:
        raise ValueError("expected a 3-d stack, got ndim=%d" % stack.ndim)
    if not np.all(np.isfinite(stack)):
        raise ValueError("stack contains non-finite entries")
    nb, m, n = stack.shape
    if nb == 0 or n == 0 or m == 0:
        return np.zeros((nb, min(m, n)))
    if m < n:
        stack = np.swapaxes(stack, 1, 2)
    return _batched_singular_values(stack, tol, max_sweeps)


def _checked(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array, got ndim=%d" % a.ndim)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a
