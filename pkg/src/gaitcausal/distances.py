"""Distance functions between causal graphs.

All eleven functions compare two same-shape square matrices A, A' (the
adjacency matrices of two graphs); most act on the difference D = A - A'.
In the canonical report order:

    total            sum |D_uv|
    frobenius        sqrt(sum D_uv^2)
    max              p * max |D_uv|
    jaccard          ||min(A, A')||_F / ||max(A, A')||_F
    hamming          (||max(A, A')||_F - ||min(A, A')||_F) / (p (p - 1))
    row_sum          max_u sum_v |D_uv|
    col_sum          max_v sum_u |D_uv|
    spectral         sigma_1(D)
    kyfan(k)         sum of the k largest singular values of |D|
    hilbert_schmidt  sqrt(sum sigma_i(|D|)^2)
    mahalanobis      sqrt(delta^T (Sigma_T + gamma I)^-1 delta)

|D| is the elementwise absolute value; kyfan and hilbert_schmidt act on
its singular values (hilbert_schmidt therefore always equals frobenius).
jaccard is the overlap ratio exactly as defined, which is a similarity:
identical nonempty graphs score 1, not 0. Callers that need a proper
dissimilarity use its complement (see the evaluation module); a pair of
empty graphs has no overlap ratio and raises JaccardUndefined.

mahalanobis needs a ScatterModel fitted on a population of graphs; the
scatter is the sum (not mean) of outer products of the centred
vectorized graphs, regularized by gamma.

Singular values come from the package's own Jacobi iteration (see
linalg); pairwise_matrix batches it across all pairs of an archive.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    JaccardUndefined,
    MissingScatterModel,
    TooFewSamples,
)
from .linalg import singular_values, singular_values_batch

VECTOR_KINDS = ("total", "frobenius", "max", "jaccard", "hamming")
OPERATOR_KINDS = ("row_sum", "col_sum", "spectral")
SINGULAR_KINDS = ("kyfan", "hilbert_schmidt")
DISTANCE_KINDS = VECTOR_KINDS + OPERATOR_KINDS + SINGULAR_KINDS \
    + ("mahalanobis",)


@dataclass(frozen=True)
class DistanceId:
    """Name of a distance function; kyfan carries its order k."""

    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in DISTANCE_KINDS:
            raise ValueError("unknown distance %r (choose from %s)"
                             % (self.kind, ", ".join(DISTANCE_KINDS)))
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")
        object.__setattr__(self, "k", int(self.k) if self.kind == "kyfan"
                           else 1)

    @classmethod
    def parse(cls, text):
        """Accepts e.g. "total", "kyfan", "kyfan(3)"."""
        text = text.strip()
        if text.endswith(")") and "(" in text:
            kind, arg = text[:-1].split("(", 1)
            try:
                k = int(arg)
            except ValueError:
                raise ValueError("bad distance argument in %r"
                                 % text) from None
            return cls(kind=kind.strip(), k=k)
        return cls(kind=text)

    def __str__(self):
        if self.kind == "kyfan":
            return "kyfan(%d)" % self.k
        return self.kind


def all_distance_ids(kyfan_k=1):
    """The eleven distance ids in canonical report order."""
    ids = []
    for kind in DISTANCE_KINDS:
        ids.append(DistanceId(kind=kind, k=kyfan_k) if kind == "kyfan"
                   else DistanceId(kind=kind))
    return tuple(ids)


def _matrix(a):
    m = a.adjacency if hasattr(a, "adjacency") else a
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("expected a square matrix, got %r"
                                % (m.shape,))
    return m


def _pair(a, b):
    a = _matrix(a)
    b = _matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch("matrices differ in shape: %r vs %r"
                                % (a.shape, b.shape))
    return a, b


def vector_norm_distance(a, b, kind):
    """Elementwise family: total, frobenius, max, jaccard, hamming."""
    if kind not in VECTOR_KINDS:
        raise ValueError("not a vector-norm distance: %r" % (kind,))
    a, b = _pair(a, b)
    p = a.shape[0]
    if kind == "total":
        return float(np.abs(a - b).sum())
    if kind == "frobenius":
        return float(np.sqrt(((a - b) ** 2).sum()))
    if kind == "max":
        return float(p * np.abs(a - b).max())
    lo = float(np.sqrt((np.minimum(a, b) ** 2).sum()))
    hi = float(np.sqrt((np.maximum(a, b) ** 2).sum()))
    if kind == "jaccard":
        if hi == 0.0:
            raise JaccardUndefined("both graphs are empty")
        return lo / hi
    if p < 2:
        raise DimensionMismatch("hamming needs at least 2 joints")
    return (hi - lo) / (p * (p - 1))


def operator_norm_distance(a, b, kind):
    """Induced-norm family on D = A - A': row_sum, col_sum, spectral."""
    if kind not in OPERATOR_KINDS:
        raise ValueError("not an operator-norm distance: %r" % (kind,))
    a, b = _pair(a, b)
    d = a - b
    if kind == "row_sum":
        return float(np.abs(d).sum(axis=1).max())
    if kind == "col_sum":
        return float(np.abs(d).sum(axis=0).max())
    return float(singular_values(d)[0])


def singular_value_distance(a, b, kind, k=1):
    """Singular values of |D|: kyfan (top-k sum) and hilbert_schmidt."""
    if kind not in SINGULAR_KINDS:
        raise ValueError("not a singular-value distance: %r" % (kind,))
    a, b = _pair(a, b)
    sigma = singular_values(np.abs(a - b))
    if kind == "kyfan":
        if int(k) != k or k < 1:
            raise ValueError("k must be a positive integer")
        return float(sigma[:int(k)].sum())
    return float(np.sqrt((sigma ** 2).sum()))


@dataclass(frozen=True)
class ScatterModel:
    """Regularized scatter of vectorized graphs for mahalanobis.

    sigma is Sigma_T + gamma I where Sigma_T sums the outer products of
    the centred vec(A) over the fitted population; factor caches its
    Cholesky factorization.
    """

    matrix_shape: tuple
    sigma: np.ndarray
    gamma: float
    mean: np.ndarray
    factor: tuple

    @property
    def dim(self):
        return self.sigma.shape[0]


def _stack(items):
    if hasattr(items, "ndim"):
        stack = np.asarray(items, dtype=float)
        if stack.ndim != 3:
            raise DimensionMismatch("expected a (N, p, p) stack, got %r"
                                    % (stack.shape,))
    else:
        mats = [_matrix(item) for item in items]
        if not mats:
            raise EmptyDataset("no graphs given")
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise DimensionMismatch("graphs differ in shape: %s"
                                    % sorted(shapes))
        stack = np.stack(mats)
    if stack.shape[1] != stack.shape[2]:
        raise DimensionMismatch("graphs must be square, got %r"
                                % (stack.shape[1:],))
    if stack.shape[0] == 0:
        raise EmptyDataset("no graphs given")
    return stack


def fit_scatter(items, gamma=None):
    """Fit the Mahalanobis scatter on a population of graphs.

    gamma defaults to 1e-6 * trace(Sigma_T) / p^2, floored at 1e-12 so
    the factorization exists even for a population of identical graphs.
    """
    stack = _stack(items)
    n, p, _ = stack.shape
    if n < 2:
        raise TooFewSamples("scatter needs at least 2 graphs, got %d" % n)
    vecs = stack.reshape(n, p * p)
    mean = vecs.mean(axis=0)
    centred = vecs - mean
    sigma_t = centred.T @ centred
    if gamma is None:
        gamma = max(1e-6 * float(np.trace(sigma_t)) / (p * p), 1e-12)
    elif not (gamma > 0):
        raise ValueError("gamma must be positive")
    sigma = sigma_t + gamma * np.eye(p * p)
    factor = scipy.linalg.cho_factor(sigma, lower=True)
    return ScatterModel(matrix_shape=(p, p), sigma=sigma, gamma=float(gamma),
                        mean=mean, factor=factor)


def mahalanobis_distance(a, b, model):
    """Scatter-whitened distance between two graphs."""
    if model is None:
        raise MissingScatterModel("mahalanobis needs a fitted ScatterModel")
    a, b = _pair(a, b)
    if a.shape != model.matrix_shape:
        raise DimensionMismatch(
            "graph shape %r does not match scatter fitted on %r"
            % (a.shape, model.matrix_shape))
    delta = (a - b).ravel()
    solved = scipy.linalg.cho_solve(model.factor, delta)
    return float(np.sqrt(max(delta @ solved, 0.0)))


def distance(a, b, distance_id, model=None):
    """Evaluate one distance function; distance_id may be a string."""
    if isinstance(distance_id, str):
        distance_id = DistanceId.parse(distance_id)
    kind = distance_id.kind
    if kind in VECTOR_KINDS:
        return vector_norm_distance(a, b, kind)
    if kind in OPERATOR_KINDS:
        return operator_norm_distance(a, b, kind)
    if kind in SINGULAR_KINDS:
        return singular_value_distance(a, b, kind, k=distance_id.k)
    return mahalanobis_distance(a, b, model)


def _pairwise_reference(stack, distance_id, model):
    n = stack.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = distance(stack[i], stack[j], distance_id, model)
            out[j, i] = out[i, j]
    return out


def _pairwise_fast(stack, distance_id, model):
    n, p, _ = stack.shape
    kind = distance_id.kind
    out = np.zeros((n, n))

    if kind == "mahalanobis":
        vecs = stack.reshape(n, p * p)
        solved = scipy.linalg.cho_solve(model.factor, vecs.T)
        gram = vecs @ solved
        diag = np.diagonal(gram)
        sq = diag[:, None] + diag[None, :] - 2.0 * gram
        dist = np.sqrt(np.maximum(sq, 0.0))
        # the Gram product is symmetric only up to rounding; mirror the
        # upper triangle so d(i, j) == d(j, i) holds exactly
        upper = np.triu(dist, 1)
        return upper + upper.T

    if kind == "jaccard":
        # diagonal is delta(A, A) = 1 for nonempty graphs
        norms = np.sqrt((stack ** 2).sum(axis=(1, 2)))
        if np.any(norms == 0.0):
            raise JaccardUndefined("archive contains an empty graph")
        np.fill_diagonal(out, 1.0)

    for i in range(n - 1):
        rest = stack[i + 1:]
        one = stack[i]
        if kind in ("total", "frobenius", "max", "row_sum", "col_sum"):
            diff = np.abs(rest - one)
            if kind == "total":
                row = diff.sum(axis=(1, 2))
            elif kind == "frobenius":
                row = np.sqrt((diff ** 2).sum(axis=(1, 2)))
            elif kind == "max":
                row = p * diff.max(axis=(1, 2))
            elif kind == "row_sum":
                row = diff.sum(axis=2).max(axis=1)
            else:
                row = diff.sum(axis=1).max(axis=1)
        elif kind in ("jaccard", "hamming"):
            lo = np.sqrt((np.minimum(rest, one) ** 2).sum(axis=(1, 2)))
            hi = np.sqrt((np.maximum(rest, one) ** 2).sum(axis=(1, 2)))
            if kind == "jaccard":
                if np.any(hi == 0.0):
                    raise JaccardUndefined("both graphs are empty")
                row = lo / hi
            else:
                if p < 2:
                    raise DimensionMismatch("hamming needs at least 2 joints")
                row = (hi - lo) / (p * (p - 1))
        elif kind == "spectral":
            row = singular_values_batch(rest - one)[:, 0]
        else:
            sigma = singular_values_batch(np.abs(rest - one))
            if kind == "kyfan":
                row = sigma[:, :distance_id.k].sum(axis=1)
            else:
                row = np.sqrt((sigma ** 2).sum(axis=1))
        out[i, i + 1:] = row
        out[i + 1:, i] = row
    return out


def pairwise_matrix(items, distance_id, model=None, backend="fast"):
    """Symmetric matrix of one distance over an archive of graphs.

    items is a (N, p, p) stack, or a sequence of square arrays or graph
    objects. mahalanobis requires a fitted model. backend "fast" uses
    the vectorized implementations; "reference" loops over the scalar
    distance() calls (the two agree to rounding and the tests pin that).
    """
    if isinstance(distance_id, str):
        distance_id = DistanceId.parse(distance_id)
    stack = _stack(items)
    if distance_id.kind == "mahalanobis" and model is None:
        raise MissingScatterModel("mahalanobis needs a fitted ScatterModel")
    if distance_id.kind == "kyfan" and distance_id.k > stack.shape[1]:
        raise DimensionMismatch("kyfan k=%d exceeds matrix size %d"
                                % (distance_id.k, stack.shape[1]))
    if model is not None and stack.shape[1:] != model.matrix_shape:
        raise DimensionMismatch(
            "graph shape %r does not match scatter fitted on %r"
            % (stack.shape[1:], model.matrix_shape))
    if backend == "reference":
        return _pairwise_reference(stack, distance_id, model)
    if backend != "fast":
        raise ValueError("backend must be 'fast' or 'reference'")
    return _pairwise_fast(stack, distance_id, model)


def distance_many(pairs_a, pairs_b, distance_id, model=None):
    """One distance for each aligned pair of two graph stacks.

    Vectorized counterpart of distance() for bulk workloads; same
    semantics per pair.
    """
    if isinstance(distance_id, str):
        distance_id = DistanceId.parse(distance_id)
    a = _stack(pairs_a)
    b = _stack(pairs_b)
    if a.shape != b.shape:
        raise DimensionMismatch("stacks differ in shape: %r vs %r"
                                % (a.shape, b.shape))
    kind = distance_id.kind
    p = a.shape[1]
    if kind == "total":
        return np.abs(a - b).sum(axis=(1, 2))
    if kind == "frobenius":
        return np.sqrt(((a - b) ** 2).sum(axis=(1, 2)))
    if kind == "max":
        return p * np.abs(a - b).max(axis=(1, 2))
    if kind in ("jaccard", "hamming"):
        lo = np.sqrt((np.minimum(a, b) ** 2).sum(axis=(1, 2)))
        hi = np.sqrt((np.maximum(a, b) ** 2).sum(axis=(1, 2)))
        if kind == "jaccard":
            if np.any(hi == 0.0):
                raise JaccardUndefined("a pair of empty graphs")
            return lo / hi
        if p < 2:
            raise DimensionMismatch("hamming needs at least 2 joints")
        return (hi - lo) / (p * (p - 1))
    if kind == "row_sum":
        return np.abs(a - b).sum(axis=2).max(axis=1)
    if kind == "col_sum":
        return np.abs(a - b).sum(axis=1).max(axis=1)
    if kind == "spectral":
        return singular_values_batch(a - b)[:, 0]
    if kind == "kyfan":
        if distance_id.k > p:
            raise DimensionMismatch("kyfan k=%d exceeds matrix size %d"
                                    % (distance_id.k, p))
        sigma = singular_values_batch(np.abs(a - b))
        return sigma[:, :distance_id.k].sum(axis=1)
    if kind == "hilbert_schmidt":
        sigma = singular_values_batch(np.abs(a - b))
        return np.sqrt((sigma ** 2).sum(axis=1))
    if model is None:
        raise MissingScatterModel("mahalanobis needs a fitted ScatterModel")
    delta = (a - b).reshape(a.shape[0], -1)
    solved = scipy.linalg.cho_solve(model.factor, delta.T)
    return np.sqrt(np.maximum(np.einsum("ij,ji->i", delta, solved), 0.0))
