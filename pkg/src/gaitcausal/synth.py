"""Synthetic vector autoregressive processes with known causal structure.

These generators are the ground-truth oracle for the graph extraction
pipeline: a VAR coefficient array fixes which series drive which, the
simulator produces trajectories from it, and recovery_metrics scores an
estimated graph against the implied true one.

Draws come from a counter-based generator (Philox), so a (seed, shape)
pair yields the same stream on every platform and run.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonStationary
from .granger.model import CausalGraph
from .mocap.sequence import GaitCycle


def _series_names(p):
    width = max(2, len(str(p)))
    return tuple("v%0*d" % (width, i + 1) for i in range(p))


def companion_spectral_radius(coeffs):
    """Spectral radius of the VAR companion matrix.

    coeffs has shape (p, p, d); the process is stationary iff the radius
    is strictly below one.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    p, p2, d = coeffs.shape
    if p != p2:
        raise DimensionMismatch("coeffs must be (p, p, d), got %r"
                                % (coeffs.shape,))
    companion = np.zeros((p * d, p * d))
    for k in range(d):
        companion[:p, k * p:(k + 1) * p] = coeffs[:, :, k]
    if d > 1:
        companion[p:, :-p] = np.eye(p * (d - 1))
    return float(np.abs(np.linalg.eigvals(companion)).max())


@dataclass(frozen=True)
class VarProcess:
    """VAR(d) specification: coeffs[i, j, k] scales series j at lag k+1
    in the update of series i."""

    coeffs: np.ndarray
    noise_std: float = 1.0
    dims_per_series: int = 3
    seed: int = 0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1]:
            raise DimensionMismatch("coeffs must be (p, p, d), got %r"
                                    % (coeffs.shape,))
        object.__setattr__(self, "coeffs", coeffs)
        if not (self.noise_std > 0):
            raise ValueError("noise_std must be positive")
        if self.dims_per_series not in (1, 3):
            raise ValueError("dims_per_series must be 1 or 3")
        radius = companion_spectral_radius(coeffs)
        if radius >= 1.0:
            raise NonStationary(
                "companion spectral radius %.6f is not below one" % radius)

    @property
    def p(self):
        return self.coeffs.shape[0]

    @property
    def order(self):
        return self.coeffs.shape[2]


def generate_var(process, n_frames):
    """Simulate the process; returns (dims_per_series * p, n_frames).

    Each of the dims_per_series channel groups is an independent run of
    the same coefficients (fresh noise), interleaved per series in x,y,z
    order to mirror the trajectory layout. A burn-in of 10*d frames is
    discarded.
    """
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    p = process.p
    d = process.order
    coeffs = process.coeffs
    burn = 10 * d
    total = n_frames + burn + d
    rng = np.random.Generator(np.random.Philox(process.seed))
    dims = process.dims_per_series
    out = np.empty((dims * p, n_frames))
    for c in range(dims):
        noise = rng.normal(0.0, process.noise_std, size=(p, total))
        x = noise.copy()
        for t in range(d, total):
            acc = x[:, t]
            for k in range(d):
                acc = acc + coeffs[:, :, k] @ x[:, t - 1 - k]
            x[:, t] = acc
        tail = x[:, total - n_frames:]
        if dims == 3:
            out[c::3] = tail
        else:
            out[:] = tail
    return out


def var_gait_cycle(process, n_frames, subject_label=None, source="synthetic"):
    """Package a 3-channel simulation as a GaitCycle."""
    if process.dims_per_series != 3:
        raise ValueError("gait cycles need dims_per_series == 3")
    coords = generate_var(process, n_frames)
    return GaitCycle(joints=_series_names(process.p), coords=coords,
                     subject_label=subject_label, source=source,
                     cycle_index=0)


def true_graph(process, coef_threshold=0.0):
    """Directed graph implied by the coefficients (self links dropped).

    Edge j -> i iff any lag of coeffs[i, j, :] exceeds coef_threshold in
    absolute value.
    """
    strength = np.abs(process.coeffs).max(axis=2)
    adjacency = (strength > coef_threshold).astype(int).T
    np.fill_diagonal(adjacency, 0)
    return CausalGraph(adjacency=adjacency,
                       joint_order=_series_names(process.p))


@dataclass(frozen=True)
class RecoveryScore:
    precision: float
    recall: float
    f1: float
    spurious_rate: float


def recovery_metrics(estimated, truth):
    """Precision/recall/F1/spurious-rate of estimated vs true edges.

    Only off-diagonal cells count. Precision is 1 when nothing was
    predicted; recall is 1 when the true graph is empty; the spurious
    rate is the fraction of truly absent edges that were predicted.
    """
    if estimated.joint_order != truth.joint_order:
        raise DimensionMismatch("graphs are over different joint sets")
    est = estimated.adjacency.astype(bool)
    tru = truth.adjacency.astype(bool)
    off = ~np.eye(est.shape[0], dtype=bool)
    tp = int((est & tru & off).sum())
    fp = int((est & ~tru & off).sum())
    fn = int((~est & tru & off).sum())
    negatives = int((~tru & off).sum())
    precision = 1.0 if tp + fp == 0 else tp / (tp + fp)
    recall = 1.0 if tp + fn == 0 else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else \
        2.0 * precision * recall / (precision + recall)
    spurious = 0.0 if negatives == 0 else fp / negatives
    return RecoveryScore(precision=precision, recall=recall, f1=f1,
                         spurious_rate=spurious)


def chain_coefficients(p, coef=0.6, order=1):
    """Coefficients of the chain v1 -> v2 -> ... -> vp at lag 1."""
    coeffs = np.zeros((p, p, order))
    for i in range(1, p):
        coeffs[i, i - 1, 0] = coef
    return coeffs


def random_coefficients(p, density=0.15, coef=0.6, order=1, seed=0):
    """Random sparse lag coefficients, rescaled to stay stationary.

    Each off-diagonal cell switches on independently with the given
    density, at magnitude coef with a random sign placed at one random
    lag. A draw with no edges gets the single edge v1 -> v2 so the
    implied graph is never empty. If the companion radius reaches one
    the whole array is shrunk below it.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    mask = rng.random((p, p)) < density
    np.fill_diagonal(mask, False)
    signs = np.where(rng.random((p, p)) < 0.5, -1.0, 1.0)
    lags = rng.integers(0, order, size=(p, p))
    if not mask.any() and p > 1:
        mask[1, 0] = True
    coeffs = np.zeros((p, p, order))
    rows, cols = np.nonzero(mask)
    coeffs[rows, cols, lags[rows, cols]] = coef * signs[rows, cols]
    radius = companion_spectral_radius(coeffs)
    if radius >= 1.0:
        coeffs *= 0.9 / radius
    return coeffs
