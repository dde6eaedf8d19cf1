"""Causal graph extraction pipeline: CV, per-target fits, edge rules.

compute_ggm runs, for every joint of a trajectory record:

1. standardize the shared design matrix columns and the joint's target
   (center, unit variance) so the fit is invariant to common rescaling
   of the raw coordinates;
2. unpenalized MLE on the standardized system, mapped back to the raw
   scale, giving the adaptive weights w_j = 1 / max(||mle_j||_1, floor);
3. blocked cross-validation over the penalty grid, refit at the chosen
   penalty, coefficients mapped back to the raw scale;
4. threshold lag blocks into directed edges.

Edges follow the convention adjacency[j, i] = 1 iff joint j's past helps
predict joint i (rows = sources, columns = targets).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import (
    DimensionMismatch,
    TooFewSamples,
    ZeroResidual,
)
from .config import GgmConfig
from .design import build_design_matrix, flatten_target
from .lasso import _cd_gram, _design_values, _target_values, expand_weights, mle_estimate


@dataclass(frozen=True)
class CoefficientBlock:
    """Fit record for one target joint (coefficients on the raw scale)."""

    target: str
    beta: np.ndarray
    weights: np.ndarray
    lambda_selected: float
    mle_beta: np.ndarray


@dataclass(frozen=True)
class CausalGraph:
    """Directed graph among joints: adjacency[j, i] = 1 iff j -> i."""

    adjacency: np.ndarray
    joint_order: tuple
    subject_label: str = None
    lambda_per_target: tuple = None
    config: GgmConfig = None

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=int)
        p = len(self.joint_order)
        if adj.shape != (p, p):
            raise DimensionMismatch(
                "adjacency shape %r does not match %d joints"
                % (adj.shape, p))
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(adj) != 0):
            raise ValueError("adjacency diagonal must be zero")
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "joint_order", tuple(self.joint_order))

    @property
    def n_joints(self):
        return len(self.joint_order)

    def edges(self):
        """Sorted list of (source, target) joint name pairs."""
        src, dst = np.nonzero(self.adjacency)
        return [(self.joint_order[a], self.joint_order[b])
                for a, b in zip(src.tolist(), dst.tolist())]


def standardize_columns(x):
    """Center and scale columns to unit variance; zero-variance scale is 1."""
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return (x - mean) / std, mean, std


def standardize_vector(y):
    mean = float(y.mean()) if y.size else 0.0
    std = float(y.std()) if y.size else 0.0
    if std == 0.0:
        std = 1.0
    return (y - mean) / std, mean, std


def _fold_boundaries(n_points, n_folds):
    return np.linspace(0, n_points, n_folds + 1).astype(int)


def cross_validate_lambda(design, target, weights, config, *,
                          rows_per_point=3):
    """Blocked CV over the penalty grid; returns (lambda_star, beta_star).

    Rows are grouped into prediction time points (rows_per_point rows
    each, 3 for the x,y,z interleaved targets); folds are contiguous
    blocks of points, so validation rows are never interleaved with
    training rows. The grid is walked in descending order with warm
    starts. The score of a penalty is the mean over folds of the
    validation mean squared residual, and lambda_star is the largest
    penalty whose score is within one standard error (over folds) of
    the smallest score: validation error alone cannot distinguish the
    models inside that band, and the most parsimonious of them is the
    one that recovers supports reliably. beta_star is refit on all rows
    at lambda_star.

    The design/target pair is used exactly as given (standardize first
    if standardized fitting is wanted; compute_ggm does).
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    n_rows, n_cols = x.shape
    if rows_per_point < 1 or n_rows % rows_per_point:
        raise DimensionMismatch(
            "%d rows do not divide into points of %d rows"
            % (n_rows, rows_per_point))
    n_points = n_rows // rows_per_point
    if n_points < config.cv_folds:
        raise TooFewSamples(
            "%d prediction points cannot fill %d folds"
            % (n_points, config.cv_folds))
    u = expand_weights(weights, n_cols,
                       design=design if hasattr(design, "lag") else None)

    grid = config.lambda_grid()
    bounds = _fold_boundaries(n_points, config.cv_folds) * rows_per_point
    folds = []
    for f in range(config.cv_folds):
        lo, hi = bounds[f], bounds[f + 1]
        val = np.zeros(n_rows, dtype=bool)
        val[lo:hi] = True
        x_tr, y_tr = x[~val], y[~val]
        folds.append({
            "gram": x_tr.T @ x_tr,
            "xty": x_tr.T @ y_tr,
            "x_val": x[val],
            "y_val": y[val],
            "warm": None,
        })
    gram_full = x.T @ x
    xty_full = x.T @ y

    scores = np.empty(grid.size)
    errors = np.empty(grid.size)
    betas = []
    warm_full = None
    for g, lam in enumerate(grid):
        thr = lam * u
        fold_mse = np.empty(config.cv_folds)
        for f, fold in enumerate(folds):
            beta = _cd_gram(fold["gram"], fold["xty"], thr, fold["warm"],
                            10000, 1e-9, 1e-6)
            fold["warm"] = beta
            resid = fold["y_val"] - fold["x_val"] @ beta
            fold_mse[f] = float(resid @ resid) / resid.size
        scores[g] = fold_mse.mean()
        errors[g] = fold_mse.std(ddof=1) / np.sqrt(config.cv_folds)
        warm_full = _cd_gram(gram_full, xty_full, thr, warm_full,
                             10000, 1e-9, 1e-6)
        betas.append(warm_full)
    lowest = int(scores.argmin())
    limit = scores[lowest] + errors[lowest]
    # descending grid: the first index inside the band is the largest
    # penalty; exact ties with the minimum land there too
    best = lowest
    for g in range(grid.size):
        if scores[g] <= limit:
            best = g
            break
    return float(grid[best]), betas[best]


def compute_ggm(record, config=None):
    """Granger-causal graph of a trajectory record (e.g. a gait cycle).

    Returns a CausalGraph over record.joints. See the module docstring
    for the pipeline; all numerical work happens in standardized
    coordinates and coefficients are mapped back before thresholding.
    """
    config = config or GgmConfig()
    joints = tuple(record.joints)
    design = build_design_matrix(record, config.lag)
    xs, _, x_scale = standardize_columns(design.values)
    blocks = []
    for joint in joints:
        target = flatten_target(record, joint, config.lag)
        ys, _, y_scale = standardize_vector(target.values)
        mle_std = mle_estimate(xs, ys)
        mle_raw = mle_std * (y_scale / x_scale)
        if config.penalty == "plain-lasso":
            weights = np.ones(len(joints))
        else:
            block_l1 = np.abs(mle_raw).reshape(len(joints), config.lag).sum(axis=1)
            weights = 1.0 / np.maximum(block_l1, config.weight_floor)
        lam, beta_std = cross_validate_lambda(xs, ys, np.repeat(weights, config.lag),
                                              config, rows_per_point=3)
        beta_raw = beta_std * (y_scale / x_scale)
        blocks.append(CoefficientBlock(
            target=joint, beta=beta_raw, weights=weights,
            lambda_selected=lam, mle_beta=mle_raw))
    return extract_edges(blocks, config, joint_order=joints,
                         subject_label=getattr(record, "subject_label", None))


def extract_edges(blocks, config, *, joint_order=None, subject_label=None):
    """Threshold per-target coefficient blocks into a directed graph.

    blocks must hold one CoefficientBlock per joint, in target order;
    adjacency[j, i] = 1 iff block j of target i's coefficients has any
    entry above config.zero_threshold in absolute value. Self loops are
    excluded by construction.
    """
    if joint_order is None:
        joint_order = tuple(b.target for b in blocks)
    p = len(joint_order)
    adjacency = np.zeros((p, p), dtype=int)
    lambdas = []
    for i, block in enumerate(blocks):
        beta = np.asarray(block.beta, dtype=float)
        if beta.shape != (p * config.lag,):
            raise DimensionMismatch(
                "target %r has %d coefficients, expected %d"
                % (block.target, beta.size, p * config.lag))
        hits = (np.abs(beta).reshape(p, config.lag)
                > config.zero_threshold).any(axis=1)
        adjacency[:, i] = hits
        adjacency[i, i] = 0
        lambdas.append(block.lambda_selected)
    return CausalGraph(adjacency=adjacency, joint_order=tuple(joint_order),
                       subject_label=subject_label,
                       lambda_per_target=tuple(lambdas), config=config)


def information_criteria(design, target, beta, zero_threshold=1e-8):
    """(AIC, BIC) of a fitted coefficient vector.

    AIC = N ln(RSS/N) + 2k, BIC = N ln(RSS/N) + k ln N, with N the number
    of rows and k the count of coefficients above zero_threshold in
    absolute value. Raises ZeroResidual for an exact fit.
    """
    x = _design_values(design)
    y = _target_values(target, x.shape[0])
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (x.shape[1],):
        raise DimensionMismatch("beta has shape %r, expected (%d,)"
                                % (beta.shape, x.shape[1]))
    resid = y - x @ beta
    rss = float(resid @ resid)
    if rss == 0.0:
        raise ZeroResidual("exact fit: information criteria undefined")
    n = x.shape[0]
    k = int(np.count_nonzero(np.abs(beta) > zero_threshold))
    base = n * np.log(rss / n)
    return float(base + 2 * k), float(base + k * np.log(n))
