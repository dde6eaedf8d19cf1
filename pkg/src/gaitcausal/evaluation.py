"""Identity-discrimination metrics over archives of causal graphs.

A LabeledFeatureSet holds one adjacency matrix per gait cycle together
with a class label (the subject) and a stable sample id; samples are
kept sorted by id so every metric is invariant to the order graphs were
added. Three metrics summarize how well a distance function separates
subjects:

    ccr_loo_1nn     leave-one-out 1-nearest-neighbour correct
                    classification rate
    davies_bouldin  medoid-based cluster overlap (lower is better)
    dunn_index      min inter-class distance over max class diameter
                    (higher is better)

All three consume a dissimilarity matrix. The jaccard function is an
overlap similarity, so the metrics use its complement 1 - J; every
other distance is used as is. compare_distances runs all eleven
functions, and ablate_joint_pairs measures how much each joint pair
contributes by zeroing its two directed cells out of every graph.

Nearest-neighbour and medoid ties resolve to the smallest sample index
in id order, which keeps every number reproducible.
"""

from dataclasses import dataclass, field

import numpy as np

from .distances import (
    DistanceId,
    all_distance_ids,
    fit_scatter,
    pairwise_matrix,
)
from .errors import (
    CoincidentMedoids,
    DataError,
    EmptyDataset,
    HeterogeneousSkeletons,
    TooFewSamples,
    ZeroDiameter,
)


@dataclass(frozen=True)
class LabeledFeatureSet:
    """Aligned stack of graphs, class labels, and stable sample ids.

    Samples are re-sorted by sample_id during construction. Ids must be
    unique; for order-independent results across runs they should come
    from something stable such as file names, not insertion order.
    """

    adjacency: np.ndarray
    labels: tuple
    sample_ids: tuple
    joint_order: tuple

    def __post_init__(self):
        stack = np.asarray(self.adjacency, dtype=float)
        if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
            raise ValueError("adjacency must be a (N, p, p) stack, got %r"
                             % (stack.shape,))
        if stack.shape[0] == 0:
            raise EmptyDataset("feature set has no samples")
        labels = tuple(str(v) for v in self.labels)
        ids = tuple(str(v) for v in self.sample_ids)
        joints = tuple(str(v) for v in self.joint_order)
        if len(labels) != stack.shape[0] or len(ids) != stack.shape[0]:
            raise ValueError("labels and sample_ids must match the stack")
        if len(set(ids)) != len(ids):
            raise ValueError("sample ids must be unique")
        if len(joints) != stack.shape[1]:
            raise ValueError("joint_order must name %d joints"
                             % stack.shape[1])
        order = sorted(range(len(ids)), key=ids.__getitem__)
        stack = np.ascontiguousarray(stack[order])
        stack.flags.writeable = False
        object.__setattr__(self, "adjacency", stack)
        object.__setattr__(self, "labels",
                           tuple(labels[i] for i in order))
        object.__setattr__(self, "sample_ids",
                           tuple(ids[i] for i in order))
        object.__setattr__(self, "joint_order", joints)

    @classmethod
    def from_graphs(cls, graphs, labels=None, sample_ids=None):
        """Build a feature set from CausalGraph records.

        Labels default to each graph's subject_label; sample ids default
        to the position in the input, which is only stable if the caller
        always supplies graphs in the same order.
        """
        graphs = list(graphs)
        if not graphs:
            raise EmptyDataset("no graphs given")
        joint_orders = {tuple(g.joint_order) for g in graphs}
        if len(joint_orders) != 1:
            raise HeterogeneousSkeletons(
                "graphs disagree on the joint set: %s"
                % sorted(len(j) for j in joint_orders))
        if labels is None:
            labels = []
            for g in graphs:
                if g.subject_label is None:
                    raise DataError("graph has no subject label; pass "
                                    "labels explicitly")
                labels.append(g.subject_label)
        if sample_ids is None:
            sample_ids = ["g%04d" % i for i in range(len(graphs))]
        return cls(adjacency=np.stack([g.adjacency for g in graphs]),
                   labels=tuple(labels), sample_ids=tuple(sample_ids),
                   joint_order=tuple(graphs[0].joint_order))

    @property
    def n_samples(self):
        return self.adjacency.shape[0]

    @property
    def n_joints(self):
        return self.adjacency.shape[1]

    @property
    def classes(self):
        return tuple(sorted(set(self.labels)))

    def class_members(self):
        """Sample indices per class label, in id order."""
        labels = np.asarray(self.labels, dtype=object)
        return {c: np.flatnonzero(labels == c) for c in self.classes}


def dissimilarity_matrix(fset, distance_id, *, model=None, backend="fast"):
    """Pairwise dissimilarities ready for the cluster metrics.

    Fits the scatter on the whole set when mahalanobis is requested and
    no model is given; replaces jaccard by its complement 1 - J.
    """
    if isinstance(distance_id, str):
        distance_id = DistanceId.parse(distance_id)
    if distance_id.kind == "mahalanobis" and model is None:
        model = fit_scatter(fset.adjacency)
    dmat = pairwise_matrix(fset.adjacency, distance_id, model=model,
                           backend=backend)
    if distance_id.kind == "jaccard":
        dmat = 1.0 - dmat
    return dmat


def _nearest_neighbours(dmat):
    work = dmat.copy()
    np.fill_diagonal(work, np.inf)
    return work.argmin(axis=1)


def _ccr_from_matrix(dmat, labels):
    if dmat.shape[0] < 2:
        raise TooFewSamples("leave-one-out needs at least 2 samples")
    labels = np.asarray(labels, dtype=object)
    nn = _nearest_neighbours(dmat)
    hits = labels[nn] == labels
    per_class = {}
    for c in sorted(set(labels)):
        mask = labels == c
        per_class[str(c)] = float(hits[mask].mean())
    return float(hits.mean()), per_class


def _medoids(dmat, members_by_class):
    medoids = {}
    for c, members in members_by_class.items():
        sub = dmat[np.ix_(members, members)]
        medoids[c] = int(members[sub.sum(axis=1).argmin()])
    return medoids


def _dbi_from_matrix(dmat, labels, members_by_class):
    classes = sorted(members_by_class)
    if len(classes) < 2:
        raise TooFewSamples("davies_bouldin needs at least 2 classes")
    medoids = _medoids(dmat, members_by_class)
    spread = {c: float(dmat[members_by_class[c], medoids[c]].mean())
              for c in classes}
    total = 0.0
    for c in classes:
        worst = -np.inf
        for other in classes:
            if other == c:
                continue
            gap = dmat[medoids[c], medoids[other]]
            if gap == 0.0:
                raise CoincidentMedoids(
                    "classes %r and %r share a medoid position"
                    % (c, other))
            worst = max(worst, (spread[c] + spread[other]) / gap)
        total += worst
    return total / len(classes)


def _dunn_from_matrix(dmat, labels, members_by_class):
    classes = sorted(members_by_class)
    if len(classes) < 2:
        raise TooFewSamples("dunn_index needs at least 2 classes")
    diameter = 0.0
    for c in classes:
        members = members_by_class[c]
        if members.size > 1:
            diameter = max(diameter,
                           float(dmat[np.ix_(members, members)].max()))
    if diameter == 0.0:
        raise ZeroDiameter("every class has zero diameter")
    inter = np.inf
    for i, c in enumerate(classes):
        for other in classes[i + 1:]:
            block = dmat[np.ix_(members_by_class[c],
                                members_by_class[other])]
            inter = min(inter, float(block.min()))
    return inter / diameter


def ccr_loo_1nn(fset, distance_id, *, model=None, backend="fast"):
    """Leave-one-out 1-NN correct classification rate in [0, 1]."""
    dmat = dissimilarity_matrix(fset, distance_id, model=model,
                                backend=backend)
    ccr, _ = _ccr_from_matrix(dmat, fset.labels)
    return ccr


def davies_bouldin(fset, distance_id, *, model=None, backend="fast"):
    """Medoid Davies-Bouldin index; lower means better separation."""
    dmat = dissimilarity_matrix(fset, distance_id, model=model,
                                backend=backend)
    return _dbi_from_matrix(dmat, fset.labels, fset.class_members())


def dunn_index(fset, distance_id, *, model=None, backend="fast"):
    """Dunn index; higher means better separation."""
    dmat = dissimilarity_matrix(fset, distance_id, model=model,
                                backend=backend)
    return _dunn_from_matrix(dmat, fset.labels, fset.class_members())


def label_permutation_ccr(fset, distance_id, *, permutations=200, seed=0,
                          model=None, backend="fast"):
    """CCR under random label permutations (the chance-level null).

    The neighbour structure does not depend on labels, so the distance
    matrix is computed once and only labels are shuffled.
    """
    if permutations < 1:
        raise ValueError("permutations must be positive")
    dmat = dissimilarity_matrix(fset, distance_id, model=model,
                                backend=backend)
    if dmat.shape[0] < 2:
        raise TooFewSamples("leave-one-out needs at least 2 samples")
    nn = _nearest_neighbours(dmat)
    labels = np.asarray(fset.labels, dtype=object)
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty(permutations)
    for t in range(permutations):
        shuffled = labels[rng.permutation(labels.size)]
        out[t] = float((shuffled[nn] == shuffled).mean())
    return out


@dataclass(frozen=True)
class EvalReport:
    """One row of the distance comparison table."""

    distance: str
    ccr: float
    dbi: float
    di: float
    per_class_ccr: dict = field(compare=False)


def compare_distances(fset, distance_ids=None, *, kyfan_k=1,
                      backend="fast"):
    """Score every distance function on one labeled archive.

    Returns one EvalReport per distance, in the canonical order unless
    distance_ids overrides it. The mahalanobis scatter is fitted once on
    the full archive.
    """
    if distance_ids is None:
        distance_ids = all_distance_ids(kyfan_k=kyfan_k)
    else:
        distance_ids = tuple(
            DistanceId.parse(d) if isinstance(d, str) else d
            for d in distance_ids)
    model = None
    if any(d.kind == "mahalanobis" for d in distance_ids):
        model = fit_scatter(fset.adjacency)
    members = fset.class_members()
    reports = []
    for did in distance_ids:
        dmat = dissimilarity_matrix(fset, did, model=model,
                                    backend=backend)
        ccr, per_class = _ccr_from_matrix(dmat, fset.labels)
        dbi = _dbi_from_matrix(dmat, fset.labels, members)
        di = _dunn_from_matrix(dmat, fset.labels, members)
        reports.append(EvalReport(distance=str(did), ccr=ccr, dbi=dbi,
                                  di=di, per_class_ccr=per_class))
    return tuple(reports)


DEFAULT_ABLATION_DISTANCE = {
    "ccr": "total",
    "dbi": "kyfan(1)",
    "di": "kyfan(1)",
}

_METRIC_SIGNS = {"ccr": 1.0, "dbi": -1.0, "di": 1.0}


@dataclass(frozen=True)
class AblationMatrix:
    """Percent metric degradation from removing each joint pair.

    values[i, j] is the percent decrease of the metric after zeroing
    cells (i, j) and (j, i) in every graph; for davies_bouldin, where
    larger is worse, the sign is flipped so positive still means the
    pair carried identity information.
    """

    values: np.ndarray
    metric: str
    distance: str
    baseline: float
    joint_order: tuple

    def ranked_pairs(self):
        """(percent, joint_a, joint_b) for i < j, most damaging first."""
        order = []
        p = len(self.joint_order)
        for i in range(p):
            for j in range(i + 1, p):
                order.append((float(self.values[i, j]),
                              self.joint_order[i], self.joint_order[j]))
        order.sort(key=lambda row: (-row[0], row[1], row[2]))
        return order


def _metric_from_matrix(metric, dmat, labels, members):
    if metric == "ccr":
        value, _ = _ccr_from_matrix(dmat, labels)
        return value
    if metric == "dbi":
        return _dbi_from_matrix(dmat, labels, members)
    return _dunn_from_matrix(dmat, labels, members)


def ablate_joint_pairs(fset, metric, distance_id=None, *, backend="fast"):
    """Score each joint pair by how much its removal hurts a metric.

    For every unordered pair (i, j) present in at least one graph, both
    directed cells are zeroed across the archive, the metric is
    recomputed (refitting the mahalanobis scatter on the ablated
    graphs), and the percent decrease relative to the intact baseline is
    recorded. Pairs absent from every graph change nothing and score
    exactly 0 without recomputation.
    """
    if metric not in _METRIC_SIGNS:
        raise ValueError("metric must be one of %s"
                         % ", ".join(sorted(_METRIC_SIGNS)))
    if distance_id is None:
        distance_id = DEFAULT_ABLATION_DISTANCE[metric]
    if isinstance(distance_id, str):
        distance_id = DistanceId.parse(distance_id)
    members = fset.class_members()
    labels = fset.labels

    def score(stack):
        model = None
        if distance_id.kind == "mahalanobis":
            model = fit_scatter(stack)
        dmat = pairwise_matrix(stack, distance_id, model=model,
                               backend=backend)
        if distance_id.kind == "jaccard":
            dmat = 1.0 - dmat
        return _metric_from_matrix(metric, dmat, labels, members)

    stack = fset.adjacency
    baseline = score(stack)
    if baseline == 0.0:
        raise DataError("baseline %s is zero; percent change is undefined"
                        % metric)
    sign = _METRIC_SIGNS[metric]
    p = fset.n_joints
    present = stack.any(axis=0)
    values = np.zeros((p, p))
    for i in range(p):
        for j in range(i + 1, p):
            if not (present[i, j] or present[j, i]):
                continue
            ablated = stack.copy()
            ablated[:, i, j] = 0.0
            ablated[:, j, i] = 0.0
            drop = 100.0 * sign * (baseline - score(ablated)) / baseline
            values[i, j] = drop
            values[j, i] = drop
    return AblationMatrix(values=values, metric=metric,
                          distance=str(distance_id),
                          baseline=float(baseline),
                          joint_order=fset.joint_order)
