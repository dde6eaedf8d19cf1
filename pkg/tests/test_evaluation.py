"""Identity metrics on hand-computed archives and their edge cases."""

import numpy as np
import pytest

from gaitcausal import (
    CausalGraph,
    CoincidentMedoids,
    DataError,
    HeterogeneousSkeletons,
    LabeledFeatureSet,
    TooFewSamples,
    ZeroDiameter,
    ablate_joint_pairs,
    all_distance_ids,
    ccr_loo_1nn,
    compare_distances,
    davies_bouldin,
    dissimilarity_matrix,
    dunn_index,
    label_permutation_ccr,
)

from _oracles import ccr_oracle, dbi_oracle, dunn_oracle
from conftest import graph_from_edges

JOINTS = tuple("j%d" % k for k in range(6))


def _fset(sets_of_edges, labels):
    stack = np.stack([graph_from_edges(e, 6) for e in sets_of_edges])
    ids = ["%s%d" % (lab, k) for k, lab in enumerate(labels)]
    return LabeledFeatureSet(adjacency=stack, labels=tuple(labels),
                             sample_ids=tuple(ids), joint_order=JOINTS)


def _separable_fset(reps=3):
    prototypes = {
        "a": [(0, 1), (1, 2)],
        "b": [(2, 3), (3, 4), (4, 5)],
        "c": [(0, 5), (5, 1), (1, 3), (3, 2)],
    }
    edge_sets, labels = [], []
    for lab, edges in prototypes.items():
        for _ in range(reps):
            edge_sets.append(edges)
            labels.append(lab)
    return _fset(edge_sets, labels)


def test_ccr_is_one_on_separable_archive_for_all_distances():
    fset = _separable_fset()
    for did in all_distance_ids():
        assert ccr_loo_1nn(fset, did) == 1.0, str(did)


def test_davies_bouldin_hand_fixture():
    # two-sample classes with total-distance spreads 1 and medoid gap 10
    edge_sets = [
        [(0, 1), (0, 2)],                                    # a medoid
        [(0, 1), (0, 3)],
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 2)],                    # b medoid
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 3)],
    ]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    assert davies_bouldin(fset, "total") == 0.2


def test_dunn_hand_fixture():
    # diameters 1 and 1, closest cross pair at total distance 6
    edge_sets = [
        [(0, 1)],
        [(0, 1), (0, 2)],
        [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1)],
        [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)],
    ]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    assert dunn_index(fset, "total") == 6.0


def test_metrics_match_bruteforce_on_random_archive():
    rng = np.random.default_rng(0)
    stack = (rng.random((12, 6, 6)) < 0.35).astype(float)
    for k in range(12):
        np.fill_diagonal(stack[k], 0.0)
        if stack[k].sum() == 0:
            stack[k, 0, 1] = 1.0
    labels = tuple("abcd"[k % 4] for k in range(12))
    ids = tuple("g%02d" % k for k in range(12))
    fset = LabeledFeatureSet(adjacency=stack, labels=labels, sample_ids=ids,
                             joint_order=JOINTS)
    for name in ("total", "frobenius", "kyfan(2)", "jaccard"):
        dmat = dissimilarity_matrix(fset, name)
        assert ccr_loo_1nn(fset, name) == pytest.approx(
            ccr_oracle(dmat, fset.labels))
        assert davies_bouldin(fset, name) == pytest.approx(
            dbi_oracle(dmat, fset.labels))
        assert dunn_index(fset, name) == pytest.approx(
            dunn_oracle(dmat, fset.labels))


def test_jaccard_enters_metrics_as_complement():
    fset = _separable_fset()
    dmat = dissimilarity_matrix(fset, "jaccard")
    np.testing.assert_allclose(np.diag(dmat), 0.0, atol=1e-12)
    assert np.all(dmat >= -1e-12)
    # identical graphs within a class: complement distance exactly 0
    assert dmat[0, 1] == 0.0
    assert dmat[0, 3] > 0.1


def test_ccr_tie_breaks_to_smallest_index():
    # sample 0 equidistant from 1 (same label) and 2 (other label)
    edge_sets = [
        [(0, 1), (0, 2)],
        [(0, 1), (0, 3)],          # distance 2 from sample 0
        [(0, 2), (0, 4)],          # also distance 2 from sample 0
        [(0, 2), (0, 4), (0, 5)],
    ]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    report = next(r for r in compare_distances(fset, distance_ids=("total",))
                  if r.distance == "total")
    assert report.per_class_ccr["a"] == 1.0   # lower index wins the tie


def test_coincident_medoids_raises():
    edge_sets = [[(0, 1)], [(0, 1)], [(0, 1)], [(2, 3)]]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    # class b medoid is [(0,1)] == class a medoid? no: force identical
    edge_sets = [[(0, 1)], [(0, 1), (0, 2)], [(0, 1)], [(0, 1), (0, 3)]]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    with pytest.raises(CoincidentMedoids):
        davies_bouldin(fset, "total")


def test_zero_diameter_raises():
    fset = _separable_fset()
    with pytest.raises(ZeroDiameter):
        dunn_index(fset, "total")


def test_metrics_need_two_classes():
    edge_sets = [[(0, 1)], [(0, 2)], [(0, 3)]]
    fset = _fset(edge_sets, ["a", "a", "a"])
    with pytest.raises(TooFewSamples):
        davies_bouldin(fset, "total")
    with pytest.raises(TooFewSamples):
        dunn_index(fset, "total")


def test_permutation_null_is_chance_level():
    fset = _separable_fset(reps=4)
    null = label_permutation_ccr(fset, "total", permutations=300, seed=5)
    assert null.shape == (300,)
    n_classes = 3
    mean = float(null.mean())
    sigma = np.sqrt((1 / n_classes) * (1 - 1 / n_classes) / fset.n_samples)
    assert abs(mean - 1 / n_classes) <= 3 * sigma
    again = label_permutation_ccr(fset, "total", permutations=300, seed=5)
    np.testing.assert_array_equal(null, again)
    other = label_permutation_ccr(fset, "total", permutations=300, seed=6)
    assert np.any(other != null)


def test_compare_distances_reports():
    fset = _fset([
        [(0, 1), (0, 2)],
        [(0, 1), (0, 3)],
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 2)],
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 3)],
    ], ["a", "a", "b", "b"])
    reports = compare_distances(fset, kyfan_k=2)
    assert len(reports) == 11
    names = [r.distance for r in reports]
    assert names[0] == "total"
    assert "kyfan(2)" in names
    by_name = {r.distance: r for r in reports}
    assert by_name["total"].dbi == 0.2
    assert all(0.0 <= r.ccr <= 1.0 for r in reports)
    assert set(by_name["total"].per_class_ccr) == {"a", "b"}


def test_from_graphs_builds_and_sorts():
    g1 = CausalGraph(adjacency=graph_from_edges([(0, 1)], 3),
                     joint_order=("a", "b", "c"), subject_label="s2")
    g2 = CausalGraph(adjacency=graph_from_edges([(1, 2)], 3),
                     joint_order=("a", "b", "c"), subject_label="s1")
    fset = LabeledFeatureSet.from_graphs([g1, g2])
    assert fset.labels == ("s2", "s1")       # sorted by generated ids
    assert fset.n_samples == 2
    assert fset.joint_order == ("a", "b", "c")

    explicit = LabeledFeatureSet.from_graphs(
        [g1, g2], sample_ids=("z", "y"))
    assert explicit.sample_ids == ("y", "z")
    assert explicit.labels == ("s1", "s2")   # reordered with their ids

    with pytest.raises(HeterogeneousSkeletons):
        LabeledFeatureSet.from_graphs([
            g1, CausalGraph(adjacency=graph_from_edges([(0, 1)], 3),
                            joint_order=("a", "b", "z"),
                            subject_label="s3")])

    unlabeled = CausalGraph(adjacency=graph_from_edges([(0, 1)], 3),
                            joint_order=("a", "b", "c"))
    with pytest.raises(DataError):
        LabeledFeatureSet.from_graphs([g1, unlabeled])


def test_feature_set_validation():
    stack = np.zeros((2, 3, 3))
    with pytest.raises(ValueError):
        LabeledFeatureSet(adjacency=stack, labels=("a",),
                          sample_ids=("x", "y"), joint_order=("a", "b", "c"))
    with pytest.raises(ValueError):
        LabeledFeatureSet(adjacency=stack, labels=("a", "b"),
                          sample_ids=("x", "x"), joint_order=("a", "b", "c"))


def test_metric_order_invariance():
    fset = _separable_fset()
    perm = np.random.default_rng(3).permutation(fset.n_samples)
    shuffled = LabeledFeatureSet(
        adjacency=fset.adjacency[perm],
        labels=tuple(fset.labels[k] for k in perm),
        sample_ids=tuple(fset.sample_ids[k] for k in perm),
        joint_order=fset.joint_order)
    for name in ("total", "kyfan(1)"):
        assert ccr_loo_1nn(shuffled, name) == ccr_loo_1nn(fset, name)
        assert davies_bouldin(shuffled, name) == davies_bouldin(fset, name)


def test_ablation_ranks_identity_bearing_pair():
    # class identity rides entirely on edge (0, 1) vs (1, 0)
    edge_sets = [
        [(0, 1), (2, 3), (4, 5)],
        [(0, 1), (2, 3), (4, 5), (3, 2)],
        [(1, 0), (2, 3), (4, 5)],
        [(1, 0), (2, 3), (4, 5), (3, 2)],
    ]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    result = ablate_joint_pairs(fset, "ccr")
    assert result.metric == "ccr"
    assert result.distance == "total"
    assert result.baseline == 1.0
    assert result.values.shape == (6, 6)
    np.testing.assert_array_equal(result.values, result.values.T)
    percent, name_a, name_b = result.ranked_pairs()[0]
    assert {name_a, name_b} == {"j0", "j1"}
    assert percent > 0.0
    # pairs absent from every graph score exactly zero
    i, j = 0, 4
    assert result.values[i, j] == 0.0


def test_ablation_dbi_sign_flip():
    edge_sets = [
        [(0, 1), (0, 2)],
        [(0, 1), (0, 3)],
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 2)],
        [(0, 1), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0),
         (3, 1), (4, 0), (4, 1), (4, 3)],
    ]
    fset = _fset(edge_sets, ["a", "a", "b", "b"])
    result = ablate_joint_pairs(fset, "dbi", distance_id="total")
    assert result.distance == "total"
    assert result.baseline == 0.2
    # removing (2,0)+(0,2) merges nothing: check sign convention only
    assert np.isfinite(result.values).all()


def test_ablation_rejects_unknown_metric():
    fset = _separable_fset()
    with pytest.raises(ValueError):
        ablate_joint_pairs(fset, "accuracy")
