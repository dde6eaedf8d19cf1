"""Graph extraction end to end: CV selection, thresholding, round trips."""

import numpy as np
import pytest

from gaitcausal import (
    CausalGraph,
    CoefficientBlock,
    GgmConfig,
    LagTooLarge,
    TooFewSamples,
    VarProcess,
    ZeroResidual,
    build_design_matrix,
    chain_coefficients,
    compute_ggm,
    cross_validate_lambda,
    extract_edges,
    flatten_target,
    information_criteria,
    load_graph,
    recovery_metrics,
    save_graph,
    true_graph,
    var_gait_cycle,
)
from gaitcausal.granger import (
    adjacency_to_csv,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
)


def _chain_cycle(p=4, n=200, coef=0.6, noise=0.1, seed=0):
    proc = VarProcess(coeffs=chain_coefficients(p, coef), noise_std=noise,
                      seed=seed)
    return proc, var_gait_cycle(proc, n, subject_label="s00")


def test_lambda_grid_shape():
    config = GgmConfig(lambda_max=5.0, lambda_grid_size=20)
    grid = config.lambda_grid()
    assert grid.shape == (20,)
    assert grid[0] == 5.0
    np.testing.assert_allclose(grid[-1], 5.0e-3)
    assert np.all(np.diff(grid) < 0)


def test_cv_recovers_sparse_support():
    proc, cycle = _chain_cycle(seed=3)
    config = GgmConfig()
    design = build_design_matrix(cycle, config.lag)
    target = flatten_target(cycle, "v02", config.lag)
    lam, beta = cross_validate_lambda(design, target, np.ones(4), config)
    assert lam > 0
    blocks = np.abs(beta.reshape(4, config.lag)).max(axis=1)
    assert blocks[0] > 0.1          # v01 drives v02
    assert blocks[2] == 0.0         # downstream joints never feed back
    assert blocks[3] == 0.0


def test_cv_prefers_sparser_fits_on_noise():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(120, 10))
    y = rng.normal(size=120)
    config = GgmConfig(lambda_max=float(np.abs(x.T @ y).max()) * 1.1)
    lam, beta = cross_validate_lambda(x, y, np.ones(10), config)
    dense = np.count_nonzero(
        np.abs(np.linalg.lstsq(x, y, rcond=None)[0]) > 1e-8)
    assert np.count_nonzero(beta) <= dense
    assert lam >= config.lambda_grid()[-1]


def test_cv_needs_enough_points_per_fold():
    rng = np.random.default_rng(12)
    x = rng.normal(size=(9, 4))     # 3 points, fewer than 5 folds
    y = rng.normal(size=9)
    with pytest.raises(TooFewSamples):
        cross_validate_lambda(x, y, np.ones(4), GgmConfig())


def test_compute_ggm_recovers_chain():
    hits = []
    for seed in range(8):
        proc, cycle = _chain_cycle(p=3, seed=seed)
        graph = compute_ggm(cycle)
        truth = true_graph(proc)
        score = recovery_metrics(graph, truth)
        hits.append(score.f1)
    assert float(np.mean(hits)) >= 0.9


def test_compute_ggm_scale_invariance():
    _, cycle = _chain_cycle(seed=5)
    base = compute_ggm(cycle)
    for c in (0.5, 2.0, 10.0):
        scaled = var_gait_cycle(
            VarProcess(coeffs=chain_coefficients(4, 0.6), noise_std=0.1,
                       seed=5), 200, subject_label="s00")
        scaled = type(scaled)(joints=scaled.joints, coords=scaled.coords * c,
                              subject_label=scaled.subject_label,
                              source=scaled.source, cycle_index=0)
        graph = compute_ggm(scaled)
        np.testing.assert_array_equal(graph.adjacency, base.adjacency)


def test_compute_ggm_deterministic():
    _, cycle = _chain_cycle(seed=9)
    a = compute_ggm(cycle)
    b = compute_ggm(cycle)
    np.testing.assert_array_equal(a.adjacency, b.adjacency)
    np.testing.assert_array_equal(a.lambda_per_target, b.lambda_per_target)


def test_compute_ggm_carries_metadata():
    _, cycle = _chain_cycle(p=3, seed=1)
    config = GgmConfig(lag=2)
    graph = compute_ggm(cycle, config)
    assert graph.joint_order == ("v01", "v02", "v03")
    assert graph.subject_label == "s00"
    assert graph.config == config
    assert graph.adjacency.shape == (3, 3)
    assert len(graph.lambda_per_target) == 3
    assert all(lam > 0 for lam in graph.lambda_per_target)


def test_compute_ggm_rejects_short_records():
    _, cycle = _chain_cycle(p=2, n=200, seed=0)
    short = type(cycle)(joints=cycle.joints, coords=cycle.coords[:, :2],
                        subject_label=None, source=None, cycle_index=0)
    with pytest.raises((LagTooLarge, TooFewSamples)):
        compute_ggm(short, GgmConfig(lag=2))


def test_extract_edges_thresholding():
    config = GgmConfig(zero_threshold=1e-8)
    beta1 = np.array([0.0, 0.5])            # target v01: block of v02 active
    beta2 = np.array([1e-12, 0.0])          # below threshold: no edge
    blocks = [
        CoefficientBlock(target="v01", beta=beta1, weights=np.ones(2),
                         lambda_selected=0.1, mle_beta=beta1),
        CoefficientBlock(target="v02", beta=beta2, weights=np.ones(2),
                         lambda_selected=0.1, mle_beta=beta2),
    ]
    graph = extract_edges(blocks, config)
    np.testing.assert_array_equal(graph.adjacency, [[0, 0], [1, 0]])


def test_extract_edges_drops_self_loops():
    config = GgmConfig()
    beta = np.array([0.9, 0.9])
    blocks = [
        CoefficientBlock(target="a", beta=beta, weights=np.ones(2),
                         lambda_selected=0.1, mle_beta=beta),
        CoefficientBlock(target="b", beta=beta, weights=np.ones(2),
                         lambda_selected=0.1, mle_beta=beta),
    ]
    graph = extract_edges(blocks, config)
    np.testing.assert_array_equal(graph.adjacency, [[0, 1], [1, 0]])


def test_information_criteria_formulas():
    rng = np.random.default_rng(13)
    x = rng.normal(size=(30, 5))
    y = rng.normal(size=30)
    beta = np.array([1.0, 0.0, -2.0, 0.0, 0.0])
    aic, bic = information_criteria(x, y, beta)
    rss = float(np.sum((y - x @ beta) ** 2))
    base = 30 * np.log(rss / 30)
    assert aic == pytest.approx(base + 2 * 2, abs=1e-12)
    assert bic == pytest.approx(base + 2 * np.log(30), abs=1e-12)

    # equal residuals, three extra coefficients: AIC differs by exactly 6
    aic5, _ = information_criteria(
        x, y, beta + 1e-12 * np.array([0, 1, 0, 1, 1]), zero_threshold=1e-15)
    assert aic5 - aic == pytest.approx(6.0, abs=1e-6)


def test_information_criteria_zero_residual():
    x = np.eye(4)
    beta = np.array([1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ZeroResidual):
        information_criteria(x, x @ beta, beta)


def test_graph_json_round_trip():
    _, cycle = _chain_cycle(p=3, seed=2)
    graph = compute_ggm(cycle, GgmConfig(lag=2, lambda_max=3.0))
    text = graph_to_json(graph)
    back = graph_from_json(text)
    np.testing.assert_array_equal(back.adjacency, graph.adjacency)
    assert back.joint_order == graph.joint_order
    assert back.subject_label == graph.subject_label
    np.testing.assert_array_equal(back.lambda_per_target,
                                  graph.lambda_per_target)
    assert back.config == graph.config


def test_graph_file_round_trip(tmp_path):
    _, cycle = _chain_cycle(p=3, seed=4)
    graph = compute_ggm(cycle)
    path = tmp_path / "g.graph.json"
    save_graph(graph, path)
    back = load_graph(path)
    np.testing.assert_array_equal(back.adjacency, graph.adjacency)
    assert back.joint_order == graph.joint_order


def test_adjacency_csv_and_dot_formats():
    graph = CausalGraph(adjacency=np.array([[0, 1], [0, 0]]),
                        joint_order=("a", "b"))
    csv_text = adjacency_to_csv(graph)
    assert csv_text == "0,1\n0,0\n"
    dot = graph_to_dot(graph)
    assert "digraph" in dot
    assert '"a" -> "b"' in dot
    assert '"b" -> "a"' not in dot
