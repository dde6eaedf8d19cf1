"""Delimited outputs and figure files: exact text, byte determinism."""

import numpy as np

from gaitcausal import CausalGraph
from gaitcausal.evaluation import EvalReport
from gaitcausal.report import (
    render_eval_csv,
    render_eval_gnuplot,
    render_matrix_csv,
    render_matrix_gnuplot,
    render_per_class_csv,
    save_graph_figure,
    save_matrix_heatmap,
    save_metrics_figure,
)

REPORTS = (
    EvalReport(distance="total", ccr=1.0, dbi=0.2, di=6.0,
               per_class_ccr={"a": 1.0, "b": 1.0}),
    EvalReport(distance="kyfan(2)", ccr=0.75, dbi=0.5, di=1.25,
               per_class_ccr={"a": 0.5, "b": 1.0}),
)


def test_eval_csv_layout():
    text = render_eval_csv(REPORTS)
    lines = text.splitlines()
    assert lines[0] == "distance,ccr,dbi,di"
    assert lines[1] == "total,1.0,0.2,6.0"
    assert lines[2] == "kyfan(2),0.75,0.5,1.25"
    assert text.endswith("\n")


def test_eval_gnuplot_layout():
    lines = render_eval_gnuplot(REPORTS).splitlines()
    assert lines[0].startswith("#")
    assert lines[1].split() == ["total", "1.0", "0.2", "6.0"]


def test_per_class_csv_layout():
    lines = render_per_class_csv(REPORTS).splitlines()
    assert lines[0] == "distance,subject,ccr"
    assert "total,a,1.0" in lines
    assert "kyfan(2),b,1.0" in lines


def test_matrix_renderers():
    values = np.array([[0.0, 1.5], [1.5, 0.0]])
    csv_text = render_matrix_csv(values, ("r1", "r2"), ("r1", "r2"),
                                 corner="sample")
    lines = csv_text.splitlines()
    assert lines[0] == "sample,r1,r2"
    assert lines[1] == "r1,0.0,1.5"

    dat = render_matrix_gnuplot(values, ("r1", "r2"), ("r1", "r2"))
    rows = dat.splitlines()
    assert rows[0].split() == [".", "r1", "r2"]
    assert rows[1].split() == ["r1", "0.0", "1.5"]


def test_figures_written_and_deterministic(tmp_path):
    graph = CausalGraph(
        adjacency=np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
        joint_order=("hip", "knee", "ankle"))
    values = np.array([[0.0, 2.0, 1.0], [2.0, 0.0, 3.0], [1.0, 3.0, 0.0]])

    out = {}
    for tag in ("one", "two"):
        base = tmp_path / tag
        base.mkdir()
        save_metrics_figure(REPORTS, base / "metrics.png")
        save_matrix_heatmap(values, ("a", "b", "c"), base / "dist.png",
                            title="pairwise")
        save_graph_figure(graph, base / "graph.png")
        out[tag] = {f.name: f.read_bytes() for f in base.iterdir()}
        assert all(len(v) > 500 for v in out[tag].values())
    assert out["one"] == out["two"]
