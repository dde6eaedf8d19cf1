"""Rendering of evaluation results: tables, gnuplot files, figures.

Text renderers return strings with repr() floats and fixed row order so
the same inputs always produce the same bytes. Figure writers use the
Agg backend with pinned dpi and metadata so PNG output is reproducible
too. The gnuplot renderers target `plot ... matrix rowheaders
columnheaders` for matrices and `using n:xtic(1)` for the metric table.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_PNG_METADATA = {"Software": "gaitcausal"}


def _fmt(value):
    return repr(float(value))


def render_eval_csv(reports):
    """CSV table with one row per distance function."""
    lines = ["distance,ccr,dbi,di"]
    for rep in reports:
        lines.append(",".join([rep.distance, _fmt(rep.ccr), _fmt(rep.dbi),
                               _fmt(rep.di)]))
    return "\n".join(lines) + "\n"


def render_eval_gnuplot(reports):
    """Whitespace table of the same rows for gnuplot."""
    lines = ["# distance ccr dbi di"]
    for rep in reports:
        lines.append(" ".join([rep.distance, _fmt(rep.ccr), _fmt(rep.dbi),
                               _fmt(rep.di)]))
    return "\n".join(lines) + "\n"


def render_per_class_csv(reports):
    """Per-class CCR rows for every distance function."""
    lines = ["distance,subject,ccr"]
    for rep in reports:
        for label in sorted(rep.per_class_ccr):
            lines.append(",".join([rep.distance, label,
                                   _fmt(rep.per_class_ccr[label])]))
    return "\n".join(lines) + "\n"


def render_matrix_csv(values, row_labels, col_labels, corner=""):
    """Labeled CSV matrix (corner cell, then column labels)."""
    values = np.asarray(values, dtype=float)
    lines = [",".join([corner] + list(col_labels))]
    for name, row in zip(row_labels, values):
        lines.append(",".join([name] + [_fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def render_matrix_gnuplot(values, row_labels, col_labels, corner="."):
    """Matrix in `matrix rowheaders columnheaders` layout."""
    values = np.asarray(values, dtype=float)
    lines = [" ".join([corner] + list(col_labels))]
    for name, row in zip(row_labels, values):
        lines.append(" ".join([name] + [_fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def save_metrics_figure(reports, path):
    """Bar panels of CCR, Davies-Bouldin, and Dunn per distance."""
    names = [rep.distance for rep in reports]
    x = np.arange(len(names))
    fig, axes = plt.subplots(1, 3, figsize=(15.0, 4.0))
    panels = (("ccr", [rep.ccr for rep in reports]),
              ("davies_bouldin", [rep.dbi for rep in reports]),
              ("dunn", [rep.di for rep in reports]))
    for ax, (title, values) in zip(axes, panels):
        ax.bar(x, values, color="#4878a8")
        ax.set_xticks(x)
        ax.set_xticklabels(names, rotation=60, ha="right", fontsize=8)
        ax.set_title(title)
        ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_METADATA)
    plt.close(fig)


def save_matrix_heatmap(values, labels, path, title=""):
    """Heatmap of a labeled square matrix; labels hidden when crowded."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    fig, ax = plt.subplots(figsize=(7.5, 6.5))
    image = ax.imshow(values, cmap="viridis", interpolation="nearest")
    fig.colorbar(image, ax=ax, fraction=0.046)
    if n <= 40:
        ax.set_xticks(np.arange(n))
        ax.set_yticks(np.arange(n))
        ax.set_xticklabels(labels, rotation=90, fontsize=7)
        ax.set_yticklabels(labels, fontsize=7)
    else:
        ax.set_xticks([])
        ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_METADATA)
    plt.close(fig)


def save_ablation_heatmap(ablation, path):
    """Heatmap of the joint-pair ablation matrix."""
    title = "%s percent drop, %s" % (ablation.metric, ablation.distance)
    save_matrix_heatmap(ablation.values, ablation.joint_order, path,
                        title=title)


def save_graph_figure(graph, path):
    """Directed graph on a circle of joints, one arrow per edge."""
    joints = list(graph.joint_order)
    p = len(joints)
    theta = np.pi / 2 - 2.0 * np.pi * np.arange(p) / p
    xs = np.cos(theta)
    ys = np.sin(theta)
    fig, ax = plt.subplots(figsize=(7.0, 7.0))
    for i, source in enumerate(joints):
        for j, target in enumerate(joints):
            if graph.adjacency[i, j]:
                ax.annotate(
                    "", xy=(xs[j], ys[j]), xytext=(xs[i], ys[i]),
                    arrowprops=dict(arrowstyle="-|>", color="#666666",
                                    alpha=0.6, shrinkA=12, shrinkB=12))
    ax.scatter(xs, ys, s=240, color="#4878a8", zorder=3)
    for i, name in enumerate(joints):
        ax.annotate(name, (1.12 * xs[i], 1.12 * ys[i]),
                    ha="center", va="center", fontsize=8)
    ax.set_xlim(-1.35, 1.35)
    ax.set_ylim(-1.35, 1.35)
    ax.set_aspect("equal")
    ax.axis("off")
    if graph.subject_label:
        ax.set_title(graph.subject_label)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_METADATA)
    plt.close(fig)
