"""Serialization of causal graphs: bare CSV, DOT, and JSON with metadata.

All writers are deterministic: fixed key order, no timestamps, newline
terminated. The JSON form round-trips the full graph including the
extraction config; CSV and DOT are one-way export formats.
"""

import json

import numpy as np

from .config import GgmConfig
from .model import CausalGraph


def adjacency_to_csv(graph):
    """Bare 0/1 adjacency, one row per source joint, comma separated."""
    lines = [",".join(str(int(v)) for v in row) for row in graph.adjacency]
    return "\n".join(lines) + "\n"


def graph_to_dot(graph):
    """GraphViz digraph; node and edge order follow joint_order."""
    lines = ["digraph gait {"]
    for name in graph.joint_order:
        lines.append('  "%s";' % name)
    for src, dst in graph.edges():
        lines.append('  "%s" -> "%s";' % (src, dst))
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph):
    """JSON document with joints, adjacency, per-target penalties, config."""
    doc = {
        "subject": graph.subject_label,
        "joints": list(graph.joint_order),
        "adjacency": graph.adjacency.tolist(),
        "lambda_per_target": (
            None if graph.lambda_per_target is None
            else list(graph.lambda_per_target)),
        "config": None if graph.config is None else graph.config.to_dict(),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def graph_from_json(text):
    doc = json.loads(text)
    config = None
    if doc.get("config") is not None:
        config = GgmConfig.from_dict(doc["config"])
    lambdas = doc.get("lambda_per_target")
    return CausalGraph(
        adjacency=np.asarray(doc["adjacency"], dtype=int),
        joint_order=tuple(doc["joints"]),
        subject_label=doc.get("subject"),
        lambda_per_target=None if lambdas is None else tuple(lambdas),
        config=config,
    )


def save_graph(graph, path):
    with open(path, "w") as fh:
        fh.write(graph_to_json(graph))


def load_graph(path):
    with open(path) as fh:
        return graph_from_json(fh.read())
