"""Command line interface for the gait causal-graph pipeline.

Subcommands cover the full workflow:

    ingest    ASF skeleton + AMC takes -> normalized gait cycle CSVs
    synth     simulated VAR subjects -> gait cycle CSVs + true graphs
    extract   cycle CSVs -> causal graph JSON/CSV/DOT per cycle
    dist      graph files -> pairwise distance matrix
    eval      graph files -> CCR/DBI/DI table for all distances
    ablate    graph files -> joint-pair ablation matrix

Options can come from a --config INI file ([granger], [pipeline], and
[ingest] sections); explicit command line flags win over the file,
which wins over the defaults. All inputs and the config are validated
before anything is written. Report commands write figures next to the
delimited tables. Outputs are deterministic: rerunning a command with
the same inputs and options reproduces every file byte for byte.

Exit codes: 0 success, 1 usage or configuration error, 2 malformed or
inconsistent data, 3 numerical failure.
"""

import argparse
import configparser
import json
import multiprocessing
import os
import sys

import numpy as np

from .distances import DistanceId, fit_scatter, pairwise_matrix
from .errors import DataError, HeterogeneousSkeletons, NumericalError
from .evaluation import (
    DEFAULT_ABLATION_DISTANCE,
    LabeledFeatureSet,
    ablate_joint_pairs,
    compare_distances,
)
from .granger import GgmConfig, compute_ggm
from .granger.io import adjacency_to_csv, graph_to_dot, load_graph, save_graph
from .mocap import (
    forward_kinematics,
    load_motion,
    load_skeleton,
    normalize_pose,
    segment_gait_cycles,
)
from .mocap.sequence import load_cycle, save_cycle
from .report import (
    render_eval_csv,
    render_eval_gnuplot,
    render_matrix_csv,
    render_matrix_gnuplot,
    render_per_class_csv,
    save_ablation_heatmap,
    save_graph_figure,
    save_matrix_heatmap,
    save_metrics_figure,
)
from .synth import (
    VarProcess,
    chain_coefficients,
    random_coefficients,
    true_graph,
    var_gait_cycle,
)


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this suite reserves 2 for
    # data errors, so usage problems exit with 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


_CONFIG_KEYS = {
    "granger": ("lag", "lambda_max", "folds", "grid_size",
                "zero_threshold", "weight_floor", "penalty"),
    "pipeline": ("fixed_length", "distance", "jaccard_complement",
                 "seed", "jobs", "kyfan_k"),
    "ingest": ("left_ankle", "right_ankle", "exclude_joints",
               "frame_rate"),
}


def _load_config(path):
    if path is None:
        return {}
    if not os.path.isfile(path):
        raise UsageError("config file not found: %s" % path)
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise UsageError("bad config file %s: %s" % (path, exc)) from exc
    out = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise UsageError("unknown config section [%s]" % section)
        for key, value in parser.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise UsageError("unknown config key %s.%s" % (section, key))
            out["%s.%s" % (section, key)] = value
    return out


def _resolve(args, config, key, default, cast):
    """Flag > config file > default, with type errors as usage errors."""
    flag = getattr(args, key.split(".", 1)[1], None)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise UsageError("bad config value for %s: %r"
                             % (key, config[key])) from exc
    return default


def _bool(text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _joint_list(text):
    return tuple(name.strip() for name in str(text).split(",")
                 if name.strip())


def _ggm_config(args, config):
    try:
        return GgmConfig(
            lag=_resolve(args, config, "granger.lag", 1, int),
            lambda_max=_resolve(args, config, "granger.lambda_max", 5.0,
                                float),
            cv_folds=_resolve(args, config, "granger.folds", 5, int),
            lambda_grid_size=_resolve(args, config, "granger.grid_size",
                                      20, int),
            zero_threshold=_resolve(args, config,
                                    "granger.zero_threshold", 1e-8, float),
            weight_floor=_resolve(args, config, "granger.weight_floor",
                                  1e-8, float),
            penalty=_resolve(args, config, "granger.penalty",
                             "adaptive-lasso", str),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _distance_id(args, config, default="total"):
    text = _resolve(args, config, "pipeline.distance", default, str)
    try:
        return DistanceId.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _ensure_dir(path):
    os.makedirs(path, exist_ok=True)


def _write_text(path, text):
    with open(path, "w", newline="") as handle:
        handle.write(text)


def _json_text(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _list_inputs(directory, suffix):
    if not os.path.isdir(directory):
        raise UsageError("not a directory: %s" % directory)
    names = sorted(n for n in os.listdir(directory) if n.endswith(suffix))
    if not names:
        raise DataError("no %s files in %s" % (suffix, directory))
    return [os.path.join(directory, n) for n in names]


def _load_graph_dir(directory):
    """Graphs plus file-stem sample ids, sorted by file name."""
    paths = _list_inputs(directory, ".graph.json")
    graphs = [load_graph(p) for p in paths]
    ids = [os.path.basename(p)[:-len(".graph.json")] for p in paths]
    return graphs, ids


def _feature_set(directory):
    graphs, ids = _load_graph_dir(directory)
    return LabeledFeatureSet.from_graphs(graphs, sample_ids=ids)


def cmd_ingest(args, config):
    fixed_length = _resolve(args, config, "pipeline.fixed_length", 156, int)
    left = _resolve(args, config, "ingest.left_ankle", "ltibia", str)
    right = _resolve(args, config, "ingest.right_ankle", "rtibia", str)
    frame_rate = _resolve(args, config, "ingest.frame_rate", 120.0, float)
    exclude = _joint_list(_resolve(args, config, "ingest.exclude_joints",
                                   "", str))
    subject = args.subject or os.path.splitext(
        os.path.basename(args.asf))[0]
    skeleton = load_skeleton(args.asf)

    cycles = []
    for amc_path in sorted(args.amc):
        motion = load_motion(amc_path)
        stem = os.path.splitext(os.path.basename(amc_path))[0]
        seq = forward_kinematics(skeleton, motion, frame_rate=frame_rate,
                                 subject_label=subject, source=stem)
        seq = normalize_pose(seq)
        for cycle in segment_gait_cycles(seq, fixed_length=fixed_length,
                                         left_ankle=left, right_ankle=right,
                                         exclude_joints=exclude):
            name = "%s_%s_c%02d.csv" % (subject, stem, cycle.cycle_index)
            cycles.append((name, cycle, seq.n_frames))
    joints = cycles[0][1].joints

    manifest_path = os.path.join(args.out, "manifest.json")
    entries = {}
    if os.path.isfile(manifest_path):
        with open(manifest_path) as handle:
            old = json.load(handle)
        if tuple(old["joints"]) != tuple(joints):
            raise HeterogeneousSkeletons(
                "existing archive uses joints %s" % (old["joints"],))
        if old["fixed_length"] != fixed_length:
            raise DataError("existing archive uses fixed_length %d"
                            % old["fixed_length"])
        entries = {e["file"]: e for e in old["cycles"]}

    _ensure_dir(args.out)
    for name, cycle, source_frames in cycles:
        save_cycle(cycle, os.path.join(args.out, name))
        entries[name] = {
            "file": name,
            "subject": cycle.subject_label,
            "source": cycle.source,
            "cycle_index": cycle.cycle_index,
            "source_frames": source_frames,
        }
    manifest = {
        "fixed_length": fixed_length,
        "joints": list(joints),
        "cycles": [entries[k] for k in sorted(entries)],
    }
    _write_text(manifest_path, _json_text(manifest))
    print("wrote %d cycles to %s" % (len(cycles), args.out))


def cmd_synth(args, config):
    seed = _resolve(args, config, "pipeline.seed", 0, int)
    if args.subjects < 1 or args.cycles < 1:
        raise UsageError("subjects and cycles must be positive")
    cycles_dir = os.path.join(args.out, "cycles")
    truth_dir = os.path.join(args.out, "truth")
    processes = []
    for s in range(args.subjects):
        label = "s%02d" % (s + 1)
        if args.chain:
            coeffs = chain_coefficients(args.series, coef=args.coef,
                                        order=args.order)
        else:
            coeffs = random_coefficients(args.series, density=args.density,
                                         coef=args.coef, order=args.order,
                                         seed=seed + s)
        processes.append((label, coeffs))

    _ensure_dir(cycles_dir)
    _ensure_dir(truth_dir)
    entries = []
    joints = None
    for s, (label, coeffs) in enumerate(processes):
        proc = VarProcess(coeffs=coeffs, noise_std=args.noise_std,
                          dims_per_series=3, seed=seed + s)
        save_graph(true_graph(proc), os.path.join(truth_dir,
                                                  label + ".graph.json"))
        for c in range(args.cycles):
            run = VarProcess(coeffs=coeffs, noise_std=args.noise_std,
                             dims_per_series=3,
                             seed=seed + 1000 * (s + 1) + c)
            cycle = var_gait_cycle(run, args.frames, subject_label=label)
            name = "%s_c%02d.csv" % (label, c)
            save_cycle(cycle, os.path.join(cycles_dir, name))
            joints = cycle.joints
            entries.append({"file": name, "subject": label,
                            "source": "synthetic", "cycle_index": 0,
                            "source_frames": args.frames})
    manifest = {
        "fixed_length": args.frames,
        "joints": list(joints),
        "cycles": sorted(entries, key=lambda e: e["file"]),
    }
    _write_text(os.path.join(cycles_dir, "manifest.json"),
                _json_text(manifest))
    print("wrote %d cycles for %d subjects to %s"
          % (len(entries), args.subjects, args.out))


def _extract_one(task):
    path, cfg = task
    cycle = load_cycle(path)
    return compute_ggm(cycle, cfg)


def cmd_extract(args, config):
    cfg = _ggm_config(args, config)
    jobs = _resolve(args, config, "pipeline.jobs", 1, int)
    paths = _list_inputs(args.cycles, ".csv")
    tasks = [(p, cfg) for p in paths]
    _ensure_dir(args.out)
    if jobs > 1:
        with multiprocessing.Pool(min(jobs, len(tasks))) as pool:
            graphs = pool.map(_extract_one, tasks)
    else:
        graphs = [_extract_one(t) for t in tasks]
    for path, graph in zip(paths, graphs):
        stem = os.path.splitext(os.path.basename(path))[0]
        save_graph(graph, os.path.join(args.out, stem + ".graph.json"))
        _write_text(os.path.join(args.out, stem + ".adj.csv"),
                    adjacency_to_csv(graph))
        _write_text(os.path.join(args.out, stem + ".dot"),
                    graph_to_dot(graph))
        if args.figures:
            save_graph_figure(graph, os.path.join(args.out, stem + ".png"))
    print("extracted %d graphs to %s" % (len(graphs), args.out))


def cmd_dist(args, config):
    did = _distance_id(args, config)
    complement = args.jaccard_complement
    if not complement and "pipeline.jaccard_complement" in config:
        try:
            complement = _bool(config["pipeline.jaccard_complement"])
        except ValueError as exc:
            raise UsageError("bad config value for "
                             "pipeline.jaccard_complement") from exc
    graphs, ids = _load_graph_dir(args.graphs)
    stack = np.stack([g.adjacency.astype(float) for g in graphs])
    model = fit_scatter(stack) if did.kind == "mahalanobis" else None
    dmat = pairwise_matrix(stack, did, model=model)
    if did.kind == "jaccard" and complement:
        dmat = 1.0 - dmat
    _ensure_dir(args.out)
    _write_text(os.path.join(args.out, "distances.csv"),
                render_matrix_csv(dmat, ids, ids, corner="sample"))
    _write_text(os.path.join(args.out, "distances.dat"),
                render_matrix_gnuplot(dmat, ids, ids))
    save_matrix_heatmap(dmat, ids, os.path.join(args.out, "distances.png"),
                        title=str(did) + (" complement" if complement and
                                          did.kind == "jaccard" else ""))
    print("wrote %dx%d distance matrix to %s"
          % (dmat.shape[0], dmat.shape[1], args.out))


def cmd_eval(args, config):
    kyfan_k = _resolve(args, config, "pipeline.kyfan_k", 1, int)
    fset = _feature_set(args.graphs)
    reports = compare_distances(fset, kyfan_k=kyfan_k)
    _ensure_dir(args.out)
    _write_text(os.path.join(args.out, "eval.csv"),
                render_eval_csv(reports))
    _write_text(os.path.join(args.out, "eval.dat"),
                render_eval_gnuplot(reports))
    _write_text(os.path.join(args.out, "eval_per_class.csv"),
                render_per_class_csv(reports))
    save_metrics_figure(reports, os.path.join(args.out, "metrics.png"))
    best = max(reports, key=lambda r: r.ccr)
    print("evaluated %d samples, %d subjects; best CCR %.4f (%s)"
          % (fset.n_samples, len(fset.classes), best.ccr, best.distance))


def cmd_ablate(args, config):
    metric = args.metric
    did = _distance_id(args, config,
                       default=DEFAULT_ABLATION_DISTANCE[metric])
    fset = _feature_set(args.graphs)
    ablation = ablate_joint_pairs(fset, metric, did)
    joints = list(ablation.joint_order)
    _ensure_dir(args.out)
    _write_text(os.path.join(args.out, "ablation.csv"),
                render_matrix_csv(ablation.values, joints, joints,
                                  corner="joint"))
    _write_text(os.path.join(args.out, "ablation.dat"),
                render_matrix_gnuplot(ablation.values, joints, joints))
    save_ablation_heatmap(ablation, os.path.join(args.out, "ablation.png"))
    top = [{"joint_a": a, "joint_b": b, "percent": v}
           for v, a, b in ablation.ranked_pairs()[:5]]
    summary = {"metric": ablation.metric, "distance": ablation.distance,
               "baseline": ablation.baseline, "top_pairs": top}
    _write_text(os.path.join(args.out, "ablation_summary.json"),
                _json_text(summary))
    lead = top[0]
    print("ablation baseline %s=%.4f; strongest pair %s-%s (%.2f%%)"
          % (metric, ablation.baseline, lead["joint_a"], lead["joint_b"],
             lead["percent"]))


def build_parser():
    parser = _Parser(prog="gaitcausal",
                     description="Granger-causal gait graphs: extraction, "
                                 "distances, and identity evaluation.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="INI options file")
        p.add_argument("--out", required=True, help="output directory")

    p_ingest = sub.add_parser("ingest",
                              help="skeleton + motions to gait cycles")
    common(p_ingest)
    p_ingest.add_argument("--asf", required=True, help="ASF skeleton file")
    p_ingest.add_argument("amc", nargs="+", help="AMC motion files")
    p_ingest.add_argument("--subject", help="subject label "
                                            "(default: ASF file stem)")
    p_ingest.add_argument("--fixed-length", dest="fixed_length", type=int)
    p_ingest.add_argument("--exclude-joints", dest="exclude_joints",
                          help="comma separated joints to drop")
    p_ingest.add_argument("--left-ankle", dest="left_ankle")
    p_ingest.add_argument("--right-ankle", dest="right_ankle")
    p_ingest.add_argument("--frame-rate", dest="frame_rate", type=float)
    p_ingest.set_defaults(func=cmd_ingest)

    p_synth = sub.add_parser("synth", help="simulate labeled VAR subjects")
    common(p_synth)
    p_synth.add_argument("--subjects", type=int, default=4)
    p_synth.add_argument("--cycles", type=int, default=5,
                         help="cycles per subject")
    p_synth.add_argument("--series", type=int, default=6,
                         help="joints per subject")
    p_synth.add_argument("--frames", type=int, default=200)
    p_synth.add_argument("--order", type=int, default=1, help="VAR order")
    p_synth.add_argument("--coef", type=float, default=0.6)
    p_synth.add_argument("--noise-std", dest="noise_std", type=float,
                         default=0.1)
    p_synth.add_argument("--density", type=float, default=0.25,
                         help="edge probability per cell")
    p_synth.add_argument("--chain", action="store_true",
                         help="chain structure instead of random")
    p_synth.add_argument("--seed", type=int)
    p_synth.set_defaults(func=cmd_synth)

    p_extract = sub.add_parser("extract", help="cycles to causal graphs")
    common(p_extract)
    p_extract.add_argument("cycles", help="directory of cycle CSVs")
    p_extract.add_argument("--lag", type=int)
    p_extract.add_argument("--lambda-max", dest="lambda_max", type=float)
    p_extract.add_argument("--folds", type=int)
    p_extract.add_argument("--grid-size", dest="grid_size", type=int)
    p_extract.add_argument("--zero-threshold", dest="zero_threshold",
                           type=float)
    p_extract.add_argument("--weight-floor", dest="weight_floor",
                           type=float)
    p_extract.add_argument("--penalty",
                           choices=("adaptive-lasso", "plain-lasso"))
    p_extract.add_argument("--jobs", type=int)
    p_extract.add_argument("--figures", action="store_true",
                           help="also draw one figure per graph")
    p_extract.set_defaults(func=cmd_extract)

    p_dist = sub.add_parser("dist", help="pairwise graph distances")
    common(p_dist)
    p_dist.add_argument("graphs", help="directory of .graph.json files")
    p_dist.add_argument("--distance", help="e.g. total, spectral, kyfan(2)")
    p_dist.add_argument("--jaccard-complement", dest="jaccard_complement",
                        action="store_true",
                        help="report 1 - J instead of the overlap ratio")
    p_dist.set_defaults(func=cmd_dist)

    p_eval = sub.add_parser("eval",
                            help="CCR/DBI/DI for all distance functions")
    common(p_eval)
    p_eval.add_argument("graphs", help="directory of .graph.json files")
    p_eval.add_argument("--kyfan-k", dest="kyfan_k", type=int)
    p_eval.set_defaults(func=cmd_eval)

    p_ablate = sub.add_parser("ablate", help="joint-pair ablation matrix")
    common(p_ablate)
    p_ablate.add_argument("graphs", help="directory of .graph.json files")
    p_ablate.add_argument("--metric", choices=("ccr", "dbi", "di"),
                          default="ccr")
    p_ablate.add_argument("--distance")
    p_ablate.set_defaults(func=cmd_ablate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits; report the code so embedders see 1 on bad usage
        return exc.code if isinstance(exc.code, int) else 1
    try:
        config = _load_config(args.config)
        args.func(args, config)
    except UsageError as exc:
        print("gaitcausal: error: %s" % exc, file=sys.stderr)
        return 1
    except DataError as exc:
        print("gaitcausal: data error: %s" % exc, file=sys.stderr)
        return 2
    except NumericalError as exc:
        print("gaitcausal: numerical error: %s" % exc, file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
