"""Trajectory records and their canonical CSV form.

A MotionSequence is p joint trajectories over n frames stored as a
(3p, n) array, rows grouped per joint in x, y, z order. A GaitCycle is
the same layout after segmentation and resampling: fixed length, root
removed, static joints dropped, tagged with the subject label.

The canonical on-disk form is a delimited table, one row per frame:

    frame,root_x,root_y,root_z,ltibia_x,...

Floats are written with repr(), the shortest representation that parses
back to the identical double, so a write/read round trip is exact and
artifacts are byte-stable. A JSON sidecar (<stem>.meta.json) carries the
subject label, frame rate and provenance.
"""

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from ..errors import DataError, DimensionMismatch, UnknownJoint

_AXES = ("x", "y", "z")


def _check_layout(joints, coords, min_frames):
    joints = tuple(joints)
    if len(set(joints)) != len(joints):
        raise DataError("duplicate joint names: %r" % (joints,))
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] != 3 * len(joints):
        raise DimensionMismatch(
            "coords must have shape (3*%d, n), got %r"
            % (len(joints), coords.shape))
    if coords.shape[1] < min_frames:
        raise DataError("need at least %d frames, got %d"
                        % (min_frames, coords.shape[1]))
    if not np.all(np.isfinite(coords)):
        raise DataError("coords contain non-finite values")
    return joints, coords


@dataclass(frozen=True)
class MotionSequence:
    """World-space joint trajectories of one motion clip."""

    joints: tuple
    coords: np.ndarray
    frame_rate: float = 120.0
    subject_label: str = None
    source: str = None

    def __post_init__(self):
        joints, coords = _check_layout(self.joints, self.coords, 2)
        if not (self.frame_rate > 0):
            raise DataError("frame_rate must be positive")
        object.__setattr__(self, "joints", joints)
        object.__setattr__(self, "coords", coords)

    @property
    def n_frames(self):
        return self.coords.shape[1]

    @property
    def n_joints(self):
        return len(self.joints)

    def joint_index(self, name):
        try:
            return self.joints.index(name)
        except ValueError:
            raise UnknownJoint("joint %r not in sequence" % (name,)) from None

    def joint_coords(self, name):
        """(3, n) trajectory view of one joint."""
        i = self.joint_index(name)
        return self.coords[3 * i: 3 * i + 3]


@dataclass(frozen=True)
class GaitCycle:
    """One resampled gait cycle, ready for graph extraction."""

    joints: tuple
    coords: np.ndarray
    subject_label: str = None
    source: str = None
    cycle_index: int = 0

    def __post_init__(self):
        joints, coords = _check_layout(self.joints, self.coords, 2)
        per_channel = coords.var(axis=1).reshape(len(joints), 3).sum(axis=1)
        flat = np.nonzero(per_channel == 0.0)[0]
        if flat.size:
            raise DataError("joints with zero temporal variance: %s"
                            % ", ".join(joints[i] for i in flat))
        object.__setattr__(self, "joints", joints)
        object.__setattr__(self, "coords", coords)

    @property
    def n_fixed(self):
        return self.coords.shape[1]

    @property
    def n_joints(self):
        return len(self.joints)

    def joint_index(self, name):
        try:
            return self.joints.index(name)
        except ValueError:
            raise UnknownJoint("joint %r not in cycle" % (name,)) from None

    def joint_coords(self, name):
        i = self.joint_index(name)
        return self.coords[3 * i: 3 * i + 3]


def _meta_path(path):
    stem, ext = os.path.splitext(str(path))
    return stem + ".meta.json"


def write_trajectory_csv(path, joints, coords, meta=None):
    """Write the canonical frame table plus its JSON sidecar."""
    coords = np.asarray(coords, dtype=float)
    header = ["frame"]
    for name in joints:
        header.extend("%s_%s" % (name, ax) for ax in _AXES)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for t in range(coords.shape[1]):
            row = [str(t + 1)]
            row.extend(repr(float(v)) for v in coords[:, t])
            writer.writerow(row)
    doc = dict(meta or {})
    with open(_meta_path(path), "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_trajectory_csv(path):
    """Read a canonical frame table; returns (joints, coords, meta)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("%s: empty trajectory file" % path) from None
        rows = list(reader)
    if not header or header[0] != "frame":
        raise DataError("%s: first column must be 'frame'" % path)
    names = header[1:]
    if len(names) % 3:
        raise DataError("%s: coordinate columns not in x,y,z triples" % path)
    joints = []
    for k in range(0, len(names), 3):
        triple = names[k: k + 3]
        stems = [n.rsplit("_", 1) for n in triple]
        if any(len(s) != 2 for s in stems) \
                or [s[1] for s in stems] != list(_AXES) \
                or len({s[0] for s in stems}) != 1:
            raise DataError("%s: malformed coordinate triple %r"
                            % (path, triple))
        joints.append(stems[0][0])
    if not rows:
        raise DataError("%s: no frames" % path)
    try:
        coords = np.array([[float(v) for v in row[1:]] for row in rows]).T
    except ValueError as exc:
        raise DataError("%s: non-numeric value (%s)" % (path, exc)) from None
    if coords.shape[0] != 3 * len(joints):
        raise DataError("%s: ragged rows" % path)
    meta_file = _meta_path(path)
    meta = {}
    if os.path.exists(meta_file):
        with open(meta_file) as fh:
            meta = json.load(fh)
    return tuple(joints), coords, meta


def save_sequence(seq, path):
    write_trajectory_csv(path, seq.joints, seq.coords, meta={
        "kind": "sequence",
        "subject": seq.subject_label,
        "frame_rate": seq.frame_rate,
        "source": seq.source,
    })


def load_sequence(path):
    joints, coords, meta = read_trajectory_csv(path)
    return MotionSequence(
        joints=joints, coords=coords,
        frame_rate=meta.get("frame_rate") or 120.0,
        subject_label=meta.get("subject"),
        source=meta.get("source"))


def save_cycle(cycle, path):
    write_trajectory_csv(path, cycle.joints, cycle.coords, meta={
        "kind": "cycle",
        "subject": cycle.subject_label,
        "source": cycle.source,
        "cycle_index": cycle.cycle_index,
    })


def load_cycle(path):
    joints, coords, meta = read_trajectory_csv(path)
    return GaitCycle(
        joints=joints, coords=coords,
        subject_label=meta.get("subject"),
        source=meta.get("source"),
        cycle_index=int(meta.get("cycle_index") or 0))
