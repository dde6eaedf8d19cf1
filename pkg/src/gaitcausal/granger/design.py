"""Lagged design matrix and flattened target assembly.

A trajectory record (a gait cycle or any object exposing ``joints`` and
``coords``) stores p joints as a (3p, n) array, rows grouped per joint in
x, y, z order. For model order d the regression predicts each coordinate
at frames d+1 .. n from the previous d frames of every joint:

* the target for joint i is the length 3(n-d) vector that interleaves its
  x, y, z coordinates frame by frame;
* the design matrix has one row per (frame, coordinate) pair in the same
  order, and one column block of width d per joint, holding that joint's
  matching coordinate at lags 1 .. d.

Both the design matrix and the targets for every joint share the exact
same row ordering, so one design matrix serves all p regressions.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, LagTooLarge, UnknownJoint


@dataclass(frozen=True)
class DesignMatrix:
    """Lagged predictor matrix shared by all per-joint regressions.

    values has shape (3*(n-d), p*d); the column block of joint j occupies
    columns [j*d, (j+1)*d), lag 1 first.
    """

    values: np.ndarray
    lag: int
    joints: tuple

    def __post_init__(self):
        if self.values.ndim != 2:
            raise DimensionMismatch("design values must be 2-d")
        if self.values.shape[1] != len(self.joints) * self.lag:
            raise DimensionMismatch(
                "design has %d columns, expected %d joints * lag %d"
                % (self.values.shape[1], len(self.joints), self.lag))

    @property
    def n_joints(self):
        return len(self.joints)

    def block_columns(self, joint):
        """Column slice of the named joint's lag block."""
        try:
            j = self.joints.index(joint)
        except ValueError:
            raise UnknownJoint("joint %r not in design" % (joint,)) from None
        return slice(j * self.lag, (j + 1) * self.lag)


@dataclass(frozen=True)
class FlatTarget:
    """Interleaved x,y,z prediction target for one joint."""

    values: np.ndarray
    joint: str
    lag: int


def _joints_coords(record):
    joints = tuple(record.joints)
    coords = np.asarray(record.coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] != 3 * len(joints):
        raise DimensionMismatch(
            "coords must be (3*p, n) with p=%d, got %r"
            % (len(joints), coords.shape))
    return joints, coords


def build_design_matrix(record, lag):
    """Assemble the lagged design matrix for a trajectory record.

    Parameters
    ----------
    record : object with ``joints`` (length p) and ``coords`` ((3p, n) array)
    lag : int, model order d >= 1

    Raises LagTooLarge when d >= n (no prediction rows remain).
    """
    if lag < 1:
        raise ValueError("lag must be >= 1")
    joints, coords = _joints_coords(record)
    p = len(joints)
    n = coords.shape[1]
    if n - lag < 1:
        raise LagTooLarge("lag %d leaves no prediction rows for n=%d frames"
                          % (lag, n))
    rows = 3 * (n - lag)
    values = np.empty((rows, p * lag))
    for k in range(1, lag + 1):
        window = coords[:, lag - k: n - k]
        for c in range(3):
            values[c::3, (k - 1)::lag] = window[c::3].T
    return DesignMatrix(values=values, lag=lag, joints=joints)


def flatten_target(record, joint, lag):
    """Interleaved x,y,z target vector of one joint for frames d+1 .. n."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    joints, coords = _joints_coords(record)
    n = coords.shape[1]
    if n - lag < 1:
        raise LagTooLarge("lag %d leaves no prediction rows for n=%d frames"
                          % (lag, n))
    try:
        i = joints.index(joint)
    except ValueError:
        raise UnknownJoint("joint %r not in record" % (joint,)) from None
    values = coords[3 * i: 3 * i + 3, lag:].T.ravel()
    return FlatTarget(values=values, joint=joint, lag=lag)
