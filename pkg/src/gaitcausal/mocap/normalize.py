"""Pose normalization: root-centred, heading-aligned coordinates.

The walker's frame is built from the root trajectory before centring:
its mean per-frame displacement, projected onto the horizontal plane
(world Y up), points along the new +Z axis; +Y stays the world vertical;
+X completes the right-handed frame. Every joint is then expressed
relative to the root in that frame, so the output has the root pinned at
the origin and the walking direction along +Z regardless of where and in
which horizontal direction the subject walked.

A sequence whose root is already pinned at the origin carries no heading
information and is returned unchanged (this makes the operation
idempotent); a sequence whose root sits away from the origin but does
not displace horizontally (standing still, walking in place) raises
DegenerateHeading.
"""

import numpy as np

from ..errors import DegenerateHeading
from .sequence import MotionSequence

_EPS = 1e-9


def normalize_pose(seq, root_joint="root"):
    """Root-centred, heading-aligned copy of a motion sequence."""
    root = seq.joint_coords(root_joint)
    n = seq.n_frames

    if float(np.linalg.norm(root, axis=0).max()) <= _EPS:
        return MotionSequence(joints=seq.joints, coords=seq.coords.copy(),
                              frame_rate=seq.frame_rate,
                              subject_label=seq.subject_label,
                              source=seq.source)

    disp = (root[:, -1] - root[:, 0]) / (n - 1)
    heading = np.array([disp[0], 0.0, disp[2]])
    norm = float(np.linalg.norm(heading))
    if norm < _EPS:
        raise DegenerateHeading(
            "root has no net horizontal displacement (|mean step| = %.3e)"
            % norm)
    z_axis = heading / norm
    y_axis = np.array([0.0, 1.0, 0.0])
    x_axis = np.cross(y_axis, z_axis)
    rot = np.vstack([x_axis, y_axis, z_axis])

    p = seq.n_joints
    centred = seq.coords.reshape(p, 3, n) - root[None, :, :]
    rotated = np.einsum("ab,pbn->pan", rot, centred)
    return MotionSequence(joints=seq.joints,
                          coords=rotated.reshape(3 * p, n),
                          frame_rate=seq.frame_rate,
                          subject_label=seq.subject_label,
                          source=seq.source)
