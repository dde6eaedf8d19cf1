"""Forward kinematics: skeleton + channels -> world joint positions.

Rotation conventions (the Acclaim ones):

* an axis order string like "xyz" composes fixed-axis rotations with the
  first letter applied first, so E("xyz", ax, ay, az) = Rz @ Ry @ Rx;
* each bone's rest correction C comes from its axis triple; a bone's
  local motion is C @ E(motion angles) @ C^-1, accumulated down the tree;
* the root translation comes straight from its AMC channels in the
  declared channel order, and the root rotation uses the root
  orientation triple as its axis correction.

A joint's position is the distal end of its bone, so e.g. the tibia
joint sits at the ankle.
"""

import numpy as np

from ..errors import MalformedAmc
from .sequence import MotionSequence

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


def _single_axis(axis, angle):
    c = np.cos(angle)
    s = np.sin(angle)
    m = np.eye(3)
    if axis == "x":
        m[1, 1] = c
        m[1, 2] = -s
        m[2, 1] = s
        m[2, 2] = c
    elif axis == "y":
        m[0, 0] = c
        m[0, 2] = s
        m[2, 0] = -s
        m[2, 2] = c
    else:
        m[0, 0] = c
        m[0, 1] = -s
        m[1, 0] = s
        m[1, 1] = c
    return m


def euler_matrix(angles, order="xyz"):
    """Fixed-axis composition; angles given per axis position (x, y, z).

    The first letter of order is applied first:
    euler_matrix((ax, ay, az), "xyz") == Rz(az) @ Ry(ay) @ Rx(ax).
    """
    m = np.eye(3)
    for axis in order:
        m = _single_axis(axis, angles[_AXIS_INDEX[axis]]) @ m
    return m


def forward_kinematics(skeleton, motion, frame_rate=120.0,
                       subject_label=None, source=None):
    """World joint trajectories of a motion on a skeleton.

    Returns a MotionSequence over skeleton.joints. Raises MalformedAmc
    when a frame references a joint the skeleton lacks, misses a joint
    that declares dof, or carries the wrong channel count.
    """
    degrees = skeleton.degrees if motion.degrees is None else motion.degrees
    scale = np.pi / 180.0 if degrees else 1.0

    joints = skeleton.joints
    root = skeleton.root
    root_order = skeleton.dofs[root]
    p = len(joints)
    n = len(motion.frames)
    coords = np.empty((3 * p, n))

    corrections = {}
    corrections_inv = {}
    for name in joints:
        c = euler_matrix(np.asarray(skeleton.axes[name], dtype=float) * scale,
                         skeleton.axis_orders[name])
        corrections[name] = c
        corrections_inv[name] = c.T

    offsets = {name: skeleton.lengths[name] * skeleton.directions[name]
               for name in joints}
    order_index = {joint: k for k, joint in enumerate(joints)}

    for t, frame in enumerate(motion.frames):
        for name in frame:
            if name not in order_index:
                raise MalformedAmc("frame %d names unknown joint %r"
                                   % (t + 1, name))
        rotations = {}
        positions = {}

        channels = frame.get(root)
        if channels is None:
            raise MalformedAmc("frame %d lacks root channels" % (t + 1))
        if channels.shape[0] != len(root_order):
            raise MalformedAmc(
                "frame %d: root has %d channels, expected %d"
                % (t + 1, channels.shape[0], len(root_order)))
        translation = np.zeros(3)
        angles = np.zeros(3)
        for token, value in zip(root_order, channels):
            kind, axis = token[0], token[1]
            if kind == "t":
                translation[_AXIS_INDEX[axis]] = value
            else:
                angles[_AXIS_INDEX[axis]] = value * scale
        local = euler_matrix(angles, skeleton.axis_orders[root])
        rotations[root] = corrections[root] @ local @ corrections_inv[root]
        positions[root] = translation

        for name in joints[1:]:
            dof = skeleton.dofs[name]
            channels = frame.get(name)
            angles = np.zeros(3)
            if channels is None:
                if dof:
                    raise MalformedAmc("frame %d lacks joint %r"
                                       % (t + 1, name))
            else:
                if channels.shape[0] != len(dof):
                    raise MalformedAmc(
                        "frame %d: joint %r has %d channels, expected %d"
                        % (t + 1, name, channels.shape[0], len(dof)))
                for token, value in zip(dof, channels):
                    angles[_AXIS_INDEX[token[1]]] = value * scale
            local = corrections[name] @ euler_matrix(
                angles, skeleton.axis_orders[name]) @ corrections_inv[name]
            parent = skeleton.parents[name]
            rotations[name] = rotations[parent] @ local
            positions[name] = positions[parent] \
                + rotations[name] @ offsets[name]

        for name, k in order_index.items():
            coords[3 * k: 3 * k + 3, t] = positions[name]

    return MotionSequence(joints=joints, coords=coords,
                          frame_rate=frame_rate,
                          subject_label=subject_label, source=source)
