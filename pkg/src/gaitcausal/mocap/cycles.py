"""Gait cycle segmentation and resampling.

Heel strikes appear as local maxima of the horizontal distance between
the two ankles (the legs are maximally split at foot contact). A gait
cycle runs from one strike to the next strike of the same leg; the leg
is identified by the sign of the left-minus-right ankle coordinate along
the walking axis at the strike frame. Each cycle is linearly resampled
to a fixed frame count, the root (constant zero after normalization) and
any other joint whose within-cycle variance is negligible are dropped,
and the result is a list of GaitCycle records.

Joint removal is decided jointly across the cycles of one call: a joint
static in any cycle is dropped from all of them, so the returned cycles
always share one joint tuple.
"""

import numpy as np
import scipy.signal

from ..errors import EmptyDataset, NoCycleDetected
from .sequence import GaitCycle

_STATIC_VARIANCE = 1e-10


def segment_gait_cycles(seq, fixed_length=156, left_ankle="ltibia",
                        right_ankle="rtibia", exclude_joints=(),
                        static_variance=_STATIC_VARIANCE,
                        prominence_fraction=0.1):
    """Cut a normalized sequence into fixed-length gait cycles.

    Parameters
    ----------
    seq : MotionSequence, already root-centred and heading-aligned
    fixed_length : frames per returned cycle (resampled)
    left_ankle, right_ankle : joint names used for strike detection
    exclude_joints : joints to drop regardless of variance
    static_variance : per-joint variance (summed over x,y,z) below which
        a joint counts as static
    prominence_fraction : required peak prominence, as a fraction of the
        ankle-split signal's range

    Raises NoCycleDetected when no same-leg strike pair exists.
    """
    if fixed_length < 2:
        raise ValueError("fixed_length must be >= 2")
    left = seq.joint_coords(left_ankle)
    right = seq.joint_coords(right_ankle)
    for name in exclude_joints:
        seq.joint_index(name)

    split = np.hypot(left[0] - right[0], left[2] - right[2])
    span = float(split.max() - split.min())
    if span <= 0.0:
        raise NoCycleDetected("ankle split signal is constant")
    peaks, _ = scipy.signal.find_peaks(
        split, prominence=prominence_fraction * span)
    if peaks.size < 2:
        raise NoCycleDetected("fewer than two heel strikes found")

    lead = np.sign(left[2, peaks] - right[2, peaks])
    bounds = []
    for a in range(peaks.size):
        for b in range(a + 1, peaks.size):
            if lead[b] == lead[a]:
                bounds.append((int(peaks[a]), int(peaks[b])))
                break
    if not bounds:
        raise NoCycleDetected("no two strikes of the same leg")

    excluded = set(exclude_joints)
    resampled = []
    for start, stop in bounds:
        src = np.arange(start, stop + 1, dtype=float)
        dst = np.linspace(start, stop, fixed_length)
        window = seq.coords[:, start:stop + 1]
        cycle = np.empty((seq.coords.shape[0], fixed_length))
        for r in range(window.shape[0]):
            cycle[r] = np.interp(dst, src, window[r])
        resampled.append(cycle)

    p = seq.n_joints
    static = set()
    for cycle in resampled:
        variance = cycle.var(axis=1).reshape(p, 3).sum(axis=1)
        static.update(np.nonzero(variance < static_variance)[0].tolist())
    keep = [k for k, name in enumerate(seq.joints)
            if k not in static and name not in excluded]
    if not keep:
        raise EmptyDataset("no joints remain after static removal")
    keep_rows = np.concatenate([[3 * k, 3 * k + 1, 3 * k + 2] for k in keep])
    kept_joints = tuple(seq.joints[k] for k in keep)

    out = []
    for index, cycle in enumerate(resampled):
        out.append(GaitCycle(
            joints=kept_joints,
            coords=cycle[keep_rows],
            subject_label=seq.subject_label,
            source=seq.source,
            cycle_index=index,
        ))
    return out
