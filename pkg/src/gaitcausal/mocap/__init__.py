"""Motion capture ingestion: ASF/AMC, kinematics, normalization, cycles."""

from .sequence import (
    GaitCycle,
    MotionSequence,
    load_cycle,
    load_sequence,
    read_trajectory_csv,
    save_cycle,
    save_sequence,
    write_trajectory_csv,
)
from .skeleton import Skeleton, load_skeleton, parse_asf
from .amc import AmcMotion, load_motion, parse_amc
from .kinematics import euler_matrix, forward_kinematics
from .normalize import normalize_pose
from .cycles import segment_gait_cycles

__all__ = [
    "MotionSequence",
    "GaitCycle",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "save_sequence",
    "load_sequence",
    "save_cycle",
    "load_cycle",
    "Skeleton",
    "parse_asf",
    "load_skeleton",
    "AmcMotion",
    "parse_amc",
    "load_motion",
    "euler_matrix",
    "forward_kinematics",
    "normalize_pose",
    "segment_gait_cycles",
]
