"""Acclaim AMC motion parsing.

parse_amc keeps channel values exactly as written (no unit conversion),
so a parse/write round trip preserves every value bit for bit; forward
kinematics applies the degree conversion using the skeleton's units,
unless the AMC's own :DEGREES / :RADIANS header says otherwise.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import MalformedAmc


@dataclass(frozen=True)
class AmcMotion:
    """Per-frame joint channels, frame order preserved.

    frames is a list of dicts mapping joint name -> float array of the
    channel values on that joint's line. degrees is True/False when the
    file declared its angle unit, None otherwise.
    """

    frames: list
    degrees: bool = None

    @property
    def n_frames(self):
        return len(self.frames)


def parse_amc(source):
    """Parse an AMC document (string or file-like) into AmcMotion."""
    text = source.read() if hasattr(source, "read") else source
    degrees = None
    frames = []
    current = None
    expected = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith(":"):
            head = body[1:].strip().lower()
            if head == "degrees":
                degrees = True
            elif head == "radians":
                degrees = False
            # other headers (:fully-specified, ...) carry no data
            continue
        tokens = body.split()
        if len(tokens) == 1 and _is_int(tokens[0]):
            index = int(tokens[0])
            if expected is None:
                expected = index
            elif index != expected:
                raise MalformedAmc(
                    "frame index %d after frame %d (must be consecutive)"
                    % (index, expected - 1), lineno)
            expected += 1
            current = {}
            frames.append(current)
            continue
        if current is None:
            raise MalformedAmc("channel data before any frame index", lineno)
        joint = tokens[0]
        if joint in current:
            raise MalformedAmc("joint %r repeated within a frame" % joint,
                               lineno)
        try:
            values = np.array([float(t) for t in tokens[1:]])
        except ValueError:
            raise MalformedAmc("non-numeric channel value for joint %r"
                               % joint, lineno) from None
        current[joint] = values
    if not frames:
        raise MalformedAmc("no frames in document")
    return AmcMotion(frames=frames, degrees=degrees)


def _is_int(token):
    if token.startswith(("+", "-")):
        token = token[1:]
    return token.isdigit()


def load_motion(path):
    with open(path) as fh:
        return parse_amc(fh)
