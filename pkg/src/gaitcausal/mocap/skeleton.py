"""Acclaim ASF skeleton parsing.

The parser is line-oriented and reports the 1-based line number of the
first offending line in every error. Keywords are matched case
insensitively; bone names keep their case. ``#`` starts a comment.

Angles (bone axis triples, root orientation) are stored exactly as
written; whether they are degrees is recorded in ``Skeleton.degrees``
from the ``:units angle`` entry, and the conversion happens in forward
kinematics.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import MalformedAsf

_ROOT_TOKENS = {"tx", "ty", "tz", "rx", "ry", "rz"}
_DOF_TOKENS = {"rx", "ry", "rz"}


@dataclass(frozen=True)
class Skeleton:
    """Rigid skeleton: a tree of bones hanging off a six-dof root.

    joints lists the root first and then bones in file order; all other
    fields are keyed by joint name. directions are unit vectors in the
    parent-independent rest frame, axes are the rest-orientation Euler
    triples exactly as written in the file (see ``degrees``).
    """

    name: str
    joints: tuple
    parents: dict
    directions: dict
    lengths: dict
    axes: dict
    axis_orders: dict
    dofs: dict
    limits: dict
    degrees: bool = True
    root_position: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @property
    def root(self):
        return self.joints[0]

    @property
    def n_joints(self):
        return len(self.joints)

    def children(self, name):
        return tuple(j for j in self.joints if self.parents.get(j) == name)


class _Cursor:
    """Comment-stripped, tokenized lines with 1-based numbering."""

    def __init__(self, text):
        self.rows = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            tokens = body.split()
            if tokens:
                self.rows.append((lineno, tokens))
        self.pos = 0

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def next(self):
        row = self.peek()
        if row is not None:
            self.pos += 1
        return row


def _floats(tokens, count, lineno, what):
    if len(tokens) < count:
        raise MalformedAsf("%s needs %d numbers" % (what, count), lineno)
    try:
        return [float(t) for t in tokens[:count]]
    except ValueError:
        raise MalformedAsf("%s has a non-numeric value" % what,
                           lineno) from None


def parse_asf(source):
    """Parse an ASF document (string or file-like) into a Skeleton."""
    text = source.read() if hasattr(source, "read") else source
    cur = _Cursor(text)

    name = ""
    degrees = True
    root = None
    bones = []
    hierarchy_rows = []
    seen_sections = set()

    while True:
        row = cur.next()
        if row is None:
            break
        lineno, tokens = row
        head = tokens[0].lower()
        if not head.startswith(":"):
            raise MalformedAsf("expected a section keyword, got %r"
                               % tokens[0], lineno)
        section = head[1:]
        seen_sections.add(section)
        if section == "name":
            name = tokens[1] if len(tokens) > 1 else ""
        elif section == "units":
            degrees = _parse_units(cur, degrees)
        elif section == "root":
            root = _parse_root(cur)
        elif section == "bonedata":
            bones = _parse_bonedata(cur)
        elif section == "hierarchy":
            hierarchy_rows = _parse_hierarchy(cur)
        elif section in ("version", "documentation"):
            _skip_section(cur)
        else:
            _skip_section(cur)

    for required in ("root", "bonedata", "hierarchy"):
        if required not in seen_sections:
            raise MalformedAsf("missing :%s section" % required)
    if root is None:
        raise MalformedAsf("empty :root section")

    return _assemble(name, degrees, root, bones, hierarchy_rows)


def _at_section(cur):
    row = cur.peek()
    return row is not None and row[1][0].startswith(":")


def _skip_section(cur):
    while cur.peek() is not None and not _at_section(cur):
        cur.next()


def _parse_units(cur, degrees):
    while cur.peek() is not None and not _at_section(cur):
        lineno, tokens = cur.next()
        key = tokens[0].lower()
        if key == "angle":
            if len(tokens) < 2 or tokens[1].lower() not in ("deg", "rad"):
                raise MalformedAsf("angle unit must be deg or rad", lineno)
            degrees = tokens[1].lower() == "deg"
    return degrees


def _parse_root(cur):
    root = {
        "order": ("tx", "ty", "tz", "rx", "ry", "rz"),
        "axis_order": "xyz",
        "position": np.zeros(3),
        "orientation": np.zeros(3),
    }
    while cur.peek() is not None and not _at_section(cur):
        lineno, tokens = cur.next()
        key = tokens[0].lower()
        if key == "order":
            order = tuple(t.lower() for t in tokens[1:])
            bad = [t for t in order if t not in _ROOT_TOKENS]
            if bad or len(order) != 6 or len(set(order)) != 6:
                raise MalformedAsf("root order must list the six channels "
                                   "tx ty tz rx ry rz", lineno)
            root["order"] = order
        elif key == "axis":
            if len(tokens) < 2:
                raise MalformedAsf("root axis needs an order token", lineno)
            root["axis_order"] = _axis_order(tokens[1], lineno)
        elif key == "position":
            root["position"] = np.array(_floats(tokens[1:], 3, lineno,
                                                "root position"))
        elif key == "orientation":
            root["orientation"] = np.array(_floats(tokens[1:], 3, lineno,
                                                   "root orientation"))
        else:
            raise MalformedAsf("unknown root field %r" % tokens[0], lineno)
    return root


def _axis_order(token, lineno):
    order = token.lower()
    if sorted(order) != ["x", "y", "z"]:
        raise MalformedAsf("axis order must be a permutation of XYZ, got %r"
                           % token, lineno)
    return order


def _parse_bonedata(cur):
    bones = []
    while cur.peek() is not None and not _at_section(cur):
        lineno, tokens = cur.next()
        if tokens[0].lower() != "begin":
            raise MalformedAsf("expected 'begin' in :bonedata, got %r"
                               % tokens[0], lineno)
        bones.append(_parse_bone(cur, lineno))
    return bones


def _parse_bone(cur, begin_line):
    bone = {
        "name": None,
        "direction": None,
        "length": None,
        "axis": np.zeros(3),
        "axis_order": "xyz",
        "dof": (),
        "limits": (),
        "line": begin_line,
    }
    pending_limits = 0
    limits = []
    while True:
        row = cur.next()
        if row is None:
            raise MalformedAsf("unterminated bone block", begin_line)
        lineno, tokens = row
        key = tokens[0].lower()
        if pending_limits and (key.startswith("(") or key[0].isdigit()
                               or key[0] == "-"):
            pending_limits = _consume_limits(tokens, limits, pending_limits,
                                             lineno)
            continue
        if key == "end":
            break
        if key == "id":
            continue
        if key == "name":
            if len(tokens) < 2:
                raise MalformedAsf("bone name missing", lineno)
            bone["name"] = tokens[1]
        elif key == "direction":
            bone["direction"] = np.array(_floats(tokens[1:], 3, lineno,
                                                 "direction"))
        elif key == "length":
            bone["length"] = _floats(tokens[1:], 1, lineno, "length")[0]
        elif key == "axis":
            vals = _floats(tokens[1:], 3, lineno, "axis")
            bone["axis"] = np.array(vals)
            if len(tokens) >= 5:
                bone["axis_order"] = _axis_order(tokens[4], lineno)
        elif key == "dof":
            dof = tuple(t.lower() for t in tokens[1:])
            bad = [t for t in dof if t not in _DOF_TOKENS]
            if bad:
                raise MalformedAsf("unsupported dof token %r" % bad[0],
                                   lineno)
            if len(set(dof)) != len(dof):
                raise MalformedAsf("duplicate dof token", lineno)
            bone["dof"] = dof
        elif key == "limits":
            pending_limits = len(bone["dof"])
            if pending_limits == 0:
                raise MalformedAsf("limits before dof", lineno)
            pending_limits = _consume_limits(tokens[1:], limits,
                                             pending_limits, lineno)
        else:
            raise MalformedAsf("unknown bone field %r" % tokens[0], lineno)
    if bone["name"] is None:
        raise MalformedAsf("bone without a name", begin_line)
    if bone["direction"] is None or bone["length"] is None:
        raise MalformedAsf("bone %r lacks direction or length"
                           % bone["name"], begin_line)
    if pending_limits:
        raise MalformedAsf("bone %r: limits do not cover every dof"
                           % bone["name"], begin_line)
    bone["limits"] = tuple(limits)
    return bone


def _consume_limits(tokens, limits, pending, lineno):
    text = " ".join(tokens)
    parts = [p for p in text.replace("(", " ( ").replace(")", " ) ").split()]
    vals = []
    for part in parts:
        if part in ("(", ")"):
            continue
        try:
            vals.append(float(part))
        except ValueError:
            if part.lower() in ("inf", "-inf"):
                vals.append(float(part))
            else:
                raise MalformedAsf("bad limit value %r" % part,
                                   lineno) from None
    if len(vals) % 2:
        raise MalformedAsf("limit pair incomplete", lineno)
    for k in range(0, len(vals), 2):
        if pending == 0:
            raise MalformedAsf("more limit pairs than dof entries", lineno)
        limits.append((vals[k], vals[k + 1]))
        pending -= 1
    return pending


def _parse_hierarchy(cur):
    rows = []
    row = cur.next()
    if row is None or row[1][0].lower() != "begin":
        raise MalformedAsf("hierarchy must start with 'begin'",
                           None if row is None else row[0])
    while True:
        row = cur.next()
        if row is None:
            raise MalformedAsf("unterminated hierarchy")
        lineno, tokens = row
        if tokens[0].lower() == "end":
            break
        rows.append((lineno, tokens))
    return rows


def _assemble(name, degrees, root, bones, hierarchy_rows):
    root_name = "root"
    joints = [root_name]
    directions = {root_name: np.zeros(3)}
    lengths = {root_name: 0.0}
    axes = {root_name: np.asarray(root["orientation"], dtype=float)}
    axis_orders = {root_name: root["axis_order"]}
    dofs = {root_name: tuple(root["order"])}
    limits = {root_name: ()}
    parents = {root_name: None}

    for bone in bones:
        bname = bone["name"]
        if bname in directions:
            raise MalformedAsf("duplicate bone name %r" % bname, bone["line"])
        direction = bone["direction"]
        norm = float(np.linalg.norm(direction))
        if bone["length"] > 0:
            if abs(norm - 1.0) > 1e-6:
                raise MalformedAsf(
                    "bone %r direction norm %.8f is not unit"
                    % (bname, norm), bone["line"])
            direction = direction / norm
        elif norm > 0:
            direction = direction / norm
        joints.append(bname)
        directions[bname] = direction
        lengths[bname] = float(bone["length"])
        axes[bname] = bone["axis"]
        axis_orders[bname] = bone["axis_order"]
        dofs[bname] = bone["dof"]
        limits[bname] = bone["limits"]

    for lineno, tokens in hierarchy_rows:
        parent = tokens[0]
        if parent not in directions:
            raise MalformedAsf("hierarchy parent %r is not a joint"
                               % parent, lineno)
        for child in tokens[1:]:
            if child not in directions:
                raise MalformedAsf("hierarchy child %r is not a bone"
                                   % child, lineno)
            if child == root_name:
                raise MalformedAsf("root cannot be a child", lineno)
            if child in parents:
                raise MalformedAsf("bone %r assigned two parents"
                                   % child, lineno)
            parents[child] = parent

    unattached = [j for j in joints if j != root_name and j not in parents]
    if unattached:
        raise MalformedAsf("bones not attached to the hierarchy: %s"
                           % ", ".join(unattached))
    # with unique parents a cycle cannot reach the root; walk to verify
    reached = {root_name}
    frontier = [root_name]
    while frontier:
        cur_name = frontier.pop()
        for child, parent in parents.items():
            if parent == cur_name and child not in reached:
                reached.add(child)
                frontier.append(child)
    loose = [j for j in joints if j not in reached]
    if loose:
        raise MalformedAsf("hierarchy does not reach: %s" % ", ".join(loose))

    return Skeleton(
        name=name, joints=tuple(joints), parents=parents,
        directions=directions, lengths=lengths, axes=axes,
        axis_orders=axis_orders, dofs=dofs, limits=limits,
        degrees=degrees, root_position=np.asarray(root["position"],
                                                  dtype=float))


def load_skeleton(path):
    with open(path) as fh:
        return parse_asf(fh)
