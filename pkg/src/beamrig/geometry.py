"""2D geometry primitives shared by the channel, sensing, and beam-manager modules.

Points are plain (x, y) tuples in meters; angles are radians in the scene
plane measured counter-clockwise from the +x axis.
"""

from __future__ import annotations

import math

Point = tuple[float, float]

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a > math.pi:
        a -= TWO_PI
    elif a <= -math.pi:
        a += TWO_PI
    return a


def angular_offset(a: float, b: float) -> float:
    """Absolute angular distance between two azimuths, in [0, pi]."""
    return abs(wrap_angle(a - b))


def azimuth(frm: Point, to: Point) -> float:
    """Azimuth of the direction from `frm` to `to`."""
    return math.atan2(to[1] - frm[1], to[0] - frm[0])


def distance(a: Point, b: Point) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    """Euclidean distance from point `p` to the closed segment a-b.

    Degenerate segments (a == b) reduce to point distance.
    """
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    seg_len_sq = dx * dx + dy * dy
    if seg_len_sq == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg_len_sq
    t = max(0.0, min(1.0, t))
    cx, cy = ax + t * dx, ay + t * dy
    return math.hypot(px - cx, py - cy)


def segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Point | None:
    """Intersection point of closed segments p1-p2 and q1-q2, or None.

    Collinear overlaps return None: the reflector model needs a single
    specular point, which a collinear graze does not define.
    """
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    denom = rx * sy - ry * sx
    if denom == 0.0:
        return None
    qpx, qpy = q1[0] - p1[0], q1[1] - p1[1]
    t = (qpx * sy - qpy * sx) / denom
    u = (qpx * ry - qpy * rx) / denom
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return (p1[0] + t * rx, p1[1] + t * ry)
    return None


def mirror_point(p: Point, a: Point, b: Point) -> Point:
    """Mirror point `p` across the infinite line through `a` and `b`."""
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    len_sq = dx * dx + dy * dy
    if len_sq == 0.0:
        raise ValueError("mirror line is degenerate (a == b)")
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / len_sq
    fx, fy = ax + t * dx, ay + t * dy
    return (2.0 * fx - p[0], 2.0 * fy - p[1])


def segment_disc_intersects(a: Point, b: Point, center: Point, radius: float) -> bool:
    """True iff the disc touches the segment; grazing tangency counts."""
    return point_segment_distance(center, a, b) <= radius
