"""Planar primitives used by the placement routines.

Everything here is a pure function of its arguments. Coordinates are plain
floats in the same length unit as the radii.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateInput, EmptySet, InvalidPolygon

DEFAULT_TOL = 1e-9


class Point(NamedTuple):
    x: float
    y: float


class TangencyCandidates(NamedTuple):
    count: int
    points: tuple[Point, ...]


class Location(enum.Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


class MainAreaPolygon:
    """Closed polygon through the centers of the border circles, in ring order."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Point]):
        self.vertices = tuple(Point(float(v[0]), float(v[1])) for v in vertices)
        if len(self.vertices) < 3:
            raise InvalidPolygon(f"polygon needs at least 3 vertices, got {len(self.vertices)}")

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def signed_area(self) -> float:
        return signed_area(self.vertices)

    def is_simple(self, tol: float = DEFAULT_TOL) -> bool:
        """True when non-adjacent edges never meet (O(t^2) scan)."""
        edges = self.edges()
        t = len(edges)
        for i in range(t):
            for j in range(i + 1, t):
                if j == i + 1 or (i == 0 and j == t - 1):
                    continue
                if segments_intersect(*edges[i], *edges[j], tol):
                    return False
        return True


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def tangency_candidates(
    r_k: float,
    p_center: Sequence[float],
    r_p: float,
    q_center: Sequence[float],
    r_q: float,
    tol: float = DEFAULT_TOL,
) -> TangencyCandidates:
    """Centers where a circle of radius ``r_k`` touches both given circles externally.

    Solves the pair of equations |X - P| = r_k + r_p, |X - Q| = r_k + r_q by
    intersecting the radical line of the two offset circles with the first one.
    Distances within ``tol * (a + b)`` of a solvability limit yield a single
    (double) root.
    """
    if r_k <= 0 or r_p <= 0 or r_q <= 0:
        raise DegenerateInput("radii must be positive")
    px, py = float(p_center[0]), float(p_center[1])
    qx, qy = float(q_center[0]), float(q_center[1])
    dx, dy = qx - px, qy - py
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise DegenerateInput("coincident centers")
    a = r_k + r_p
    b = r_k + r_q
    band = tol * (a + b)
    ux, uy = dx / d, dy / d

    if d > a + b + band or d < abs(a - b) - band:
        return TangencyCandidates(0, ())
    if d >= a + b - band:
        # outer limit: the root sits on the segment PQ
        along = a * d / (a + b)
        return TangencyCandidates(1, (Point(px + along * ux, py + along * uy),))
    if d <= abs(a - b) + band:
        sign = 1.0 if a > b else -1.0
        return TangencyCandidates(1, (Point(px + sign * a * ux, py + sign * a * uy),))

    along = (d * d + a * a - b * b) / (2.0 * d)
    h = math.sqrt(max(a * a - along * along, 0.0))
    mx, my = px + along * ux, py + along * uy
    # left of P->Q first
    return TangencyCandidates(
        2,
        (Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)),
    )


def circles_overlap(
    a_center: Sequence[float],
    r_a: float,
    b_center: Sequence[float],
    r_b: float,
    tol: float = DEFAULT_TOL,
) -> bool:
    """True when the disks overlap; contacts within ``tol`` (relative to r_a + r_b) are legal."""
    reach = r_a + r_b
    return distance(a_center, b_center) < reach - tol * reach


def centroid(points: Iterable[Sequence[float]]) -> Point:
    pts = list(points)
    if not pts:
        raise EmptySet("centroid of an empty set")
    n = len(pts)
    return Point(math.fsum(p[0] for p in pts) / n, math.fsum(p[1] for p in pts) / n)


def signed_area(vertices: Sequence[Sequence[float]]) -> float:
    """Shoelace area; positive for counterclockwise vertex order."""
    n = len(vertices)
    acc = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def cross(o: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def point_segment_distance(p: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    ax, ay = a[0], a[1]
    vx, vy = b[0] - ax, b[1] - ay
    wx, wy = p[0] - ax, p[1] - ay
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(wx, wy)
    s = min(1.0, max(0.0, (wx * vx + wy * vy) / vv))
    return math.hypot(wx - s * vx, wy - s * vy)


def segments_intersect(a0, a1, b0, b1, tol: float = DEFAULT_TOL) -> bool:
    """Closed-segment intersection test, touching within ``tol`` counts."""
    d1 = cross(b0, b1, a0)
    d2 = cross(b0, b1, a1)
    d3 = cross(a0, a1, b0)
    d4 = cross(a0, a1, b1)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return (
        point_segment_distance(a0, b0, b1) <= tol
        or point_segment_distance(a1, b0, b1) <= tol
        or point_segment_distance(b0, a0, a1) <= tol
        or point_segment_distance(b1, a0, a1) <= tol
    )


def point_in_main_area(
    p: Sequence[float],
    poly: MainAreaPolygon | Sequence[Sequence[float]],
    tol: float = DEFAULT_TOL,
) -> Location:
    """Classify ``p`` against a simple polygon (crossing-number rule)."""
    vertices = poly.vertices if isinstance(poly, MainAreaPolygon) else poly
    n = len(vertices)
    if n < 3:
        raise InvalidPolygon(f"polygon needs at least 3 vertices, got {n}")
    x, y = p[0], p[1]
    inside = False
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if point_segment_distance(p, a, b) <= tol:
            return Location.ON_BOUNDARY
        ay, by = a[1], b[1]
        if (ay > y) != (by > y):
            x_cross = a[0] + (y - ay) * (b[0] - a[0]) / (by - ay)
            if x < x_cross:
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE
