"""Packing state: circles, partial layouts, the border ring and mass aggregates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DuplicateId,
    EmptyLayout,
    InvalidSpan,
    MissingCircle,
    TooSmall,
    ValidationError,
)
from .geometry import DEFAULT_TOL, Location, MainAreaPolygon, Point, point_in_main_area


@dataclass(frozen=True)
class CircleSpec:
    id: int
    radius: float
    mass: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValidationError(f"circle {self.id}: radius must be positive and finite, got {self.radius}")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValidationError(f"circle {self.id}: mass must be positive and finite, got {self.mass}")


@dataclass(frozen=True)
class ProblemInstance:
    circles: tuple[CircleSpec, ...]
    lam: float = 0.5
    beta: float = 0.5
    omega: float = 1.0
    name: str = ""
    by_id: Mapping[int, CircleSpec] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "circles", tuple(self.circles))
        if not self.circles:
            raise ValidationError("instance has no circles")
        by_id: dict[int, CircleSpec] = {}
        for c in self.circles:
            if c.id in by_id:
                raise ValidationError(f"duplicate circle id {c.id}")
            by_id[c.id] = c
        object.__setattr__(self, "by_id", by_id)
        for label, w in (("lambda", self.lam), ("beta", self.beta)):
            if not 0.0 < w < 1.0:
                raise ValidationError(f"{label} must lie in (0, 1), got {w}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValidationError(f"omega must be positive, got {self.omega}")

    @property
    def n(self) -> int:
        return len(self.circles)

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.circles]

    def radius(self, cid: int) -> float:
        return self.by_id[cid].radius

    def mass(self, cid: int) -> float:
        return self.by_id[cid].mass

    @property
    def total_mass(self) -> float:
        return math.fsum(c.mass for c in self.circles)

    def area_bound(self) -> float:
        """No feasible container can be smaller than this (total disk area)."""
        return math.sqrt(math.fsum(c.radius**2 for c in self.circles))


class Layout:
    """Centers of the circles placed so far, keyed by circle id."""

    __slots__ = ("positions",)

    def __init__(self, positions: Mapping[int, Sequence[float]] | None = None):
        self.positions: dict[int, Point] = {}
        for cid, p in (positions or {}).items():
            self.positions[cid] = Point(float(p[0]), float(p[1]))

    def place(self, cid: int, p: Sequence[float]) -> None:
        self.positions[cid] = Point(float(p[0]), float(p[1]))

    def remove(self, cid: int) -> Point:
        return self.positions.pop(cid)

    def copy(self) -> Layout:
        new = Layout()
        new.positions = dict(self.positions)
        return new

    def __contains__(self, cid) -> bool:
        return cid in self.positions

    def __getitem__(self, cid: int) -> Point:
        return self.positions[cid]

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __repr__(self) -> str:
        return f"Layout({self.positions!r})"


class Border:
    """Cyclic order of border circle ids.

    ``ring`` is kept exactly as produced by the ring operations; equality is
    cyclic (two borders are equal when one is a rotation of the other).
    """

    __slots__ = ("ring",)

    def __init__(self, ring: Iterable[int]):
        self.ring = tuple(ring)
        if len(set(self.ring)) != len(self.ring):
            raise DuplicateId(f"border repeats an id: {self.ring}")

    def __len__(self) -> int:
        return len(self.ring)

    def __iter__(self):
        return iter(self.ring)

    def __getitem__(self, i: int) -> int:
        return self.ring[i % len(self.ring)]

    def __contains__(self, cid) -> bool:
        return cid in self.ring

    def index(self, cid: int) -> int:
        return self.ring.index(cid)

    def canonical(self) -> tuple[int, ...]:
        if not self.ring:
            return ()
        i = self.ring.index(min(self.ring))
        return self.ring[i:] + self.ring[:i]

    def __eq__(self, other) -> bool:
        if isinstance(other, Border):
            return self.canonical() == other.canonical()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return "Border(" + "·".join(map(str, self.ring)) + ")"

    def span(self, p_index: int, q_index: int) -> int:
        """Number of forward steps from position p to position q."""
        return (q_index - p_index) % len(self.ring)

    def chain(self, p_index: int, q_index: int) -> list[int]:
        """Ids from position p forward to position q, both ends included."""
        t = len(self.ring)
        s = self.span(p_index, q_index)
        return [self.ring[(p_index + j) % t] for j in range(s + 1)]


class MassAggregate(NamedTuple):
    cm: Point
    total_mass: float


class FeasibilityReport(NamedTuple):
    overlaps: list[tuple[int, int, float]]  # (i, j, penetration depth)
    containment: list[tuple[int, float]]  # (i, excess beyond the container)
    f1: float
    f2: float
    radius: float

    @property
    def feasible(self) -> bool:
        return not self.overlaps and not self.containment


def center_of_mass(layout: Layout, circles: ProblemInstance) -> MassAggregate:
    if not layout.positions:
        raise EmptyLayout("no circle placed")
    sx = []
    sy = []
    sm = []
    for cid, (x, y) in layout.positions.items():
        m = circles.by_id[cid].mass
        sx.append(m * x)
        sy.append(m * y)
        sm.append(m)
    total = math.fsum(sm)
    return MassAggregate(Point(math.fsum(sx) / total, math.fsum(sy) / total), total)


def imbalance_f2(
    layout: Layout,
    container_center: Sequence[float],
    circles: ProblemInstance,
    omega: float = 1.0,
) -> float:
    """Magnitude of the rotating-mass imbalance about ``container_center``."""
    if not layout.positions:
        raise EmptyLayout("no circle placed")
    cx, cy = container_center[0], container_center[1]
    w2 = omega * omega
    fx = math.fsum(circles.by_id[i].mass * w2 * (x - cx) for i, (x, y) in layout.positions.items())
    fy = math.fsum(circles.by_id[i].mass * w2 * (y - cy) for i, (x, y) in layout.positions.items())
    return math.hypot(fx, fy)


def envelopment_radius(
    layout: Layout, center: Sequence[float], circles: ProblemInstance
) -> tuple[float, int]:
    """Smallest container radius about ``center`` holding every placed circle, and the id reaching it."""
    if not layout.positions:
        raise EmptyLayout("no circle placed")
    cx, cy = center[0], center[1]
    best_r = -math.inf
    best_id = None
    for cid in sorted(layout.positions):
        x, y = layout.positions[cid]
        r = circles.by_id[cid].radius + math.hypot(x - cx, y - cy)
        if r > best_r:
            best_r, best_id = r, cid
    return best_r, best_id


def objective(f1: float, f2: float, lam: float, beta: float) -> float:
    return lam * f1 + beta * f2


def max_span(t: int) -> int:
    return max(1, (t - 2) // 2)


def border_insert(border: Border, k: int, p_index: int, q_index: int, *, strict: bool = True) -> Border:
    """Insert ``k`` between positions p and q, dropping the ids strictly between them.

    With ``strict`` the forward span s = q - p must be at most ⌊(t-2)/2⌋
    (at least 1 for rings of three or four); otherwise any span leaving a ring
    of three or more ids is accepted.
    """
    t = len(border)
    if k in border:
        raise DuplicateId(f"circle {k} is already on the border")
    s = border.span(p_index, q_index)
    limit = max_span(t) if strict else t - 1
    if not 1 <= s <= limit:
        raise InvalidSpan(f"span {s} outside [1, {limit}] for a ring of {t}")
    ring = border.ring
    p = p_index % t
    if p + s < t:
        new = ring[: p + 1] + (k,) + ring[p + s :]
    else:
        # the dropped run wraps past the end of the ring
        q = p + s - t
        new = ring[q : p + 1] + (k,)
    return Border(new)


def border_delete(border: Border, p_index: int) -> Border:
    t = len(border)
    if t < 4:
        raise TooSmall(f"cannot delete from a ring of {t}")
    p = p_index % t
    return Border(border.ring[:p] + border.ring[p + 1 :])


def contact_pairs(border: Border) -> list[tuple[int, int]]:
    ring = border.ring
    t = len(ring)
    return [(ring[i], ring[(i + 1) % t]) for i in range(t)]


def main_area(layout: Layout, border: Border) -> MainAreaPolygon:
    return MainAreaPolygon(layout[cid] for cid in border.ring)


def check_border(
    layout: Layout, border: Border, circles: ProblemInstance, tol: float = DEFAULT_TOL
) -> list[str]:
    """Return a description of every violated border property (empty when valid)."""
    problems = []
    for cid in border.ring:
        if cid not in layout:
            problems.append(f"border id {cid} not placed")
    if problems:
        return problems
    for a, b in contact_pairs(border):
        reach = circles.radius(a) + circles.radius(b)
        gap = math.dist(layout[a], layout[b]) - reach
        if abs(gap) > tol * reach:
            problems.append(f"pair ({a},{b}) not in contact, gap {gap:.3e}")
    poly = main_area(layout, border)
    if not poly.is_simple(tol):
        problems.append("border polygon is not simple")
    for cid, p in layout.positions.items():
        if point_in_main_area(p, poly, tol) is Location.OUTSIDE:
            problems.append(f"center of {cid} outside the main area")
    return problems


def verify_solution(instance: ProblemInstance, solution, tol: float = 1e-6) -> FeasibilityReport:
    """Recheck a complete solution from raw coordinates.

    ``solution`` needs ``positions`` (id -> (x, y)), ``container_center`` and
    ``radius``. Overlap and containment use ``tol`` as an absolute slack.
    """
    positions = solution.positions
    for c in instance.circles:
        if c.id not in positions:
            raise MissingCircle(f"circle {c.id} has no position")
    cx, cy = solution.container_center
    ids = [c.id for c in instance.circles]

    overlaps = []
    for a_i, a in enumerate(ids):
        ax, ay = positions[a]
        ra = instance.by_id[a].radius
        for b in ids[a_i + 1 :]:
            bx, by = positions[b]
            depth = ra + instance.by_id[b].radius - math.sqrt((ax - bx) ** 2 + (ay - by) ** 2)
            if depth > tol:
                overlaps.append((a, b, depth))

    containment = []
    f1 = 0.0
    for a in ids:
        ax, ay = positions[a]
        reach = instance.by_id[a].radius + math.sqrt((ax - cx) ** 2 + (ay - cy) ** 2)
        f1 = max(f1, reach)
        if reach > solution.radius + tol:
            containment.append((a, reach - solution.radius))

    w2 = instance.omega**2
    fx = sum(instance.by_id[a].mass * w2 * (positions[a][0] - cx) for a in ids)
    fy = sum(instance.by_id[a].mass * w2 * (positions[a][1] - cy) for a in ids)
    return FeasibilityReport(overlaps, containment, f1, math.sqrt(fx * fx + fy * fy), solution.radius)
