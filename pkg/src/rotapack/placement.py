"""Placement primitives: the four-circle seed, tangent placement on the border and gap filling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import NoFeasibleTangentPlacement, Unsolvable
from .geometry import (
    DEFAULT_TOL,
    Location,
    MainAreaPolygon,
    Point,
    centroid,
    cross,
    point_in_main_area,
    tangency_candidates,
)
from .layout import Border, CircleSpec, Layout, ProblemInstance, border_insert, main_area


@dataclass
class EvalCounter:
    """Counts candidate positions checked for overlap."""

    candidates: int = 0


class ExternalPlacementResult(NamedTuple):
    position: Point
    p_index: int
    q_index: int
    walk_steps: int = 0


class InternalPlacementResult(NamedTuple):
    position: Point
    circle: int


def overlapping_ids(
    pos: Sequence[float],
    radius: float,
    layout: Layout,
    circles: ProblemInstance,
    tol: float = DEFAULT_TOL,
) -> list[int]:
    x, y = pos[0], pos[1]
    by_id = circles.by_id
    hits = []
    for cid, (cx, cy) in layout.positions.items():
        reach = radius + by_id[cid].radius
        if math.hypot(x - cx, y - cy) < reach - tol * reach:
            hits.append(cid)
    return hits


def initial_layout(
    first_four: Sequence[CircleSpec],
    theta: float = 0.0,
    tol: float = DEFAULT_TOL,
    circles: ProblemInstance | None = None,
) -> tuple[Layout, Border]:
    """Seed layout: a1 at the origin, a2 touching it at angle theta, a3 and a4 on either side.

    a3 takes the tangent solution left of a1->a2 and a4 the one to the right,
    giving the border a1·a3·a2·a4. When a4's mirror spot would overlap a3
    (a small a1 between large neighbours) a4 goes to the most central
    non-overlapping tangent spot on any edge of the ring a1·a3·a2.
    """
    if len(first_four) != 4 or len({c.id for c in first_four}) != 4:
        raise ValueError("initial_layout needs four distinct circles")
    c1, c2, c3, c4 = first_four
    layout = Layout()
    layout.place(c1.id, (0.0, 0.0))
    reach = c1.radius + c2.radius
    layout.place(c2.id, (reach * math.cos(theta), reach * math.sin(theta)))

    left = tangency_candidates(c3.radius, layout[c1.id], c1.radius, layout[c2.id], c2.radius, tol)
    layout.place(c3.id, left.points[0])
    right = tangency_candidates(c4.radius, layout[c1.id], c1.radius, layout[c2.id], c2.radius, tol)
    spot = right.points[-1]

    if circles is None:
        circles = ProblemInstance(tuple(first_four))
    if not overlapping_ids(spot, c4.radius, layout, circles, tol):
        layout.place(c4.id, spot)
        return layout, Border((c1.id, c3.id, c2.id, c4.id))

    # fall back to the most central non-overlapping tangent spot on any edge of a1·a3·a2
    ring = (c1.id, c3.id, c2.id)
    tri = MainAreaPolygon(layout[c] for c in ring)
    ref = centroid(layout.positions.values())
    best = None
    for j in range(3):
        a, b = ring[j], ring[(j + 1) % 3]
        cands = tangency_candidates(c4.radius, layout[a], circles.radius(a), layout[b], circles.radius(b), tol)
        for spot in cands.points:
            if point_in_main_area(spot, tri, tol) is Location.INSIDE:
                continue
            if overlapping_ids(spot, c4.radius, layout, circles, tol):
                continue
            key = (math.hypot(spot[0] - ref[0], spot[1] - ref[1]), j)
            if best is None or key < best[0]:
                best = (key, j, spot)
    if best is None:
        raise NoFeasibleTangentPlacement(f"no spot for circle {c4.id} next to the first three")
    _, j, spot = best
    layout.place(c4.id, spot)
    border = Border(ring[: j + 1] + (c4.id,) + ring[j + 1 :])
    return layout, border


def _pick_outer(cands, poly: MainAreaPolygon, p_pos, q_pos, placed_centroid, tol):
    """Choose the candidate outside the main area for the consecutive edge p->q."""
    outside = [c for c in cands if point_in_main_area(c, poly, tol) is not Location.INSIDE]
    if not outside:
        return None
    if len(outside) == 1:
        return outside[0]
    # both clear of the interior: take the one on the exterior side of edge p->q
    orient = 1.0 if poly.signed_area() > 0 else -1.0
    side = [orient * cross(p_pos, q_pos, c) for c in outside]
    if side[0] != side[1]:
        return outside[0] if side[0] < side[1] else outside[1]
    return _furthest(outside, placed_centroid)


def _furthest(cands, ref):
    return max(cands, key=lambda c: (math.hypot(c[0] - ref[0], c[1] - ref[1]), c[1], c[0]))


def external_placement(
    k: CircleSpec,
    pair: tuple[int, int],
    layout: Layout,
    border: Border,
    circles: ProblemInstance,
    tol: float = DEFAULT_TOL,
    counter: EvalCounter | None = None,
) -> ExternalPlacementResult:
    """Place ``k`` tangent to a border contact pair, sliding outward past overlapped border circles.

    ``pair`` holds two consecutive ring positions. If the first tangent spot
    overlaps something, the touching pair is widened to the overlapped border
    circles furthest back from p and furthest ahead of q, and the tangent spot
    furthest from the centroid of the layout is taken; this repeats at most
    ``len(border)`` times.
    """
    t = len(border)
    p, q = pair[0] % t, pair[1] % t
    if (p + 1) % t != q:
        if (q + 1) % t == p:
            p, q = q, p
        else:
            raise ValueError(f"positions {pair} are not consecutive on the border")
    poly = main_area(layout, border)
    rk = k.radius
    by_id = circles.by_id
    ring = border.ring
    placed_centroid = centroid(layout.positions.values())

    ip, iq = ring[p], ring[q]
    cands = tangency_candidates(rk, layout[ip], by_id[ip].radius, layout[iq], by_id[iq].radius, tol)
    if cands.count == 0:
        raise Unsolvable(f"circle {k.id} cannot touch both {ip} and {iq}")
    pos = _pick_outer(cands.points, poly, layout[ip], layout[iq], placed_centroid, tol)
    if pos is None:
        raise NoFeasibleTangentPlacement(f"no tangent spot for {k.id} outside the main area at ({ip},{iq})")
    if counter is not None:
        counter.candidates += 1
    hits = overlapping_ids(pos, rk, layout, circles, tol)
    if not hits:
        return ExternalPlacementResult(pos, p, q, 0)

    index_of = {cid: j for j, cid in enumerate(ring)}
    for step in range(1, t + 1):
        s = (q - p) % t
        back = ahead = 0
        for cid in hits:
            j = index_of.get(cid)
            if j is None:
                continue
            fo = (j - q) % t
            bo = (p - j) % t
            if fo + bo != t - s:
                continue  # strictly between p and q: already enclosed by the span
            if fo <= bo:
                ahead = max(ahead, fo)
            else:
                back = max(back, bo)
        if back == 0 and ahead == 0:
            raise NoFeasibleTangentPlacement(
                f"circle {k.id} overlaps {sorted(hits)} but the walk cannot widen past them"
            )
        if back + ahead >= t - s:
            raise NoFeasibleTangentPlacement(f"walk for circle {k.id} wrapped the whole border")
        p = (p - back) % t
        q = (q + ahead) % t
        ip, iq = ring[p], ring[q]
        cands = tangency_candidates(rk, layout[ip], by_id[ip].radius, layout[iq], by_id[iq].radius, tol)
        if cands.count == 0:
            raise Unsolvable(f"circle {k.id} cannot touch both {ip} and {iq}")
        pos = _furthest(cands.points, placed_centroid)
        if counter is not None:
            counter.candidates += 1
        hits = overlapping_ids(pos, rk, layout, circles, tol)
        if not hits:
            if point_in_main_area(pos, poly, tol) is Location.INSIDE:
                raise NoFeasibleTangentPlacement(f"walk for circle {k.id} ended inside the main area")
            return ExternalPlacementResult(pos, p, q, step)
    raise NoFeasibleTangentPlacement(f"walk for circle {k.id} exceeded {t} steps")


def _encloses(layout: Layout, ring: Sequence[int], extra: dict, ids: Sequence[int], tol: float) -> bool:
    verts = [extra[c] if c in extra else layout[c] for c in ring]
    poly = MainAreaPolygon(verts)
    return all(point_in_main_area(layout[c], poly, tol) is not Location.OUTSIDE for c in ids)


def insertion_span(
    border: Border,
    layout: Layout,
    k: int,
    placed: ExternalPlacementResult,
    tol: float = DEFAULT_TOL,
) -> tuple[int, int]:
    """Ring positions (start, end) to splice ``k`` between.

    The side with fewer ids between the touched circles is dropped, unless its
    circles would end up outside the new main area, in which case the other
    side is dropped.
    """
    t = len(border)
    p, q = placed.p_index, placed.q_index
    options = [(p, q), (q, p)]
    if (q - p) % t > (p - q) % t:
        options.reverse()
    extra = {k: placed.position}
    for a, b in options:
        s = (b - a) % t
        if s == 1:
            return a, b
        if s > t - 1:
            continue
        dropped = border.chain(a, b)[1:-1]
        ring = border_insert(border, k, a, b, strict=False).ring
        if _encloses(layout, ring, extra, dropped, tol):
            return a, b
    raise NoFeasibleTangentPlacement(f"neither side of ({border[p]},{border[q]}) can be enclosed by {k}")


def insert_placed(
    border: Border, layout: Layout, k: int, placed: ExternalPlacementResult, tol: float = DEFAULT_TOL
) -> Border:
    a, b = insertion_span(border, layout, k, placed, tol)
    return border_insert(border, k, a, b, strict=False)


def internal_placement(
    nbar: Sequence[int],
    remaining: Sequence[CircleSpec],
    layout: Layout,
    border: Border,
    circles: ProblemInstance,
    tol: float = DEFAULT_TOL,
    counter: EvalCounter | None = None,
) -> Optional[InternalPlacementResult]:
    """Largest remaining circle that fits, unmoved, at the centroid of ``nbar``."""
    if not remaining:
        return None
    spot = centroid(layout[c] for c in nbar)
    if point_in_main_area(spot, main_area(layout, border), tol) is not Location.INSIDE:
        return None
    by_id = circles.by_id
    # largest radius r with d_i >= (r_i + r)(1 - tol) for every placed circle i
    room = min(
        math.hypot(spot.x - x, spot.y - y) / (1.0 - tol) - by_id[cid].radius
        for cid, (x, y) in layout.positions.items()
    )
    for c in remaining:
        if counter is not None:
            counter.candidates += 1
        if c.radius <= room:
            return InternalPlacementResult(spot, c.id)
    return None
