"""One full solve for a given placement order: build, postoptimize, recenter."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .errors import (
    ConstructionStuck,
    NoFeasibleTangentPlacement,
    SolverError,
    TooFewCircles,
    TooSmall,
    Unsolvable,
    ValidationError,
)
from .geometry import DEFAULT_TOL, Point
from .layout import (
    Border,
    Layout,
    ProblemInstance,
    border_delete,
    center_of_mass,
    check_border,
    contact_pairs,
    envelopment_radius,
    imbalance_f2,
    objective,
)
from .placement import (
    EvalCounter,
    external_placement,
    initial_layout,
    insertion_span,
    internal_placement,
)
from .layout import border_insert

PAIR_POLICIES = ("nearest-cm", "seeded-random")


@dataclass(frozen=True)
class SolverConfig:
    theta: float = 0.0
    tolerance: float = DEFAULT_TOL
    postopt_threshold: float = 1e-7  # relative to the current radius
    pair_policy: str = "nearest-cm"
    seed: int = 0
    postoptimize: bool = True
    validate: bool = False  # assert the border invariants after every inclusion

    def __post_init__(self):
        if self.pair_policy not in PAIR_POLICIES:
            raise ValidationError(f"unknown pair policy {self.pair_policy!r}; expected one of {PAIR_POLICIES}")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.postopt_threshold < 0:
            raise ValidationError("postopt_threshold must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SolveStats:
    placements_external: int = 0
    placements_internal: int = 0
    postopt_moves: int = 0
    postopt_skipped_interior: int = 0
    fallback_pairs: int = 0
    candidate_evaluations: int = 0
    postopt_radii: list[float] = field(default_factory=list)
    elapsed: float = 0.0


@dataclass
class Solution:
    positions: dict[int, Point]
    container_center: Point
    radius: float
    f1: float
    f2: float
    objective: float
    permutation: tuple[int, ...]
    border: tuple[int, ...] = ()
    stats: SolveStats = field(default_factory=SolveStats)

    def signature(self) -> tuple:
        """Everything except timing, for determinism checks."""
        return (
            tuple(sorted(self.positions.items())),
            self.container_center,
            self.radius,
            self.f1,
            self.f2,
            self.objective,
            self.permutation,
            self.border,
        )


class QuadrantPartition(NamedTuple):
    q1: list[tuple[int, int]]
    q2: list[tuple[int, int]]
    q3: list[tuple[int, int]]
    q4: list[tuple[int, int]]
    origin: Point

    def buckets(self) -> tuple[list, list, list, list]:
        return (self.q1, self.q2, self.q3, self.q4)


def quadrant(dx: float, dy: float) -> int:
    """Half-open quadrant wedges; the origin itself belongs to quadrant 1."""
    if dx >= 0 and dy > 0:
        return 1
    if dx < 0 and dy >= 0:
        return 2
    if dx <= 0 and dy < 0:
        return 3
    if dx > 0 and dy <= 0:
        return 4
    return 1


def cmpt_partition(layout: Layout, border: Border, circles: ProblemInstance) -> QuadrantPartition:
    cm = center_of_mass(layout, circles).cm
    buckets: tuple[list, list, list, list] = ([], [], [], [])
    for a, b in contact_pairs(border):
        x, y = layout[a]
        buckets[quadrant(x - cm.x, y - cm.y) - 1].append((a, b))
    return QuadrantPartition(*buckets, origin=cm)


def _pair_start(border: Border, pair: tuple[int, int]) -> int | None:
    a, b = pair
    if a not in border:
        return None
    i = border.index(a)
    return i if border[i + 1] == b else None


def _midpoint_distance(layout: Layout, pair, cm) -> float:
    (ax, ay), (bx, by) = layout[pair[0]], layout[pair[1]]
    return math.hypot(0.5 * (ax + bx) - cm.x, 0.5 * (ay + by) - cm.y)


class _Builder:
    """Mutable state of one construction run."""

    def __init__(self, instance: ProblemInstance, permutation: Sequence[int], config: SolverConfig, stats: SolveStats):
        self.instance = instance
        self.config = config
        self.stats = stats
        self.tol = config.tolerance
        self.counter = EvalCounter()
        self.rng = random.Random(config.seed)
        specs = [instance.by_id[i] for i in permutation]
        self.layout, self.border = initial_layout(specs[:4], config.theta, self.tol, instance)
        self.queue = list(permutation[4:])
        self._check("initial layout")

    def _check(self, when: str) -> None:
        if not self.config.validate:
            return
        problems = check_border(self.layout, self.border, self.instance, self.tol)
        if problems:
            raise AssertionError(f"border invariant broken after {when}: {problems}")

    def _choose(self, pairs: list[tuple[int, int]]) -> tuple[int, int]:
        if self.config.pair_policy == "seeded-random":
            return self.rng.choice(pairs)
        cm = center_of_mass(self.layout, self.instance).cm
        return min(pairs, key=lambda pr: _midpoint_distance(self.layout, pr, cm))

    def _try_pair(self, k: int, pair: tuple[int, int]):
        start = _pair_start(self.border, pair)
        spec = self.instance.by_id[k]
        placed = external_placement(
            spec, (start, start + 1), self.layout, self.border, self.instance, self.tol, self.counter
        )
        a, b = insertion_span(self.border, self.layout, k, placed, self.tol)
        return placed, a, b

    def include(self, pair: tuple[int, int], partition: QuadrantPartition) -> None:
        """Place the next queued circle on ``pair`` (or a fallback pair) and try to fill the gap."""
        k = self.queue[0]
        try:
            placed, a, b = self._try_pair(k, pair)
        except SolverError:
            cm = center_of_mass(self.layout, self.instance).cm
            fallbacks = sorted(
                (pr for pr in contact_pairs(self.border) if pr != pair),
                key=lambda pr: _midpoint_distance(self.layout, pr, cm),
            )
            for pr in fallbacks:
                try:
                    placed, a, b = self._try_pair(k, pr)
                    self.stats.fallback_pairs += 1
                    break
                except SolverError:
                    continue
            else:
                raise ConstructionStuck(
                    f"no border pair accepts circle {k}",
                    placed=dict(self.layout.positions),
                    remaining=list(self.queue),
                    border=self.border.ring,
                )

        old = self.border
        span_ids = old.chain(a, b)
        consumed = set(zip(span_ids, span_ids[1:]))
        for bucket in partition.buckets():
            bucket[:] = [pr for pr in bucket if pr not in consumed]
        self.border = border_insert(old, k, a, b, strict=False)
        self.layout.place(k, placed.position)
        self.queue.pop(0)
        self.stats.placements_external += 1
        self._check(f"external placement of {k}")

        remaining = sorted((self.instance.by_id[i] for i in self.queue), key=lambda c: (-c.radius, c.id))
        filled = internal_placement(
            [k] + span_ids, remaining, self.layout, self.border, self.instance, self.tol, self.counter
        )
        if filled is not None:
            self.layout.place(filled.circle, filled.position)
            self.queue.remove(filled.circle)
            self.stats.placements_internal += 1
            self._check(f"internal placement of {filled.circle}")

    def run(self) -> None:
        while self.queue:
            partition = cmpt_partition(self.layout, self.border, self.instance)
            while self.queue and any(partition.buckets()):
                for bucket in partition.buckets():
                    if not self.queue:
                        break
                    live = [pr for pr in bucket if _pair_start(self.border, pr) is not None]
                    bucket[:] = live
                    if not live:
                        continue
                    pair = self._choose(live)
                    bucket.remove(pair)
                    self.include(pair, partition)


def construct_layout(
    instance: ProblemInstance,
    permutation: Sequence[int],
    config: SolverConfig = SolverConfig(),
    stats: SolveStats | None = None,
) -> tuple[Layout, Border]:
    """Place every circle in ``permutation`` order, growing the border around the center of mass."""
    _check_permutation(instance, permutation)
    stats = stats if stats is not None else SolveStats()
    builder = _Builder(instance, permutation, config, stats)
    builder.run()
    stats.candidate_evaluations += builder.counter.candidates
    return builder.layout, builder.border


def _check_permutation(instance: ProblemInstance, permutation: Sequence[int]) -> None:
    if instance.n < 4:
        raise TooFewCircles(f"need at least 4 circles, got {instance.n}")
    if sorted(permutation) != sorted(instance.ids):
        raise ValidationError("permutation must list every circle id exactly once")


def postoptimize(
    layout: Layout,
    border: Border,
    instance: ProblemInstance,
    config: SolverConfig = SolverConfig(),
    stats: SolveStats | None = None,
) -> tuple[Layout, Border]:
    """Move the circle defining the container radius to a better border pair while that helps."""
    stats = stats if stats is not None else SolveStats()
    tol = config.tolerance
    counter = EvalCounter()
    layout = layout.copy()
    cm = center_of_mass(layout, instance).cm
    radius, kmax = envelopment_radius(layout, cm, instance)
    stats.postopt_radii.append(radius)

    while True:
        if kmax not in border:
            stats.postopt_skipped_interior += 1
            break
        at = border.index(kmax)
        try:
            reduced = border_delete(border, at)
        except TooSmall:
            break
        saved = layout.remove(kmax)
        spec = instance.by_id[kmax]
        delta = config.postopt_threshold * radius
        accepted = None
        for a, b in contact_pairs(border):
            if kmax in (a, b):
                continue
            reach = instance.radius(a) + instance.radius(b)
            if abs(math.dist(layout[a], layout[b]) - reach) > tol * reach:
                continue  # not a contact pair
            start = reduced.index(a)
            try:
                placed = external_placement(spec, (start, start + 1), layout, reduced, instance, tol, counter)
                span = insertion_span(reduced, layout, kmax, placed, tol)
            except (SolverError, ValueError):
                continue
            layout.place(kmax, placed.position)
            new_cm = center_of_mass(layout, instance).cm
            new_radius, new_kmax = envelopment_radius(layout, new_cm, instance)
            layout.remove(kmax)
            if new_radius < radius - delta:
                accepted = (placed.position, span, new_radius, new_kmax)
                break
        if accepted is None:
            layout.place(kmax, saved)
            break
        pos, (a, b), radius, new_kmax = accepted
        layout.place(kmax, pos)
        border = border_insert(reduced, kmax, a, b, strict=False)
        kmax = new_kmax
        stats.postopt_moves += 1
        stats.postopt_radii.append(radius)

    stats.candidate_evaluations += counter.candidates
    return layout, border


def solve(
    instance: ProblemInstance,
    permutation: Sequence[int] | None = None,
    config: SolverConfig = SolverConfig(),
) -> Solution:
    """Build a complete layout for ``permutation`` and center the container on the center of mass."""
    started = time.perf_counter()
    if permutation is None:
        permutation = [c.id for c in sorted(instance.circles, key=lambda c: (-c.radius, c.id))]
    permutation = tuple(permutation)
    stats = SolveStats()
    layout, border = construct_layout(instance, permutation, config, stats)
    if config.postoptimize:
        layout, border = postoptimize(layout, border, instance, config, stats)
    cm = center_of_mass(layout, instance).cm
    radius, _ = envelopment_radius(layout, cm, instance)
    f2 = imbalance_f2(layout, cm, instance, instance.omega)
    stats.elapsed = time.perf_counter() - started
    return Solution(
        positions=dict(layout.positions),
        container_center=cm,
        radius=radius,
        f1=radius,
        f2=f2,
        objective=objective(radius, f2, instance.lam, instance.beta),
        permutation=permutation,
        border=border.ring,
        stats=stats,
    )


def solution_layout(solution: Solution) -> Layout:
    return Layout(solution.positions)
