"""Seeded benchmark instances and the many-orders batch runner."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import AllRunsFailed, SolverError, ValidationError
from .layout import CircleSpec, ProblemInstance
from .permutations import PermutationScheme, sample_permutations
from .solver import Solution, SolverConfig, solve


@dataclass(frozen=True)
class InstanceFamily:
    size: int
    radius_range: tuple[float, float]
    mass_range: tuple[float, float]
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if self.size < 4:
            raise ValidationError(f"instance size must be at least 4, got {self.size}")
        for label, (lo, hi) in (("radius", self.radius_range), ("mass", self.mass_range)):
            if not 0 < lo <= hi:
                raise ValidationError(f"{label} range must satisfy 0 < min <= max, got [{lo}, {hi}]")

    @property
    def label(self) -> str:
        return self.name or f"n{self.size}-s{self.seed}"


# Radius and mass ranges of the published benchmark sets, with frozen seeds.
REFERENCE_FAMILIES: tuple[InstanceFamily, ...] = (
    InstanceFamily(7, (8.5, 12.0), (72.25, 144.0), seed=7001, name="set1-n7"),
    InstanceFamily(40, (81.0, 120.0), (6.0, 14.0), seed=7040, name="set1-n40"),
    InstanceFamily(10, (5.0, 23.0), (20.0, 93.0), seed=8010, name="set2-n10"),
    InstanceFamily(15, (6.0, 24.0), (12.0, 98.0), seed=8015, name="set2-n15"),
    InstanceFamily(20, (5.0, 24.0), (11.0, 94.0), seed=8020, name="set2-n20"),
    InstanceFamily(25, (6.0, 24.0), (11.0, 96.0), seed=8025, name="set2-n25"),
    InstanceFamily(30, (6.0, 24.0), (12.0, 97.0), seed=8030, name="set2-n30"),
    InstanceFamily(35, (7.0, 24.0), (10.0, 99.0), seed=8035, name="set2-n35"),
    InstanceFamily(40, (6.0, 23.0), (12.0, 99.0), seed=8040, name="set2-n40"),
    InstanceFamily(45, (6.0, 24.0), (11.0, 99.0), seed=8045, name="set2-n45"),
    InstanceFamily(50, (5.0, 24.0), (10.0, 99.0), seed=8050, name="set2-n50"),
    InstanceFamily(55, (6.0, 24.0), (13.0, 99.0), seed=8055, name="set2-n55"),
)


def reference_family(name: str) -> InstanceFamily:
    for fam in REFERENCE_FAMILIES:
        if fam.name == name:
            return fam
    raise KeyError(name)


def generate_instance(family: InstanceFamily, lam: float = 0.5, beta: float = 0.5, omega: float = 1.0) -> ProblemInstance:
    """Radii and masses drawn uniformly from the family ranges."""
    rng = np.random.default_rng(family.seed)
    radii = rng.uniform(family.radius_range[0], family.radius_range[1], family.size)
    masses = rng.uniform(family.mass_range[0], family.mass_range[1], family.size)
    circles = tuple(CircleSpec(i + 1, float(r), float(m)) for i, (r, m) in enumerate(zip(radii, masses)))
    return ProblemInstance(circles, lam=lam, beta=beta, omega=omega, name=family.label)


@dataclass
class RunRecord:
    index: int
    permutation: tuple[int, ...]
    f1: float = math.nan
    f2: float = math.nan
    elapsed: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class BatchReport:
    instance_name: str
    size: int
    best: Solution
    best_index: int
    runs: int
    per_run: list[RunRecord]
    b: int
    seed: int
    total_elapsed: float = 0.0
    time_to_best: float = 0.0
    config: SolverConfig = field(default_factory=SolverConfig)

    @property
    def failures(self) -> int:
        return sum(not r.ok for r in self.per_run)

    @property
    def min_f1(self) -> float:
        return min(r.f1 for r in self.per_run if r.ok)

    @property
    def mean_f1(self) -> float:
        vals = [r.f1 for r in self.per_run if r.ok]
        return math.fsum(vals) / len(vals)

    def signature(self) -> tuple:
        """Report content without timing."""
        return (
            self.instance_name,
            self.best.signature(),
            self.best_index,
            self.runs,
            tuple((r.index, r.permutation, r.f1, r.f2, r.error) for r in self.per_run),
        )


_worker_state: dict = {}


def _init_worker(instance: ProblemInstance, config: SolverConfig) -> None:
    _worker_state["instance"] = instance
    _worker_state["config"] = config


def _run_one(perm: tuple[int, ...]):
    try:
        return solve(_worker_state["instance"], perm, _worker_state["config"])
    except SolverError as exc:
        return f"{type(exc).__name__}: {exc}"


def run_batch(
    instance: ProblemInstance,
    scheme: PermutationScheme,
    num_runs: int,
    parallelism: int = 1,
    config: SolverConfig = SolverConfig(),
    replace: bool = False,
) -> BatchReport:
    """Solve ``num_runs`` sampled orders and keep the smallest container (lowest run index on ties)."""
    if num_runs < 1:
        raise ValidationError("num_runs must be at least 1")
    started = time.perf_counter()
    perms = sample_permutations(scheme, num_runs, replace=replace)
    if parallelism <= 1:
        _init_worker(instance, config)
        outcomes = [_run_one(p) for p in perms]
    else:
        chunk = max(1, len(perms) // (parallelism * 8))
        with ProcessPoolExecutor(parallelism, initializer=_init_worker, initargs=(instance, config)) as pool:
            outcomes = list(pool.map(_run_one, perms, chunksize=chunk))

    records = []
    best: Solution | None = None
    best_index = -1
    for i, (perm, out) in enumerate(zip(perms, outcomes)):
        if isinstance(out, Solution):
            records.append(RunRecord(i, perm, out.f1, out.f2, out.stats.elapsed))
            if best is None or out.f1 < best.f1:
                best, best_index = out, i
        else:
            records.append(RunRecord(i, perm, error=out))
    if best is None:
        raise AllRunsFailed(f"all {num_runs} runs failed; first error: {records[0].error}")
    return BatchReport(
        instance_name=instance.name,
        size=instance.n,
        best=best,
        best_index=best_index,
        runs=num_runs,
        per_run=records,
        b=scheme.b,
        seed=scheme.seed,
        total_elapsed=time.perf_counter() - started,
        time_to_best=math.fsum(r.elapsed for r in records[: best_index + 1]),
        config=config,
    )


SUMMARY_COLUMNS = ("instance", "size", "f1", "f2", "t_best", "t_total", "runs", "failures")


def summarize(reports: Sequence[BatchReport]) -> list[dict]:
    """One row per report, ordered by instance size."""
    if not reports:
        raise ValidationError("nothing to summarize")
    rows = [
        {
            "instance": r.instance_name,
            "size": r.size,
            "f1": r.best.f1,
            "f2": r.best.f2,
            "t_best": r.time_to_best,
            "t_total": r.total_elapsed,
            "runs": r.runs,
            "failures": r.failures,
        }
        for r in reports
    ]
    return sorted(rows, key=lambda row: row["size"])
