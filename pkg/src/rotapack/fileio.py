"""Versioned JSON formats for instances, instance families and solutions."""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import ParseError, ValidationError
from .geometry import Point
from .harness import InstanceFamily
from .layout import CircleSpec, ProblemInstance
from .solver import Solution, SolverConfig, SolveStats

INSTANCE_FORMAT = "rotapack/instance"
FAMILY_FORMAT = "rotapack/family"
SOLUTION_FORMAT = "rotapack/solution"
VERSION = 1


def _load(text: str, fmt: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if doc.get("format") != fmt:
        raise ParseError(f"format: expected {fmt!r}, got {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ParseError(f"version: unsupported version {doc.get('version')!r} (expected {VERSION})")
    return doc


def _number(obj: dict, key: str, where: str, default: Any = None) -> float:
    if key not in obj:
        if default is not None:
            return default
        raise ParseError(f"{where}.{key}: missing")
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"{where}.{key}: expected a number, got {val!r}")
    if not math.isfinite(val):
        raise ParseError(f"{where}.{key}: not finite")
    return float(val)


def _integer(obj: dict, key: str, where: str) -> int:
    val = obj.get(key)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ParseError(f"{where}.{key}: expected an integer, got {val!r}")
    return val


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def parse_instance(text: str) -> ProblemInstance:
    doc = _load(text, INSTANCE_FORMAT)
    raw = doc.get("circles")
    if not isinstance(raw, list) or not raw:
        raise ParseError("circles: expected a non-empty list")
    circles = []
    seen = set()
    for i, item in enumerate(raw):
        where = f"circles[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: expected an object")
        cid = _integer(item, "id", where)
        radius = _number(item, "radius", where)
        mass = _number(item, "mass", where)
        if cid in seen:
            raise ValidationError(f"{where}.id: duplicate id {cid}")
        seen.add(cid)
        if radius <= 0:
            raise ValidationError(f"{where}.radius: must be positive, got {radius}")
        if mass <= 0:
            raise ValidationError(f"{where}.mass: must be positive, got {mass}")
        circles.append(CircleSpec(cid, radius, mass))
    return ProblemInstance(
        tuple(circles),
        lam=_number(doc, "lambda", "instance", 0.5),
        beta=_number(doc, "beta", "instance", 0.5),
        omega=_number(doc, "omega", "instance", 1.0),
        name=str(doc.get("name", "")),
    )


def write_instance(instance: ProblemInstance, metadata: dict | None = None) -> str:
    doc = {
        "format": INSTANCE_FORMAT,
        "version": VERSION,
        "name": instance.name,
        "lambda": instance.lam,
        "beta": instance.beta,
        "omega": instance.omega,
        "circles": [{"id": c.id, "radius": c.radius, "mass": c.mass} for c in instance.circles],
    }
    if metadata:
        doc["metadata"] = metadata
    return _dump(doc)


def parse_family(text: str) -> InstanceFamily:
    doc = _load(text, FAMILY_FORMAT)
    ranges = []
    for key in ("radius_range", "mass_range"):
        val = doc.get(key)
        ok = isinstance(val, list) and len(val) == 2
        if not ok or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val):
            raise ParseError(f"family.{key}: expected [min, max]")
        ranges.append((float(val[0]), float(val[1])))
    return InstanceFamily(
        size=_integer(doc, "size", "family"),
        radius_range=ranges[0],
        mass_range=ranges[1],
        seed=_integer(doc, "seed", "family") if "seed" in doc else 0,
        name=str(doc.get("name", "")),
    )


def write_family(family: InstanceFamily) -> str:
    return _dump(
        {
            "format": FAMILY_FORMAT,
            "version": VERSION,
            "name": family.name,
            "size": family.size,
            "radius_range": list(family.radius_range),
            "mass_range": list(family.mass_range),
            "seed": family.seed,
        }
    )


def write_solution(
    solution: Solution,
    instance_name: str = "",
    config: SolverConfig | None = None,
    b: int | None = None,
    include_timing: bool = True,
) -> str:
    """Serialize at full precision; timing lives only under ``timing``."""
    config = config or SolverConfig()
    st = solution.stats
    doc = {
        "format": SOLUTION_FORMAT,
        "version": VERSION,
        "instance": instance_name,
        "container": {
            "x": solution.container_center.x,
            "y": solution.container_center.y,
            "radius": solution.radius,
        },
        "placements": [{"id": cid, "x": p.x, "y": p.y} for cid, p in sorted(solution.positions.items())],
        "border": list(solution.border),
        "f1": solution.f1,
        "f2": solution.f2,
        "objective": solution.objective,
        "permutation": list(solution.permutation),
        "config": {
            "seed": config.seed,
            "b": b,
            "theta": config.theta,
            "tolerance": config.tolerance,
            "postopt_threshold": config.postopt_threshold,
            "pair_policy": config.pair_policy,
            "postoptimize": config.postoptimize,
        },
        "stats": {
            "placements_external": st.placements_external,
            "placements_internal": st.placements_internal,
            "postopt_moves": st.postopt_moves,
            "postopt_skipped_interior": st.postopt_skipped_interior,
            "fallback_pairs": st.fallback_pairs,
            "candidate_evaluations": st.candidate_evaluations,
        },
    }
    if include_timing:
        doc["timing"] = {"elapsed": st.elapsed}
    return _dump(doc)


def parse_solution(text: str) -> tuple[Solution, dict]:
    """Return the solution and the raw document (for instance name and config echo)."""
    doc = _load(text, SOLUTION_FORMAT)
    box = doc.get("container")
    if not isinstance(box, dict):
        raise ParseError("container: expected an object")
    placements = doc.get("placements")
    if not isinstance(placements, list):
        raise ParseError("placements: expected a list")
    positions = {}
    for i, item in enumerate(placements):
        where = f"placements[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: expected an object")
        cid = _integer(item, "id", where)
        if cid in positions:
            raise ValidationError(f"{where}.id: duplicate id {cid}")
        positions[cid] = Point(_number(item, "x", where), _number(item, "y", where))
    raw_stats = doc.get("stats") or {}
    stats = SolveStats(
        **{k: int(v) for k, v in raw_stats.items() if k in SolveStats.__dataclass_fields__ and k != "postopt_radii"}
    )
    stats.elapsed = float((doc.get("timing") or {}).get("elapsed", 0.0))
    sol = Solution(
        positions=positions,
        container_center=Point(_number(box, "x", "container"), _number(box, "y", "container")),
        radius=_number(box, "radius", "container"),
        f1=_number(doc, "f1", "solution"),
        f2=_number(doc, "f2", "solution"),
        objective=_number(doc, "objective", "solution"),
        permutation=tuple(int(i) for i in doc.get("permutation", [])),
        border=tuple(int(i) for i in doc.get("border", [])),
        stats=stats,
    )
    return sol, doc


def config_from_dict(raw: dict, base: SolverConfig | None = None) -> SolverConfig:
    base = base or SolverConfig()
    fields = SolverConfig.__dataclass_fields__
    unknown = set(raw) - set(fields)
    if unknown:
        raise ParseError(f"config: unknown keys {sorted(unknown)}")
    merged = {**base.to_dict(), **raw}
    return SolverConfig(**merged)
