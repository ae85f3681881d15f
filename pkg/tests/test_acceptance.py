"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line at the end of the run."""

import math
import random
import time

import pytest

from conftest import record_criterion
from rotapack.geometry import distance, tangency_candidates
from rotapack.harness import REFERENCE_FAMILIES, generate_instance, reference_family, run_batch
from rotapack.layout import verify_solution
from rotapack.permutations import PermutationScheme, enumerate_permutations, permutation_space_size
from rotapack.solver import SolverConfig, solve

pytestmark = pytest.mark.slow


def _check(number, detail, condition):
    record_criterion(number, bool(condition), detail)
    assert condition, detail


@pytest.fixture(scope="module")
def reference_batches():
    out = {}
    for fam in REFERENCE_FAMILIES:
        inst = generate_instance(fam)
        scheme = PermutationScheme.for_circles(inst.circles, seed=fam.seed)
        runs = min(100, scheme.space_size())  # n=10 with b=5 has only 32 orders
        out[fam.name] = (inst, run_batch(inst, scheme, runs, parallelism=4))
    return out


def test_criterion_1_feasibility(reference_batches):
    bad = []
    for name, (inst, rep) in reference_batches.items():
        check = verify_solution(inst, rep.best, tol=1e-6)
        if not check.feasible or rep.failures:
            bad.append(name)
    sizes = sorted({inst.n for inst, _ in reference_batches.values()})
    _check(1, f"best of up to 100 runs feasible for sizes {sizes}; failing: {bad or 'none'}", not bad)


def test_criterion_2_zero_imbalance(reference_batches):
    worst = 0.0
    for inst, rep in reference_batches.values():
        for r in rep.per_run:
            worst = max(worst, r.f2 / (inst.total_mass * r.f1))
    _check(2, f"max f2 / (total_mass * radius) = {worst:.2e} (bound 1e-9)", worst <= 1e-9)


def test_criterion_3_tangency_kernel():
    rng = random.Random(3)
    worst = 0.0
    for _ in range(1000):
        r_k, r_p, r_q = (rng.uniform(0.1, 50) for _ in range(3))
        a, b = r_k + r_p, r_k + r_q
        d = rng.uniform(abs(a - b), a + b)
        ang = rng.uniform(0, 2 * math.pi)
        p = (rng.uniform(-500, 500), rng.uniform(-500, 500))
        q = (p[0] + d * math.cos(ang), p[1] + d * math.sin(ang))
        res = tangency_candidates(r_k, p, r_p, q, r_q)
        assert res.count >= 1
        for pt in res.points:
            worst = max(worst, abs(distance(pt, p) - a) / a, abs(distance(pt, q) - b) / b)
    two = tangency_candidates(1, (0, 0), 1, (2, 0), 1)
    one = tangency_candidates(1, (0, 0), 1, (4, 0), 1)
    none = tangency_candidates(1, (0, 0), 1, (6, 0), 1)
    analytic = (
        two.count == 2
        and sorted(round(pt.y, 12) for pt in two.points) == [round(-math.sqrt(3), 12), round(math.sqrt(3), 12)]
        and all(abs(pt.x - 1) < 1e-12 for pt in two.points)
        and one.count == 1
        and distance(one.points[0], (2, 0)) < 1e-12
        and none.count == 0
    )
    _check(3, f"max relative residual {worst:.1e} over 1000 inputs; analytic cases ok={analytic}", worst <= 1e-9 and analytic)


def test_criterion_4_permutation_count_law():
    mismatches = []
    for n in range(1, 9):
        base = tuple(range(n, 0, -1))
        for b in range(1, n + 1):
            ell = n // b
            expected = math.factorial(ell) ** b * math.factorial(n - b * ell)
            if len(set(enumerate_permutations(PermutationScheme(base, b)))) != expected:
                mismatches.append((n, b))
    seven = permutation_space_size(7, 1)
    _check(4, f"all (n, b) with n <= 8 match; n=7, b=1 gives {seven}", not mismatches and seven == 5040)


def test_criterion_5_postopt_monotone():
    violations = 0
    moves = 0
    for run in range(1000):
        fam = REFERENCE_FAMILIES[run % len(REFERENCE_FAMILIES)]
        inst = generate_instance(fam)
        scheme = PermutationScheme.for_circles(inst.circles)
        perm = list(scheme.base)
        rng = random.Random(run)
        rng.shuffle(perm)
        config = SolverConfig()
        sol = solve(inst, perm, config)
        radii = sol.stats.postopt_radii
        moves += sol.stats.postopt_moves
        if sol.radius > radii[0]:
            violations += 1
        for before, after in zip(radii, radii[1:]):
            if not before - after > config.postopt_threshold * before:
                violations += 1
    _check(5, f"1000 runs, {moves} committed moves, {violations} violations", violations == 0)


def test_criterion_6_area_bound(reference_batches):
    below = 0
    total = 0
    for inst, rep in reference_batches.values():
        bound = inst.area_bound()
        for r in rep.per_run:
            total += 1
            below += not r.f1 >= bound
    for run in range(1000):
        inst = generate_instance(REFERENCE_FAMILIES[run % len(REFERENCE_FAMILIES)])
        perm = list(inst.ids)
        random.Random(10_000 + run).shuffle(perm)
        total += 1
        below += not solve(inst, perm).radius >= inst.area_bound()
    _check(6, f"{total} solutions, {below} below the area bound", below == 0)


def test_criterion_7_parallel_equivalence():
    same = True
    for name in ("set1-n7", "set2-n30", "set2-n55"):
        inst = generate_instance(reference_family(name))
        scheme = PermutationScheme.for_circles(inst.circles, seed=77)
        serial = run_batch(inst, scheme, 64, parallelism=1)
        parallel = run_batch(inst, scheme, 64, parallelism=4)
        same &= serial.best.signature() == parallel.best.signature()
        same &= serial.signature() == parallel.signature()
    _check(7, "parallelism 1 and 4 give identical best solutions and run records", same)


def test_criterion_8_runtime_budget():
    inst = generate_instance(reference_family("set2-n55"))
    solve(inst)  # warm-up
    started = time.perf_counter()
    solve(inst)
    elapsed = time.perf_counter() - started
    worst_ratio = 0.0
    for fam in REFERENCE_FAMILIES:
        if fam.size < 10:
            continue
        inst = generate_instance(fam)
        for seed in range(5):
            perm = list(inst.ids)
            random.Random(seed).shuffle(perm)
            sol = solve(inst, perm)
            worst_ratio = max(worst_ratio, sol.stats.candidate_evaluations / fam.size**3)
    _check(
        8,
        f"n=55 solve {elapsed * 1000:.1f} ms (limit 1000 ms); max candidates / n^3 = {worst_ratio:.3f} (c = 1)",
        elapsed <= 1.0 and worst_ratio <= 1.0,
    )


def test_criterion_9_exhaustive_small_n():
    inst = generate_instance(reference_family("set1-n7"))
    scheme = PermutationScheme.for_circles(inst.circles, seed=7001)
    reports = [run_batch(inst, scheme, 5040, parallelism=4) for _ in range(3)]
    bests = {r.best.f1 for r in reports}
    distinct = {frozenset(r.permutation for r in rep.per_run) for rep in reports}
    f2_ok = all(r.best.f2 <= 1e-9 * inst.total_mass * r.best.f1 for r in reports)
    _check(
        9,
        f"3 x 5040 runs, best f1 {sorted(bests)}, f2 {reports[0].best.f2:.1e}",
        len(bests) == 1 and len(distinct) == 1 and len(next(iter(distinct))) == 5040 and f2_ok,
    )
