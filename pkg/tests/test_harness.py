import pytest

from rotapack import harness
from rotapack.errors import AllRunsFailed, SolverError, ValidationError
from rotapack.harness import (
    REFERENCE_FAMILIES,
    InstanceFamily,
    generate_instance,
    reference_family,
    run_batch,
    summarize,
)
from rotapack.permutations import PermutationScheme
from rotapack.solver import SolverConfig


def test_reference_families_cover_table_sizes():
    sizes = sorted(f.size for f in REFERENCE_FAMILIES)
    assert sizes == [7, 10, 15, 20, 25, 30, 35, 40, 40, 45, 50, 55]
    with pytest.raises(KeyError):
        reference_family("nope")


def test_generated_values_inside_ranges():
    for fam in REFERENCE_FAMILIES:
        inst = generate_instance(fam)
        assert inst.n == fam.size
        assert inst.name == fam.label
        for c in inst.circles:
            assert fam.radius_range[0] <= c.radius <= fam.radius_range[1]
            assert fam.mass_range[0] <= c.mass <= fam.mass_range[1]


def test_generation_is_seeded():
    fam = InstanceFamily(12, (1, 5), (2, 3), seed=9)
    assert generate_instance(fam) == generate_instance(fam)
    other = InstanceFamily(12, (1, 5), (2, 3), seed=10)
    assert generate_instance(fam) != generate_instance(other)


def test_family_validation():
    with pytest.raises(ValidationError):
        InstanceFamily(0, (1, 2), (1, 2))
    with pytest.raises(ValidationError):
        InstanceFamily(5, (3, 2), (1, 2))


def test_run_batch_keeps_minimum():
    inst = generate_instance(reference_family("set1-n7"))
    scheme = PermutationScheme.for_circles(inst.circles, seed=1)
    rep = run_batch(inst, scheme, 40)
    assert rep.runs == 40 and len(rep.per_run) == 40
    assert rep.best.f1 == rep.min_f1 == min(r.f1 for r in rep.per_run)
    assert rep.per_run[rep.best_index].f1 == rep.best.f1
    assert all(r.f1 > rep.best.f1 for r in rep.per_run[: rep.best_index])
    assert rep.failures == 0
    assert rep.time_to_best <= sum(r.elapsed for r in rep.per_run) + 1e-12


def test_parallel_matches_serial():
    inst = generate_instance(reference_family("set2-n20"))
    scheme = PermutationScheme.for_circles(inst.circles, seed=5)
    serial = run_batch(inst, scheme, 24, 1)
    parallel = run_batch(inst, scheme, 24, 3)
    assert serial.signature() == parallel.signature()


def test_all_runs_failed(monkeypatch):
    def boom(*args, **kwargs):
        raise SolverError("forced")

    monkeypatch.setattr(harness, "solve", boom)
    inst = generate_instance(reference_family("set1-n7"))
    with pytest.raises(AllRunsFailed):
        run_batch(inst, PermutationScheme.for_circles(inst.circles), 3)


def test_summarize_orders_by_size():
    reps = []
    for name in ("set2-n15", "set1-n7", "set2-n10"):
        inst = generate_instance(reference_family(name))
        reps.append(run_batch(inst, PermutationScheme.for_circles(inst.circles), 3, config=SolverConfig()))
    rows = summarize(reps)
    assert [r["size"] for r in rows] == [7, 10, 15]
    assert set(rows[0]) == set(harness.SUMMARY_COLUMNS)
    with pytest.raises(ValidationError):
        summarize([])
