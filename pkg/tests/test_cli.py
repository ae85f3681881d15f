import json

import pytest

from rotapack.cli import main


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    assert main(["generate", "--reference", "set2-n15", "-o", str(path)]) == 0
    return path


def test_generate_custom_family(tmp_path, capsys):
    assert main(["generate", "--size", "9", "--radius-range", "1", "4", "--mass-range", "1", "2", "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["circles"]) == 9
    assert doc["metadata"]["seed"] == 3


def test_generate_needs_a_source(capsys):
    assert main(["generate"]) == 2
    assert "needs" in capsys.readouterr().err


def test_solve_then_verify(tmp_path, instance_file, capsys):
    out = tmp_path / "sol.json"
    svg = tmp_path / "sol.svg"
    assert main(["solve", str(instance_file), "-o", str(out), "--svg", str(svg), "--border"]) == 0
    assert svg.read_text().lstrip().startswith("<?xml")
    assert main(["verify", str(out), str(instance_file)]) == 0
    assert "feasible" in capsys.readouterr().out


def test_verify_detects_tampering(tmp_path, instance_file, capsys):
    out = tmp_path / "sol.json"
    main(["solve", str(instance_file), "-o", str(out)])
    doc = json.loads(out.read_text())
    doc["placements"][1]["x"] = doc["placements"][0]["x"]
    doc["placements"][1]["y"] = doc["placements"][0]["y"]
    out.write_text(json.dumps(doc))
    assert main(["verify", str(out), str(instance_file)]) == 1
    assert "overlap" in capsys.readouterr().out


def test_solve_is_byte_identical_without_timing(tmp_path, instance_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["solve", str(instance_file), "-o", str(a), "--no-timing"])
    main(["solve", str(instance_file), "-o", str(b), "--no-timing"])
    assert a.read_bytes() == b.read_bytes()


def test_solve_with_permutation_and_flags(tmp_path, instance_file):
    out = tmp_path / "p.json"
    perm = ",".join(str(i) for i in range(15, 0, -1))
    assert main(["solve", str(instance_file), "--permutation", perm, "--no-postopt", "--theta", "1.0", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["permutation"] == list(range(15, 0, -1))
    assert doc["config"]["theta"] == 1.0 and doc["config"]["postoptimize"] is False
    assert main(["solve", str(instance_file), "--permutation", "1,x"]) == 2
    assert main(["solve", str(instance_file), "--permutation", "1,2,3"]) == 1


def test_bad_input_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["solve", str(bad)]) == 2
    assert main(["solve", str(tmp_path / "missing.json")]) == 2
    neg = tmp_path / "neg.json"
    neg.write_text(json.dumps({"format": "rotapack/instance", "version": 1, "circles": [{"id": 1, "radius": -1, "mass": 1}]}))
    assert main(["solve", str(neg)]) == 1
    few = tmp_path / "few.json"
    few.write_text(
        json.dumps(
            {"format": "rotapack/instance", "version": 1, "circles": [{"id": i, "radius": 1, "mass": 1} for i in range(3)]}
        )
    )
    assert main(["solve", str(few)]) == 3


def test_batch_writes_outputs(tmp_path, capsys):
    paths = []
    for ref in ("set1-n7", "set2-n10"):
        p = tmp_path / f"{ref}.json"
        main(["generate", "--reference", ref, "-o", str(p)])
        paths.append(str(p))
    out_dir = tmp_path / "out"
    assert main(["batch", *paths, "--runs", "20", "--out-dir", str(out_dir), "--tsv", "-v"]) == 0
    table = capsys.readouterr().out.splitlines()
    assert table[0].split("\t") == ["instance", "size", "f1", "f2", "t_best", "t_total", "runs", "failures"]
    assert [row.split("\t")[1] for row in table[1:]] == ["7", "10"]
    names = {p.name for p in out_dir.iterdir()}
    assert {"set1-n7.solution.json", "set1-n7.svg", "set1-n7.runs.svg", "summary.tsv"} <= names


def test_batch_clamps_runs_to_space(tmp_path, capsys):
    p = tmp_path / "small.json"
    main(["generate", "--size", "4", "--radius-range", "1", "2", "--mass-range", "1", "2", "-o", str(p)])
    assert main(["batch", str(p), "--runs", "100"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[1].split(",")[6] == "24"


def test_render(tmp_path, instance_file):
    sol = tmp_path / "s.json"
    main(["solve", str(instance_file), "-o", str(sol)])
    png = tmp_path / "s.png"
    assert main(["render", str(sol), str(instance_file), "-o", str(png), "--border"]) == 0
    assert png.read_bytes()[:4] == b"\x89PNG"
