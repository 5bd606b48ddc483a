import json
import os
import subprocess

import pytest

CLI = os.environ.get("ORTHOQ_CLI", "orthoq")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_gen_writes_n_lines(tmp_path):
    out = tmp_path / "pts.csv"
    r = run("gen", "--n", "1000", "--seed", "7", "--out", str(out))
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1000
    assert all(len(line.split(",")) == 2 for line in lines)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    assert run("gen", "--n", "500", "--seed", "3", "--out", str(a)).returncode == 0
    assert run("gen", "--n", "500", "--seed", "3", "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_bytes()) == 500 * 16


def test_gen_rejects_zero():
    assert run("gen", "--n", "0").returncode == 2


def test_unknown_flag_is_usage_error():
    assert run("verify", "--bogus").returncode == 2


@pytest.mark.parametrize("structure", ["rank1d", "slabtree", "quadrant", "rangetree", "main1", "main2", "oracle"])
def test_verify_structures(structure):
    r = run("verify", "--structure", structure, "--n", "4096", "--queries", "20000")
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    assert report["structure"] == structure
    assert report["ok"]
    assert report["mismatches"]["other"] == 0
    assert report["mismatches"]["false_empty"] == 0
    assert report["queries"] > 0


def test_verify_rangetree_example():
    r = run("verify", "--structure", "rangetree", "--n", "4096", "--queries", "100000")
    report = json.loads(r.stdout)
    assert r.returncode == 0
    assert report["mismatches"]["other"] == 0
    assert report["mismatches"]["one_sided"] == 0


def test_verify_quadrant_exhaustive():
    r = run("verify", "--structure", "quadrant", "--exhaustive", "--n", "256")
    report = json.loads(r.stdout)
    assert r.returncode == 0
    assert report["queries"] == 4 * 257 * 257
    assert report["ok"]


def test_verify_reads_points_file(tmp_path):
    pts = tmp_path / "pts.csv"
    assert run("gen", "--n", "3000", "--seed", "11", "--out", str(pts)).returncode == 0
    r = run("verify", "--points", str(pts), "--structure", "main1", "--queries", "5000")
    assert r.returncode == 0
    assert json.loads(r.stdout)["n"] == 3000


def test_malformed_file_reports_line(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0.1,0.2\n0.3,0.4\n0.5;0.6\n")
    r = run("verify", "--points", str(bad), "--structure", "rangetree")
    assert r.returncode == 2
    assert "line 3" in r.stderr


def test_missing_file_is_io_error(tmp_path):
    r = run("verify", "--points", str(tmp_path / "nope.csv"))
    assert r.returncode == 2


def test_bad_structure_and_parameters():
    assert run("verify", "--structure", "kdtree", "--n", "10").returncode == 2
    assert run("verify", "--structure", "main1", "--n", "10", "--eps", "1.5").returncode == 2
    assert run("verify", "--structure", "main2", "--n", "10", "--c1", "16").returncode == 2


def test_bench_sweep_json_and_csv():
    r = run("bench", "--structure", "main2", "--sweep", "4096", "8192", "--queries", "20000")
    assert r.returncode == 0
    rows = json.loads(r.stdout)["rows"]
    assert [row["n"] for row in rows] == [4096, 8192]
    assert all(row["latency_ns"]["p50"] > 0 for row in rows)

    r = run("bench", "--structure", "oracle", "--sweep", "1024", "--queries", "10000", "--format", "csv")
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0].startswith("structure,n,")
    assert lines[1].startswith("oracle,1024,")


def test_bench_empty_sweep_is_usage_error():
    assert run("bench", "--structure", "main2", "--sweep").returncode == 2
    assert run("bench", "--structure", "main2").returncode == 2


def test_net_report():
    r = run("net", "--n", "65536", "--c", "32", "--trials", "2000")
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["empty_rects"] == 0
    assert report["trials"] == 2000
