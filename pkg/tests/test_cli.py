from __future__ import annotations

import subprocess
import sys

import pytest

from clbench.cli import EXIT_GATE, EXIT_OK, EXIT_PARAMS, EXIT_RESOURCE, main
from clbench.store import Store


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_moments_shard_then_resume(capsys, tmp_path):
    store = str(tmp_path / "r.ndjson")
    code, out = run(capsys, "moments", "--q", "3", "--n", "5", "--H", "5", "--shards", "4", "--shard", "1", "--store", store)
    assert code == EXIT_OK and "shard 1/4" in out and "1/4 shards" in out
    code, out = run(capsys, "moments", "--q", "3", "--n", "5", "--H", "5", "--shards", "4", "--store", store)
    assert code == EXIT_OK
    assert "skipping 1 shard(s)" in out
    assert "empirical = 8/9" in out  # 144 / 162
    assert len(Store(store).select("moments")) == 4


def test_moments_parameter_errors(capsys, tmp_path):
    store = str(tmp_path / "r.ndjson")
    assert main(["moments", "--q", "4", "--n", "5", "--store", store]) == EXIT_PARAMS
    assert main(["moments", "--q", "3", "--n", "5", "--H", "3", "--store", store]) == EXIT_PARAMS
    assert main(["moments", "--q", "5", "--n", "5", "--shards", "2", "--shard", "2", "--store", store]) == EXIT_PARAMS
    assert main(["moments", "--q", "5", "--n", "1", "--store", store]) == EXIT_PARAMS


def test_unknown_arguments_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["moments", "--bogus"])
    assert exc.value.code == EXIT_PARAMS


def test_components(capsys, tmp_path):
    csv_path = tmp_path / "c.csv"
    code, out = run(capsys, "components", "--H", "3,3", "--boundary", "id", "--n-min", "4", "--n-max", "8",
                    "--csv", str(csv_path))
    assert code == EXIT_OK
    assert "n=4: 2 component(s)" in out and "n=8: 3 component(s)" in out
    assert "stabilized at value 3 from 6" in out
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("degree,") and len(lines) == 1 + 2 + 3 + 3


def test_components_named_rack_and_bad_boundary(capsys):
    code, out = run(capsys, "components", "--rack", "s3_transpositions", "--boundary", "(123)", "--n-min", "2", "--n-max", "6")
    assert code == EXIT_OK and "n=4: 1 component(s)" in out
    assert main(["components", "--rack", "s3_transpositions", "--boundary", "nope"]) == EXIT_PARAMS
    assert main(["components", "--rack", "no_such_rack"]) == EXIT_PARAMS


def test_components_budget_is_a_resource_error(capsys):
    assert main(["components", "--H", "5", "--n-min", "10", "--n-max", "10", "--budget", "1000"]) == EXIT_RESOURCE


def test_rack_and_homology(capsys, tmp_path):
    code, out = run(capsys, "rack", "--list")
    assert code == EXIT_OK and "dihedral_3x3" in out
    code, out = run(capsys, "rack", "--rack", "dihedral_5", "--dump")
    assert code == EXIT_OK and out.count("\n") > 5
    rack_file = tmp_path / "r.txt"
    rack_file.write_text("rack\n2\n0 1\n0 1\n")
    code, out = run(capsys, "homology", "--rack-file", str(rack_file), "--d", "3", "--triplets", str(tmp_path / "tri"))
    assert code == EXIT_OK and "(1, 2, 4)" in out
    assert (tmp_path / "tri").is_dir()
    rack_file.write_text("rack\n2\n0 0\n0 1\n")
    assert main(["rack", "--rack-file", str(rack_file)]) == EXIT_PARAMS


def test_bounds(capsys, tmp_path):
    store = str(tmp_path / "r.ndjson")
    code, out = run(capsys, "bounds", "--c-size", "3", "--N0", "5", "--degU", "2", "--store", store)
    assert code == EXIT_OK
    assert "328356046060931066631381919758377760581308276266762244" in out
    assert Store(store).select("bounds")[0].outputs["threshold"] == str(4 * (6**17 + 1) ** 4)
    code, out = run(capsys, "bounds", "--c-size", "3", "--N0", "5", "--degU", "2",
                    "--C", "2", "--C-prime", "1", "--I", "1", "--J", "0", "--q", "16", "--n", "3")
    assert code == EXIT_OK and "8/15" in out  # (1/2) * q/(q-1)


def test_jacobian(capsys):
    code, out = run(capsys, "jacobian", "--q", "3", "--f", "1,0,0,0,2,1", "--oracle")
    assert code == EXIT_OK
    assert "29" in out
    assert main(["jacobian", "--q", "3", "--f", "1,0,0,0,1,1"]) == EXIT_PARAMS  # not squarefree


def test_verify_and_export(capsys, tmp_path, monkeypatch):
    store = tmp_path / "r.ndjson"
    monkeypatch.setenv("CLBENCH_STORE", str(store))
    code, out = run(capsys, "verify", "--gates", "5,7")
    assert code == EXIT_OK and out.count("[PASS]") == 2
    run(capsys, "bounds", "--c-size", "3", "--N0", "5", "--degU", "2")
    out_csv = tmp_path / "b.csv"
    assert main(["export", "--kind", "bounds", "--out", str(out_csv)]) == EXIT_OK
    assert out_csv.read_text().startswith("c_size,N0,degU,threshold")
    assert main(["export", "--kind", "nope", "--out", str(out_csv)]) == EXIT_PARAMS


def test_gate_failure_maps_to_exit_2(monkeypatch, capsys):
    from clbench import acceptance

    def failing(**kw):
        return acceptance.GateResult(7, "forced", False, "forced failure")

    monkeypatch.setitem(acceptance.GATES, 7, failing)
    assert main(["verify", "--gates", "7"]) == EXIT_GATE


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "clbench", "--help"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    for cmd in ("moments", "components", "rack", "homology", "bounds", "jacobian", "verify", "export"):
        assert cmd in res.stdout
