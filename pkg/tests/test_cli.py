import json
import subprocess
import sys
from pathlib import Path

import pytest

from qrk.cli import main, to_tsv

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_of_y(capsys):
    code, out, _ = run(capsys, "rank", "--quiver", DATA / "A3.qv", "--rep", DATA / "y.qrep")
    assert code == 0 and json.loads(out) == {"rank": 1}


def test_rank_finds_quiver_beside_the_rep(capsys):
    code, out, _ = run(capsys, "rank", "--rep", DATA / "x.qrep")
    assert code == 0 and json.loads(out) == {"rank": 0}


def test_disconnected_rank_reports_components(tmp_path, capsys):
    (tmp_path / "two.qv").write_text("quiver LL\nvertices 1 2\narrow m 1 1\narrow n 2 2\n")
    (tmp_path / "r.qrep").write_text("field Q\ndim 1=1 2=1\nmap m = [1]\n")
    code, out, _ = run(capsys, "rank", "--quiver", tmp_path / "two.qv", "--rep", tmp_path / "r.qrep")
    assert code == 0 and json.loads(out) == {"component_ranks": [1, 0]}


def test_sigma_and_iota(capsys):
    code, out, _ = run(capsys, "sigma", "--quiver", DATA / "A3.qv", "--rep", DATA / "y.qrep")
    assert code == 0 and json.loads(out)["dim"] == [1, 1, 1]
    code, out, _ = run(capsys, "iota", "--quiver", DATA / "A3.qv", "--rep", DATA / "y.qrep")
    assert code == 0 and json.loads(out)["kernel_dim"] == [0, 0, 0]


def test_chain_values(capsys):
    code, out, _ = run(capsys, "chain", "--quiver", DATA / "A3.qv", "--rep", DATA / "x.qrep",
                       "--chain", DATA / "global.qc", "--chain", DATA / "left.qc")
    assert code == 0
    assert [v["value"] for v in json.loads(out)["values"]] == [0, 1]


def test_decompose_typea(capsys):
    code, out, _ = run(capsys, "decompose-typea", "--quiver", DATA / "A3.qv", "--rep", DATA / "v.qrep")
    assert code == 0
    mult = {(r["k"], r["l"]): r["multiplicity"] for r in json.loads(out)["multiplicities"]}
    assert {k: v for k, v in mult.items() if v} == {(1, 2): 1, (2, 3): 2}


def test_census_report(tmp_path, capsys):
    out_file = tmp_path / "census.json"
    code, _, _ = run(capsys, "census", "--quiver", DATA / "A3.qv", "--dim", "1,2,1", "--field", "gf2",
                     "--chain", DATA / "global.qc", "--out", out_file)
    assert code == 0
    report = json.loads(out_file.read_text())
    assert set(report) >= {"field", "dim", "mode", "classes", "total"}
    assert report["total"] == "16"
    assert sum(int(c["count"]) for c in report["classes"] if c["values"] == [1]) == 3


def test_census_tsv(capsys):
    code, out, _ = run(capsys, "census", "--quiver", DATA / "A3.qv", "--dim", "1,2,1", "--field", "gf2", "--tsv")
    assert code == 0
    assert "total\t16" in out.splitlines()
    assert "sigma_dim\tiota_dim\tvalues\tcount" in out


def test_budget_exceeded_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("QRK_BUDGET", "100")
    code, _, err = run(capsys, "census", "--quiver", DATA / "A3.qv", "--dim", "2,2,2", "--field", "gf2")
    assert code == 2 and "budget" in err


def test_grassmannian(tmp_path, capsys):
    (tmp_path / "K2.qv").write_text("quiver K2\nvertices 1 2\narrow a 1 2\narrow b 1 2\n")
    (tmp_path / "r2.qrep").write_text("field GF 2\ndim 1=2 2=2\nmap a = [1,0;0,1]\nmap b = [0,1;0,0]\n")
    code, out, _ = run(capsys, "grassmannian", "--quiver", tmp_path / "K2.qv", "--rep", tmp_path / "r2.qrep",
                       "--sub-dim", "1,1")
    assert code == 0 and json.loads(out)["count"] == "1"


def test_strata_schema(capsys):
    code, out, _ = run(capsys, "strata", "--kronecker-n", "2", "--sub-dim", "1,2", "--field", "gf3")
    assert code == 0
    report = json.loads(out)
    assert report["n"] == 2 and report["beta"] == [1, 2] and report["q"] == 3
    assert report["disagreements"] == []
    assert {"d", "count_Xd", "count_open_stratum"} <= set(report["strata"][0])


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["rank"],
    ["census", "--dim", "1,x"],
    ["census", "--field", "gf4"],
    ["strata", "--kronecker-n", "2", "--sub-dim", "1,2,3", "--field", "gf2"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_bad_input_file_exits_1(tmp_path, capsys):
    (tmp_path / "bad.qrep").write_text("field Q\ndim 1=1 2=2 3=1\nmap a = [1,2]\n")
    code, _, err = run(capsys, "rank", "--quiver", DATA / "A3.qv", "--rep", tmp_path / "bad.qrep")
    assert code == 1 and "line 3" in err


def test_vertex_disagreement_exits_3_with_witness(capsys, monkeypatch):
    import qrk.cli
    from qrk.rank import VertexRankDisagreement

    def broken(phi):
        raise VertexRankDisagreement(phi, [0, 1, 0])

    monkeypatch.setattr(qrk.cli, "global_rank", broken)
    code, _, err = run(capsys, "rank", "--quiver", DATA / "A3.qv", "--rep", DATA / "y.qrep")
    assert code == 3 and "witness" in err and "map a = [1;0]" in err


def test_tsv_flattening():
    text = to_tsv({"a": 1, "rows": [{"x": 1, "y": [2, 3]}, {"x": 4}]})
    assert text.splitlines() == ["a\t1", "", "# rows", "x\ty", "1\t[2,3]", "4\t"]


def test_installed_script_runs():
    proc = subprocess.run([sys.executable, "-m", "qrk.cli", "rank", "--quiver", str(DATA / "A3.qv"),
                           "--rep", str(DATA / "y.qrep")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"rank": 1}
