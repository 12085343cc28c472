import json
import shutil
import subprocess
import sys

import pytest

from torpure.cli import main, run


def report(*argv):
    code, out = run(list(argv) + ["--json"])
    data = json.loads(out)
    data.pop("timing")
    return code, data


class TestValidate:
    def test_fixture(self):
        code, out = run(["validate", "es_impuro.json"])
        assert code == 0
        assert "Sigma1: fan, complete" in out

    def test_duplicate_ray(self, tmp_path):
        p = tmp_path / "dup.json"
        p.write_text(json.dumps({"n": 2, "rays": [[1, 0], [1, 0], [-1, -1]]}))
        code, data = report("validate", str(p))
        assert code == 3
        assert data["violations"] == [{"kind": "duplicate column", "columns": [1, 2]}]

    def test_malformed(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run(["validate", str(p)])[0] == 2
        p.write_text(json.dumps({"n": 2, "rays": [[1, 0, 0]]}))
        assert run(["validate", str(p)])[0] == 2
        p.write_text(json.dumps({"rays": [[1, 0], [0, 1]], "fans": {"A": [[1, 5]]}}))
        assert run(["validate", str(p)])[0] == 2

    def test_missing_file(self):
        assert run(["validate", "/nonexistent/file.json"])[0] == 2

    def test_bad_fan(self, tmp_path):
        p = tmp_path / "f.json"
        data = json.loads(open(_fixture("ex_noncompletabile.json")).read())
        data["fans"]["Sigma"].append([2, 3, 5, 6])
        p.write_text(json.dumps(data))
        code, rep = report("validate", str(p))
        assert code == 3
        assert sorted(map(tuple, rep["fans"]["Sigma"]["offending_pair"])) == [(1, 4, 5, 6), (2, 3, 5, 6)]


def _fixture(name):
    from torpure.cli import bundled_fixture
    return bundled_fixture(name)


class TestCommands:
    def test_purity_stored_basis(self):
        code, out = run(["purity", "es_impuro.json", "--fan", "Sigma1", "--paper-basis"])
        assert code == 0
        assert "IMPURE" in out
        assert "(30,0)+[1] mod 2" in out and "(0,120)" in out

    def test_purity_json(self):
        code, data = report("purity", "es_impuro.json", "--fan", "Sigma1", "--paper-basis")
        assert data["verdict"] == "Impure"
        assert data["class_group"] == {"rank": 2, "torsion": [2]}
        gens = [(g["free"], g["torsion"]) for g in data["picard"]["generators"]]
        assert gens == [([30, 0], [1]), ([0, 120], [0])]

    def test_purity_pure(self):
        code, data = report("purity", "es_puro.json", "--paper-basis")
        assert data["verdict"] == "Pure" and data["via"] == "free-part-test"
        assert [g["free"] for g in data["picard"]["generators"]] == [[60, 0], [0, 120]]

    def test_mult(self):
        code, out = run(["mult", "es_impuro.json", "--fan", "SigmaHat1"])
        assert code == 0
        assert "6 10 30 20 18 12  gcd 2" in out
        code, data = report("mult", "es_impuro.json", "--fan", "SigmaHat2")
        assert data["multiplicities"]["SigmaHat2"]["multiplicities"] == [7, 9, 30, 20, 18, 12]
        assert data["multiplicities"]["SigmaHat2"]["m_sigma"] == 1

    def test_complete(self):
        code, out = run(["complete", "ex_noncompletabile.json", "--fan", "Sigma"])
        assert code == 0
        assert "NOT COMPLETABLE without new rays" in out
        code, data = report("complete", "ex_noncompletabile.json", "--fan", "Sigma")
        assert data["verdict"] == "not completable"
        assert [2, 3, 6] in data["unpaired_ridges"]

    def test_extend(self, tmp_path):
        p = tmp_path / "q.json"
        p.write_text(json.dumps({"n": 2, "rays": [[1, 0], [0, 1]], "fans": {"Q": [[1, 2]]}}))
        code, data = report("complete", str(p), "--ray=-1,-1")
        assert code == 0 and data["complete"]
        assert data["steps"][0]["kind"] == "visible"

    def test_enumerate(self):
        code, data = report("enumerate", "es_impuro.json")
        assert len(data["fans"]) == 2
        assert data["m_tot"] == data["m_min"] == 2

    def test_classgroup(self):
        code, data = report("classgroup", "es_puro.json")
        assert data["class_group"] == {"rank": 2, "torsion": [2]}
        assert data["det_beta"] == 2
        assert data["beta"] == [[1, 0, 0], [0, 2, 0], [0, 0, 1]]

    def test_cartier(self):
        code, data = report("cartier", "es_impuro.json", "--fan", "Sigma1")
        from torpure.linalg import Lattice
        from conftest import C_X
        assert Lattice.from_generators(data["cartier_basis"]) == Lattice.from_generators(C_X)

    def test_picard(self):
        code, out = run(["picard", "es_puro.json", "--paper-basis"])
        assert "(60,0)" in out and "(0,120)" in out

    def test_fan_required(self):
        assert run(["purity", "es_impuro.json"])[0] == 2

    def test_incomplete_fan(self):
        assert run(["purity", "ex_noncompletabile.json"])[0] == 3

    def test_stored_basis_needs_matrices(self, tmp_path):
        p = tmp_path / "p2.json"
        p.write_text(json.dumps({"rays": [[1, 0], [0, 1], [-1, -1]], "fans": {"P2": [[1, 2], [2, 3], [1, 3]]}}))
        assert run(["picard", str(p)])[0] == 0
        assert run(["picard", str(p), "--paper-basis"])[0] == 2


class TestReports:
    @pytest.mark.parametrize("argv", [
        ["purity", "es_impuro.json", "--fan", "Sigma2"],
        ["mult", "es_impuro.json"],
        ["enumerate", "es_impuro.json"],
        ["complete", "ex_noncompletabile.json"],
    ])
    def test_deterministic_round_trip(self, argv):
        _, a = run(argv + ["--json"])
        _, b = run(argv + ["--json"])
        da, db = json.loads(a), json.loads(b)
        da.pop("timing"), db.pop("timing")
        assert da == db
        assert json.loads(json.dumps(da)) == da
        assert {"command", "verdict", "inputs"} <= set(da)

    def test_jobs_flag(self):
        _, a = report("enumerate", "es_impuro.json", "--jobs", "2")
        _, b = report("enumerate", "es_impuro.json")
        assert a == b


def test_main_exit_code(capsys):
    assert main(["mult", "es_impuro.json", "--fan", "SigmaHat1"]) == 0
    assert "gcd 2" in capsys.readouterr().out


@pytest.mark.skipif(shutil.which("torpure") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["torpure", "validate", "es_puro.json"], capture_output=True, text=True)
    assert out.returncode == 0
    out = subprocess.run([sys.executable, "-m", "torpure.cli", "mult", "es_puro.json"],
                         capture_output=True, text=True)
    assert out.returncode == 0
