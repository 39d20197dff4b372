"""Command-line interface: documents, exit codes, determinism."""

import json
import shutil

import pytest

from qlm.cli import main
from qlm.quiverext import CaseId
from qlm.relminer import DegenerateSamplingError, certificate_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestModelCommand:
    def test_twisted_plane_json(self, capsys):
        code, out, _ = run(capsys, "model", "--case", "twisted-plane")
        assert code == 0
        doc = json.loads(out)
        assert doc["case"] == "twisted-plane"
        assert doc["model"]["ambient_dim"] == 10
        assert doc["model"]["equations"][1] == "X3^2 - 2*X6"
        assert doc["cone"]["kind"] == "double-hyperplane"
        assert doc["cone"]["rank"] == 1
        assert doc["lci"]["dim"] == 8 and doc["lci"]["is_lci"] is True

    def test_three_lines_fixed_locus(self, capsys):
        code, out, _ = run(capsys, "model", "--case", "three-lines", "--fixed-locus")
        assert code == 0
        doc = json.loads(out)
        assert doc["fixed_locus"] is True
        assert doc["model"]["parent"] == "three-lines"
        assert doc["model"]["equations"] == ["-Z1*Z2*Z3 + Z4^2"]
        assert doc["cone"]["kind"] == "double-hyperplane"
        assert doc["lci"]["dim"] == 7

    def test_stable_model(self, capsys):
        code, out, _ = run(capsys, "model", "--case", "stable")
        doc = json.loads(out)
        assert code == 0
        assert doc["model"]["equations"] == []
        assert len(doc["model"]["coordinates"]) == 8
        assert all("definition" not in c for c in doc["model"]["coordinates"])
        assert doc["cone"]["kind"] == "full-space"

    def test_stable_fixed_locus_is_usage_error(self, capsys):
        code, _, err = run(capsys, "model", "--case", "stable", "--fixed-locus")
        assert code == 2
        assert "fixed-locus" in err

    def test_unknown_case_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "model", "--case", "nonsense")
        assert code == 2

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "model", "--case", "rk2-plus-line", "--format", "text")
        assert code == 0
        assert "tangent cone: quadric, rank 4" in out
        assert "u11*u22 - u12*u21 = 0" in out

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "model.json"
        code, out, _ = run(capsys, "model", "--case", "stable", "--out", str(target))
        assert code == 0
        assert target.read_text(encoding="utf-8") == out


class TestVerifyCommand:
    def test_single_case_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--case", "three-lines", "--format", "text")
        assert code == 0
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_json_document(self, capsys):
        code, out, _ = run(capsys, "verify", "--case", "rk2-plus-line")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["failed"] == 0
        assert all(c["passed"] for c in doc["checks"])

    def test_two_runs_identical_bytes(self, capsys):
        _, first, _ = run(capsys, "verify", "--case", "three-lines", "--seed", "42")
        _, second, _ = run(capsys, "verify", "--case", "three-lines", "--seed", "42")
        assert first == second

    def test_missing_cache_triggers_mining_then_verifies(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("QLM_DATA_DIR", str(tmp_path))
        assert not any(tmp_path.iterdir())
        code, out, _ = run(capsys, "verify", "--case", "order3-triple")
        assert code == 0
        assert json.loads(out)["passed"] is True
        # the freshly mined certificate was cached for the next run
        assert (tmp_path / "relation-order3-triple-w12-seed42.json").exists()

    def test_tampered_cached_relation_fails(self, capsys, tmp_path, monkeypatch):
        pinned = certificate_path(CaseId.ORDER3_TRIPLE, 12, 42)
        doc = json.loads(pinned.read_text(encoding="utf-8"))
        vector = doc["nullspace"][0]
        index = next(i for i, c in enumerate(vector) if c != "0")
        vector[index] = "2" if vector[index] == "1" else "1"
        target = tmp_path / pinned.name
        target.write_text(json.dumps(doc), encoding="utf-8")
        monkeypatch.setenv("QLM_DATA_DIR", str(tmp_path))
        code, out, _ = run(capsys, "verify", "--case", "order3-triple")
        assert code == 1
        report = json.loads(out)
        assert report["failed"] >= 1


class TestVerifyCaseSelection:
    def test_stable_case_has_checks(self, capsys):
        code, out, _ = run(capsys, "verify", "--case", "stable")
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] >= 4
        ids = {c["id"] for c in doc["checks"]}
        assert "ambient-table" in ids and "cone-classifications" in ids

    def test_case_selection_is_a_subset(self, capsys):
        _, all_out, _ = run(capsys, "verify", "--all")
        _, one_out, _ = run(capsys, "verify", "--case", "rk2-plus-line")
        all_ids = {c["id"] for c in json.loads(all_out)["checks"]}
        one_ids = {c["id"] for c in json.loads(one_out)["checks"]}
        assert one_ids < all_ids
        assert "rk2-relation" in one_ids
        assert "order3-certificate" not in one_ids


class TestMineCommand:
    def test_default_weight_is_case_specific(self, capsys, tmp_path):
        target = tmp_path / "cert.json"
        code, _, _ = run(capsys, "mine", "--case", "three-lines", "--out", str(target))
        assert code == 0
        doc = json.loads(target.read_text(encoding="utf-8"))
        assert doc["weight_bound"] == 6

    def test_corrupt_cached_relation_fails_model_cleanly(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "relation-order3-triple-w12-seed42.json").write_text("{ not json", encoding="utf-8")
        monkeypatch.setenv("QLM_DATA_DIR", str(tmp_path))
        code, _, err = run(capsys, "model", "--case", "order3-triple")
        assert code == 1
        assert "error:" in err

    def test_mine_three_lines_writes_certificate(self, capsys, tmp_path):
        target = tmp_path / "cert.json"
        code, out, _ = run(
            capsys, "mine", "--case", "three-lines", "--max-weight", "6",
            "--samples", "50", "--out", str(target),
        )
        assert code == 0
        doc = json.loads(target.read_text(encoding="utf-8"))
        assert doc["verified_symbolically"] is True
        assert len(doc["nullspace"]) == 1

    def test_mine_idempotent_for_fixed_seed(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "mine", "--case", "three-lines", "--max-weight", "6", "--out", str(a))
        run(capsys, "mine", "--case", "three-lines", "--max-weight", "6", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_mine_stable_rejected_by_parser(self, capsys):
        code, _, _ = run(capsys, "mine", "--case", "stable")
        assert code == 2

    def test_degenerate_sampling_exit_code(self, capsys, monkeypatch):
        def explode(*args, **kwargs):
            raise DegenerateSamplingError("forced for the test")

        monkeypatch.setattr("qlm.cli.mine_for_case", explode)
        code, _, err = run(capsys, "mine", "--case", "three-lines")
        assert code == 3
        assert "forced" in err

    def test_mine_text_format(self, capsys, tmp_path):
        target = tmp_path / "cert.json"
        code, out, _ = run(
            capsys, "mine", "--case", "three-lines", "--max-weight", "6",
            "--format", "text", "--out", str(target),
        )
        assert code == 0
        assert "nullspace dimension: 1" in out
        assert "relation:" in out
