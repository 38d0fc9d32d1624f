"""Tests for the qwalk command line."""

import csv
import io
import json

import pytest

from qwalk import cli
from qwalk.hadamard import dump_phase_matrix, generic_q
from qwalk.groups import AbelianGroup
from qwalk.logging import AuditEventType, AuditLogger, load_manifest


@pytest.fixture(autouse=True)
def audit(tmp_path, monkeypatch):
    logger = AuditLogger(log_dir=tmp_path / "audit")
    monkeypatch.setattr(cli, "get_audit_logger", lambda: logger)
    return logger


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


class TestWalkCommand:
    """qwalk walk."""

    def test_exact_second_moment(self, capsys):
        """Test that Z2, Z2, p = 2 prints the exact value 3."""
        code, out = run(capsys, "walk", "--x", "Z2", "--y", "Z2", "--p", "2")
        assert code == 0
        payload = json.loads(out.out)
        assert payload["exact"] == "3"
        assert payload["value"] == 3.0

    def test_group_method_range(self, capsys):
        """Test a p range with the group-word count."""
        code, out = run(capsys, "walk", "--x", "Z2", "--y", "Z3", "--p", "1:3", "--method", "group")
        assert code == 0
        exacts = [w["exact"] for w in json.loads(out.out)["walks"]]
        assert exacts == ["1", "4", "18"]

    def test_cap_exit_code(self, capsys, audit):
        """Test that a resource cap maps to exit 3 and is audited."""
        code, _ = run(capsys, "walk", "--x", "Z5", "--y", "Z5", "--p", "8")
        assert code == 3
        assert audit.read_events(AuditEventType.CAP_EXCEEDED)

    def test_bad_group(self, capsys):
        """Test that a malformed descriptor maps to exit 2."""
        code, _ = run(capsys, "walk", "--x", "Q7", "--p", "2")
        assert code == 2

    def test_unknown_subcommand(self, capsys):
        """Test that argparse errors map to exit 2."""
        code, _ = run(capsys, "frobnicate")
        assert code == 2


class TestMomentsCommand:
    """qwalk moments and qwalk model."""

    def test_spectral_matches_exact(self, capsys):
        """Test the spectral moment at generic Q on Z2, Z2."""
        code, out = run(capsys, "moments", "--x", "Z2", "--y", "Z2", "--q", "random", "--seed", "7",
                        "--p", "2", "--method", "spectral")
        assert code == 0
        (moment,) = json.loads(out.out)["moments"]
        assert moment["value"] == pytest.approx(3.0, abs=1e-6)

    def test_csv_to_stdout(self, capsys):
        """Test the (p, method, value, uncertainty, seed, time_ms) table."""
        code, out = run(capsys, "moments", "--p", "1:3", "--csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.out)))
        assert [int(r["p"]) for r in rows] == [1, 2, 3]
        assert set(rows[0]) == {"p", "method", "value", "uncertainty", "seed", "time_ms"}

    def test_q_from_file(self, capsys, tmp_path):
        """Test Q read from a JSON file."""
        Z2 = AbelianGroup.cyclic(2)
        path = dump_phase_matrix(generic_q(Z2, Z2, seed=3), tmp_path / "q.json")
        code, _ = run(capsys, "moments", "--q", str(path), "--p", "2", "--method", "truncated", "--r", "2")
        assert code == 0

    def test_q_shape_mismatch(self, capsys, tmp_path):
        """Test that a Q of the wrong shape maps to exit 2."""
        Z2, Z3 = AbelianGroup.cyclic(2), AbelianGroup.cyclic(3)
        path = dump_phase_matrix(generic_q(Z2, Z3, seed=3), tmp_path / "q.json")
        code, _ = run(capsys, "moments", "--x", "Z2", "--y", "Z2", "--q", str(path))
        assert code == 2

    def test_missing_q_file(self, capsys, tmp_path):
        """Test that a missing Q file maps to exit 2."""
        code, _ = run(capsys, "moments", "--q", str(tmp_path / "nope.json"))
        assert code == 2

    def test_model_report(self, capsys, tmp_path):
        """Test the model check report and model dump."""
        dump = tmp_path / "model.json"
        code, out = run(capsys, "model", "--x", "Z2", "--y", "Z3", "--dump", str(dump))
        assert code == 0
        payload = json.loads(out.out)
        assert payload["projective"]["passed"]
        assert payload["wreath"]["passed"]
        assert payload["index_size"] == 6
        assert dump.exists()


class TestAsymptCommand:
    """qwalk asympt."""

    def test_square_sweep(self, capsys):
        """Test that c_3/K^2 approaches 5 from above for alpha = beta = 1."""
        code, out = run(capsys, "asympt", "--alpha", "1", "--beta", "1", "--k", "2:6", "--p", "3")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.out)))
        scaled = [float(r["exact_scaled"]) for r in rows]
        assert [int(r["K"]) for r in rows] == [2, 3, 4, 5, 6]
        assert all(b < a for a, b in zip(scaled, scaled[1:]))
        assert all(float(r["predicted_scaled"]) == pytest.approx(5.0) for r in rows)

    def test_non_integer_sizes(self, capsys):
        """Test that alpha K must be an integer."""
        code, _ = run(capsys, "asympt", "--alpha", "1.5", "--k", "3")
        assert code == 2


class TestMcCommand:
    """qwalk mc."""

    def test_moment(self, capsys):
        """Test the first moment estimate."""
        code, out = run(capsys, "mc", "--x", "Z2", "--y", "Z3", "--p", "1", "--samples", "50", "--threads", "1")
        assert code == 0
        (moment,) = json.loads(out.out)["moments"]
        assert moment["value"] == pytest.approx(1.0, abs=1e-12)

    def test_spectrum_csv(self, capsys, tmp_path):
        """Test the spectrum histogram written to a file."""
        path = tmp_path / "hist.csv"
        code, out = run(capsys, "mc", "--x", "Z8", "--y", "Z8", "--spectrum", "--samples", "20",
                        "--bins", "10", "--csv", str(path))
        assert code == 0
        assert json.loads(out.out)["mass"] == pytest.approx(1.0)
        assert len(path.read_text().splitlines()) == 11


class TestVerifyCommand:
    """qwalk verify."""

    def test_only_cheap_checks(self, capsys):
        """Test a restricted verify run."""
        code, out = run(capsys, "verify", "--only", "WALK-001,HAAR-001")
        assert code == 0
        payload = json.loads(out.out)
        assert payload["passed"]
        assert "WALK-001" in out.err

    def test_unknown_check(self, capsys):
        """Test that an unknown check id maps to exit 2."""
        code, _ = run(capsys, "verify", "--only", "NOPE-001")
        assert code == 2

    def test_list(self, capsys):
        """Test the plan listing."""
        code, out = run(capsys, "verify", "--list")
        assert code == 0
        assert "ORACLE-001" in out.out

    def test_failure_exit_code(self, capsys, monkeypatch):
        """Test that a failing suite exits with 1."""
        from qwalk.verify import suite

        monkeypatch.setitem(suite.CHECKS, "HAAR-001", lambda params, **_: ({}, ["injected"]))
        code, out = run(capsys, "verify", "--only", "HAAR-001")
        assert code == 1
        assert "injected" in out.err


class TestManifest:
    """Run manifests and replay."""

    def test_manifest_written(self, capsys, tmp_path, audit):
        """Test manifest.json and result.json in --out."""
        out_dir = tmp_path / "run"
        code, _ = run(capsys, "walk", "--p", "3", "--out", str(out_dir))
        assert code == 0
        manifest = load_manifest(out_dir)
        assert manifest.command == "walk"
        assert manifest.exit_code == 0
        assert manifest.params["x"] == "Z2"
        assert (out_dir / "result.json").exists()
        assert audit.read_events(AuditEventType.RUN_FINISHED, run_id=manifest.run_id)

    def test_replay_reproduces(self, capsys, tmp_path):
        """Test that replaying into a new directory reproduces the exact result."""
        out_dir, replay_dir = tmp_path / "run", tmp_path / "replay"
        run(capsys, "walk", "--x", "Z3", "--y", "Z2", "--p", "3", "--out", str(out_dir))
        first = json.loads((out_dir / "result.json").read_text())
        code, _ = run(capsys, "replay", str(out_dir / "manifest.json"), "--out", str(replay_dir))
        second = json.loads((replay_dir / "result.json").read_text())
        assert code == 0
        assert first["exact"] == second["exact"] == "18"
        assert first["count"] == second["count"]
        assert load_manifest(replay_dir).argv[-2:] == ["--out", str(replay_dir)]

    def test_replay_leaves_source_untouched(self, capsys, tmp_path):
        """Test that a replay never rewrites the source run directory."""
        out_dir = tmp_path / "run"
        run(capsys, "walk", "--p", "2", "--out", str(out_dir))
        before = (out_dir / "manifest.json").read_text()
        result_before = (out_dir / "result.json").read_text()
        code, _ = run(capsys, "replay", str(out_dir))
        assert code == 0
        assert (out_dir / "manifest.json").read_text() == before
        assert (out_dir / "result.json").read_text() == result_before

    def test_replay_into_source_refused(self, capsys, tmp_path):
        """Test that --out pointing at the source run directory is a usage error."""
        out_dir = tmp_path / "run"
        run(capsys, "walk", "--p", "2", "--out", str(out_dir))
        code, _ = run(capsys, "replay", str(out_dir), "--out", str(out_dir))
        assert code == 2

    def test_strip_out(self):
        """Test removal of both --out spellings."""
        assert cli.strip_out(["walk", "--out", "d", "--p", "2"]) == ["walk", "--p", "2"]
        assert cli.strip_out(["walk", "--out=d"]) == ["walk"]

    def test_replay_missing_argv(self, capsys, tmp_path):
        """Test that a manifest without a command is refused."""
        from qwalk.logging import RunManifest

        RunManifest(command="walk").write(tmp_path)
        code, _ = run(capsys, "replay", str(tmp_path))
        assert code == 2
