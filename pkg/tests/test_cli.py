"""Tests for the command-line front-end."""

import json

import pytest

from nfw.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, run

CUSP_FILE = "vars: z1 z2\ng1: z1^2 + z2^3\nwindow: 0..12\n"
QUARTIC_FILE = "vars: z1 z2\ng1: z1^4 + z1^2*z2 + z1*z2^2 + z2^4\n"


@pytest.fixture
def cusp_path(tmp_path):
    path = tmp_path / "cusp.nfw"
    path.write_text(CUSP_FILE)
    return path


def report(capsys):
    return json.loads(capsys.readouterr().out)


class TestCommands:
    """Test each command end to end."""

    def test_polyhedron(self, cusp_path, capsys):
        """Test the polyhedron summary."""
        assert run(["polyhedron", str(cusp_path), "--json"]) == EXIT_OK
        document = report(capsys)
        assert document["command"] == "polyhedron"
        results = document["results"]
        assert results["r"] == 1
        assert results["nu"] == [[6]]
        assert results["M"] == 6
        assert results["newton_number"] == 2
        assert results["bistellar"] is True
        assert results["polyhedron"]["facets"][0]["normal"] == [3, 2]

    def test_series_ci(self, cusp_path, capsys):
        """Test the complete-intersection series of the cusp."""
        assert run(["series", str(cusp_path), "--which", "ci", "--json"]) == EXIT_OK
        results = report(capsys)["results"]
        assert results["series"]["coefficients"] == [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
        assert results["hypothesis"] == {"check": "thm1.1", "verdict": "PASS"}

    def test_series_window_override(self, cusp_path, capsys):
        """Test --window beats the file."""
        assert run(["series", str(cusp_path), "--which", "ambient", "--window", "0..3", "--json"]) == EXIT_OK
        document = report(capsys)
        assert document["results"]["series"]["coefficients"] == [1, 0, 1, 1]
        assert document["options"]["window"] == "0..3"

    def test_check_default_set(self, cusp_path, capsys):
        """Test the germ checks all pass on the cusp."""
        assert run(["check", str(cusp_path), "--json"]) == EXIT_OK
        verdicts = report(capsys)["results"]["verdict"]
        assert list(verdicts) == ["thm1.1", "lemma1.3", "thm1.4", "lemma2.2", "lemma2.3", "nondegenerate"]
        assert set(verdicts.values()) == {"PASS"}

    def test_check_fails(self, tmp_path, capsys):
        """Test a failed hypothesis exits 1."""
        path = tmp_path / "quartic.nfw"
        path.write_text(QUARTIC_FILE)
        assert run(["check", str(path), "--checks", "thm1.4"]) == EXIT_FAIL
        assert "thm1.4: FAIL" in capsys.readouterr().out

    def test_laurent_default_checks(self, tmp_path, capsys):
        """Test the polyhedral alternatives pass on similar triangles in the plane."""
        path = tmp_path / "triangles.nfw"
        path.write_text("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\ng2: 1 + z1^2 + z2^2\n")
        assert run(["check", str(path), "--json"]) == EXIT_OK
        results = report(capsys)["results"]
        assert results["verdict"] == {"section4": "PASS"}
        conditions = results["checks"][0]["conditions"]
        assert conditions[-1]["name"] == "remark-k2"
        assert conditions[-1]["applicable"] is False

    def test_verify(self, tmp_path, capsys):
        """Test verification of the cusp exits 0."""
        path = tmp_path / "cusp.nfw"
        path.write_text("vars: z1 z2\ng1: z1^2 + z2^3\nwindow: 0..6\n")
        assert run(["verify", str(path), "--json"]) == EXIT_OK
        results = report(capsys)["results"]
        assert results["metrics"]["identities_differ"] == 0
        assert results["hypotheses"]["thm1.1"]["verdict"] == "PASS"

    def test_fan_dump(self, cusp_path, tmp_path, capsys):
        """Test the fan is written as JSON."""
        dump = tmp_path / "fan.json"
        assert run(["fan", str(cusp_path), "--fan-dump", str(dump)]) == EXIT_OK
        fan = json.loads(dump.read_text())
        assert fan["rays"] == [[1, 0], [0, 1], [3, 2]]
        assert fan["cones"] == [[0, 2], [1, 2]]

    def test_digest_is_deterministic(self, cusp_path, capsys):
        """Test the same input gives the same digest."""
        run(["polyhedron", str(cusp_path), "--json"])
        first = report(capsys)["input_digest"]
        run(["polyhedron", str(cusp_path), "--json"])
        assert report(capsys)["input_digest"] == first


class TestExitCodes:
    """Test input errors and resource limits."""

    def test_missing_file(self, tmp_path, capsys):
        """Test an unreadable file exits 2."""
        assert run(["check", str(tmp_path / "absent.nfw")]) == EXIT_INPUT
        assert capsys.readouterr().err.startswith("error: ")

    def test_bad_problem(self, tmp_path, capsys):
        """Test a malformed problem file exits 2 with its position."""
        path = tmp_path / "bad.nfw"
        path.write_text("vars: z1 z2\ng1: z1 + z3\n")
        assert run(["polyhedron", str(path)]) == EXIT_INPUT
        assert "unknown variable" in capsys.readouterr().err

    def test_too_many_germ_polynomials(self, tmp_path, capsys):
        """Test a germ with k > n is an input error."""
        path = tmp_path / "overdetermined.nfw"
        path.write_text("vars: z1 z2\ng1: z1^2\ng2: z2^2\ng3: z1*z2\n")
        assert run(["polyhedron", str(path)]) == EXIT_INPUT
        assert "germ mode needs k <= n" in capsys.readouterr().err

    def test_unknown_check(self, cusp_path, capsys):
        """Test an unknown check name exits 2."""
        assert run(["check", str(cusp_path), "--checks", "thm9.9"]) == EXIT_INPUT
        assert "unknown check" in capsys.readouterr().err

    def test_series_in_laurent_mode(self, tmp_path):
        """Test series need a germ."""
        path = tmp_path / "laurent.nfw"
        path.write_text("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        assert run(["series", str(path)]) == EXIT_INPUT

    def test_window_too_large(self, cusp_path, capsys):
        """Test a window over the point cap exits 3."""
        assert run(["series", str(cusp_path), "--which", "ambient", "--window", "0..30000"]) == EXIT_INCONCLUSIVE
        assert "exceeds limit" in capsys.readouterr().err
