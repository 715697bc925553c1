"""Tests for the identity verification driver."""

import pytest

from nfw.problem import Limits
from nfw.verify import IDENTITIES, Verifier, resource_limited

CUSP_FILE = "vars: z1 z2\ng1: z1^2 + z2^3\n"
CUSP_PARTIALS = "vars: z1 z2\nmode: partials\nf: z1^2 + z2^3\nwindow: 0..8\n"
BISTELLAR_PARTIALS = "vars: z1 z2\nmode: partials\nf: z1^3 + z1*z2 + z2^3\nwindow: 0..6\n"


def by_name(results):
    return {result.name: result for result in results}


class TestCuspGerm:
    """Test every identity on the cusp as a germ."""

    def test_all_identities(self, make_problem):
        """Test counted identities agree and the rest are skipped."""
        verifier = Verifier()
        results, gates = verifier.run(make_problem(CUSP_FILE), problem_name="cusp")
        assert [r.name for r in results] == list(IDENTITIES)
        statuses = {r.name: r.status for r in results}
        for name in (
            "p-from-l",
            "thm1.1",
            "lemma1.3",
            "thm2.4b",
            "thm2.7b",
            "thm1.4",
            "thm2.5",
            "thm2.5-fan-independence",
            "lemma3.3",
            "lemma3.3-diagonal",
            "lemma3.2b",
            "thm3.4a",
        ):
            assert statuses[name] == "equal", name
        for name in ("thm3.4b", "remark3.4b", "kushnirenko"):
            assert statuses[name] == "skipped"
        assert not any(r.failed for r in results)
        assert {"thm1.1", "lemma2.3", "thm1.4", "lemma2.3-one-index"} <= set(gates)
        assert verifier.metrics.to_dict() == {
            "identities_equal": 12,
            "identities_differ": 0,
            "identities_gated": 0,
            "identities_skipped": 3,
            "errors": 0,
        }

    def test_counted_flags(self, make_problem):
        """Test cross-checks between two computations are not counted."""
        results = by_name(Verifier().run(make_problem(CUSP_FILE))[0])
        assert not results["thm2.5-fan-independence"].counted
        assert not results["lemma3.3-diagonal"].counted
        assert results["lemma3.3"].counted
        assert results["thm1.1"].gate == "thm1.1"
        assert results["thm1.1"].gate_verdict == "PASS"

    def test_skip_reason(self, make_problem):
        """Test k != n is explained."""
        result = by_name(Verifier(identities=["thm3.4b"]).run(make_problem(CUSP_FILE))[0])["thm3.4b"]
        assert result.note == "needs k = n, got k = 1, n = 2"
        assert not result.counted

    def test_lemma13_counted_for_one_facet(self, make_problem):
        """Test the F-bar series equals prod (1 - t^nu) L on the whole window when r = 1."""
        result = by_name(Verifier(identities=["lemma1.3"]).run(make_problem(CUSP_FILE))[0])["lemma1.3"]
        assert result.status == "equal"
        assert result.counted
        assert result.gate == "lemma1.3"
        assert result.gate_verdict == "PASS"
        assert result.left.coefficients == [1, 0, 1, 1, 1, 1, 1, 1, 1]

    def test_lemma13_reported_for_several_facets(self, make_problem):
        """Test lemma1.3 does not decide the exit code when r > 1."""
        problem = make_problem("vars: z1 z2\ng1: z1^3 + z1*z2 + z2^3\nwindow: 0..3\n")
        result = by_name(Verifier(identities=["lemma1.3"]).run(problem)[0])["lemma1.3"]
        assert not result.counted
        assert result.note == "compared on all points; exact for r = 1, here r = 2"

    def test_thm24b(self, make_problem):
        """Test the Poincare series of F-bar from L against the product formula."""
        result = by_name(Verifier(identities=["thm2.4b"]).run(make_problem(CUSP_FILE))[0])["thm2.4b"]
        assert result.status == "equal"
        assert result.gate == "lemma2.3"
        assert result.left.coefficients == [1, 0, 1, 1, 1, 1, 1, 1, 1]
        assert result.right == result.left

    def test_thm27b_note(self, make_problem):
        """Test thm2.7b compares where h is convex."""
        result = by_name(Verifier(identities=["thm2.7b"]).run(make_problem(CUSP_FILE))[0])["thm2.7b"]
        assert result.note == "compared at 3 of 9 points where h is convex"


class TestPartials:
    """Test identities on the partials of f."""

    def test_cusp(self, make_problem):
        """Test the one-index identities and the Milnor number."""
        verifier = Verifier(identities=["thm1.1", "thm3.4a", "thm3.4b", "remark3.4b", "kushnirenko"])
        results = by_name(verifier.run(make_problem(CUSP_PARTIALS))[0])
        assert all(r.status == "equal" for r in results.values())
        assert results["thm3.4b"].left == 2
        assert results["thm3.4b"].right == 2
        assert results["kushnirenko"].left == 2

    def test_milnor_number_six(self, make_problem):
        """Test the one-index series of z1^3 + z2^4 sums to 6."""
        verifier = Verifier(identities=["thm3.4a", "thm3.4b", "remark3.4b", "kushnirenko"])
        problem = make_problem("vars: z1 z2\nmode: partials\nf: z1^3 + z2^4\n")
        assert problem.rhos == [8, 9]
        results = by_name(verifier.run(problem)[0])
        assert all(r.status == "equal" for r in results.values())
        assert (results["thm3.4b"].left, results["thm3.4b"].right) == (6, 6)
        assert results["kushnirenko"].right == 6

    def test_gated(self, make_problem):
        """Test a failed one-index hypothesis gates thm3.4a and thm3.4b."""
        verifier = Verifier(identities=["thm3.4a", "thm3.4b", "kushnirenko"])
        results = by_name(verifier.run(make_problem(BISTELLAR_PARTIALS))[0])
        assert results["thm3.4a"].status == "gated"
        assert results["thm3.4a"].gate_verdict == "FAIL"
        assert not results["thm3.4a"].counted
        assert results["thm3.4a"].note.startswith("hypothesis lemma2.3-one-index is FAIL; sides ")
        assert results["kushnirenko"].status == "equal"
        assert results["kushnirenko"].left == 1
        assert results["thm3.4b"].status == "gated"
        assert "nonzero coefficient" in results["thm3.4b"].note
        assert results["thm3.4b"].right == 1
        assert verifier.metrics.identities_gated == 2


class TestSkipsAndErrors:
    """Test identities that cannot run."""

    def test_laurent_skipped(self, make_problem):
        """Test laurent problems skip the filtration identities."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        results = by_name(Verifier(identities=["p-from-l", "kushnirenko"]).run(problem)[0])
        assert results["p-from-l"].note == "filtration identities need germ or partials mode"
        assert results["kushnirenko"].note == "needs partials mode"

    def test_resource_limit(self, make_problem):
        """Test a capped window is an error and reported as resource limited."""
        errors = []
        verifier = Verifier(
            identities=["p-from-l"],
            on_error=lambda problem, identity, error, ms: errors.append((problem, identity, type(error).__name__)),
        )
        problem = make_problem(CUSP_FILE, limits=Limits(max_window_points=1))
        results, _ = verifier.run(problem, problem_name="cusp")
        assert results[0].status == "error"
        assert results[0].note.startswith("ResourceLimitError: window of 9 points")
        assert not results[0].failed
        assert resource_limited(results)
        assert errors == [("cusp", "p-from-l", "ResourceLimitError")]
        assert verifier.metrics.errors == 1

    def test_unknown_identity(self):
        """Test unknown identity names are rejected."""
        with pytest.raises(ValueError, match="unknown identity"):
            Verifier(identities=["thm9.9"])


class TestHooks:
    """Test observability hooks."""

    def test_on_identity(self, make_problem):
        """Test the hook sees every result."""
        seen = []
        verifier = Verifier(
            identities=["p-from-l", "thm2.5"],
            on_identity=lambda problem, result, ms: seen.append((problem, result.name, result.status)),
        )
        verifier.run(make_problem(CUSP_FILE), problem_name="cusp")
        assert seen == [("cusp", "p-from-l", "equal"), ("cusp", "thm2.5", "equal")]

    def test_failing_hook_is_caught(self, make_problem):
        """Test a raising hook does not break verification."""

        def broken(problem, result, ms):
            raise RuntimeError("exporter down")

        verifier = Verifier(identities=["p-from-l"], on_identity=broken)
        results, _ = verifier.run(make_problem(CUSP_FILE))
        assert results[0].status == "equal"
