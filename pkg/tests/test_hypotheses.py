"""Tests for the hypothesis checks."""

import pytest

from nfw.hypotheses import (
    CHECKS,
    ConditionResult,
    HypothesisReport,
    Verdict,
    codimension_condition,
    jacobian_minors,
    polynomial_determinant,
    run_check,
)
from nfw.problem import Limits

CUSP_FILE = "vars: z1 z2\ng1: z1^2 + z2^3\n"
QUARTIC_FILE = "vars: z1 z2\ng1: z1^4 + z1^2*z2 + z1*z2^2 + z2^4\n"
BISTELLAR_FILE = "vars: z1 z2\ng1: z1^3 + z1*z2 + z2^3\n"
DOUBLED_TRIANGLE = "vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\ng2: 1 + z1^2 + z2^2\n"
SIX_VARIABLE_PAIR = (
    "vars: z1 z2 z3 z4 z5 z6\nmode: laurent\n"
    "g1: z1 + z2 + z3 + z4^2 + z5^2 + z6^2\n"
    "g2: z1^2 + z2^2 + z3^2 + z4 + z5 + z6\n"
)


class TestVerdicts:
    """Test verdict aggregation."""

    def test_fail_dominates(self):
        """Test FAIL beats INCONCLUSIVE beats PASS."""
        passed = ConditionResult("c", {}, Verdict.PASS)
        unknown = ConditionResult("c", {}, Verdict.INCONCLUSIVE)
        failed = ConditionResult("c", {}, Verdict.FAIL, witness="x")
        assert HypothesisReport("h", (passed, unknown)).verdict is Verdict.INCONCLUSIVE
        assert HypothesisReport("h", (passed, unknown, failed)).verdict is Verdict.FAIL
        assert HypothesisReport("h").passed

    def test_any_of_alternatives(self):
        """Test one passing alternative is enough with combine=any."""
        passed = ConditionResult("a", {}, Verdict.PASS)
        unknown = ConditionResult("b", {}, Verdict.INCONCLUSIVE)
        failed = ConditionResult("c", {}, Verdict.FAIL, witness="x")
        assert HypothesisReport("h", (failed, passed), combine="any").verdict is Verdict.PASS
        assert HypothesisReport("h", (failed, unknown), combine="any").verdict is Verdict.INCONCLUSIVE
        assert HypothesisReport("h", (failed, failed), combine="any").verdict is Verdict.FAIL

    def test_not_applicable_ignored(self):
        """Test conditions whose preconditions fail do not decide the verdict."""
        skipped = ConditionResult("c", {}, Verdict.INCONCLUSIVE, witness="x", applicable=False)
        passed = ConditionResult("c", {}, Verdict.PASS)
        assert HypothesisReport("h", (passed, skipped)).verdict is Verdict.PASS
        assert HypothesisReport("h", (skipped,)).verdict is Verdict.INCONCLUSIVE

    def test_to_dict(self):
        """Test the report serializes verdict values."""
        report = HypothesisReport("h", (ConditionResult("c", {"facets": [0]}, Verdict.PASS, {"bound": 1}),))
        assert report.to_dict() == {
            "name": "h",
            "verdict": "PASS",
            "conditions": [
                {"name": "c", "parameters": {"facets": [0]}, "verdict": "PASS", "dimensions": {"bound": 1}, "witness": None, "applicable": True}
            ],
        }


class TestCodimension:
    """Test the codimension condition."""

    def test_point(self, poly):
        """Test the origin has codimension 2."""
        result = codimension_condition("c", {}, [poly("z1"), poly("z2")], 2, 2, "affine", Limits())
        assert result.verdict is Verdict.PASS
        assert result.dimensions == {"bound": 2, "affine_dim": 0, "codim": 2}

    def test_empty_in_torus(self, poly):
        """Test the axes miss the torus."""
        result = codimension_condition("c", {}, [poly("z1*z2")], 2, 1, "torus", Limits())
        assert result.verdict is Verdict.PASS
        assert result.dimensions["torus_dim"] == -1

    def test_trivial_bound(self, poly):
        """Test a non-positive bound passes without computing."""
        result = codimension_condition("c", {}, [poly("0")], 2, 0, "affine", Limits())
        assert result.dimensions == {"bound": 0}
        assert result.verdict is Verdict.PASS

    def test_exact_and_global_failures(self, poly):
        """Test a global failure is inconclusive unless exact."""
        exact = codimension_condition("c", {}, [poly("z1")], 2, 2, "affine", Limits())
        assert exact.verdict is Verdict.FAIL
        assert exact.witness == "codimension 1 < 2 in the affine space"
        loose = codimension_condition("c", {}, [poly("z1")], 2, 2, "affine", Limits(), exact_fail=False)
        assert loose.verdict is Verdict.INCONCLUSIVE


class TestJacobian:
    """Test polynomial determinants and Jacobian minors."""

    def test_determinant(self, poly):
        """Test a 2x2 determinant."""
        matrix = [[poly("z1"), poly("z2")], [poly("1"), poly("z1")]]
        assert polynomial_determinant(matrix, 2) == poly("z1^2 - z2")
        assert polynomial_determinant([], 2) == poly("1")

    def test_minors(self, poly):
        """Test the 1x1 minors are the nonzero partials."""
        assert jacobian_minors([poly("z1^2 + z2^3")], 2) == [poly("2*z1"), poly("3*z2^2")]
        assert jacobian_minors([poly("z1^2")], 2) == [poly("2*z1")]

    def test_full_minor(self, poly):
        """Test the 2x2 minor of two linear forms."""
        assert jacobian_minors([poly("z1 + z2"), poly("z1 - z2")], 2) == [poly("-2")]


class TestGermChecks:
    """Test the facet-subset and cone checks."""

    @pytest.mark.parametrize("name", ["thm1.1", "lemma1.3", "thm1.4", "lemma2.2", "lemma2.3", "nondegenerate"])
    def test_cusp_passes(self, make_problem, name):
        """Test the cusp satisfies every germ hypothesis."""
        assert run_check(name, make_problem(CUSP_FILE)).verdict is Verdict.PASS

    def test_cusp_cones(self, make_problem):
        """Test the cone checks visit every cone with a facet ray."""
        report = run_check("lemma2.3", make_problem(CUSP_FILE))
        assert [c.parameters for c in report.conditions] == [
            {"coordinates": [], "facets": [0]},
            {"coordinates": [0], "facets": [0]},
            {"coordinates": [1], "facets": [0]},
        ]

    def test_single_facet_has_no_pairs(self, make_problem):
        """Test thm1.4 has nothing to check with one facet."""
        assert run_check("thm1.4", make_problem(CUSP_FILE)).conditions == ()

    def test_quartic_thm14_fails(self, make_problem):
        """Test two facets without common support points fail exactly."""
        problem = make_problem(QUARTIC_FILE)
        assert run_check("thm1.1", problem).verdict is Verdict.PASS
        report = run_check("thm1.4", problem)
        assert report.verdict is Verdict.FAIL
        failed = [c for c in report.conditions if c.verdict is Verdict.FAIL]
        assert [c.parameters for c in failed] == [{"facets": [1, 2]}]
        assert failed[0].dimensions["codim"] == 0

    def test_bistellar_thm14(self, make_problem):
        """Test the two facets meet in a vertex."""
        assert run_check("thm1.4", make_problem(BISTELLAR_FILE)).verdict is Verdict.PASS

    def test_zero_generator(self, make_problem):
        """Test a zero polynomial fails before any geometry."""
        report = run_check("thm1.1", make_problem("vars: z1 z2\ng1: z1\ng2: 0\n"))
        assert report.verdict is Verdict.FAIL
        assert report.conditions[0].witness == "g2 is the zero polynomial"


class TestPartialsChecks:
    """Test checks on the partials of f."""

    def test_cusp(self, make_problem):
        """Test the cusp partials satisfy the one-index and Kushnirenko checks."""
        problem = make_problem("vars: z1 z2\nmode: partials\nf: z1^2 + z2^3\n")
        assert run_check("lemma2.3-one-index", problem).verdict is Verdict.PASS
        assert run_check("kushnirenko", problem).verdict is Verdict.PASS

    def test_bistellar_one_index_fails(self, make_problem):
        """Test both facet rays kill the partials at their one-index offsets."""
        problem = make_problem("vars: z1 z2\nmode: partials\nf: z1^3 + z1*z2 + z2^3\n")
        assert run_check("lemma2.3-one-index", problem).verdict is Verdict.FAIL
        assert run_check("kushnirenko", problem).verdict is Verdict.PASS

    def test_kushnirenko_not_convenient(self, make_problem):
        """Test f must meet every axis."""
        problem = make_problem("vars: z1 z2\nmode: partials\nf: z1^2 + z1*z2\n")
        report = run_check("kushnirenko", problem)
        assert report.verdict is Verdict.FAIL
        assert report.conditions[0].witness == "f misses a coordinate axis"


class TestLaurentChecks:
    """Test the polyhedral checks on Laurent polytopes."""

    def test_segment_not_full(self, make_problem):
        """Test a segment in the plane is not full."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: z1 + z2\n")
        report = run_check("full", problem)
        assert report.verdict is Verdict.FAIL
        assert report.conditions[0].witness == "dimension 1 < 2"

    def test_triangle_full(self, make_problem):
        """Test a triangle is full."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        assert run_check("full", problem).verdict is Verdict.PASS

    def test_k2_six_variables(self, make_problem):
        """Test two simplices in six variables satisfy the k=2 condition."""
        problem = make_problem(
            "vars: z1 z2 z3 z4 z5 z6\nmode: laurent\n"
            "g1: z1 + z2 + z3 + z4^2 + z5^2 + z6^2\n"
            "g2: z1^2 + z2^2 + z3^2 + z4 + z5 + z6\n"
        )
        assert run_check("remark-k2", problem).verdict is Verdict.PASS

    def test_k2_needs_two(self, make_problem):
        """Test remark-k2 does not apply to one polynomial."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        report = run_check("remark-k2", problem)
        assert report.verdict is Verdict.INCONCLUSIVE
        assert not report.conditions[0].applicable
        assert report.conditions[0].witness == "needs exactly two polynomials"

    def test_k2_needs_four_variables(self, make_problem):
        """Test remark-k2 does not apply in the plane."""
        problem = make_problem(DOUBLED_TRIANGLE)
        report = run_check("remark-k2", problem)
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.conditions[0].witness == "needs n >= 4"


class TestSection4:
    """Test the polyhedral hypotheses reported as alternatives."""

    def test_doubled_triangle(self, make_problem):
        """Test similar polytopes pass through fullness and equal edges."""
        report = run_check("section4", make_problem(DOUBLED_TRIANGLE))
        assert report.verdict is Verdict.PASS
        assert {c.name: c.verdict.value for c in report.conditions} == {
            "full": "PASS",
            "edges": "PASS",
            "weak-full": "FAIL",
            "remark-k2": "INCONCLUSIVE",
        }
        assert [c.applicable for c in report.conditions] == [True, True, True, False]

    def test_single_triangle(self, make_problem):
        """Test one full polytope passes."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        assert run_check("section4", problem).verdict is Verdict.PASS

    def test_six_variable_pair(self, make_problem):
        """Test the k=2 condition alone carries the pair of simplices."""
        report = run_check("section4", make_problem(SIX_VARIABLE_PAIR))
        verdicts = {c.name: c.verdict.value for c in report.conditions}
        assert verdicts["full"] == "FAIL"
        assert verdicts["remark-k2"] == "PASS"
        assert report.verdict is Verdict.PASS


class TestRunCheck:
    """Test check dispatch."""

    def test_unknown(self, make_problem):
        """Test unknown names raise KeyError."""
        with pytest.raises(KeyError, match="unknown check"):
            run_check("thm9.9", make_problem(CUSP_FILE))

    def test_germ_only(self, make_problem):
        """Test facet checks reject laurent problems."""
        problem = make_problem("vars: z1 z2\nmode: laurent\ng1: 1 + z1 + z2\n")
        with pytest.raises(ValueError, match="germ or partials"):
            run_check("thm1.1", problem)

    def test_kushnirenko_needs_partials(self, make_problem):
        """Test kushnirenko rejects germ problems."""
        with pytest.raises(ValueError, match="needs partials mode"):
            run_check("kushnirenko", make_problem(CUSP_FILE))

    def test_registry(self):
        """Test the registry names."""
        assert {"thm1.1", "lemma2.3-one-index", "section4", "kushnirenko"} <= set(CHECKS)
