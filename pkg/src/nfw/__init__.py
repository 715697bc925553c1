"""Newton filtrations - Poincare series, hypothesis checks and identity verification."""

from nfw.artin import (
    artinian_basis,
    bar_dim,
    graded_report,
    induced_dim,
    quotient_total_dim,
    thm14_equal,
)
from nfw.errors import (
    FiltrationError,
    NfwError,
    NonPolynomialSeriesError,
    PolynomialSyntaxError,
    ProblemFileError,
    ResourceLimitError,
    WindowError,
)
from nfw.fan import PLFunction, SimplicialFan, build_fan, compute_m, h_hat, h_mu
from nfw.groebner import PolyIdeal, groebner, ideal_dim_affine, ideal_dim_torus
from nfw.hypotheses import (
    CHECKS,
    ConditionResult,
    HypothesisReport,
    Verdict,
    run_check,
)
from nfw.lattice import FiltrationSpec, OneIndexFiltration, l_direct, lemma33_report
from nfw.newton import (
    NewtonPolyhedron,
    initial_part,
    is_bistellar,
    newton_number,
    newton_polyhedron,
    newton_polytope,
    nu_matrix,
)
from nfw.otel import OTelHooks, create_otel_hooks
from nfw.polycore import Polynomial, parse_polynomial, partial_derivative
from nfw.problem import Limits, Problem, ProblemFile, parse_problem_file
from nfw.series import TruncatedSeries, Window, ambient_poincare, p_from_l
from nfw.toric import l_toric
from nfw.verify import IDENTITIES, Verifier, VerifierMetrics

__version__ = "0.1.0"

__all__ = [
    # Polynomials and problems
    "Polynomial",
    "parse_polynomial",
    "partial_derivative",
    "Limits",
    "Problem",
    "ProblemFile",
    "parse_problem_file",
    # Polyhedra and fans
    "NewtonPolyhedron",
    "newton_polyhedron",
    "newton_polytope",
    "nu_matrix",
    "initial_part",
    "is_bistellar",
    "newton_number",
    "SimplicialFan",
    "PLFunction",
    "build_fan",
    "compute_m",
    "h_mu",
    "h_hat",
    # Series and filtrations
    "Window",
    "TruncatedSeries",
    "ambient_poincare",
    "p_from_l",
    "FiltrationSpec",
    "OneIndexFiltration",
    "l_direct",
    "lemma33_report",
    "l_toric",
    "artinian_basis",
    "induced_dim",
    "bar_dim",
    "thm14_equal",
    "quotient_total_dim",
    "graded_report",
    # Ideals and hypotheses
    "PolyIdeal",
    "groebner",
    "ideal_dim_affine",
    "ideal_dim_torus",
    "Verdict",
    "ConditionResult",
    "HypothesisReport",
    "CHECKS",
    "run_check",
    # Verification
    "IDENTITIES",
    "Verifier",
    "VerifierMetrics",
    # Errors
    "NfwError",
    "PolynomialSyntaxError",
    "ProblemFileError",
    "WindowError",
    "NonPolynomialSeriesError",
    "FiltrationError",
    "ResourceLimitError",
    # Observability
    "OTelHooks",
    "create_otel_hooks",
]
