"""Test configuration and fixtures."""

from collections.abc import Callable

import pytest

from nfw.polycore import Polynomial, parse_polynomial
from nfw.problem import Problem

CUSP = "z1^2 + z2^3"


@pytest.fixture
def poly() -> Callable[..., Polynomial]:
    """Parse polynomial text over z1..zn (two variables by default)."""

    def parse(text: str, n: int = 2, laurent: bool = False) -> Polynomial:
        return parse_polynomial(text, [f"z{i + 1}" for i in range(n)], laurent=laurent)

    return parse


@pytest.fixture
def make_problem() -> Callable[..., Problem]:
    """Build a Problem from problem-file text."""

    def build(text: str, **options: object) -> Problem:
        return Problem.from_text(text, **options)

    return build


@pytest.fixture
def cusp_problem(make_problem: Callable[..., Problem]) -> Problem:
    return make_problem(f"vars: z1 z2\ng1: {CUSP}\nwindow: 0..12\n")
