from fractions import Fraction

import pytest

from ultradisc.linearize import AffineRuleTail, MapSpec
from ultradisc.ufield import FieldDesc

Q5 = FieldDesc.padic(5)
F3 = FieldDesc.laurent_fp(3)
QT = FieldDesc.laurent_q()


def quadratic(field):
    """f = pi*x + x^2: the basic attracting example."""
    return MapSpec(field, field.uniformizer_power(1), (field.one(),))


def attracting_tail(field):
    """v(lam) = 1 with a_i = pi^(-i) for every i >= 2."""
    return MapSpec(field, field.uniformizer_power(1), (), AffineRuleTail(-1, 0, 2))


def repelling_tail(field):
    """v(lam) = -1 with a_i = lam^(-i) = pi^i for every i >= 2."""
    return MapSpec(field, field.uniformizer_power(-1), (), AffineRuleTail(1, 0, 2))


def frac(n, d=1):
    return Fraction(n, d)


@pytest.fixture(params=[Q5, F3, QT], ids=str)
def any_field(request):
    return request.param


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
