import random

import pytest
from hypothesis import strategies as st

from ffdioph.field_arith import Poly, make_field
from ffdioph.laurent import LaurentBall

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2, "g^2+g+1")
F9 = make_field(3, 2, "g^2+1")
FIELDS = [F2, F3, F4, F9]


@pytest.fixture
def F():
    return F3


def X(field=F3):
    return Poly.x(field)


def L(text, field=F3):
    return LaurentBall.parse(field, text)


def polys(field, max_deg=4):
    return st.lists(st.sampled_from(list(field.elements())), max_size=max_deg + 1).map(
        lambda cs: Poly(field, cs))


def laurents(field, lo=-3, hi=5, exact=True):
    """Exact Laurent polynomials with indices in [lo, hi] (or balls truncated at hi)."""
    def build(args):
        start, cs = args
        return LaurentBall(field, start, cs, None if exact else hi)
    return st.tuples(st.integers(lo, hi),
                     st.lists(st.sampled_from(list(field.elements())), max_size=hi - lo + 1)
                     ).map(build)


def random_poly(rng, field, max_deg):
    d = rng.randint(-1, max_deg)
    return Poly(field, [rng.randrange(field.k) for _ in range(d + 1)])


def seeded(seed=0):
    return random.Random(seed)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
