from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infprob.scalars import (
    GaussianRational,
    InfScalar,
    QuadExt,
    parse_scalar,
    render_scalar,
    simplify,
    sqrt_exact,
    squarefree_decompose,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@given(fractions, fractions, fractions, fractions)
def test_dual_numbers_match_upper_triangular_matrices(a, b, c, d):
    x, y = InfScalar(a, b), InfScalar(c, d)
    product = x * y
    # [[a, b], [0, a]] @ [[c, d], [0, c]]
    assert (product.std, product.inf) == (a * c, a * d + b * c)


@given(fractions, fractions, fractions.filter(lambda v: v != 0), fractions)
def test_dual_division_inverts_multiplication(a, b, c, d):
    x, y = InfScalar(a, b), InfScalar(c, d)
    assert (x * y) / y == x


def test_quadratic_surds_stay_exact():
    r = sqrt_exact(Fraction(8))
    assert isinstance(r, QuadExt)
    assert simplify(r * r) == 8
    assert render_scalar(1 + sqrt_exact(2)) == {"p": "1", "q": "1", "s": "2"}
    assert simplify((1 + sqrt_exact(2)) ** 2 + (1 - sqrt_exact(2)) ** 2) == 6


def test_integer_surd_division_stays_rational():
    x = QuadExt(1, 1, 2) / QuadExt(2, 0, 2)
    assert simplify(x.a) == Fraction(1, 2) and isinstance(x.a, Fraction)


def test_sqrt_of_perfect_square_is_rational():
    assert sqrt_exact(Fraction(9, 4)) == Fraction(3, 2)


def test_squarefree_decomposition():
    assert squarefree_decompose(72) == (6, 2)


def test_gaussian_rationals():
    i = GaussianRational(0, 1)
    assert simplify(i * i) == -1
    assert render_scalar(GaussianRational(1, -2)) == {"re": "1", "im": "-2"}


@pytest.mark.parametrize("raw, value", [(3, 3), ("2/6", Fraction(1, 3)), (0.25, Fraction(1, 4))])
def test_parse_scalar(raw, value):
    assert parse_scalar(raw) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("one half")
    with pytest.raises(ValueError):
        parse_scalar(True)


@given(fractions)
def test_render_parse_round_trip(x):
    assert parse_scalar(render_scalar(x)) == x
