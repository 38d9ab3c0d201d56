from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infprob.oracles import (
    anticommutator_inf_brute,
    boolean_poly_cumulants_lattice,
    commutator_inf_brute,
)
from infprob.poly_laws import (
    BooleanPolyInput,
    DegenerateRootError,
    FreePolyInput,
    ParityError,
    ZeroRatioError,
    alternating_sign_sum,
    anticommutator_inf_law,
    anticommutator_inf_measure,
    boolean_poly_cumulants,
    boolean_poly_moments,
    boolean_poly_moments_via_cumulants,
    commutator_inf_law,
    gamma_direct,
    gamma_recurrence,
    inf_boolean_poly_cumulants,
    inf_boolean_poly_cumulants_lifted,
)
from infprob.distributions import AtomicMeasure
from infprob.scalars import GaussianRational

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def test_anticommutator_example():
    inp = FreePolyInput(1, 2, (1, 1))
    assert anticommutator_inf_law(inp) == [2, 6]
    assert [anticommutator_inf_brute([1, 1], [1, 1], n) for n in (1, 2)] == [2, 6]
    assert anticommutator_inf_law(FreePolyInput(1, 2, (0, 0, 0))) == [0, 0, 0]
    m1 = Fraction(3, 2)
    mp = (1, -2, Fraction(1, 3))
    assert anticommutator_inf_law(FreePolyInput(m1, 0, mp)) == [2 * m1**n * mp[n - 1] for n in (1, 2, 3)]


def test_anticommutator_measure():
    nu = anticommutator_inf_measure(AtomicMeasure(((1, 1),)), 1, 2)
    assert nu.moments(2) == [2, 6]


def test_commutator_examples():
    # kappa_2(x1) = 1 with m1 = 0
    assert commutator_inf_law(FreePolyInput(0, 1, (0, 1)))[1] == 2
    assert commutator_inf_brute([0, 1], [0, 1], 2) == 2
    law = commutator_inf_law(FreePolyInput(2, 5, (1, 2, 3, 4, 5)))
    assert law[0] == law[2] == law[4] == 0
    assert commutator_inf_law(FreePolyInput(2, 4, (1, 1, 1, 1))) == [0, 0, 0, 0]


@given(small, small.map(abs), st.lists(small, min_size=4, max_size=4))
def test_commutator_ignores_the_mean(m1, variance, mp):
    base = commutator_inf_law(FreePolyInput(0, variance, tuple(mp)))
    assert commutator_inf_law(FreePolyInput(m1, variance + m1**2, tuple(mp))) == base


def test_alternating_sign_sum_examples():
    assert alternating_sign_sum(2, 1) == 1
    assert alternating_sign_sum(4, 2) == -1
    assert alternating_sign_sum(4, 3) == -1
    with pytest.raises(ParityError):
        alternating_sign_sum(5, 2)


ONES = BooleanPolyInput(1, 1, 1, 1, 1, 1, 1, 1, 1, 1)


def test_boolean_poly_worked_instance():
    assert boolean_poly_cumulants(ONES, 5) == [2] * 5
    moments, measure = boolean_poly_moments(ONES, 5)
    assert moments == [2, 6, 18, 54, 162]
    assert measure.atoms == ((3, Fraction(2, 3)),)
    gamma = gamma_recurrence(ONES, 4)
    assert gamma.odd == (2, 4, 14, 40) and gamma.even == (0, 2, 4, 14)
    assert gamma_recurrence(ONES, 1).moments == [2]
    assert inf_boolean_poly_cumulants(ONES, 2)[1] == 6


def test_boolean_poly_centered_inputs_vanish():
    inp = BooleanPolyInput(2, 3, 0, 1, 0, 4)
    assert boolean_poly_cumulants(inp, 6) == [0] * 6
    assert boolean_poly_moments_via_cumulants(inp, 6) == [0] * 6


def test_boolean_poly_recurrence_errors():
    with pytest.raises(ZeroRatioError):
        gamma_recurrence(BooleanPolyInput(1, 1, 0, 1, 1, 1), 4)
    inp = BooleanPolyInput(1, 1, 0, 1, 1, 1)
    assert gamma_recurrence(inp, 4, fallback=True) == gamma_direct(inp, 4)


def test_boolean_poly_degenerate_root():
    # alpha_1 = alpha_2 = d = 0 force omega = 0
    with pytest.raises(DegenerateRootError):
        boolean_poly_moments(BooleanPolyInput(1, 1, 0, 0, 0, 1), 3)
    # a Gaussian omega^2 has no exact square root here
    i = GaussianRational(0, 1)
    with pytest.raises(ValueError, match="complex"):
        boolean_poly_moments(BooleanPolyInput(i, 1, 1, 1, 1, 1), 3)


def test_boolean_poly_negative_discriminant_gives_conjugate_atoms():
    inp = BooleanPolyInput(1, -1, 1, 1, 1, 1)
    assert inp.discriminant == -12
    moments, measure = boolean_poly_moments(inp, 6)
    assert moments == boolean_poly_moments_via_cumulants(inp, 6) == [0, -2, 0, 6, 0, -18]
    assert [measure.moment(k) for k in range(1, 7)] == moments


@given(small, small, small, small, small, small)
def test_boolean_cumulants_match_lattice(a, b, p, q, r, s):
    inp = BooleanPolyInput(a, b, p, q, r, s)
    assert boolean_poly_cumulants(inp, 6) == boolean_poly_cumulants_lattice(
        a, b, [p, q, 1, 2], [r, s, 3, -1], 6
    )
    assert gamma_direct(inp, 6).moments == boolean_poly_moments_via_cumulants(inp, 6)


@given(st.lists(small, min_size=10, max_size=10))
def test_inf_boolean_closed_form_matches_lift(v):
    inp = BooleanPolyInput(*v)
    assert inf_boolean_poly_cumulants(inp, 7) == inf_boolean_poly_cumulants_lifted(inp, 7)


def test_inf_boolean_with_complex_coefficients():
    i = GaussianRational(0, 1)
    inp = BooleanPolyInput(i, -i, 2, 3, 5, 7, 1, -1, 2, 1)
    inf = inf_boolean_poly_cumulants(inp, 7)
    assert inf[0] == inf[2] == inf[4] == inf[6] == 0
    assert inf == inf_boolean_poly_cumulants_lifted(inp, 7)
    assert inf_boolean_poly_cumulants(BooleanPolyInput(1, 2, 3, 4, 5, 6, 0, 0, 0, 0), 5) == [0] * 5
