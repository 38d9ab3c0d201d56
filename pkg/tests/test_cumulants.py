import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infprob.cumulants import (
    IncompleteMarginalError,
    MultiFunctional,
    boolean_cumulants_from_moments,
    cumulants_of_products,
    eval_boolean_word,
    eval_free_word,
    free_cumulants_from_moments,
    inf_cumulants_from_moments,
    inf_moments_from_cumulants,
    kappa_pi,
    moments_from_boolean_cumulants,
    moments_from_free_cumulants,
    partial_kappa_pi,
)
from infprob.oracles import free_cumulants_mobius
from infprob.partitions import Partition
from infprob.scalars import InfScalar

rational_seqs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6), min_size=1, max_size=7)


def test_kappa_pi_products():
    f = MultiFunctional.from_sequence([1, 2, 5])
    pi = Partition(3, ((1, 3), (2,)))
    assert kappa_pi(pi, f, "aaa") == 2
    assert kappa_pi(Partition.one(3), f, "aaa") == 5
    assert kappa_pi(Partition.zero(3), f, "aaa") == 1


def test_partial_kappa_pi():
    f = MultiFunctional.from_sequence([1, 2, 5])
    zero = MultiFunctional.from_sequence([0, 0, 0])
    fp = MultiFunctional.from_sequence([7, 11, 13])
    pi = Partition(3, ((1, 3), (2,)))
    assert partial_kappa_pi(Partition.one(3), f, fp, "aaa") == 13
    assert partial_kappa_pi(pi, f, zero, "aaa") == 0
    assert partial_kappa_pi(pi, f, fp, "aaa") == 11 * 1 + 2 * 7


def test_table_functional_reports_missing_entries():
    f = MultiFunctional(table={("a",): 1})
    with pytest.raises(IncompleteMarginalError):
        f(("b",))


def test_free_cumulants_examples():
    assert free_cumulants_from_moments([0, 1, 0, 2]) == [0, 1, 0, 0]
    assert free_cumulants_from_moments([1, 1, 1, 1]) == [1, 0, 0, 0]
    assert moments_from_free_cumulants([0, 1, 0, 0]) == [0, 1, 0, 2]
    assert moments_from_free_cumulants([0, 1, 0, 0, 0, 0]) == [0, 1, 0, 2, 0, 5]


def test_boolean_cumulants_examples():
    t = Fraction(3, 2)
    assert boolean_cumulants_from_moments([t, t**2, t**3]) == [t, 0, 0]
    assert boolean_cumulants_from_moments([1, 2]) == [1, 1]
    assert moments_from_boolean_cumulants([0, 0, 0]) == [0, 0, 0]


def test_inf_cumulants_examples():
    k, kp = inf_cumulants_from_moments([1, 2], [1, 0])
    assert kp == [1, -2]
    mp = [Fraction(1, 3), 2, -1, 5]
    assert inf_cumulants_from_moments([0] * 4, mp)[1] == mp
    assert inf_cumulants_from_moments([1, 3, 2, 7], [0] * 4)[1] == [0] * 4


@given(rational_seqs)
def test_free_route_agrees_with_mobius_inversion(m):
    assert free_cumulants_from_moments(m) == free_cumulants_mobius(m, len(m))


@settings(max_examples=50)
@given(rational_seqs, rational_seqs)
def test_inf_transform_is_the_derivative(m, mp):
    # moments of (m + t m') to first order in t
    n = min(len(m), len(mp))
    k, kp = inf_cumulants_from_moments(m[:n], mp[:n])
    duals = free_cumulants_from_moments([InfScalar(x, y) for x, y in zip(m, mp)][:n])
    assert [d.std for d in duals] == k and [d.inf for d in duals] == kp
    assert inf_moments_from_cumulants(k, kp) == (m[:n], mp[:n])


def test_products_as_arguments():
    rng = random.Random(1)
    table = {}

    def kappa(args):
        return table.setdefault(args, Fraction(rng.randint(-5, 5), rng.randint(1, 3)))

    f = MultiFunctional(fn=kappa)
    a1, a2 = "x", "y"
    assert cumulants_of_products(f, [2], (a1, a2), "boolean") == f((a1, a2)) + f((a1,)) * f((a2,))
    assert cumulants_of_products(f, [2], (a1, a2)) == f((a1, a2)) + f((a1,)) * f((a2,))
    assert cumulants_of_products(f, [1, 2, 3], ("x", "y", "x")) == f(("x", "y", "x"))


def test_free_word_examples():
    marginals = {"a": ([1, 1], [0, 0]), "b": ([0, 0], [1, 0])}
    value = eval_free_word(marginals, ["a", "b"]) + eval_free_word(marginals, ["b", "a"])
    assert value.inf == 2
    single = eval_free_word({"a": ([1, 2, 5], [3, 4, 6])}, ["a", "a"])
    assert (single.std, single.inf) == (2, 4)


def test_boolean_word_examples():
    marginals = {"x1": ([1, 3]), "x2": ([1, 5])}
    marginals = {s: (m,) for s, m in marginals.items()}
    assert eval_boolean_word(marginals, ["x1", "x2", "x1", "x2"], False).std == 1
    assert eval_boolean_word(marginals, ["x1", "x1"], False).std == 3


def test_free_word_needs_enough_moments():
    with pytest.raises(IncompleteMarginalError):
        eval_free_word({"a": ([1], [0])}, ["a", "a"])
