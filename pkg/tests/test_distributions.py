from fractions import Fraction

import pytest

from infprob.distributions import AtomicMeasure, InfDistribution, anticommutator_target, dilate, free_convolve
from infprob.scalars import sqrt_exact


def test_measure_merges_and_drops_zero_weights():
    mu = AtomicMeasure(((1, 2), (1, -1), (3, 0)))
    assert mu.atoms == ((1, 1),)
    assert AtomicMeasure.from_json(mu.to_json()) == mu


def test_dilate():
    d = InfDistribution((2, 4), (1, 2), AtomicMeasure(((2, 1),)), AtomicMeasure(((2, Fraction(1, 2)),)))
    assert dilate(d, 1) == d
    assert dilate(d, 0).moments == (0, 0)
    six = dilate(d, 3)
    assert six.moments == (6, 36) and six.measure.atoms == ((6, 1),)


def test_free_convolution():
    semicircle = InfDistribution((0, 1, 0, 2), (0, 0, 0, 0))
    zero = InfDistribution((0, 0, 0, 0), (0, 0, 0, 0))
    assert free_convolve(semicircle, zero) == semicircle
    assert free_convolve(semicircle, semicircle).moments == (0, 2, 0, 8)
    inf_op = InfDistribution((0, 0, 0), (1, 1, 1))
    summed = free_convolve(inf_op, inf_op)
    assert summed.moments == (0, 0, 0) and summed.inf_moments == (2, 2, 2)


def test_backing_measure_must_match():
    with pytest.raises(ValueError):
        InfDistribution((1, 2), (0, 0), AtomicMeasure(((1, 1),)))


def test_anticommutator_target():
    target = anticommutator_target(AtomicMeasure(((1, 1),)), 1, 2)
    assert set(target.atoms) == {(1 + sqrt_exact(2), 1), (1 - sqrt_exact(2), 1)}
    assert target.moment(2) == 6
    assert anticommutator_target(AtomicMeasure(((1, 1),)), 1, 0).atoms == ((1, 2),)
    assert anticommutator_target(AtomicMeasure(()), 1, 2).atoms == ()
