import warnings

import numpy as np
import pytest

from infprob.rmt import (
    EnsembleSpec,
    bridge_word,
    estimate_boolean_bridge,
    estimate_inf_moments,
    named_spectrum,
    sample_haar_unitary,
    sample_rng,
)


def test_haar_unitary_is_unitary():
    U = sample_haar_unitary(6, sample_rng(0, 0))
    assert np.allclose(U @ U.conj().T, np.eye(6))
    one = sample_haar_unitary(1, sample_rng(0, 1))
    assert abs(abs(one[0, 0]) - 1) < 1e-12


def test_haar_first_entry_has_uniform_modulus():
    values = np.array([abs(sample_haar_unitary(8, sample_rng(5, i))[0, 0]) ** 2 for i in range(4000)])
    stderr = values.std(ddof=1) / np.sqrt(len(values))
    assert abs(values.mean() - 1 / 8) < 3 * stderr


def test_streams_depend_only_on_seed_and_index():
    a = sample_rng(3, 7).standard_normal(4)
    b = sample_rng(3, 7).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_rng(3, 8).standard_normal(4))


def test_named_spectra():
    assert sum(named_spectrum("zero_two", 4)) == 4
    spec = EnsembleSpec(8, (1,), "pm1")
    assert spec.b_tr_moment(1) == 0 and spec.b_tr_moment(2) == 1
    with pytest.raises(ValueError):
        named_spectrum("pm1", 5)


def test_small_commutator_estimate():
    results = estimate_inf_moments(EnsembleSpec(64, (1,), "pm1", 60, 1), "comm", (1, 2))
    first, second = results
    assert first.empirical_mean == 0 and first.theory == 0
    assert second.theory == 2 and second.within(8 / 64)


def test_order_cap_and_unknown_polynomial():
    spec = EnsembleSpec(8, (1,), "pm1", 2, 0)
    with pytest.raises(ValueError):
        estimate_inf_moments(spec, "comm", (9,))
    with pytest.raises(ValueError):
        estimate_inf_moments(spec, "cube", (1,))


def test_bridge_estimates():
    spec = EnsembleSpec(96, (1,), "zero_two", 80, 4)
    words = [bridge_word((-1,), (1,)), bridge_word((-1, 1), (1, 1)), bridge_word((1, 1), (1, 1))]
    results = estimate_boolean_bridge(spec, words)
    assert [r.theory for r in results] == [1, 1, 0]
    assert all(r.within(8 / 96) for r in results)
    assert results[2].empirical_mean == 0


def test_bridge_needs_rank_one_projection():
    with pytest.raises(ValueError):
        estimate_boolean_bridge(EnsembleSpec(4, (1, 1, 1, 1), "pm1", 2), [bridge_word((-1,), (1,))])


def test_thread_count_does_not_change_results():
    spec = EnsembleSpec(32, (1,), "zero_two", 12, 9)
    one = estimate_inf_moments(spec, "anticomm", (1, 2, 3), workers=1)
    many = estimate_inf_moments(spec, "anticomm", (1, 2, 3), workers=4)
    assert [r.to_json() for r in one] == [r.to_json() for r in many]


def test_commutator_deviation_shrinks_with_n():
    deviations = []
    for N in (64, 128, 256):
        (result,) = estimate_inf_moments(EnsembleSpec(N, (1,), "pm1", 100, 17), "comm", (2,))
        deviations.append(abs(result.empirical_mean - result.theory))
    # statistical, so a violation is reported rather than failed
    if not deviations[0] >= deviations[1] >= deviations[2]:
        warnings.warn(f"commutator m'_2 deviation not monotone in N: {deviations}", stacklevel=1)
    assert deviations[2] < 8 / 256 + 0.01


def test_imaginary_residue_is_a_health_error():
    from infprob.rmt import EstimatorResult, NumericalHealthError, _check_health

    noisy = [EstimatorResult("comm", 2, 2.0, 0.1, 2.0, imag_residue=1e-3)]
    with pytest.raises(NumericalHealthError):
        _check_health(noisy, 1.0)
    _check_health([EstimatorResult("comm", 2, 2.0, 0.1, 2.0, imag_residue=1e-13)], 1.0)
