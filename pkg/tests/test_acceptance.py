"""Acceptance suite: one test per numbered criterion.

Run with ``python3 -m pytest tests/test_acceptance.py -v``; the terminal
summary prints one PASS/FAIL line per criterion with its tolerance.
Running this file directly does the same.
"""

from __future__ import annotations

import io
import json
import random
import time
from fractions import Fraction
from itertools import product
from math import comb
from pathlib import Path

import pytest
import sympy as sp

from infprob.bridge import (
    IdempotentModel,
    boolean_cumulant,
    closed_form_inf_moment,
    closed_form_j_between,
    closed_form_j_leading,
    eval_inf_word_with_idempotent,
    jword,
    markov_krein_sequence,
    psi_state,
    random_functional,
    verify_boolean_independence,
    verify_monotone_independence,
)
from infprob.cli import run
from infprob.cumulants import (
    boolean_cumulants_from_moments,
    eval_boolean_word,
    free_cumulants_from_moments,
    inf_cumulants_from_moments,
    inf_moments_from_cumulants,
    moments_from_boolean_cumulants,
    moments_from_free_cumulants,
)
from infprob.oracles import (
    anticommutator_inf_brute,
    boolean_poly_moments_words,
    commutator_inf_brute,
    finite_matrix_spectral_shift,
    inf_cumulants_of_square_lattice,
    inf_rdiag_lattice,
    paired_r_diagonal_count,
)
from infprob.partitions import PartitionClass, count_partitions, enumerate_partitions
from infprob.poly_laws import (
    BooleanPolyInput,
    FreePolyInput,
    alternating_sign_sum,
    alternating_sign_sum_brute,
    anticommutator_inf_law,
    boolean_poly_cumulants,
    boolean_poly_moments,
    boolean_poly_moments_via_cumulants,
    boolean_poly_roots,
    commutator_inf_law,
    gamma_recurrence,
    inf_boolean_poly_cumulants,
    inf_boolean_poly_cumulants_lifted,
)
from infprob.rdiagonal import (
    DeterminingSequences,
    cumulants_of_square,
    epsilon_words,
    inf_cumulants_of_square,
    inf_rdiag_cumulant,
)
from infprob.rmt import EnsembleSpec, estimate_inf_moments
from infprob.scalars import InfScalar, inf_part, std_part
from infprob.series import spectral_shift_series

BUDGET = json.loads((Path(__file__).parent / "fixtures" / "mc_budget.json").read_text())


def rationals(rng: random.Random, k: int, span: int = 5, den: int = 4) -> list:
    return [Fraction(rng.randint(-span, span), rng.randint(1, den)) for _ in range(k)]


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@pytest.mark.criterion(1, "lattice counts NC, I, CI", "exact, < 60 s")
def test_lattice_counts(record_property):
    start = time.perf_counter()
    for n in range(1, 13):
        assert len(enumerate_partitions(n, PartitionClass.NONCROSSING)) == catalan(n)
    for n in range(1, 17):
        assert len(enumerate_partitions(n, PartitionClass.INTERVAL)) == 2 ** (n - 1)
        assert count_partitions(n, PartitionClass.CYCLIC_INTERVAL) == 2**n - n
        assert len(enumerate_partitions(n, PartitionClass.CYCLIC_INTERVAL)) == 2**n - n
    elapsed = time.perf_counter() - start
    record_property("seconds", f"{elapsed:.1f}")
    assert elapsed < 60


@pytest.mark.criterion(2, "moment/cumulant transform round trips", "exact, < 60 s")
def test_transform_round_trips(record_property):
    rng = random.Random(2)
    start = time.perf_counter()
    for _ in range(100):
        m, mp = rationals(rng, 8), rationals(rng, 8)
        assert moments_from_free_cumulants(free_cumulants_from_moments(m, 8), 8) == m
        assert free_cumulants_from_moments(moments_from_free_cumulants(m, 8), 8) == m
        assert moments_from_boolean_cumulants(boolean_cumulants_from_moments(m, 8), 8) == m
        assert boolean_cumulants_from_moments(moments_from_boolean_cumulants(m, 8), 8) == m
        k, kp = inf_cumulants_from_moments(m, mp, 8)
        assert inf_moments_from_cumulants(k, kp, 8) == (m, mp)
        assert inf_cumulants_from_moments(*inf_moments_from_cumulants(m, mp, 8), 8) == (m, mp)
    elapsed = time.perf_counter() - start
    record_property("seconds", f"{elapsed:.1f}")
    assert elapsed < 60


def _free_poly_case(rng):
    kappa, kappa_prime, mp = rationals(rng, 12), rationals(rng, 12), rationals(rng, 6)
    m = moments_from_free_cumulants(kappa, 2)
    return kappa, kappa_prime, mp, FreePolyInput(m[0], m[1], tuple(mp))


@pytest.mark.criterion(3, "anticommutator closed form vs brute-force lattice sum, n <= 6", "exact, < 5 min")
def test_anticommutator_matches_brute_force(record_property):
    rng = random.Random(3)
    start = time.perf_counter()
    for _ in range(25):
        kappa, kappa_prime, mp, inp = _free_poly_case(rng)
        closed = anticommutator_inf_law(inp, 6)
        for n in range(1, 7):
            assert anticommutator_inf_brute(kappa, mp, n, kappa_prime) == closed[n - 1]
    elapsed = time.perf_counter() - start
    record_property("seconds", f"{elapsed:.1f}")
    assert elapsed < 300


@pytest.mark.criterion(4, "commutator closed form vs signed brute force; centering invariance", "exact")
def test_commutator_matches_brute_force(record_property):
    rng = random.Random(4)
    for _ in range(25):
        kappa, kappa_prime, mp, inp = _free_poly_case(rng)
        closed = commutator_inf_law(inp, 6)
        assert all(closed[n - 1] == 0 for n in (1, 3, 5))
        for n in range(1, 7):
            assert commutator_inf_brute(kappa, mp, n, kappa_prime) == closed[n - 1]
        shift = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        shifted = FreePolyInput(inp.m1 + shift, inp.variance + (inp.m1 + shift) ** 2, inp.x2_inf_moments)
        assert commutator_inf_law(shifted, 6) == closed
        moved = [kappa[0] + shift, *kappa[1:]]
        for n in range(1, 7):
            assert commutator_inf_brute(moved, mp, n, kappa_prime) == closed[n - 1]


@pytest.mark.criterion(5, "alternating composition sign sum, even n <= 14", "exact, < 30 s")
def test_alternating_sign_sum(record_property):
    start = time.perf_counter()
    checked = 0
    for n in range(2, 15, 2):
        for r in range(1, n + 1):
            assert alternating_sign_sum(n, r) == alternating_sign_sum_brute(n, r)
            checked += 1
    elapsed = time.perf_counter() - start
    record_property("pairs", checked)
    assert elapsed < 30


@pytest.mark.criterion(6, "R-diagonal closed forms vs lattice sums; prime-free reduction", "exact")
def test_rdiagonal_closed_forms(record_property):
    rng = random.Random(6)
    for _ in range(3):
        kappa = [Fraction(0), *rationals(rng, 11)]
        kappa_prime, mp = rationals(rng, 12), rationals(rng, 6)
        for n in range(1, 7):
            for eps in epsilon_words(n):
                assert inf_rdiag_lattice(eps, kappa, kappa_prime, mp) == inf_rdiag_cumulant(eps, kappa[1], mp)
        seq = DeterminingSequences(*(tuple(rationals(rng, 6)) for _ in range(4)))
        for which in ("aa*", "a*a"):
            closed = inf_cumulants_of_square(seq, which, 6)
            for n in range(1, 7):
                lattice = inf_cumulants_of_square_lattice(
                    seq.alpha, seq.beta, seq.alpha_prime, seq.beta_prime, n, which
                )
                assert lattice == closed[n - 1]
    assert [paired_r_diagonal_count(n) for n in range(1, 7)] == [catalan(n) for n in range(1, 7)]

    # symbolic sequences: the standard part is the sum over NC(n) of
    # alpha_|V1| prod beta_|Vj|, the primed part is its derivative term by term,
    # and with zero primes the primed part vanishes identically
    N = 6
    a, b = sp.symbols(f"a1:{N + 1}"), sp.symbols(f"b1:{N + 1}")
    ap, bp = sp.symbols(f"ap1:{N + 1}"), sp.symbols(f"bp1:{N + 1}")
    t = sp.Symbol("t")
    for which, (lead, rest, lead_p, rest_p) in {"aa*": (a, b, ap, bp), "a*a": (b, a, bp, ap)}.items():
        std = cumulants_of_square(DeterminingSequences(a, b), which, N)
        inf = inf_cumulants_of_square(DeterminingSequences(a, b, ap, bp), which, N)
        zero = inf_cumulants_of_square(DeterminingSequences(a, b), which, N)
        for n in range(1, N + 1):
            display = 0
            derivative = 0
            for pi in enumerate_partitions(n, PartitionClass.NONCROSSING):
                first, *others = (len(block) for block in pi.blocks)
                term = lead[first - 1] * sp.Mul(*(rest[k - 1] for k in others))
                moved = (lead[first - 1] + t * lead_p[first - 1]) * sp.Mul(
                    *(rest[k - 1] + t * rest_p[k - 1] for k in others)
                )
                display += term
                derivative += sp.diff(moved, t).subs(t, 0)
            assert sp.expand(std[n - 1] - display) == 0
            assert sp.expand(inf[n - 1] - derivative) == 0
            assert sp.expand(zero[n - 1]) == 0


def _sigma_blocks(eps):
    starts = [i for i, e in enumerate(eps) if e == -1]
    return [list(range(s, e)) for s, e in zip(starts, [*starts[1:], len(eps)])]


@pytest.mark.criterion(7, "idempotent closed forms and psi vs definition-level evaluator, n <= 5", "exact")
def test_idempotent_closed_forms(record_property):
    checked = 0
    for seed in range(25):
        rng = random.Random(f"c7:{seed}")
        model = IdempotentModel.joint(Fraction(rng.randint(1, 5), rng.randint(1, 3)), random_functional(seed))
        for n in range(1, 6):
            elems = [(f"a{i}",) for i in range(1, n + 1)]
            # leading-j and j-between words
            leading = jword([-1] * n, elems)
            assert eval_inf_word_with_idempotent(leading, model) == closed_form_j_leading(elems, model)
            assert eval_inf_word_with_idempotent(leading + ("j",), model) == closed_form_j_leading(
                elems, model
            )
            if n >= 2:
                between = leading[1:]
                assert eval_inf_word_with_idempotent(between, model) == closed_form_j_between(elems, model)
            for eps in product((-1, 1), repeat=n):
                for trailing in (False, True):
                    word = jword(eps, elems, trailing)
                    direct = eval_inf_word_with_idempotent(word, model)
                    assert direct == closed_form_inf_moment(eps, elems, model, trailing)
                    checked += 1
                psi_plain = psi_state(jword(eps, elems), model)
                psi_trailing = psi_state(jword(eps, elems, True), model)
                if eps[0] == -1:
                    expected = 1
                    for block in _sigma_blocks(eps):
                        expected = expected * boolean_cumulant(model.phi, [elems[i] for i in block])
                else:
                    expected = 0
                assert psi_plain == psi_trailing == expected
    record_property("words", checked)


def _free_pair_model(seed: int, order: int = 16) -> IdempotentModel:
    rng = random.Random(seed)
    marginals = {s: (rationals(rng, order, 4, 3), rationals(rng, order, 4, 3)) for s in ("x", "y")}
    return IdempotentModel.free_variables(Fraction(2), marginals)


@pytest.mark.criterion(
    8, "Boolean and monotone independence sweeps to total length 8, with negative controls", "exact"
)
def test_independence_sweeps(record_property):
    model = _free_pair_model(8)
    algebras = [[("x",)], [("y",)]]
    counts = {}
    for kind in ("jJj", "Ja"):
        report = verify_boolean_independence(model, algebras, 8, kind=kind)
        assert report.checked > 0 and report.ok, report.failures[:3]
        counts[f"boolean_{kind}"] = report.checked
        report = verify_monotone_independence(model, [("x",)], [("y",)], 8, kind=kind)
        assert report.checked > 0 and report.ok, report.failures[:3]
        counts[f"monotone_{kind}"] = report.checked

    # the jJj statement needs no freeness between the algebras
    joint = IdempotentModel.joint(Fraction(3, 2), random_functional("c8-joint"))
    report = verify_boolean_independence(joint, algebras, 5, kind="jJj")
    assert report.ok

    non_free = verify_boolean_independence(joint, algebras, 4, kind="Ja")
    swapped = verify_monotone_independence(model, [("x",)], [("y",)], 5, kind="jJj", swap_roles=True)
    assert non_free.failure_count > 0
    assert swapped.failure_count > 0
    counts["nonfree_Ja_violations"] = non_free.failure_count
    counts["swapped_violations"] = swapped.failure_count
    for k, v in counts.items():
        record_property(k, v)


@pytest.mark.criterion(9, "Boolean polynomial law: cumulants, recurrence, word expansion, lifts", "exact")
def test_boolean_polynomial_routes(record_property):
    rng = random.Random(9)
    two_atom = 0
    for trial in range(12):
        a, b = rationals(rng, 2)
        x1 = rationals(rng, 8)
        x2 = rationals(rng, 8)
        x1p, x2p = rationals(rng, 8), rationals(rng, 8)
        inp = BooleanPolyInput(a, b, x1[0], x1[1], x2[0], x2[1], x1p[0], x1p[1], x2p[0], x2p[1])
        via_cumulants = boolean_poly_moments_via_cumulants(inp, 8)
        m1 = moments_from_boolean_cumulants(x1, 8)
        m2 = moments_from_boolean_cumulants(x2, 8)
        assert boolean_poly_moments_words(a, b, m1, m2, 8) == via_cumulants
        assert gamma_recurrence(inp, 8, fallback=True).moments == via_cumulants
        try:
            moments, measure = boolean_poly_moments(inp, 8)
        except ValueError:
            pass
        else:
            assert moments == via_cumulants
            assert [measure.moment(k) for k in range(1, 9)] == via_cumulants
            two_atom += 1
        inf = inf_boolean_poly_cumulants(inp, 8)
        assert inf == inf_boolean_poly_cumulants_lifted(inp, 8)

        # infinitesimal word expansion against the dual transform of (beta, beta')
        dual_x1 = moments_from_boolean_cumulants([InfScalar(u, v) for u, v in zip(x1, x1p)], 6)
        dual_x2 = moments_from_boolean_cumulants([InfScalar(u, v) for u, v in zip(x2, x2p)], 6)
        marginals = {
            "x1": ([d.std for d in dual_x1], [d.inf for d in dual_x1]),
            "x2": ([d.std for d in dual_x2], [d.inf for d in dual_x2]),
        }
        beta = [InfScalar(u, v) for u, v in zip(boolean_poly_cumulants(inp.standard(), 6), inf)]
        expected = moments_from_boolean_cumulants(beta, 6)
        for k in range(1, 7):
            total = InfScalar(0, 0)
            for eps in product((1, -1), repeat=k):
                word = []
                for e in eps:
                    word += ["x1", "x2"] if e == 1 else ["x2", "x1"]
                plus = eps.count(1)
                total = total + a**plus * b ** (k - plus) * eval_boolean_word(marginals, word)
            assert (std_part(total), inf_part(total)) == (
                std_part(expected[k - 1]),
                inf_part(expected[k - 1]),
            )
    record_property("two_atom_cases", two_atom)

    ones = BooleanPolyInput(1, 1, 1, 1, 1, 1, 1, 1, 1, 1)
    words = boolean_poly_moments_words(
        1, 1, moments_from_boolean_cumulants([1] * 8, 8), moments_from_boolean_cumulants([1] * 8, 8), 8
    )
    assert words[:4] == [2, 6, 18, 54]
    assert boolean_poly_moments(ones, 8)[0] == words
    omega, theta1, theta2 = boolean_poly_roots(ones)
    assert (theta1, theta2) == (3, -1)
    assert inf_boolean_poly_cumulants(ones, 2)[1] == 6


def _random_symmetric(rng, k):
    A = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            A[i][j] = A[j][i] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return A


@pytest.mark.criterion(10, "Markov-Krein sequence: series vs idempotent model vs finite matrices", "exact")
def test_markov_krein_coherence(record_property):
    rng = random.Random(10)
    for _ in range(10):
        m, mp = rationals(rng, 6), rationals(rng, 6)
        assert markov_krein_sequence(m, mp, 6) == spectral_shift_series(m, 6)
    for k in (2, 3):
        for _ in range(5):
            taus, moments = finite_matrix_spectral_shift(_random_symmetric(rng, k), 6)
            assert spectral_shift_series(moments, 6) == taus


@pytest.mark.criterion(11, "Monte Carlo infinitesimal moments at N = 256, S = 200", "3 stderr + c/N, c = 8")
def test_monte_carlo_moments(record_property):
    c, N, S, seed = BUDGET["c"], BUDGET["N"], BUDGET["samples"], BUDGET["seed"]
    budget = c / N
    start = time.perf_counter()
    comm = estimate_inf_moments(EnsembleSpec(N, (1,), "pm1", S, seed), "comm", (1, 2, 3))
    anti = estimate_inf_moments(EnsembleSpec(N, (1,), "zero_two", S, seed + 1), "anticomm", (2,))
    by_order = {r.n: r for r in comm}
    assert by_order[2].theory == 2 and anti[0].theory == 6
    for r in (by_order[1], by_order[2], by_order[3], anti[0]):
        record_property(f"{r.poly}_m{r.n}", f"{r.empirical_mean:.4f}+-{r.stderr:.4f}")
        assert r.within(budget), r
    assert by_order[1].theory == by_order[3].theory == 0
    elapsed = time.perf_counter() - start
    record_property("seconds", f"{elapsed:.1f}")
    assert elapsed < 600


def _simulate(workers: int, poly: str) -> str:
    out = io.StringIO()
    argv = [
        "simulate",
        "--n",
        "64",
        "--samples",
        "24",
        "--seed",
        "12",
        "--poly",
        poly,
        "--workers",
        str(workers),
    ]
    assert run(argv, stdout=out) == 0
    doc = json.loads(out.getvalue())
    doc["config"].pop("workers")
    return json.dumps(doc, sort_keys=True)


@pytest.mark.criterion(12, "simulate is bit-identical across 1 and 8 workers", "bit-identical")
def test_simulate_determinism(record_property):
    for poly in ("comm", "anticomm", "bridge"):
        first = _simulate(1, poly)
        assert first == _simulate(1, poly)
        assert first == _simulate(8, poly)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
