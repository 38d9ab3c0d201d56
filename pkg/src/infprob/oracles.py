"""Brute-force twins of the closed forms.

Each function here recomputes a closed-form quantity from its definition:
explicit sums over partition lattices, word expansions or exact finite
matrices.  They share only the partition enumeration with the closed forms
they check.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .cumulants import eval_boolean_word
from .partitions import (
    Partition,
    PartitionClass,
    enumerate_partitions,
    join,
    mobius_nc,
)
from .scalars import I, simplify

__all__ = [
    "anticommutator_inf_brute",
    "boolean_poly_cumulants_lattice",
    "boolean_poly_moments_words",
    "commutator_inf_brute",
    "epsilon_product_cumulant",
    "finite_matrix_spectral_shift",
    "free_cumulants_mobius",
    "inf_cumulants_of_square_lattice",
    "inf_rdiag_lattice",
    "paired_r_diagonal_count",
]


def _mask(block) -> int:
    m = 0
    for i in block:
        m |= 1 << (i - 1)
    return m


@lru_cache(maxsize=None)
def _nc_block_index(n: int):
    """For NC(n): block masks of every partition, and mask -> partition indices."""
    parts = enumerate_partitions(n, PartitionClass.NONCROSSING)
    masks = []
    index = defaultdict(list)
    for k, pi in enumerate(parts):
        ms = tuple(_mask(b) for b in pi.blocks)
        masks.append(ms)
        for m in ms:
            index[m].append(k)
    return masks, dict(index)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def _x2_block_signatures(word: tuple) -> Counter:
    """Over pi in NC(2n) having the x2-positions of ``word`` as one block:
    Counter of (size of that block, sorted sizes of the other blocks)."""
    n = len(word)
    masks, index = _nc_block_index(n)
    x2 = _mask(i + 1 for i, s in enumerate(word) if s == 2)
    sig = Counter()
    for k in index.get(x2, ()):
        others = tuple(sorted(_popcount(m) for m in masks[k] if m != x2))
        sig[(_popcount(x2), others)] += 1
    return sig


def _partial_kappa_from_sizes(x2_size, others, k1, k1p, k2, k2p):
    """d kappa_pi for one x2 block of ``x2_size`` and x1 blocks of sizes ``others``.

    kappa of x2 is k2 (identically 0 for an infinitesimal x2), its prime k2p.
    """
    values = [k2[x2_size - 1]] + [k1[s - 1] for s in others]
    primes = [k2p[x2_size - 1]] + [k1p[s - 1] for s in others]
    total = 0
    for b in range(len(values)):
        term = primes[b]
        for c, v in enumerate(values):
            if c != b:
                term = term * v
        total = total + term
    return total


def _sign_words(n: int):
    """(pattern of 2n letters, number of (2,1) pairs) for every product of x1x2 / x2x1."""
    for eps in product((1, -1), repeat=n):
        word = []
        for e in eps:
            word += [1, 2] if e == 1 else [2, 1]
        yield tuple(word), sum(1 for e in eps if e == -1)


def _brute_inf_moment(n, x1_cumulants, x1_inf_cumulants, x2_inf_moments, weight):
    k2 = [0] * (2 * n)
    k2p = list(x2_inf_moments) + [0] * (2 * n)
    total = 0
    for word, flips in _sign_words(n):
        w = weight(flips)
        if w == 0:
            continue
        inner = 0
        for (size, others), count in _x2_block_signatures(word).items():
            inner = inner + count * _partial_kappa_from_sizes(
                size, others, x1_cumulants, x1_inf_cumulants, k2, k2p
            )
        total = total + w * inner
    return simplify(total)


def anticommutator_inf_brute(
    x1_cumulants: Sequence, x2_inf_moments: Sequence, n: int, x1_inf_cumulants: Sequence | None = None
):
    """phi'((x1 x2 + x2 x1)^n) as a sum over all 2^n words and NC(2n) partitions.

    x2 has kappa = 0 and kappa' = m'; a pair (word, pi) counts when the
    x2-positions form one block of pi, which forces the other blocks onto x1.
    """
    x1p = x1_inf_cumulants if x1_inf_cumulants is not None else [0] * (2 * n)
    return _brute_inf_moment(n, list(x1_cumulants), list(x1p), x2_inf_moments, lambda flips: 1)


def commutator_inf_brute(
    x1_cumulants: Sequence, x2_inf_moments: Sequence, n: int, x1_inf_cumulants: Sequence | None = None
):
    """phi'((i(x1 x2 - x2 x1))^n): words weighted by i^n (-1)^(number of x2 x1 factors)."""
    x1p = x1_inf_cumulants if x1_inf_cumulants is not None else [0] * (2 * n)
    scale = I**n
    value = _brute_inf_moment(n, list(x1_cumulants), list(x1p), x2_inf_moments, lambda flips: (-1) ** flips)
    return simplify(scale * value)


# -- Boolean polynomial g = a x1 x2 + b x2 x1 ---------------------------------


@lru_cache(maxsize=None)
def _pair_connected_intervals(n: int) -> tuple:
    """pi in I(2n) with pi joined with {(1,2),(3,4),...} equal to 1_{2n}."""
    rho = Partition(2 * n, tuple((2 * k + 1, 2 * k + 2) for k in range(n)))
    one = Partition.one(2 * n)
    return tuple(pi for pi in enumerate_partitions(2 * n, PartitionClass.INTERVAL) if join(pi, rho) == one)


def epsilon_product_cumulant(eps: Sequence[int], x1_boolean: Sequence, x2_boolean: Sequence):
    """beta_n(c^(eps_1), ..., c^(eps_n)) with c^(+1) = x1 x2 and c^(-1) = x2 x1.

    Boolean products-as-arguments expansion over I(2n); blocks mixing x1 and
    x2 vanish.
    """
    n = len(eps)
    letters = []
    for e in eps:
        letters += [1, 2] if e == 1 else [2, 1]
    cumulants = {1: x1_boolean, 2: x2_boolean}
    total = 0
    for pi in _pair_connected_intervals(n):
        term = 1
        for block in pi.blocks:
            kinds = {letters[i - 1] for i in block}
            if len(kinds) > 1:
                term = 0
                break
            term = term * cumulants[kinds.pop()][len(block) - 1]
        total = total + term
    return simplify(total)


def boolean_poly_cumulants_lattice(a, b, x1_boolean: Sequence, x2_boolean: Sequence, N: int) -> list:
    """beta_n(g) = sum over eps-strings of a^#(+1) b^#(-1) beta_n(c^(eps))."""
    out = []
    for n in range(1, N + 1):
        total = 0
        for eps in product((1, -1), repeat=n):
            plus = sum(1 for e in eps if e == 1)
            total = total + a**plus * b ** (n - plus) * epsilon_product_cumulant(eps, x1_boolean, x2_boolean)
        out.append(simplify(total))
    return out


def boolean_poly_moments_words(a, b, x1_moments: Sequence, x2_moments: Sequence, N: int) -> list:
    """m_k(g) by expanding (a x1 x2 + b x2 x1)^k and factorizing each word over runs."""
    marginals = {"x1": (list(x1_moments),), "x2": (list(x2_moments),)}
    out = []
    for k in range(1, N + 1):
        total = 0
        for eps in product((1, -1), repeat=k):
            word = []
            for e in eps:
                word += ["x1", "x2"] if e == 1 else ["x2", "x1"]
            plus = sum(1 for e in eps if e == 1)
            total = total + a**plus * b ** (k - plus) * eval_boolean_word(marginals, word, False).std
        out.append(simplify(total))
    return out


# -- R-diagonal lattice sums ----------------------------------------------------


@lru_cache(maxsize=None)
def _pair_connected_nc(n: int) -> tuple:
    """pi in NC(2n) with pi joined with {(1,2),...,(2n-1,2n)} equal to 1_{2n}."""
    delta = Partition(2 * n, tuple((2 * k + 1, 2 * k + 2) for k in range(n)))
    one = Partition.one(2 * n)
    return tuple(
        pi for pi in enumerate_partitions(2 * n, PartitionClass.NONCROSSING) if join(pi, delta) == one
    )


def _partial_kappa(values: list, primes: list):
    total = 0
    for b in range(len(values)):
        term = primes[b]
        for c, v in enumerate(values):
            if c != b:
                term = term * v
        total = total + term
    return total


def inf_rdiag_lattice(
    eps: Sequence[int], x1_cumulants: Sequence, x1_inf_cumulants: Sequence, x2_inf_moments: Sequence
):
    """kappa'_n(c^(eps_1), ..., c^(eps_n)) for c = x1 x2, c^* = x2 x1.

    Sum over pi in NC(2n) connected to the pairing, of d kappa_pi with
    monochromatic blocks; x2 has kappa = 0 and kappa' = m'.
    """
    n = len(eps)
    letters = []
    for e in eps:
        letters += [1, 2] if e == 1 else [2, 1]
    kappa = {1: list(x1_cumulants), 2: [0] * (2 * n)}
    kappa_p = {1: list(x1_inf_cumulants), 2: list(x2_inf_moments)}
    total = 0
    for pi in _pair_connected_nc(n):
        values, primes = [], []
        for block in pi.blocks:
            kinds = {letters[i - 1] for i in block}
            if len(kinds) > 1:
                break
            kind = kinds.pop()
            values.append(kappa[kind][len(block) - 1])
            primes.append(kappa_p[kind][len(block) - 1])
        else:
            total = total + _partial_kappa(values, primes)
    return simplify(total)


def _rdiag_block(letters, block, alpha, beta):
    """R-diagonal cumulant of a block: alternating and even, else 0."""
    seq = [letters[i - 1] for i in block]
    if len(seq) % 2 or any(x == y for x, y in zip(seq, seq[1:])):
        return 0
    return (alpha if seq[0] == 1 else beta)[len(seq) // 2 - 1]


def inf_cumulants_of_square_lattice(alpha, beta, alpha_p, beta_p, n: int, which: str = "aa*"):
    """kappa'_n(aa^*, ..., aa^*) as the sum over pi in NC(2n) connected to the pairing
    of d kappa_pi(a, a^*, ..., a, a^*) with the R-diagonal vanishing rule."""
    pattern = [1, -1] if which == "aa*" else [-1, 1]
    letters = pattern * n
    total = 0
    for pi in _pair_connected_nc(n):
        values = [_rdiag_block(letters, b, alpha, beta) for b in pi.blocks]
        primes = [_rdiag_block(letters, b, alpha_p, beta_p) for b in pi.blocks]
        total = total + _partial_kappa(values, primes)
    return simplify(total)


def paired_r_diagonal_count(n: int) -> int:
    """Number of pi in NC(2n) connected to the pairing whose blocks alternate a, a^* with even size."""
    letters = [1, -1] * n
    count = 0
    for pi in _pair_connected_nc(n):
        if all(_rdiag_block(letters, b, [1] * n, [1] * n) for b in pi.blocks):
            count += 1
    return count


# -- transforms and finite matrices ---------------------------------------------


def free_cumulants_mobius(m: Sequence, N: int) -> list:
    """kappa_n = sum over pi in NC(n) of m_pi mu(pi, 1_n)."""
    out = []
    for n in range(1, N + 1):
        one = Partition.one(n)
        total = 0
        for pi in enumerate_partitions(n, PartitionClass.NONCROSSING):
            term = mobius_nc(pi, one)
            for block in pi.blocks:
                term = term * m[len(block) - 1]
            total = total + term
        out.append(simplify(total))
    return out


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def finite_matrix_spectral_shift(A: Sequence[Sequence], N: int) -> tuple:
    """Exact (tau_0..tau_N, mu-moments m_1..m_N) for a rational symmetric matrix A.

    tau_n = Tr(A^n) - Tr((J^perp A J^perp)^n) with J the projection onto e_1
    (the n = 0 term compares I with J^perp); m_n = (A^n)_{11}.
    """
    d = len(A)
    A = [[Fraction(x) for x in row] for row in A]
    Jp = [[Fraction(int(i == j and i > 0)) for j in range(d)] for i in range(d)]
    C = _matmul(_matmul(Jp, A), Jp)
    P = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    Q = Jp
    taus = [sum(P[i][i] for i in range(d)) - sum(Q[i][i] for i in range(d))]
    moments = []
    for _ in range(N):
        P = _matmul(P, A)
        Q = _matmul(Q, C)
        taus.append(sum(P[i][i] for i in range(d)) - sum(Q[i][i] for i in range(d)))
        moments.append(P[0][0])
    return taus, moments
