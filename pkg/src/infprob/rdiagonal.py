"""Infinitesimal R-diagonal elements.

*-words are epsilon-strings over {+1, -1}: +1 stands for a, -1 for a^*.  An
infinitesimally R-diagonal a has kappa_n and kappa'_n of a^(eps_1), ...,
a^(eps_n) vanishing unless n is even and eps alternates; the surviving values
are the determining sequences alpha, beta (starting with a, resp. a^*) and
their primed versions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cumulants import (
    MultiFunctional,
    cumulants_of_products,
    inf_cumulants_from_moments,
)
from .partitions import PartitionClass, enumerate_partitions
from .scalars import InfScalar, simplify

__all__ = [
    "ClosureReport",
    "DeterminingSequences",
    "PreconditionError",
    "check_inf_rdiag_closure",
    "cumulants_of_square",
    "epsilon_words",
    "inf_cumulants_of_square",
    "inf_rdiag_alternating_cumulants",
    "inf_rdiag_cumulant",
    "is_alternating",
    "rdiag_table",
    "selfadjoint_table",
]


class PreconditionError(ValueError):
    pass


def is_alternating(eps: Sequence[int]) -> bool:
    """Even length and eps_i + eps_{i+1} = 0 throughout."""
    return len(eps) % 2 == 0 and all(x + y == 0 for x, y in zip(eps, eps[1:]))


def epsilon_words(n: int):
    """All eps-strings of length n, +1 before -1 in each position."""
    for mask in range(1 << n):
        yield tuple(-1 if mask >> (n - 1 - i) & 1 else 1 for i in range(n))


# -- c = x1 x2 with centered x1 and infinitesimal x2 --------------------------


def inf_rdiag_cumulant(eps: Sequence[int], kappa2_x1, x2_inf_moments: Sequence, m1_x1=0):
    """kappa'_n(c^(eps_1), ..., c^(eps_n)) for c = x1 x2.

    x1 must be centered and x2 must have phi-distribution delta_0, so its
    kappa'_n equals m'_n.  The value is kappa'_n(x2) kappa_2(x1)^(n/2) on
    alternating patterns and 0 otherwise.
    """
    if m1_x1 != 0:
        raise PreconditionError("x1 must be centered (m_1(x1) = 0)")
    n = len(eps)
    if not is_alternating(eps):
        return simplify(0)
    if n > len(x2_inf_moments):
        raise ValueError(f"need m'_{n}(x2)")
    return simplify(x2_inf_moments[n - 1] * kappa2_x1 ** (n // 2))


def inf_rdiag_alternating_cumulants(kappa2_x1, x2_inf_moments: Sequence, N: int, m1_x1=0) -> list:
    """kappa'_n(c, c^*, c, ...) for n = 1..N; odd n give 0."""
    eps = [1 if i % 2 == 0 else -1 for i in range(N)]
    return [inf_rdiag_cumulant(eps[:n], kappa2_x1, x2_inf_moments, m1_x1) for n in range(1, N + 1)]


# -- cumulants of a a^* from the determining sequences ------------------------


@dataclass(frozen=True)
class DeterminingSequences:
    """alpha_n = kappa_2n(a, a^*, ...), beta_n = kappa_2n(a^*, a, ...) and primes."""

    alpha: tuple
    beta: tuple
    alpha_prime: tuple = ()
    beta_prime: tuple = ()

    def __post_init__(self):
        n = len(self.alpha)
        for name in ("alpha", "beta", "alpha_prime", "beta_prime"):
            seq = tuple(simplify(x) for x in getattr(self, name)) or tuple([simplify(0)] * n)
            if len(seq) != n:
                raise ValueError(f"{name} has length {len(seq)}, expected {n}")
            object.__setattr__(self, name, seq)

    @property
    def order(self) -> int:
        return len(self.alpha)

    def duals(self, first: str = "a") -> tuple:
        """(leading, trailing) dual sequences: the block holding 1 uses ``leading``."""
        a = [InfScalar(x, y) for x, y in zip(self.alpha, self.alpha_prime)]
        b = [InfScalar(x, y) for x, y in zip(self.beta, self.beta_prime)]
        return (a, b) if first == "a" else (b, a)


def _square_cumulants(seq: DeterminingSequences, which: str, N: int) -> list:
    if which not in ("aa*", "a*a"):
        raise ValueError(f"which must be 'aa*' or 'a*a', got {which!r}")
    if N > seq.order:
        raise ValueError(f"need determining sequences up to order {N}")
    lead, rest = seq.duals("a" if which == "aa*" else "a*")
    out = []
    for n in range(1, N + 1):
        total = InfScalar(0, 0)
        for pi in enumerate_partitions(n, PartitionClass.NONCROSSING):
            # blocks are sorted by minimum, so blocks[0] contains 1
            term = lead[len(pi.blocks[0]) - 1]
            for block in pi.blocks[1:]:
                term = term * rest[len(block) - 1]
            total = total + term
        out.append(total)
    return out


def inf_cumulants_of_square(seq: DeterminingSequences, which: str = "aa*", N: int | None = None) -> list:
    """kappa'_n(aa^*, ..., aa^*) (or a^*a) summed over NC(n).

    The block holding 1 carries alpha (beta for a^*a), the others beta (alpha);
    the prime falls on one block at a time.
    """
    N = seq.order if N is None else N
    return [simplify(x.inf) for x in _square_cumulants(seq, which, N)]


def cumulants_of_square(seq: DeterminingSequences, which: str = "aa*", N: int | None = None) -> list:
    N = seq.order if N is None else N
    return [simplify(x.std) for x in _square_cumulants(seq, which, N)]


# -- closure under products with a *-free element ------------------------------


def rdiag_table(seq: DeterminingSequences) -> Callable:
    """Dual cumulant table eps -> (kappa, kappa') of an infinitesimally R-diagonal a."""
    alpha, beta = seq.duals("a")

    def table(eps):
        n = len(eps)
        if not is_alternating(eps):
            return InfScalar(0, 0)
        if n // 2 > seq.order:
            raise ValueError(f"determining sequences too short for length {n}")
        return (alpha if eps[0] == 1 else beta)[n // 2 - 1]

    return table


def selfadjoint_table(moments: Sequence, inf_moments: Sequence | None = None) -> Callable:
    """Dual cumulant table of a self-adjoint b = b^*: depends on the length only."""
    inf_moments = [0] * len(moments) if inf_moments is None else inf_moments
    kappa, kappa_prime = inf_cumulants_from_moments(moments, inf_moments, len(moments))
    duals = [InfScalar(k, kp) for k, kp in zip(kappa, kappa_prime)]

    def table(eps):
        if len(eps) > len(duals):
            raise ValueError(f"moments too short for length {len(eps)}")
        return duals[len(eps) - 1]

    return table


@dataclass
class ClosureReport:
    checked: int = 0
    failures: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_inf_rdiag_closure(a_table: Callable, b_table: Callable, N: int) -> ClosureReport:
    """Compute the joint (kappa, kappa') *-cumulants of ab for *-free a, b up to length N.

    (ab)^(+1) = a b and (ab)^(-1) = b^* a^*; each cumulant of products runs
    over NC(2n) with the pairing grouping, mixed a/b blocks vanishing.  The
    report lists every odd or non-alternating entry that fails to vanish,
    in enumeration order.
    """

    def kappa(args):
        names = {name for name, _ in args}
        if len(names) > 1:
            return InfScalar(0, 0)
        table = a_table if names == {"a"} else b_table
        return table(tuple(e for _, e in args))

    f = MultiFunctional(fn=kappa)
    report = ClosureReport()
    for n in range(1, N + 1):
        grouping = list(range(2, 2 * n + 1, 2))
        for eps in epsilon_words(n):
            args = []
            for e in eps:
                args += [("a", 1), ("b", 1)] if e == 1 else [("b", -1), ("a", -1)]
            value = simplify(cumulants_of_products(f, grouping, args))
            report.values[eps] = value
            report.checked += 1
            if not is_alternating(eps) and value != InfScalar(0, 0):
                report.failures.append((eps, value))
    return report
