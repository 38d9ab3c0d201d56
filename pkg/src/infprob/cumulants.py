"""Moment-cumulant transforms and word evaluators.

Sequences are 1-based quantities stored in 0-based lists: ``m[k - 1]`` is the
k-th moment, and so on.  The zeroth moment is the implicit 1 (and the zeroth
infinitesimal moment the implicit 0).

All transforms are generic over the scalar ring.  Running a transform on
``InfScalar`` inputs (m_k, m'_k) returns (kappa_k, kappa'_k): the inf part of
a product of dual numbers is exactly the derivation sum over blocks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .partitions import (
    Partition,
    PartitionClass,
    SizeLimitError,
    caps,
    enumerate_partitions,
    join,
)
from .scalars import InfScalar

__all__ = [
    "BooleanProduct",
    "FreeProduct",
    "IncompleteMarginalError",
    "JointFamily",
    "Marginal",
    "MarginalSpec",
    "MultiFunctional",
    "PowerFamily",
    "boolean_cumulants_from_moments",
    "cumulants_of_products",
    "eval_boolean_word",
    "eval_free_word",
    "free_cumulants_from_moments",
    "grouping_partition",
    "inf_cumulants_from_moments",
    "inf_moments_from_cumulants",
    "kappa_pi",
    "lift",
    "moments_from_boolean_cumulants",
    "moments_from_free_cumulants",
    "partial_kappa_pi",
    "split",
]


class IncompleteMarginalError(KeyError):
    """A functional was queried outside the data it was given."""


def lift(values: Sequence, inf_values: Sequence | None = None) -> list:
    """Pair two sequences into dual numbers."""
    if inf_values is None:
        inf_values = [0] * len(values)
    if len(inf_values) < len(values):
        inf_values = list(inf_values) + [0] * (len(values) - len(inf_values))
    return [InfScalar(a, b) for a, b in zip(values, inf_values)]


def split(duals: Sequence) -> tuple:
    """Inverse of ``lift``: (std parts, inf parts)."""
    std = [d.std if isinstance(d, InfScalar) else d for d in duals]
    inf = [d.inf if isinstance(d, InfScalar) else 0 for d in duals]
    return std, inf


def _order(seq: Sequence, N: int | None) -> int:
    if N is None:
        return len(seq)
    if N > len(seq):
        raise IncompleteMarginalError(f"need {N} terms, got {len(seq)}")
    return N


def _free_transform(seq: Sequence, N: int, to_cumulants: bool) -> list:
    # m_n = sum_{s=1}^{n} kappa_s [z^{n-s}] M(z)^s with M = 1 + sum m_k z^k.
    # power[s][d] = [z^d] M^s is filled at step n = s + d, when m_1..m_d are known.
    moments = [1] + ([None] * N)
    cumulants = [None] * (N + 1)
    power = [[1] + [0] * N] + [[None] * (N + 1) for _ in range(N)]
    for n in range(1, N + 1):
        if to_cumulants:
            moments[n] = seq[n - 1]
        for s in range(1, n):
            d = n - s
            power[s][d] = sum(moments[i] * power[s - 1][d - i] for i in range(d + 1))
        power[n][0] = 1
        rest = sum(cumulants[s] * power[s][n - s] for s in range(1, n))
        if to_cumulants:
            cumulants[n] = moments[n] - rest
        else:
            cumulants[n] = seq[n - 1]
            moments[n] = cumulants[n] + rest
    return cumulants[1:] if to_cumulants else moments[1:]


def free_cumulants_from_moments(m: Sequence, N: int | None = None) -> list:
    N = _order(m, N)
    caps.check(N, PartitionClass.NONCROSSING)
    return _free_transform(m, N, to_cumulants=True)


def moments_from_free_cumulants(kappa: Sequence, N: int | None = None) -> list:
    N = _order(kappa, N)
    caps.check(N, PartitionClass.NONCROSSING)
    return _free_transform(kappa, N, to_cumulants=False)


def boolean_cumulants_from_moments(m: Sequence, N: int | None = None) -> list:
    N = _order(m, N)
    if N > caps.boolean_order:
        raise SizeLimitError(f"order {N} exceeds the Boolean transform cap of {caps.boolean_order}")
    moments = [1] + list(m[:N])
    beta = [None] * (N + 1)
    for n in range(1, N + 1):
        beta[n] = moments[n] - sum(beta[s] * moments[n - s] for s in range(1, n))
    return beta[1:]


def moments_from_boolean_cumulants(beta: Sequence, N: int | None = None) -> list:
    N = _order(beta, N)
    if N > caps.boolean_order:
        raise SizeLimitError(f"order {N} exceeds the Boolean transform cap of {caps.boolean_order}")
    moments = [1] + [None] * N
    for n in range(1, N + 1):
        moments[n] = sum(beta[s - 1] * moments[n - s] for s in range(1, n + 1))
    return moments[1:]


def inf_cumulants_from_moments(m: Sequence, m_prime: Sequence, N: int | None = None) -> tuple:
    """(kappa, kappa') from (m, m') by running the free transform on dual numbers."""
    N = _order(m, N)
    _order(m_prime, N)
    return split(free_cumulants_from_moments(lift(m[:N], m_prime[:N]), N))


def inf_moments_from_cumulants(kappa: Sequence, kappa_prime: Sequence, N: int | None = None) -> tuple:
    N = _order(kappa, N)
    _order(kappa_prime, N)
    return split(moments_from_free_cumulants(lift(kappa[:N], kappa_prime[:N]), N))


class MultiFunctional:
    """A family of multilinear maps f_n on tuples of symbols.

    Built from a closure ``fn(args) -> value`` or a lookup table keyed by
    argument tuples.
    """

    def __init__(self, fn: Callable | None = None, table: dict | None = None):
        if (fn is None) == (table is None):
            raise ValueError("give exactly one of fn or table")
        self._fn = fn
        self._table = table

    @classmethod
    def from_sequence(cls, seq: Sequence) -> "MultiFunctional":
        """Single-variable data: f_n(a, ..., a) = seq[n - 1]."""
        seq = list(seq)

        def fn(args):
            if len(args) > len(seq):
                raise IncompleteMarginalError(f"order {len(args)} beyond the given {len(seq)}")
            return seq[len(args) - 1]

        return cls(fn=fn)

    def __call__(self, args):
        args = tuple(args)
        if self._table is not None:
            try:
                return self._table[args]
            except KeyError:
                raise IncompleteMarginalError(f"no table entry for {args}") from None
        return self._fn(args)


def _restrict(args, block):
    return tuple(args[i - 1] for i in block)


def kappa_pi(pi: Partition, f: MultiFunctional, args: Sequence):
    if pi.n != len(args):
        raise ValueError(f"partition of [{pi.n}] applied to {len(args)} arguments")
    result = 1
    for block in pi.blocks:
        result = result * f(_restrict(args, block))
    return result


def partial_kappa_pi(pi: Partition, f: MultiFunctional, f_prime: MultiFunctional, args: Sequence):
    """Sum over blocks V of the product using f' on V and f elsewhere."""
    if pi.n != len(args):
        raise ValueError(f"partition of [{pi.n}] applied to {len(args)} arguments")
    values = [f(_restrict(args, b)) for b in pi.blocks]
    total = 0
    for k, block in enumerate(pi.blocks):
        term = f_prime(_restrict(args, block))
        for l, v in enumerate(values):
            if l != k:
                term = term * v
        total = total + term
    return total


def grouping_partition(grouping: Sequence[int], n: int | None = None) -> Partition:
    """Interval partition with right endpoints i_1 < ... < i_m = n."""
    grouping = list(grouping)
    if not grouping or any(b <= a for a, b in zip(grouping, grouping[1:])) or grouping[0] < 1:
        raise ValueError(f"grouping must be strictly increasing positive endpoints: {grouping}")
    if n is not None and grouping[-1] != n:
        raise ValueError("last grouping endpoint must equal n")
    blocks, start = [], 1
    for end in grouping:
        blocks.append(tuple(range(start, end + 1)))
        start = end + 1
    return Partition(grouping[-1], tuple(blocks))


def cumulants_of_products(
    kappa: MultiFunctional,
    grouping: Sequence[int],
    args: Sequence,
    lattice: str = "free",
    kappa_prime: MultiFunctional | None = None,
):
    """Cumulant of the products a_1..a_{i_1}, ..., a_{i_{m-1}+1}..a_n.

    Sums kappa_pi over pi in NC(n) (``lattice="free"``) or I(n)
    (``"boolean"``) with pi joined with the grouping equal to 1_n.  With
    ``kappa_prime`` the derivation sum over the same partitions is returned.
    """
    n = len(args)
    rho = grouping_partition(grouping, n)
    if lattice == "free":
        cls = PartitionClass.NONCROSSING
    elif lattice == "boolean":
        cls = PartitionClass.INTERVAL
    else:
        raise ValueError(f"unknown lattice class {lattice!r}")
    one = Partition.one(n)
    total = 0
    for pi in enumerate_partitions(n, cls):
        if join(pi, rho) != one:
            continue
        if kappa_prime is None:
            total = total + kappa_pi(pi, kappa, args)
        else:
            total = total + partial_kappa_pi(pi, kappa, kappa_prime, args)
    return total


# -- families and products -------------------------------------------------


class PowerFamily:
    """Algebra generated by one variable: word values depend on length only.

    ``moments`` is a sequence (m_1, m_2, ...) or a callable k -> m_k.
    """

    def __init__(self, moments):
        self._moments = moments
        self._cumulants: list = []

    def moment(self, word) -> object:
        k = len(word)
        if k == 0:
            return 1
        if callable(self._moments):
            return self._moments(k)
        if k > len(self._moments):
            raise IncompleteMarginalError(f"moment of order {k} not given")
        return self._moments[k - 1]

    def cumulant(self, word) -> object:
        k = len(word)
        if k > len(self._cumulants):
            self._cumulants = free_cumulants_from_moments(
                [self.moment((None,) * i) for i in range(1, k + 1)], k
            )
        return self._cumulants[k - 1]


class JointFamily:
    """Algebra given by an arbitrary joint functional on words in its letters.

    Joint free cumulants are recovered from the functional by the first-block
    recursion and memoized.
    """

    def __init__(self, functional: Callable):
        self._functional = functional
        self._moments: dict = {}
        self._cumulants: dict = {}

    def moment(self, word) -> object:
        word = tuple(word)
        if not word:
            return 1
        if word not in self._moments:
            self._moments[word] = self._functional(word)
        return self._moments[word]

    def cumulant(self, word) -> object:
        word = tuple(word)
        if word in self._cumulants:
            return self._cumulants[word]
        n = len(word)
        rest = 0
        for V in _blocks_containing_first(range(n)):
            if len(V) == n:
                continue
            rest = rest + self.cumulant(tuple(word[i] for i in V)) * _gap_product(word, V, n, self.moment)
        value = self.moment(word) - rest
        self._cumulants[word] = value
        return value


def _blocks_containing_first(positions):
    positions = list(positions)
    head, tail = positions[0], positions[1:]
    for r in range(len(tail) + 1):
        for combo in combinations(tail, r):
            yield (head,) + combo


def _gap_product(word, V, end, evaluate):
    """Product of evaluate(gap) over the gaps of block V inside word[V[0]:end]."""
    result = 1
    bounds = list(V) + [end]
    for a, b in zip(bounds, bounds[1:]):
        if b - a > 1:
            result = result * evaluate(tuple(word[a + 1 : b]))
    return result


class FreeProduct:
    """Moments of words in (infinitesimally) free families.

    Mixed cumulants between families vanish, so with V the block of the first
    letter, phi(w) = sum_V kappa(w|V) * prod phi(gaps of V) over V inside the
    first letter's family.
    """

    def __init__(self, families: dict, family_of: Callable | dict | None = None):
        self.families = families
        if family_of is None:
            family_of = {name: name for name in families}
        self._family_of = family_of
        self._memo: dict = {}

    def family(self, letter):
        if callable(self._family_of):
            return self._family_of(letter)
        try:
            return self._family_of[letter]
        except KeyError:
            raise IncompleteMarginalError(f"no marginal for symbol {letter!r}") from None

    def moment(self, word) -> object:
        word = tuple(word)
        if not word:
            return 1
        if word in self._memo:
            return self._memo[word]
        fam_name = self.family(word[0])
        fam = self.families[fam_name]
        same = [i for i, x in enumerate(word) if self.family(x) == fam_name]
        total = 0
        for V in _blocks_containing_first(same):
            total = total + fam.cumulant(tuple(word[i] for i in V)) * _gap_product(
                word, V, len(word), self.moment
            )
        self._memo[word] = total
        return total


class BooleanProduct:
    """Moments of words in Boolean independent families: runs factorize."""

    def __init__(self, families: dict, family_of: Callable | dict | None = None):
        self.families = families
        if family_of is None:
            family_of = {name: name for name in families}
        self._family_of = family_of

    def family(self, letter):
        if callable(self._family_of):
            return self._family_of(letter)
        try:
            return self._family_of[letter]
        except KeyError:
            raise IncompleteMarginalError(f"no marginal for symbol {letter!r}") from None

    def moment(self, word) -> object:
        result = 1
        for fam_name, run in _runs(tuple(word), self.family):
            result = result * self.families[fam_name].moment(run)
        return result


def _runs(word, family):
    runs = []
    for x in word:
        f = family(x)
        if runs and runs[-1][0] == f:
            runs[-1][1].append(x)
        else:
            runs.append((f, [x]))
    return [(f, tuple(r)) for f, r in runs]


# -- marginal specifications --------------------------------------------------


@dataclass
class Marginal:
    """Moments (and optionally infinitesimal moments) of one variable."""

    moments: Sequence
    inf_moments: Sequence | None = None

    @property
    def max_order(self) -> int:
        return len(self.moments)

    def duals(self, infinitesimal: bool = True) -> list:
        inf = self.inf_moments if (infinitesimal and self.inf_moments is not None) else None
        return lift(list(self.moments), None if inf is None else list(inf))


@dataclass
class MarginalSpec:
    """Per-symbol marginals; evaluation contexts are built and cached per flag."""

    marginals: dict
    _contexts: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, symbol):
        return self.marginals[symbol]

    def _families(self, infinitesimal: bool) -> dict:
        return {s: PowerFamily(mg.duals(infinitesimal)) for s, mg in self.marginals.items()}

    def free_context(self, infinitesimal: bool = True) -> FreeProduct:
        key = ("free", infinitesimal)
        if key not in self._contexts:
            self._contexts[key] = FreeProduct(self._families(infinitesimal))
        return self._contexts[key]

    def boolean_context(self, infinitesimal: bool = True) -> BooleanProduct:
        key = ("boolean", infinitesimal)
        if key not in self._contexts:
            self._contexts[key] = BooleanProduct(self._families(infinitesimal))
        return self._contexts[key]


def _as_spec(marginals) -> MarginalSpec:
    if isinstance(marginals, MarginalSpec):
        return marginals
    return MarginalSpec(
        {s: (mg if isinstance(mg, Marginal) else Marginal(*mg)) for s, mg in marginals.items()}
    )


def eval_free_word(marginals, word: Sequence, infinitesimal: bool = True) -> InfScalar:
    """(phi(word), phi'(word)) for infinitesimally free symbols."""
    spec = _as_spec(marginals)
    for s in word:
        if s not in spec.marginals:
            raise IncompleteMarginalError(f"no marginal for symbol {s!r}")
    for s, count in Counter(word).items():
        if count > spec[s].max_order:
            raise IncompleteMarginalError(
                f"{s!r} appears {count} times, marginal has order {spec[s].max_order}"
            )
    caps.check(len(word), PartitionClass.NONCROSSING)
    value = spec.free_context(infinitesimal).moment(tuple(word))
    return value if isinstance(value, InfScalar) else InfScalar(value, 0)


def eval_boolean_word(marginals, word: Sequence, infinitesimal: bool = True) -> InfScalar:
    """(phi, phi') for Boolean independent symbols; runs of one symbol collapse first."""
    spec = _as_spec(marginals)
    for s in word:
        if s not in spec.marginals:
            raise IncompleteMarginalError(f"no marginal for symbol {s!r}")
    value = spec.boolean_context(infinitesimal).moment(tuple(word))
    return value if isinstance(value, InfScalar) else InfScalar(value, 0)
