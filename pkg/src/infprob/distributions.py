"""Infinitesimal distributions: moment pairs and signed atomic measures."""

from __future__ import annotations

from dataclasses import dataclass

from .cumulants import inf_cumulants_from_moments, inf_moments_from_cumulants
from .scalars import parse_scalar, render_scalar, simplify, sqrt_exact

__all__ = [
    "AtomicMeasure",
    "InfDistribution",
    "anticommutator_target",
    "dilate",
    "free_convolve",
]


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite signed measure sum_i w_i delta_{t_i}; weights may be negative.

    Locations may be rationals, Gaussian rationals or quadratic surds.  Equal
    locations are merged and zero weights dropped on construction.
    """

    atoms: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        order = []
        for t, w in self.atoms:
            t = simplify(t)
            if t not in merged:
                merged[t] = 0
                order.append(t)
            merged[t] = merged[t] + w
        atoms = tuple((t, simplify(merged[t])) for t in order if merged[t] != 0)
        object.__setattr__(self, "atoms", atoms)

    def moment(self, n: int):
        total = 0
        for t, w in self.atoms:
            total = total + w * (t**n if n else 1)
        return simplify(total)

    def moments(self, N: int) -> list:
        return [self.moment(n) for n in range(1, N + 1)]

    @property
    def mass(self):
        return self.moment(0)

    def dilate(self, c) -> "AtomicMeasure":
        return AtomicMeasure(tuple((c * t, w) for t, w in self.atoms))

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        return AtomicMeasure(self.atoms + other.atoms)

    def to_json(self) -> dict:
        return {"atoms": [{"t": render_scalar(t), "w": render_scalar(w)} for t, w in self.atoms]}

    @classmethod
    def from_json(cls, doc) -> "AtomicMeasure":
        atoms = doc["atoms"] if isinstance(doc, dict) else doc
        return cls(tuple((parse_scalar(a["t"]), parse_scalar(a["w"])) for a in atoms))


@dataclass(frozen=True)
class InfDistribution:
    """The pair (mu, mu') through its moments m_1..m_N and m'_1..m'_N."""

    moments: tuple
    inf_moments: tuple
    measure: AtomicMeasure | None = None
    inf_measure: AtomicMeasure | None = None

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(simplify(x) for x in self.moments))
        object.__setattr__(self, "inf_moments", tuple(simplify(x) for x in self.inf_moments))
        if len(self.moments) != len(self.inf_moments):
            raise ValueError("moment and infinitesimal moment sequences differ in length")
        if self.measure is not None and self.measure.moments(self.order) != list(self.moments):
            raise ValueError("atomic backing does not reproduce the moments")
        if self.inf_measure is not None and self.inf_measure.moments(self.order) != list(self.inf_moments):
            raise ValueError("atomic backing does not reproduce the infinitesimal moments")

    @property
    def order(self) -> int:
        return len(self.moments)

    @classmethod
    def from_measures(cls, measure: AtomicMeasure, inf_measure: AtomicMeasure, N: int) -> "InfDistribution":
        return cls(tuple(measure.moments(N)), tuple(inf_measure.moments(N)), measure, inf_measure)


def dilate(d: InfDistribution, c) -> InfDistribution:
    """Distribution of c*a: m_n -> c^n m_n and m'_n -> c^n m'_n."""
    moments = tuple(c**n * x for n, x in enumerate(d.moments, start=1))
    inf = tuple(c**n * x for n, x in enumerate(d.inf_moments, start=1))
    return InfDistribution(
        moments,
        inf,
        None if d.measure is None else d.measure.dilate(c),
        None if d.inf_measure is None else d.inf_measure.dilate(c),
    )


def free_convolve(d1: InfDistribution, d2: InfDistribution, N: int | None = None) -> InfDistribution:
    """Distribution of a_1 + a_2 for infinitesimally free a_1, a_2.

    Both kappa and kappa' add; moments come back through the inverse transform.
    """
    if N is None:
        N = min(d1.order, d2.order)
    if N > min(d1.order, d2.order):
        raise ValueError(f"order {N} exceeds the inputs' orders")
    k1, kp1 = inf_cumulants_from_moments(d1.moments, d1.inf_moments, N)
    k2, kp2 = inf_cumulants_from_moments(d2.moments, d2.inf_moments, N)
    m, mp = inf_moments_from_cumulants([a + b for a, b in zip(k1, k2)], [a + b for a, b in zip(kp1, kp2)], N)
    return InfDistribution(tuple(m), tuple(mp))


def anticommutator_target(nu_prime: AtomicMeasure, m1, m2) -> AtomicMeasure:
    """Sum of the dilations of nu' by alpha = m1 + sqrt(m2) and beta = m1 - sqrt(m2).

    Its n-th moment is (alpha^n + beta^n) times the n-th moment of nu'.
    """
    root = sqrt_exact(m2)
    alpha, beta = m1 + root, m1 - root
    return nu_prime.dilate(alpha) + nu_prime.dilate(beta)
