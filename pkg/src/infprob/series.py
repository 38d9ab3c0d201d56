"""Truncated formal power and Laurent series, plus the transform calculus.

A ``TruncatedSeries`` is a Laurent polynomial in one formal variable t with
an absolute precision: it stands for sum_k coeffs[k] t^(lowest_exp + k) +
O(t^precision).  The variable is t = z for kind ``"z"`` and t = 1/z for kind
``"zinv"``.  Cauchy-type transforms (G, g) live in ``"zinv"``; R, r, psi and
eta live in ``"z"``.  Derivatives are always taken with respect to z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cumulants import (
    boolean_cumulants_from_moments,
    free_cumulants_from_moments,
    inf_cumulants_from_moments,
)
from .scalars import render_scalar, simplify

__all__ = [
    "KindMismatchError",
    "TruncatedSeries",
    "cauchy_from_moments",
    "eta_from_moments",
    "eta_from_psi",
    "inf_g_from_inf_moments",
    "inf_r",
    "inf_r_via_relation",
    "psi_from_moments",
    "r_from_moments",
    "r_via_inverse",
    "spectral_shift_series",
]

KINDS = ("z", "zinv")
# precision of series that are exact polynomials
EXACT = 1 << 62


class KindMismatchError(ValueError):
    """Series in z and in 1/z were combined."""


@dataclass(frozen=True)
class TruncatedSeries:
    kind: str
    lowest_exp: int
    coeffs: tuple
    precision: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown series kind {self.kind!r}")
        coeffs = tuple(self.coeffs)[: max(0, self.precision - self.lowest_exp)]
        coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_terms(cls, kind: str, terms: dict, precision: int) -> "TruncatedSeries":
        """Build from {exponent of t: coefficient}."""
        known = [e for e in terms if e < precision]
        if not known:
            return cls.zero(kind, precision)
        lowest = min(known)
        coeffs = [terms.get(e, 0) for e in range(lowest, max(known) + 1)]
        return cls(kind, lowest, tuple(coeffs), precision)

    @classmethod
    def zero(cls, kind: str, precision: int = EXACT) -> "TruncatedSeries":
        return cls(kind, 0, (), precision)

    @classmethod
    def monomial(cls, kind: str, exp: int, coeff, precision: int) -> "TruncatedSeries":
        return cls.from_terms(kind, {exp: coeff}, precision)

    def coeff(self, exp: int):
        """Coefficient of t^exp (unknown beyond the precision)."""
        if exp >= self.precision:
            raise ValueError(f"t^{exp} lies beyond the precision {self.precision}")
        k = exp - self.lowest_exp
        if k < 0 or k >= len(self.coeffs):
            return 0
        return self.coeffs[k]

    def terms(self) -> dict:
        return {self.lowest_exp + k: c for k, c in enumerate(self.coeffs) if c != 0}

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return self.lowest_exp + k
        return self.precision

    def truncate(self, precision: int) -> "TruncatedSeries":
        return TruncatedSeries(self.kind, self.lowest_exp, self.coeffs, min(precision, self.precision))

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if other.kind != self.kind:
            raise KindMismatchError(f"cannot combine kinds {self.kind!r} and {other.kind!r}")

    def _scalar(self, c) -> "TruncatedSeries":
        return TruncatedSeries.monomial(self.kind, 0, c, max(self.precision, 1))

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = self._scalar(other)
        self._check(other)
        prec = min(self.precision, other.precision)
        terms = {}
        for s in (self, other):
            for e, c in s.terms().items():
                if e < prec:
                    terms[e] = terms.get(e, 0) + c
        return TruncatedSeries.from_terms(self.kind, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.kind, self.lowest_exp, tuple(-c for c in self.coeffs), self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(
                self.kind, self.lowest_exp, tuple(c * other for c in self.coeffs), self.precision
            )
        self._check(other)
        v1, v2 = self.valuation(), other.valuation()
        prec = min(self.precision + v2, other.precision + v1)
        terms: dict = {}
        a, b = self.terms(), other.terms()
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                if e < prec:
                    terms[e] = terms.get(e, 0) + c1 * c2
        return TruncatedSeries.from_terms(self.kind, terms, prec)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        result = TruncatedSeries.monomial(self.kind, 0, 1, EXACT)
        for _ in range(n):
            result = result * self
        return result

    def reciprocal(self) -> "TruncatedSeries":
        v = self.valuation()
        if v >= self.precision:
            raise ZeroDivisionError("series has no known nonzero coefficient")
        lead = self.coeff(v)
        rel = self.precision - v
        # 1/f = t^-v / lead * 1/(1 + u) with u = (t^-v f)/lead - 1
        normalized = [self.coeff(v + k) / lead for k in range(rel)]
        inv = [0] * rel
        inv[0] = 1
        for k in range(1, rel):
            inv[k] = -sum(normalized[i] * inv[k - i] for i in range(1, k + 1))
        coeffs = tuple(c / lead for c in inv)
        return TruncatedSeries(self.kind, -v, coeffs, -v + rel)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(
                self.kind, self.lowest_exp, tuple(c / other for c in self.coeffs), self.precision
            )
        self._check(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def derivative(self) -> "TruncatedSeries":
        """d/dz.  For kind zinv, d/dz t^k = -k t^(k+1)."""
        terms = {}
        if self.kind == "z":
            for e, c in self.terms().items():
                if e != 0:
                    terms[e - 1] = e * c
            return TruncatedSeries.from_terms("z", terms, self.precision - 1)
        for e, c in self.terms().items():
            if e != 0:
                terms[e + 1] = -e * c
        return TruncatedSeries.from_terms("zinv", terms, self.precision + 1)

    def reflect(self) -> "TruncatedSeries":
        """Reinterpret the coefficients in the other variable (substitute z -> 1/z)."""
        other = "z" if self.kind == "zinv" else "zinv"
        return TruncatedSeries(other, self.lowest_exp, self.coeffs, self.precision)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self evaluated at the function ``inner`` of z.

        For kind z, self is F(z) and the result is F(inner); for kind zinv, self
        is F(1/z) and the result is F(1/inner).  The substituted series must
        tend to zero in ``inner``'s own variable; the result has inner's kind.
        """
        h = inner if self.kind == "z" else inner.reciprocal()
        vh = h.valuation()
        if vh <= 0:
            raise ValueError("substituted series must have positive valuation")
        prec = vh * self.precision if self.precision > 0 else h.precision
        total = TruncatedSeries.zero(inner.kind)
        for e, c in self.terms().items():
            total = total + (h**e) * c
        return total.truncate(prec)

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse of a kind-z series a_1 z + a_2 z^2 + ..."""
        if self.kind != "z" or self.valuation() != 1:
            raise ValueError("reversion needs a z-series with zero constant term and nonzero linear term")
        a1 = self.coeff(1)
        N = self.precision
        g = TruncatedSeries.monomial("z", 1, 1 / a1, N)
        for n in range(2, N):
            err = self.compose(g).coeff(n)
            terms = g.terms()
            terms[n] = terms.get(n, 0) - err / a1
            g = TruncatedSeries.from_terms("z", terms, N)
        return g

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries) or other.kind != self.kind:
            return NotImplemented
        prec = min(self.precision, other.precision)
        lo = min(self.lowest_exp, other.lowest_exp)
        return all(self.coeff(e) == other.coeff(e) for e in range(lo, prec))

    def __hash__(self):
        return hash((self.kind, self.precision))

    def to_json(self) -> dict:
        """Coefficients of t^lowest_exp, t^(lowest_exp+1), ... up to the precision."""
        if self.precision >= EXACT:
            coeffs = list(self.coeffs)
        else:
            coeffs = [self.coeff(e) for e in range(self.lowest_exp, self.precision)]
        return {
            "variable": "z" if self.kind == "z" else "1/z",
            "lowest_exp": self.lowest_exp,
            "coeffs": [render_scalar(simplify(c)) for c in coeffs],
            "precision": None if self.precision >= EXACT else self.precision,
        }


def _moments(m: Sequence, N: int | None) -> list:
    N = len(m) if N is None else N
    if N > len(m):
        raise ValueError(f"need {N} moments, got {len(m)}")
    return list(m[:N])


def cauchy_from_moments(m: Sequence, N: int | None = None) -> TruncatedSeries:
    """G(z) = sum_{n>=0} m_n z^-(n+1), known through z^-(N+1)."""
    m = _moments(m, N)
    return TruncatedSeries("zinv", 1, tuple([1] + m), len(m) + 2)


def r_from_moments(m: Sequence, N: int | None = None) -> TruncatedSeries:
    """R(z) = sum_{n>=0} kappa_{n+1} z^n from the lattice transform."""
    m = _moments(m, N)
    kappa = free_cumulants_from_moments(m, len(m))
    return TruncatedSeries("z", 0, tuple(kappa), len(m))


def r_via_inverse(m: Sequence, N: int | None = None) -> TruncatedSeries:
    """R(z) = K(z) - 1/z where K is the compositional inverse of G."""
    G = cauchy_from_moments(m, N)
    F = G.reflect()  # F(w) = G(1/w), a z-series w + m_1 w^2 + ...
    K = F.reversion().reciprocal()
    return K - TruncatedSeries.monomial("z", -1, 1, K.precision)


def inf_g_from_inf_moments(m_prime: Sequence, N: int | None = None) -> TruncatedSeries:
    """g(z) = sum_{n>=1} m'_n z^-(n+1)."""
    mp = _moments(m_prime, N)
    return TruncatedSeries("zinv", 1, tuple([0] + mp), len(mp) + 2)


def inf_r(m: Sequence, m_prime: Sequence, N: int | None = None) -> TruncatedSeries:
    """r(z) = sum_{n>=0} kappa'_{n+1} z^n."""
    m = _moments(m, N)
    mp = _moments(m_prime, len(m))
    _, kappa_prime = inf_cumulants_from_moments(m, mp, len(m))
    return TruncatedSeries("z", 0, tuple(kappa_prime), len(m))


def inf_r_via_relation(m: Sequence, m_prime: Sequence, N: int | None = None) -> TruncatedSeries:
    """r = -g(K(z)) K'(z) with K the compositional inverse of G."""
    G = cauchy_from_moments(m, N)
    g = inf_g_from_inf_moments(m_prime, N)
    Finv = G.reflect().reversion()  # K(z) = 1/Finv(z)
    # g(K(z)) = g_hat(1/K) = g_hat(Finv) where g_hat(w) = g(1/w)
    g_at_K = g.reflect().compose(Finv)
    K = Finv.reciprocal()
    r = -(g_at_K * K.derivative())
    return r


def psi_from_moments(m: Sequence, N: int | None = None) -> TruncatedSeries:
    """psi(z) = sum_{n>=1} m_n z^n."""
    m = _moments(m, N)
    return TruncatedSeries("z", 1, tuple(m), len(m) + 1)


def eta_from_psi(psi: TruncatedSeries, N: int | None = None) -> TruncatedSeries:
    """eta = psi / (1 + psi)."""
    if psi.kind != "z" or (psi.lowest_exp <= 0 and psi.coeff(0) != 0):
        raise ValueError("psi must be a z-series without constant term")
    eta = psi / (1 + psi)
    return eta if N is None else eta.truncate(N + 1)


def eta_from_moments(m: Sequence, N: int | None = None) -> TruncatedSeries:
    m = _moments(m, N)
    beta = boolean_cumulants_from_moments(m, len(m))
    return TruncatedSeries("z", 1, tuple(beta), len(m) + 1)


def spectral_shift_series(m: Sequence, N: int | None = None) -> list:
    """(tau_0, ..., tau_N) from -G'/G = sum tau_n z^-(n+1)."""
    G = cauchy_from_moments(m, N)
    shift = -(G.derivative() / G)
    count = len(_moments(m, N)) + 1
    return [simplify(shift.coeff(k + 1)) for k in range(count)]
