"""Closed-form laws for two quadratic polynomials.

* The anticommutator p = x1 x2 + x2 x1 and the commutator q = i(x1 x2 - x2 x1)
  of infinitesimally free x1, x2 where x2 has phi-distribution delta_0.
* g = a x1 x2 + b x2 x1 for Boolean (or infinitesimally Boolean) independent
  x1, x2: Boolean cumulants, moments, the two-atom law and the parity
  recursion for the moment sums.

Each closed form has an independent brute-force twin in ``oracles``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from math import comb
from itertools import combinations

from .cumulants import moments_from_boolean_cumulants
from .distributions import AtomicMeasure, anticommutator_target
from .scalars import GaussianRational, InfScalar, QuadExt, simplify, sqrt_exact
from .series import TruncatedSeries, inf_g_from_inf_moments

__all__ = [
    "BooleanPolyInput",
    "DegenerateRootError",
    "FreePolyInput",
    "GammaState",
    "ParityError",
    "ZeroRatioError",
    "alternating_sign_sum",
    "alternating_sign_sum_brute",
    "anticommutator_g_series",
    "anticommutator_inf_law",
    "anticommutator_inf_measure",
    "boolean_poly_cumulants",
    "boolean_poly_moments",
    "boolean_poly_roots",
    "boolean_poly_moments_via_cumulants",
    "commutator_g_series",
    "commutator_inf_law",
    "gamma_direct",
    "gamma_recurrence",
    "inf_boolean_poly_cumulants",
    "inf_boolean_poly_cumulants_lifted",
]


class DegenerateRootError(ArithmeticError):
    """The two-atom law degenerates (a double root, or an atom at 0 with mass)."""


class ZeroRatioError(ZeroDivisionError):
    """The parity recursion needs alpha_1 != 0 and alpha_2 != 0."""


class ParityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Anticommutator and commutator of infinitesimally free variables


@dataclass(frozen=True)
class FreePolyInput:
    """m1, m2: first two moments of x1; x2_inf_moments: m'_1, m'_2, ... of x2."""

    m1: object
    m2: object
    x2_inf_moments: tuple

    def __post_init__(self):
        object.__setattr__(self, "m1", simplify(self.m1))
        object.__setattr__(self, "m2", simplify(self.m2))
        object.__setattr__(self, "x2_inf_moments", tuple(simplify(x) for x in self.x2_inf_moments))

    @property
    def variance(self):
        return self.m2 - self.m1 * self.m1

    @property
    def alpha(self):
        return simplify(self.m1 + sqrt_exact(self.m2))

    @property
    def beta(self):
        return simplify(self.m1 - sqrt_exact(self.m2))

    @property
    def omega(self):
        return simplify(sqrt_exact(self.variance))

    def _order(self, N):
        N = len(self.x2_inf_moments) if N is None else N
        if N > len(self.x2_inf_moments):
            raise ValueError(f"need {N} infinitesimal moments of x2, got {len(self.x2_inf_moments)}")
        return N


def _power_sums(e1, e2, N: int) -> list:
    """s_n = r1^n + r2^n for the roots of t^2 - e1 t + e2, n = 1..N (rational recursion)."""
    s = [2, e1]
    for _ in range(2, N + 1):
        s.append(e1 * s[-1] - e2 * s[-2])
    return [simplify(x) for x in s[1 : N + 1]]


def anticommutator_inf_law(inp: FreePolyInput, N: int | None = None) -> list:
    """m'_n(p) = (alpha^n + beta^n) m'_n(x2).

    alpha and beta solve t^2 - 2 m1 t + (m1^2 - m2) = 0, so the power sums stay rational.
    """
    N = inp._order(N)
    powers = _power_sums(2 * inp.m1, inp.m1 * inp.m1 - inp.m2, N)
    return [simplify(s * mp) for s, mp in zip(powers, inp.x2_inf_moments)]


def anticommutator_g_series(inp: FreePolyInput, N: int | None = None) -> TruncatedSeries:
    """g_p = g_{alpha x2} + g_{beta x2} as a series in 1/z."""
    return inf_g_from_inf_moments(anticommutator_inf_law(inp, N))


def anticommutator_inf_measure(nu_prime: AtomicMeasure, m1, m2) -> AtomicMeasure:
    """mu'_p as the sum of the alpha- and beta-dilations of an atomic mu'_{x2}."""
    return anticommutator_target(nu_prime, m1, m2)


def commutator_inf_law(inp: FreePolyInput, N: int | None = None) -> list:
    """m'_n(q) = 2 omega^n m'_n(x2) for even n and 0 for odd n, omega^2 = kappa_2(x1)."""
    N = inp._order(N)
    w2 = inp.variance
    return [
        simplify(2 * w2 ** (n // 2) * mp) if n % 2 == 0 else simplify(0)
        for n, mp in enumerate(inp.x2_inf_moments[:N], start=1)
    ]


def commutator_g_series(inp: FreePolyInput, N: int | None = None) -> TruncatedSeries:
    return inf_g_from_inf_moments(commutator_inf_law(inp, N))


def alternating_sign_sum(n: int, r: int) -> int:
    """Sum over compositions k_1+...+k_r = n of (-1)^(k_2+k_4+...), in closed form."""
    _check_alternating(n, r)
    return (-1) ** (r // 2) * comb(n // 2 - 1, (r - 1) // 2)


def alternating_sign_sum_brute(n: int, r: int) -> int:
    _check_alternating(n, r)
    total = 0
    for cuts in combinations(range(1, n), r - 1):
        bounds = (0, *cuts, n)
        parts = [bounds[i + 1] - bounds[i] for i in range(r)]
        total += (-1) ** sum(parts[1::2])
    return total


def _check_alternating(n, r):
    if n % 2:
        raise ParityError(f"n must be even, got {n}")
    if not 1 <= r <= n:
        raise ValueError(f"r must lie in 1..{n}, got {r}")


# ---------------------------------------------------------------------------
# g = a x1 x2 + b x2 x1 for Boolean independent x1, x2


@dataclass(frozen=True)
class BooleanPolyInput:
    """Coefficients a, b and the first two Boolean cumulants of x1 and x2.

    The ``inf_*`` fields carry the infinitesimal Boolean cumulants beta'_1, beta'_2.
    Fields may hold any exact scalar type, including ``InfScalar``.
    """

    a: object
    b: object
    beta1_x1: object
    beta2_x1: object
    beta1_x2: object
    beta2_x2: object
    inf_beta1_x1: object = None
    inf_beta2_x1: object = None
    inf_beta1_x2: object = None
    inf_beta2_x2: object = None

    @property
    def has_inf(self) -> bool:
        return all(getattr(self, f.name) is not None for f in fields(self) if f.name.startswith("inf_"))

    def lifted(self) -> "BooleanPolyInput":
        """Same input with each beta replaced by the dual number (beta, beta')."""
        if not self.has_inf:
            raise ValueError("infinitesimal cumulants beta'_1, beta'_2 are required")
        return BooleanPolyInput(
            self.a,
            self.b,
            InfScalar(self.beta1_x1, self.inf_beta1_x1),
            InfScalar(self.beta2_x1, self.inf_beta2_x1),
            InfScalar(self.beta1_x2, self.inf_beta1_x2),
            InfScalar(self.beta2_x2, self.inf_beta2_x2),
        )

    def standard(self) -> "BooleanPolyInput":
        return replace(self, inf_beta1_x1=None, inf_beta2_x1=None, inf_beta1_x2=None, inf_beta2_x2=None)

    @property
    def beta1_p(self):
        """beta_1 of p = x1 x2 + x2 x1."""
        return 2 * self.beta1_x1 * self.beta1_x2

    @property
    def beta2_p(self):
        return self.beta1_x1**2 * self.beta2_x2 + self.beta1_x2**2 * self.beta2_x1

    @property
    def d(self):
        return self.a * self.b * self.beta2_x1 * self.beta2_x2

    @property
    def alpha1(self):
        return (self.a + self.b) * self.beta1_x1 * self.beta1_x2

    @property
    def alpha2(self):
        return self.a * self.b * self.beta2_p

    @property
    def discriminant(self):
        """omega^2 = alpha_1^2 + 4 (d + alpha_2)."""
        return self.alpha1**2 + 4 * (self.d + self.alpha2)


def boolean_poly_cumulants(inp: BooleanPolyInput, N: int) -> list:
    """beta_n(g): alpha_1 d^((n-1)/2) for odd n, alpha_2 d^((n-2)/2) for even n."""
    a1, a2, d = inp.alpha1, inp.alpha2, inp.d
    out = []
    for n in range(1, N + 1):
        out.append(a1 * d ** ((n - 1) // 2) if n % 2 else a2 * d ** ((n - 2) // 2))
    return [simplify(x) for x in out]


def _rational_sqrt(x):
    x = simplify(x)
    if isinstance(x, GaussianRational):
        raise ValueError("complex discriminant: the two-atom form needs a real omega^2")
    return simplify(sqrt_exact(x))


def boolean_poly_roots(inp: BooleanPolyInput) -> tuple:
    """(omega, theta_1, theta_2) with theta_{1,2} = (alpha_1 +- omega)/2."""
    a1 = simplify(inp.alpha1)
    omega = _rational_sqrt(inp.discriminant)
    return omega, simplify((a1 + omega) / 2), simplify((a1 - omega) / 2)


def boolean_poly_moments(inp: BooleanPolyInput, N: int) -> tuple:
    """Moments m_1..m_N of g and the signed two-atom measure reproducing them.

    The atoms are theta_{1,2} = (alpha_1 +- omega)/2; they are exact surds when
    omega is irrational.  The measure's total mass is generally not 1; only the
    moments of order >= 1 are matched.
    """
    a1, a2 = simplify(inp.alpha1), simplify(inp.alpha2)
    omega, theta1, theta2 = boolean_poly_roots(inp)
    if omega == 0:
        raise DegenerateRootError("omega = 0: double root, use gamma_recurrence")
    thetas = (theta1, theta2)
    signs = (1, -1)

    moments = []
    for k in range(1, N + 1):
        total = 0
        for sign, theta in zip(signs, thetas):
            total = total + sign * theta ** (k - 1) * (a1 * theta + a2)
        m = simplify(total / omega)
        if isinstance(m, QuadExt):
            raise ArithmeticError(f"irrational part survived in m_{k}: {m!r}")
        moments.append(m)

    atoms = []
    for sign, theta in zip(signs, thetas):
        numerator = a1 * theta + a2
        if simplify(theta) == 0:
            if simplify(numerator) != 0:
                raise DegenerateRootError("atom at 0 carries a nonzero numerator")
            continue
        atoms.append((theta, simplify(sign * numerator / (omega * theta))))
    return moments, AtomicMeasure(tuple(atoms))


@dataclass(frozen=True)
class GammaState:
    """Odd/even-first-block interval-partition sums; m_k = odd_k + even_k."""

    odd: tuple
    even: tuple

    @property
    def moments(self) -> list:
        return [simplify(o + e) for o, e in zip(self.odd, self.even)]


def gamma_recurrence(inp: BooleanPolyInput, N: int, fallback: bool = False) -> GammaState:
    """Run the parity recursion for gamma_o, gamma_e.

    It divides by alpha_1 and alpha_2; when either vanishes, raise
    ``ZeroRatioError`` unless ``fallback`` asks for ``gamma_direct``.
    """
    a1, a2, d = simplify(inp.alpha1), simplify(inp.alpha2), simplify(inp.d)
    if a1 == 0 or a2 == 0:
        if fallback:
            return gamma_direct(inp, N)
        raise ZeroRatioError("alpha_1 and alpha_2 must be nonzero")
    odd, even = [a1], [simplify(0)]
    for _ in range(1, N):
        m = odd[-1] + even[-1]
        odd_next = a1 * m + d * (a1 / a2) * even[-1]
        even_next = (a2 / a1) * odd[-1]
        odd.append(simplify(odd_next))
        even.append(simplify(even_next))
    return GammaState(tuple(odd), tuple(even))


def gamma_direct(inp: BooleanPolyInput, N: int) -> GammaState:
    """Split each interval partition by the parity of its first block."""
    beta = boolean_poly_cumulants(inp, N)
    m = [1] + moments_from_boolean_cumulants(beta, N)
    odd, even = [], []
    for k in range(1, N + 1):
        o = sum((beta[s - 1] * m[k - s] for s in range(1, k + 1, 2)), 0)
        e = sum((beta[s - 1] * m[k - s] for s in range(2, k + 1, 2)), 0)
        odd.append(simplify(o))
        even.append(simplify(e))
    return GammaState(tuple(odd), tuple(even))


def inf_boolean_poly_cumulants(inp: BooleanPolyInput, N: int) -> list:
    """beta'_n(g) in closed form, written through beta_{1,2}(p) and beta'_{1,2}(p).

    Odd n uses alpha_1 = (a+b) beta_1(p)/2 and its derivative.  Terms whose
    coefficient (n-1)/2 or (n-2)/2 vanishes are omitted, so no negative
    power of beta_2(x1) beta_2(x2) appears.
    """
    if not inp.has_inf:
        raise ValueError("infinitesimal cumulants beta'_1, beta'_2 are required")
    a, b = inp.a, inp.b
    b1x1, b2x1, b1x2, b2x2 = inp.beta1_x1, inp.beta2_x1, inp.beta1_x2, inp.beta2_x2
    p1x1, p2x1, p1x2, p2x2 = inp.inf_beta1_x1, inp.inf_beta2_x1, inp.inf_beta1_x2, inp.inf_beta2_x2

    half_beta1_p = b1x1 * b1x2
    half_inf_beta1_p = p1x1 * b1x2 + b1x1 * p1x2
    beta2_p = inp.beta2_p
    inf_beta2_p = 2 * b1x1 * p1x1 * b2x2 + b1x1**2 * p2x2 + 2 * b1x2 * p1x2 * b2x1 + b1x2**2 * p2x1
    prod = b2x1 * b2x2
    inf_prod = b2x1 * p2x2 + p2x1 * b2x2
    ab = a * b

    out = []
    for n in range(1, N + 1):
        if n % 2:
            k = (n - 1) // 2
            value = (a + b) * ab**k * half_inf_beta1_p * prod**k
            if k:
                value = value + (a + b) * ab**k * prod ** (k - 1) * k * half_beta1_p * inf_prod
        else:
            k = (n - 2) // 2
            value = ab ** (k + 1) * inf_beta2_p * prod**k
            if k:
                value = value + ab ** (k + 1) * prod ** (k - 1) * k * beta2_p * inf_prod
        out.append(simplify(value))
    return out


def inf_boolean_poly_cumulants_lifted(inp: BooleanPolyInput, N: int) -> list:
    """beta'_n(g) read off the dual-number evaluation of the standard closed form."""
    return [
        simplify(x.inf) if isinstance(x, InfScalar) else simplify(0)
        for x in boolean_poly_cumulants(inp.lifted(), N)
    ]


def boolean_poly_moments_via_cumulants(inp: BooleanPolyInput, N: int) -> list:
    return moments_from_boolean_cumulants(boolean_poly_cumulants(inp, N), N)
