"""Exact scalar types.

Everything combinatorial in this package runs on exact numbers.  Plain
``Fraction`` covers the real rational case; ``GaussianRational`` adds an exact
imaginary unit; ``InfScalar`` is the dual-number pair (value, infinitesimal
value) that realizes the upper-triangular 2x2 lift; ``QuadExt`` is a quadratic
extension a + b*sqrt(D) used for closed forms whose roots are irrational.

All types interoperate with ``int`` and ``Fraction`` operands, so generic
code can start from the integer literals 0 and 1.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = [
    "GaussianRational",
    "I",
    "InfScalar",
    "QuadExt",
    "as_fraction",
    "parse_scalar",
    "render_scalar",
    "simplify",
    "sqrt_exact",
    "squarefree_decompose",
    "std_part",
    "inf_part",
]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class GaussianRational:
    """Exact complex number re + i*im with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if _is_rational(other):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


class InfScalar:
    """Dual number (std, inf) with (a, a')(b, b') = (ab, ab' + a'b).

    The pair stands for the upper-triangular matrix [[std, inf], [0, std]], so
    any polynomial formula evaluated on InfScalars carries its first-order
    (infinitesimal) companion in the ``inf`` slot.
    """

    __slots__ = ("std", "inf")

    def __init__(self, std=0, inf=0):
        self.std = std
        self.inf = inf

    @staticmethod
    def _coerce(other):
        if isinstance(other, InfScalar):
            return other
        if _is_rational(other) or isinstance(other, (GaussianRational, QuadExt)):
            return InfScalar(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return InfScalar(self.std + o.std, self.inf + o.inf)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return InfScalar(self.std - o.std, self.inf - o.inf)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return InfScalar(self.std * o.std, self.std * o.inf + self.inf * o.std)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.std == 0:
            raise ZeroDivisionError("dual number with zero standard part is not invertible")
        return InfScalar(self.std / o.std, (self.inf * o.std - self.std * o.inf) / (o.std * o.std))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return InfScalar(-self.std, -self.inf)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        if n == 0:
            return InfScalar(1, 0)
        # (a + a' eps)^n = a^n + n a^(n-1) a' eps
        return InfScalar(self.std**n, n * self.std ** (n - 1) * self.inf)

    def as_matrix(self):
        return ((self.std, self.inf), (0, self.std))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.std == o.std and self.inf == o.inf

    def __hash__(self):
        if self.inf == 0:
            return hash(self.std)
        return hash((self.std, self.inf))

    def __bool__(self):
        return bool(self.std) or bool(self.inf)

    def __repr__(self):
        return f"InfScalar({self.std!s}, {self.inf!s})"


class QuadExt:
    """Element a + b*sqrt(D) of a quadratic extension with fixed radicand D.

    Operands with different radicands only mix when one of them has b == 0.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        self.a = Fraction(a) if isinstance(a, int) else a
        self.b = Fraction(b) if isinstance(b, int) else b
        self.D = Fraction(D) if isinstance(D, int) else D

    def _pair(self, other):
        if isinstance(other, QuadExt):
            if other.D == self.D:
                return self, other
            if other.b == 0:
                return self, QuadExt(other.a, 0, self.D)
            if self.b == 0:
                return QuadExt(self.a, 0, other.D), other
            raise ValueError(f"incompatible radicands {self.D} and {other.D}")
        if _is_rational(other) or isinstance(other, GaussianRational):
            return self, QuadExt(other, 0, self.D)
        return None

    def _binary(self, other, op, reflected=False):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return op(y, x) if reflected else op(x, y)

    @staticmethod
    def _add(x, y):
        return QuadExt(x.a + y.a, x.b + y.b, x.D)

    @staticmethod
    def _sub(x, y):
        return QuadExt(x.a - y.a, x.b - y.b, x.D)

    @staticmethod
    def _mul(x, y):
        return QuadExt(x.a * y.a + x.b * y.b * x.D, x.a * y.b + x.b * y.a, x.D)

    @staticmethod
    def _div(x, y):
        norm = y.a * y.a - y.b * y.b * y.D
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        conj = QuadExt(y.a / norm, -y.b / norm, y.D)
        return QuadExt._mul(x, conj)

    def __add__(self, other):
        return self._binary(other, QuadExt._add)

    def __radd__(self, other):
        return self._binary(other, QuadExt._add, reflected=True)

    def __sub__(self, other):
        return self._binary(other, QuadExt._sub)

    def __rsub__(self, other):
        return self._binary(other, QuadExt._sub, reflected=True)

    def __mul__(self, other):
        return self._binary(other, QuadExt._mul)

    def __rmul__(self, other):
        return self._binary(other, QuadExt._mul, reflected=True)

    def __truediv__(self, other):
        return self._binary(other, QuadExt._div)

    def __rtruediv__(self, other):
        return self._binary(other, QuadExt._div, reflected=True)

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        result = QuadExt(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate_root(self):
        """Galois conjugate a - b*sqrt(D)."""
        return QuadExt(self.a, -self.b, self.D)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.D == other.D and self.a == other.a and self.b == other.b
        if _is_rational(other) or isinstance(other, GaussianRational):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, {self.D!s})"

    def normalized(self):
        """Rewrite with a square-free integer radicand; collapse to a scalar if possible."""
        if self.b == 0:
            return simplify(self.a)
        D = simplify(self.D)
        if not _is_rational(D):
            return self
        root = sqrt_exact(D)
        if not isinstance(root, QuadExt):
            return simplify(self.a + self.b * root)
        return QuadExt(self.a, self.b * root.b, root.D)


def squarefree_decompose(n: int):
    """Return (k, s) with n = k^2 * s and s square-free (sign kept in s)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    if n < 10**12:
        k, s, p = 1, 1, 2
        while p * p <= n:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                s *= p
            p += 1 if p == 2 else 2
        return k, s * n * sign
    from sympy import factorint  # only for large radicands

    k, s = 1, 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return k, s * sign


def sqrt_exact(x):
    """Exact square root of a rational: a Fraction or a QuadExt 0 + c*sqrt(s)."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    k, s = squarefree_decompose(num * den)
    coeff = Fraction(k, den)
    if s == 1:
        return coeff
    return QuadExt(Fraction(0), coeff, s)


def simplify(x):
    """Collapse exact scalars to the simplest equal representation."""
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, GaussianRational):
        return x.re if x.im == 0 else x
    if isinstance(x, QuadExt):
        if x.b == 0:
            return simplify(x.a)
        return x
    if isinstance(x, InfScalar):
        return InfScalar(simplify(x.std), simplify(x.inf))
    return x


def as_fraction(x) -> Fraction:
    x = simplify(x)
    if not isinstance(x, Fraction):
        raise TypeError(f"expected a rational value, got {x!r}")
    return x


def std_part(x):
    return x.std if isinstance(x, InfScalar) else x


def inf_part(x):
    return x.inf if isinstance(x, InfScalar) else 0


def parse_scalar(value):
    """Parse a JSON scalar: int, decimal, "p/q", or {"re": .., "im": ..}."""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return simplify(GaussianRational(parse_scalar(value.get("re", 0)), parse_scalar(value.get("im", 0))))
    raise ValueError(f"not a scalar: {value!r}")


def render_scalar(x):
    """JSON rendering: canonical "p/q" strings, complex as {"re","im"}, surds as {"p","q","s"}."""
    x = simplify(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Rational):
        return str(Fraction(x))
    if isinstance(x, GaussianRational):
        return {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, QuadExt):
        x = x.normalized()
        if not isinstance(x, QuadExt):
            return render_scalar(x)
        return {"p": render_scalar(x.a), "q": render_scalar(x.b), "s": render_scalar(x.D)}
    if isinstance(x, InfScalar):
        return {"std": render_scalar(x.std), "inf": render_scalar(x.inf)}
    raise TypeError(f"cannot render {x!r}")
