"""The state psi(x) = phi'(xj)/phi'(j) built from an infinitesimal idempotent j.

j has phi(j^n) = 0 and phi'(j^n) = phi'(j) for n >= 1 and is infinitesimally
free from the algebra B it is combined with.  Words are tuples of items:
``J`` (j), ``JP`` (j^perp = 1 - j) or a tuple of B-symbols standing for their
product (the empty tuple is 1).  In an epsilon string, -1 stands for j and
+1 for j^perp.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .cumulants import FreeProduct, JointFamily, PowerFamily
from .partitions import PartitionClass, SizeLimitError, enumerate_partitions
from .scalars import InfScalar, simplify

__all__ = [
    "J",
    "JP",
    "IdempotentModel",
    "SweepReport",
    "beta_tilde",
    "boolean_cumulant",
    "closed_form_inf_moment",
    "closed_form_j_between",
    "closed_form_j_leading",
    "cyclic_boolean_cumulant",
    "eval_inf_word_with_idempotent",
    "eval_word_with_idempotent",
    "jj_generators",
    "ja_generators",
    "jword",
    "markov_krein_sequence",
    "psi_state",
    "random_functional",
    "verify_boolean_independence",
    "verify_monotone_independence",
]

J = "j"
JP = "jp"
_J_FAMILY = "__j__"


def jword(eps: Sequence[int], elements: Sequence[tuple], trailing_j: bool = False) -> tuple:
    """j^(eps_1) a_1 j^(eps_2) a_2 ... j^(eps_n) a_n, optionally followed by j."""
    if len(eps) != len(elements):
        raise ValueError("eps and elements differ in length")
    word = []
    for e, a in zip(eps, elements):
        if e not in (-1, 1):
            raise ValueError(f"eps entries must be +-1, got {e}")
        word += [J if e == -1 else JP, tuple(a)]
    if trailing_j:
        word.append(J)
    return tuple(word)


def random_functional(seed, low: int = -5, high: int = 5, denominators: int = 4) -> Callable:
    """A deterministic 'generic' dual-valued functional on words: (phi, phi')."""

    def fn(word):
        rng = random.Random(f"{seed}:{word}")
        return InfScalar(
            Fraction(rng.randint(low, high), rng.randint(1, denominators)),
            Fraction(rng.randint(low, high), rng.randint(1, denominators)),
        )

    return fn


@dataclass
class IdempotentModel:
    """j together with an algebra B given as (infinitesimally) free families.

    ``families`` maps family names to objects with ``moment``/``cumulant``
    on words (dual-valued); ``family_of`` maps B-symbols to family names.
    """

    phi_prime_j: object
    families: dict
    family_of: Callable | dict
    max_symbols: int = 40
    _context: FreeProduct = field(init=False, repr=False)

    def __post_init__(self):
        if self.phi_prime_j == 0:
            raise ValueError("phi'(j) must be nonzero")
        c = self.phi_prime_j
        families = dict(self.families)
        families[_J_FAMILY] = PowerFamily(lambda k: InfScalar(0, c))
        lookup = self.family_of

        def family_of(symbol):
            if symbol == J:
                return _J_FAMILY
            return lookup(symbol) if callable(lookup) else lookup[symbol]

        self._context = FreeProduct(families, family_of)

    @classmethod
    def joint(cls, phi_prime_j, functional: Callable, **kw) -> "IdempotentModel":
        """B has an arbitrary joint (phi, phi') given by ``functional`` on words."""
        return cls(phi_prime_j, {"B": JointFamily(functional)}, lambda s: "B", **kw)

    @classmethod
    def free_variables(cls, phi_prime_j, marginals: dict, **kw) -> "IdempotentModel":
        """Each symbol is its own free family; marginals give (m, m') sequences."""
        families = {}
        for s, (m, mp) in marginals.items():
            families[s] = PowerFamily([InfScalar(x, y) for x, y in zip(m, mp)])
        return cls(phi_prime_j, families, {s: s for s in marginals}, **kw)

    def moment(self, symbols: tuple) -> InfScalar:
        """(phi, phi') of a word in j and B-symbols."""
        value = self._context.moment(tuple(symbols))
        return value if isinstance(value, InfScalar) else InfScalar(value, 0)

    def phi(self, *elements) -> object:
        """phi of the product of B-elements."""
        return simplify(self.moment(_concat(elements)).std)

    def phi_prime(self, *elements) -> object:
        return simplify(self.moment(_concat(elements)).inf)


def _concat(elements) -> tuple:
    out = []
    for a in elements:
        out += list(a)
    return tuple(out)


def _expand(word: Sequence) -> dict:
    """Expand j^perp = 1 - j; returns {collapsed symbol word: coefficient}."""
    options = []
    for item in word:
        if item == J:
            options.append(((1, (J,)),))
        elif item == JP:
            options.append(((1, ()), (-1, (J,))))
        else:
            options.append(((1, tuple(item)),))
    terms: dict = {}
    for choice in product(*options):
        coeff, symbols = 1, []
        for c, part in choice:
            coeff *= c
            for s in part:
                if s == J and symbols and symbols[-1] == J:
                    continue  # j^2 = j
                symbols.append(s)
        key = tuple(symbols)
        terms[key] = terms.get(key, 0) + coeff
    return terms


def eval_word_with_idempotent(word: Sequence, model: IdempotentModel) -> InfScalar:
    total = InfScalar(0, 0)
    for symbols, coeff in _expand(word).items():
        if coeff == 0:
            continue
        if len(symbols) > model.max_symbols:
            raise SizeLimitError(f"word of {len(symbols)} symbols exceeds {model.max_symbols}")
        total = total + coeff * model.moment(symbols)
    return simplify(total)


def eval_inf_word_with_idempotent(word: Sequence, model: IdempotentModel):
    """phi'(word) by the free moment-cumulant expansion with j's marginal."""
    return simplify(eval_word_with_idempotent(word, model).inf)


def psi_state(word: Sequence, model: IdempotentModel):
    """psi(word) = phi'(word j) / phi'(j)."""
    return simplify(eval_inf_word_with_idempotent(tuple(word) + (J,), model) / model.phi_prime_j)


# -- closed forms ------------------------------------------------------------


def boolean_cumulant(phi: Callable, elements: Sequence[tuple]):
    """beta_n(a_1, ..., a_n) from phi on products of consecutive elements."""
    n = len(elements)
    if n == 0:
        return simplify(1)
    # beta_n = sum over interval partitions of (-1)^(#blocks - 1) phi_pi
    total = 0
    for mask in range(1 << (n - 1)):
        cuts = [i + 1 for i in range(n - 1) if mask >> i & 1]
        bounds = [0, *cuts, n]
        term = (-1) ** (len(bounds) - 2)
        for a, b in zip(bounds, bounds[1:]):
            term = term * phi(*elements[a:b])
        total = total + term
    return simplify(total)


def cyclic_boolean_cumulant(phi: Callable, elements: Sequence[tuple], positions: Sequence[int]):
    """Boolean-type cumulant of a cyclic block read from its starting position.

    ``positions`` lists the block's indices in cyclic order from its start.
    The block is split into consecutive pieces of that cyclic sequence; each
    piece contributes phi of its elements multiplied in increasing index
    order, with sign (-1)^(#pieces - 1).
    """
    k = len(positions)
    total = 0
    for mask in range(1 << (k - 1)):
        cuts = [i + 1 for i in range(k - 1) if mask >> i & 1]
        bounds = [0, *cuts, k]
        term = (-1) ** (len(bounds) - 2)
        for a, b in zip(bounds, bounds[1:]):
            piece = sorted(positions[a:b])
            term = term * phi(*(elements[i] for i in piece))
        total = total + term
    return simplify(total)


def _cyclic_blocks(eps: Sequence[int]) -> list:
    """Blocks of sigma_eps in cyclic order from their starts (positions 0-based)."""
    n = len(eps)
    starts = [i for i, e in enumerate(eps) if e == -1]
    blocks = []
    for k, s in enumerate(starts):
        end = starts[k + 1] if k + 1 < len(starts) else starts[0] + n
        blocks.append([i % n for i in range(s, end)])
    return blocks


def beta_tilde(phi: Callable, elements: Sequence[tuple]):
    """(n-1) phi(a_1...a_n) - sum over CI(n) of (-1)^#sigma phi_sigma."""
    n = len(elements)
    total = (n - 1) * phi(*elements)
    for sigma in enumerate_partitions(n, PartitionClass.CYCLIC_INTERVAL):
        term = (-1) ** len(sigma)
        for block in sigma.blocks:
            term = term * phi(*(elements[i - 1] for i in block))
        total = total - term
    return simplify(total)


def closed_form_inf_moment(
    eps: Sequence[int], elements: Sequence[tuple], model: IdempotentModel, trailing_j: bool = False
):
    """phi'(j^(eps_1) a_1 ... j^(eps_n) a_n [j]) from phi, phi' on B and phi'(j) alone.

    * some eps_l = -1: phi'(j) times the product over the blocks of sigma_eps;
      blocks not containing both an index before and after the wrap are plain
      Boolean cumulants, the wrapping block is read cyclically from its start.
    * all eps = +1: phi'(a_1 ... a_n) - phi'(j) beta_tilde_n.
    * a trailing j is the extra pair (eps = -1, a = 1).
    """
    eps, elements = list(eps), [tuple(a) for a in elements]
    if len(eps) != len(elements):
        raise ValueError("eps and elements differ in length")
    if trailing_j:
        eps.append(-1)
        elements.append(())
    c = model.phi_prime_j
    if all(e == 1 for e in eps):
        return simplify(model.phi_prime(*elements) - c * beta_tilde(model.phi, elements))
    total = c
    for block in _cyclic_blocks(eps):
        if block == sorted(block):
            total = total * boolean_cumulant(model.phi, [elements[i] for i in block])
        else:
            total = total * cyclic_boolean_cumulant(model.phi, elements, block)
    return simplify(total)


def closed_form_j_leading(elements: Sequence[tuple], model: IdempotentModel):
    """phi'(j a_1 j a_2 ... j a_n) = phi'(j a_1 ... j a_n j) = phi'(j) phi(a_1) ... phi(a_n)."""
    total = model.phi_prime_j
    for a in elements:
        total = total * model.phi(a)
    return simplify(total)


def closed_form_j_between(elements: Sequence[tuple], model: IdempotentModel):
    """phi'(a_1 j a_2 j ... j a_n) = phi'(j) phi(a_1 a_n) phi(a_2) ... phi(a_{n-1}), n >= 2."""
    if len(elements) < 2:
        raise ValueError("needs at least two elements; for n = 1 the word is just a_1")
    total = model.phi_prime_j * model.phi(elements[0], elements[-1])
    for a in elements[1:-1]:
        total = total * model.phi(a)
    return simplify(total)


def markov_krein_sequence(moments: Sequence, inf_moments: Sequence, N: int) -> list:
    """tau~_n = phi'(a^n) - phi'((p a p)^n) for p = j^perp with phi'(j) = 1, n = 0..N.

    (p a p)^0 is read as p, so tau~_0 = phi'(1) - phi'(p) = 1.
    """
    model = IdempotentModel.free_variables(1, {"a": (moments, inf_moments)})
    out = []
    for n in range(N + 1):
        word = [JP]
        for _ in range(n):
            word += [("a",), JP]
        plain = eval_inf_word_with_idempotent((("a",) * n,), model)
        out.append(simplify(plain - eval_inf_word_with_idempotent(word, model)))
    return out


# -- independence sweeps -------------------------------------------------------


def jj_generators(algebra_elements: Sequence[tuple], m: int) -> Iterable[tuple]:
    """Generators j a_1 j^(e_2) a_2 ... j^(e_m) a_m j of j J(A) j with exactly m elements."""
    for elems in product(algebra_elements, repeat=m):
        for tail in product((-1, 1), repeat=m - 1):
            yield jword((-1, *tail), elems, trailing_j=True)


def ja_generators(algebra_elements: Sequence[tuple], m: int) -> Iterable[tuple]:
    """Generators j^(e_0) a_1 j^(e_1) ... a_m j^(e_m) of J_a(A) with alternating e."""
    for elems in product(algebra_elements, repeat=m):
        for first in (-1, 1):
            word, e = [], first
            for a in elems:
                word += [J if e == -1 else JP, tuple(a)]
                e = -e
            word.append(J if e == -1 else JP)
            yield tuple(word)


def _generator_pool(kind: str, elements, max_elements: int) -> dict:
    """{m: generators with m algebra elements} for 1 <= m <= max_elements."""
    build = {"jJj": jj_generators, "Ja": ja_generators}.get(kind)
    if build is None:
        raise ValueError(f"generator kind must be 'jJj' or 'Ja', got {kind!r}")
    return {m: list(build(elements, m)) for m in range(1, max_elements + 1)}


@dataclass
class SweepReport:
    checked: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)
    max_failures: int = 20

    @property
    def passed(self) -> int:
        return self.checked - self.failure_count

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def record(self, ok: bool, detail) -> None:
        self.checked += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < self.max_failures:
                self.failures.append(detail)

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "passed": self.passed,
            "failures": [repr(f) for f in self.failures],
        }


def _compositions(total: int, parts: int, largest: int):
    """Tuples of `parts` integers in 1..largest with sum <= total."""
    if parts == 0:
        yield ()
        return
    for first in range(1, min(largest, total - parts + 1) + 1):
        for rest in _compositions(total - first, parts - 1, largest):
            yield (first, *rest)


def _alternating_sequences(count: int, n: int):
    """Index sequences i_1 != i_2 != ... != i_n over range(count)."""
    if n == 0:
        yield ()
        return
    for head in _alternating_sequences(count, n - 1):
        for i in range(count):
            if not head or head[-1] != i:
                yield head + (i,)


def _concat_words(words) -> tuple:
    out = []
    for w in words:
        out += list(w)
    return tuple(out)


def verify_boolean_independence(
    model: IdempotentModel,
    algebras: Sequence[Sequence[tuple]],
    max_total: int,
    kind: str = "jJj",
    state: str = "psi",
) -> SweepReport:
    """Check psi(x_1 ... x_n) = psi(x_1) ... psi(x_n) for generators of alternating algebras.

    ``algebras`` lists, per algebra, the B-elements used to build generators;
    every product x_1 ... x_n (n >= 2) carrying at most ``max_total`` algebra
    elements in total is checked.  ``state="phi"`` runs the same sweep with
    phi' in place of psi as a negative control.
    """
    pools = [_generator_pool(kind, elems, max_total) for elems in algebras]
    if state == "psi":
        value = lambda w: psi_state(w, model)  # noqa: E731
    elif state == "phi":
        value = lambda w: eval_inf_word_with_idempotent(w, model)  # noqa: E731
    else:
        raise ValueError(f"state must be 'psi' or 'phi', got {state!r}")
    single: dict = {}
    report = SweepReport()
    for n in range(2, max_total + 1):
        for sizes in _compositions(max_total, n, max_total):
            for idx in _alternating_sequences(len(pools), n):
                for xs in product(*(pools[i][m] for i, m in zip(idx, sizes))):
                    lhs = value(_concat_words(xs))
                    rhs = 1
                    for x in xs:
                        if x not in single:
                            single[x] = value(x)
                        rhs = rhs * single[x]
                    report.record(lhs == rhs, (xs, lhs, simplify(rhs)))
    return report


def verify_monotone_independence(
    model: IdempotentModel,
    b_elements: Sequence[tuple],
    c_elements: Sequence[tuple],
    max_total: int,
    kind: str = "jJj",
    swap_roles: bool = False,
) -> SweepReport:
    """Check psi(c_0 x_1 c_1 ... x_n c_n) = psi(c_k) psi(c_0 x_1 ... x_k x_{k+1} ... x_n c_n).

    x_i run over generators built from ``b_elements``; c_i over
    ``c_elements``, with c_0 and c_n also allowed to be 1.  Each word holds at
    most ``max_total`` elements of B and C together; every k with c_k != 1 is
    extracted.  With ``swap_roles`` the C-elements play the x part and the
    generators the c part, which should break the identity.
    """
    gens = _generator_pool(kind, b_elements, max_total)
    cs = {1: [(tuple(c),) for c in c_elements]}
    x_pool, c_pool = (gens, cs) if not swap_roles else (cs, gens)
    report = SweepReport()
    for n in range(1, max_total + 1):
        # sizes of x_1..x_n, then of c_1..c_{n-1}, then of c_0 and c_n (0 = absent)
        for x_sizes in _compositions(max_total, n, max(x_pool)):
            budget = max_total - sum(x_sizes)
            for c_sizes in _compositions(budget, n - 1, max(c_pool)):
                left = budget - sum(c_sizes)
                for edge in product(range(0, min(left, max(c_pool)) + 1), repeat=2):
                    if sum(edge) > left or any(e and e not in c_pool for e in edge):
                        continue
                    sizes = [edge[0], *c_sizes, edge[1]]
                    if any(s and s not in c_pool for s in sizes):
                        continue
                    c_choices = [c_pool[s] if s else [()] for s in sizes]
                    for xs in product(*(x_pool[m] for m in x_sizes)):
                        for cvec in product(*c_choices):
                            _check_extraction(model, list(cvec), xs, report)
    return report


def _check_extraction(model, cvec, xs, report):
    full = _interleave(cvec, xs)
    lhs = psi_state(full, model)
    for k, c in enumerate(cvec):
        if not c:
            continue
        reduced = list(cvec)
        reduced[k] = ()
        rhs = psi_state(c, model) * psi_state(_interleave(reduced, xs), model)
        report.record(lhs == rhs, (full, k, lhs, simplify(rhs)))


def _interleave(cs, xs) -> tuple:
    out = list(cs[0])
    for x, c in zip(xs, cs[1:]):
        out += list(x) + list(c)
    return tuple(out)
