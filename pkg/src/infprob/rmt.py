"""Monte Carlo checks with Haar-conjugated deterministic matrices.

A is a fixed finite-rank diagonal corner (its Tr-moments give m'_n), B has a
prescribed spectrum of size N (its tr-moments give m_n) and U B U^* with U
Haar is asymptotically infinitesimally free from A.  Estimates of
E Tr(poly^n) are compared with the exact closed forms.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bridge import IdempotentModel, closed_form_inf_moment
from .poly_laws import FreePolyInput, anticommutator_inf_law, commutator_inf_law

__all__ = [
    "EnsembleSpec",
    "EstimatorResult",
    "NumericalHealthError",
    "bridge_word",
    "estimate_boolean_bridge",
    "estimate_inf_moments",
    "named_spectrum",
    "sample_haar_unitary",
    "sample_rng",
]

MAX_ORDER = 8
IMAG_TOLERANCE = 1e-10


class NumericalHealthError(ArithmeticError):
    """Empirical traces of a Hermitian polynomial carry a large imaginary part."""


def named_spectrum(name: str, N: int) -> list:
    """Exact spectra with N-independent tr-moments (N must be even).

    ``pm1``: half +1, half -1 (tr 0, tr^2 1).  ``zero_two``: half 0, half 2
    (tr 1, tr^2 2).
    """
    if N % 2:
        raise ValueError(f"named spectrum {name!r} needs even N, got {N}")
    half = N // 2
    if name == "pm1":
        return [Fraction(1)] * half + [Fraction(-1)] * half
    if name == "zero_two":
        return [Fraction(0)] * half + [Fraction(2)] * half
    raise ValueError(f"unknown spectrum profile {name!r}")


@dataclass(frozen=True)
class EnsembleSpec:
    """N, the nonzero eigenvalues of A, B's spectrum (list or profile name), samples, seed."""

    N: int
    a_eigenvalues: tuple = (1,)
    b_spectrum: tuple | str = "pm1"
    samples: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if len(self.a_eigenvalues) > self.N:
            raise ValueError("rank of A exceeds N")
        if self.samples < 2:
            raise ValueError("need at least two samples for a standard error")

    @property
    def b_eigenvalues(self) -> list:
        if isinstance(self.b_spectrum, str):
            return named_spectrum(self.b_spectrum, self.N)
        values = [Fraction(str(x)) if isinstance(x, float) else Fraction(x) for x in self.b_spectrum]
        if len(values) != self.N:
            raise ValueError(f"B spectrum has {len(values)} entries, expected N = {self.N}")
        return values

    def b_tr_moment(self, k: int) -> Fraction:
        vals = self.b_eigenvalues
        return sum((v**k for v in vals), Fraction(0)) / len(vals)

    def a_tr_moment_total(self, k: int) -> Fraction:
        """Tr(A^k) = sum of lambda_i^k over the finite-rank corner."""
        return sum((Fraction(x) ** k for x in self.a_eigenvalues), Fraction(0))

    def a_matrix(self) -> np.ndarray:
        A = np.zeros((self.N, self.N), dtype=complex)
        for i, x in enumerate(self.a_eigenvalues):
            A[i, i] = float(x)
        return A

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "a_eigenvalues": [str(Fraction(x)) for x in self.a_eigenvalues],
            "b_spectrum": self.b_spectrum
            if isinstance(self.b_spectrum, str)
            else [str(x) for x in self.b_eigenvalues],
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class EstimatorResult:
    poly: str
    n: int | str
    empirical_mean: float
    stderr: float
    theory: float
    imag_residue: float = 0.0

    @property
    def zscore(self) -> float:
        diff = self.empirical_mean - self.theory
        if self.stderr == 0:
            return 0.0 if diff == 0 else float("inf") * np.sign(diff)
        return diff / self.stderr

    def within(self, budget: float, k: float = 3.0) -> bool:
        return abs(self.empirical_mean - self.theory) <= k * self.stderr + budget

    def to_json(self) -> dict:
        return {
            "poly": self.poly,
            "n": self.n,
            "empirical_mean": self.empirical_mean,
            "stderr": self.stderr,
            "theory": self.theory,
            "zscore": self.zscore,
            "imag_residue": self.imag_residue,
        }


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for sample ``index``, fixed by (seed, index) alone."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_haar_unitary(N: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Ginibre matrix.

    Column k of Q is multiplied by the phase of R_kk so that the triangular
    factor has positive diagonal, which makes Q exactly Haar distributed.
    """
    if N < 1:
        raise ValueError("N must be positive")
    Z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _conjugated_b(spec: EnsembleSpec, rng) -> np.ndarray:
    U = sample_haar_unitary(spec.N, rng)
    b = np.array([float(x) for x in spec.b_eigenvalues])
    return (U * b) @ U.conj().T


def _run_samples(fn, spec: EnsembleSpec, workers: int) -> np.ndarray:
    """Stack fn(rng_i) over samples in index order, whatever the thread count."""

    def one(i):
        return fn(sample_rng(spec.seed, i))

    if workers <= 1:
        rows = [one(i) for i in range(spec.samples)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(spec.samples)))
    return np.stack(rows)


def _trace_powers(M: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    out = np.empty(len(orders), dtype=complex)
    P = np.eye(M.shape[0], dtype=complex)
    power = 0
    for k, n in enumerate(sorted(orders)):
        while power < n:
            P = P @ M
            power += 1
        out[k] = np.trace(P)
    order_index = {n: i for i, n in enumerate(sorted(orders))}
    return np.array([out[order_index[n]] for n in orders])


def _summarize(poly: str, orders, values: np.ndarray, theory: Sequence) -> list:
    real, imag = values.real, values.imag
    samples = values.shape[0]
    results = []
    for k, n in enumerate(orders):
        results.append(
            EstimatorResult(
                poly=poly,
                n=n,
                empirical_mean=float(real[:, k].mean()),
                stderr=float(real[:, k].std(ddof=1) / np.sqrt(samples)),
                theory=float(theory[k]),
                imag_residue=float(np.abs(imag[:, k]).max()),
            )
        )
    return results


def _check_orders(orders):
    orders = list(orders)
    if not orders or min(orders) < 1 or max(orders) > MAX_ORDER:
        raise ValueError(f"orders must lie in 1..{MAX_ORDER}")
    return orders


def _check_health(results, scale: float):
    worst = max(r.imag_residue for r in results)
    if worst > IMAG_TOLERANCE * max(1.0, scale):
        raise NumericalHealthError(f"imaginary residue {worst:.3e} in Hermitian traces")


def estimate_inf_moments(
    spec: EnsembleSpec, poly: str, orders: Sequence[int] = (1, 2, 3, 4), workers: int = 1
) -> list:
    """Estimate E Tr(M^n) for M = i(A B' - B' A) ("comm") or A B' + B' A ("anticomm").

    Here B' = U B U^*; Tr(M^n) estimates m'_n because tr(M^n) -> 0.
    """
    orders = _check_orders(orders)
    A = spec.a_matrix()
    if poly == "comm":
        build = lambda Bc: 1j * (A @ Bc - Bc @ A)  # noqa: E731
        law = commutator_inf_law
    elif poly == "anticomm":
        build = lambda Bc: A @ Bc + Bc @ A  # noqa: E731
        law = anticommutator_inf_law
    else:
        raise ValueError(f"poly must be 'comm' or 'anticomm', got {poly!r}")

    def sample(rng):
        return _trace_powers(build(_conjugated_b(spec, rng)), orders)

    values = _run_samples(sample, spec, workers)
    top = max(orders)
    inp = FreePolyInput(
        spec.b_tr_moment(1), spec.b_tr_moment(2), tuple(spec.a_tr_moment_total(k) for k in range(1, top + 1))
    )
    exact = law(inp, top)
    results = _summarize(poly, orders, values, [exact[n - 1] for n in orders])
    _check_health(results, float(np.abs(values.real).max()))
    return results


@dataclass(frozen=True)
class BridgeWord:
    """j^(eps_1) a^(k_1) ... j^(eps_n) a^(k_n) j with a = U B U^*."""

    eps: tuple
    powers: tuple
    label: str = field(default="")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        parts = []
        for e, k in zip(self.eps, self.powers):
            parts.append("j" if e == -1 else "jp")
            parts.append("a" if k == 1 else f"a^{k}")
        return " ".join(parts + ["j"])


def bridge_word(eps: Sequence[int], powers: Sequence[int], label: str = "") -> BridgeWord:
    if len(eps) != len(powers) or not eps:
        raise ValueError("eps and powers must be nonempty and of equal length")
    return BridgeWord(tuple(eps), tuple(powers), label)


def estimate_boolean_bridge(spec: EnsembleSpec, words: Sequence[BridgeWord], workers: int = 1) -> list:
    """Estimate psi(word) = E Tr(word j) with j the rank-one projection onto e_1.

    The theory value comes from the closed form with phi'(j) = 1 and a's
    tr-moments; the deterministic spectrum has no 1/N correction, so phi' of
    B-words is 0.
    """
    if tuple(Fraction(x) for x in spec.a_eigenvalues) != (Fraction(1),):
        raise ValueError("the bridge needs j to be a rank-one projection (a_eigenvalues = (1,))")
    top = max(sum(w.powers) for w in words)
    if top > MAX_ORDER:
        raise ValueError(f"total power {top} exceeds {MAX_ORDER}")
    N = spec.N

    def sample(rng):
        a = _conjugated_b(spec, rng)
        powers = {1: a}
        out = np.empty(len(words), dtype=complex)
        for idx, w in enumerate(words):
            # apply the word right-to-left to e_1 (the trailing j is the projection onto e_1)
            v = np.zeros(N, dtype=complex)
            v[0] = 1.0
            for e, k in reversed(list(zip(w.eps, w.powers))):
                if k not in powers:
                    powers[k] = np.linalg.matrix_power(a, k)
                v = powers[k] @ v
                if e == -1:
                    v = np.concatenate(([v[0]], np.zeros(N - 1, dtype=complex)))
                else:
                    v = v.copy()
                    v[0] = 0.0
            out[idx] = v[0]
        return out

    values = _run_samples(sample, spec, workers)
    moments = [spec.b_tr_moment(k) for k in range(1, MAX_ORDER + 1)]
    model = IdempotentModel.free_variables(1, {"a": (moments, [0] * MAX_ORDER)})
    theory = [
        closed_form_inf_moment(w.eps, [("a",) * k for k in w.powers], model, trailing_j=True) for w in words
    ]
    return _summarize("bridge", [w.name for w in words], values, theory)
