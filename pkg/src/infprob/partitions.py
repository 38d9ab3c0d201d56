"""Set partitions of [n] = {1, ..., n} and the lattices NC(n), I(n), CI(n).

Partitions are immutable and stored canonically: blocks ascending, ordered by
their minimum.  Enumeration walks restricted growth strings depth first, so
each class comes out in lexicographic RGS order.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "LatticeCaps",
    "OrderError",
    "Partition",
    "PartitionClass",
    "SizeLimitError",
    "caps",
    "count_partitions",
    "enumerate_partitions",
    "is_cyclic_interval",
    "is_interval",
    "is_noncrossing",
    "iter_partitions",
    "join",
    "kernel",
    "leq",
    "mobius_interval",
    "mobius_nc",
    "noncrossing_below",
    "sigma_from_epsilon",
]


class SizeLimitError(ValueError):
    """Raised when an enumeration would exceed a configured cap."""


class DimensionError(ValueError):
    """Raised when partitions of different ground sets are combined."""


class OrderError(ValueError):
    """Raised when a Möbius value is requested for incomparable partitions."""


class PartitionClass(enum.Enum):
    ALL = "all"
    NONCROSSING = "nc"
    INTERVAL = "interval"
    CYCLIC_INTERVAL = "cyclic"

    @classmethod
    def parse(cls, text: str) -> "PartitionClass":
        aliases = {
            "all": cls.ALL,
            "nc": cls.NONCROSSING,
            "noncrossing": cls.NONCROSSING,
            "interval": cls.INTERVAL,
            "i": cls.INTERVAL,
            "cyclic": cls.CYCLIC_INTERVAL,
            "ci": cls.CYCLIC_INTERVAL,
            "cyclic_interval": cls.CYCLIC_INTERVAL,
        }
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown partition class {text!r}") from None


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


@dataclass
class LatticeCaps:
    """Largest n for which each class may be materialized.

    Defaults can be overridden through INFPROB_CAP_NC, INFPROB_CAP_ALL,
    INFPROB_CAP_INTERVAL and INFPROB_CAP_CYCLIC.
    """

    noncrossing: int = field(default_factory=lambda: _env_int("INFPROB_CAP_NC", 16))
    all: int = field(default_factory=lambda: _env_int("INFPROB_CAP_ALL", 12))
    interval: int = field(default_factory=lambda: _env_int("INFPROB_CAP_INTERVAL", 16))
    cyclic: int = field(default_factory=lambda: _env_int("INFPROB_CAP_CYCLIC", 16))
    boolean_order: int = 24

    def for_class(self, cls: PartitionClass) -> int:
        return {
            PartitionClass.ALL: self.all,
            PartitionClass.NONCROSSING: self.noncrossing,
            PartitionClass.INTERVAL: self.interval,
            PartitionClass.CYCLIC_INTERVAL: self.cyclic,
        }[cls]

    def check(self, n: int, cls: PartitionClass) -> None:
        cap = self.for_class(cls)
        if n > cap:
            raise SizeLimitError(f"n = {n} exceeds the {cls.name} cap of {cap}")


caps = LatticeCaps()


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = []
        for b in blocks:
            if not b or list(b) != sorted(b):
                raise ValueError(f"blocks must be nonempty and ascending: {blocks}")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {blocks} do not partition [1..{self.n}]")
        if [b[0] for b in blocks] != sorted(b[0] for b in blocks):
            raise ValueError(f"blocks must be ordered by minimum: {blocks}")

    @classmethod
    def from_blocks(cls, blocks, n: int | None = None) -> "Partition":
        blocks = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
        if n is None:
            n = sum(len(b) for b in blocks)
        return cls(n, tuple(blocks))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict = {}
        for i, lab in enumerate(labels, start=1):
            groups.setdefault(lab, []).append(i)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def one(cls, n: int) -> "Partition":
        return cls(n, (tuple(range(1, n + 1)),))

    @classmethod
    def zero(cls, n: int) -> "Partition":
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @property
    def labels(self) -> tuple:
        """Restricted growth string: labels[i-1] is the block index of i."""
        lab = [0] * self.n
        for k, b in enumerate(self.blocks):
            for i in b:
                lab[i - 1] = k
        return tuple(lab)

    def block_of(self, i: int) -> tuple:
        for b in self.blocks:
            if i in b:
                return b
        raise IndexError(i)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]

    def __str__(self):
        return "{" + ",".join("(" + ",".join(map(str, b)) + ")" for b in self.blocks) + "}"


def is_noncrossing(pi: Partition) -> bool:
    lab = pi.labels
    # a block b may only reopen after a later-started block has closed
    last = {}
    for i, b in enumerate(lab):
        last[b] = i
    first = {}
    for i, b in enumerate(lab):
        first.setdefault(b, i)
    stack = []
    for i, b in enumerate(lab):
        if first[b] == i:
            stack.append(b)
        elif stack[-1] != b:
            return False
        if last[b] == i:
            if stack[-1] != b:
                return False
            stack.pop()
    return True


def is_interval(pi: Partition) -> bool:
    return all(b[-1] - b[0] + 1 == len(b) for b in pi.blocks)


def is_cyclic_interval(pi: Partition) -> bool:
    if is_interval(pi):
        return True
    # at most one block wraps around n -> 1; it must be {1..r} u {s..n}
    wrapping = [b for b in pi.blocks if b[-1] - b[0] + 1 != len(b)]
    if len(wrapping) != 1:
        return False
    b = wrapping[0]
    if b[0] != 1 or b[-1] != pi.n:
        return False
    gaps = [y - x for x, y in zip(b, b[1:])]
    return sum(g > 1 for g in gaps) == 1


def kernel(labels: Sequence) -> Partition:
    if len(labels) == 0:
        raise ValueError("kernel of an empty tuple")
    return Partition.from_labels(labels)


def _check_same_n(a: Partition, b: Partition) -> None:
    if a.n != b.n:
        raise DimensionError(f"partitions of [{a.n}] and [{b.n}] cannot be compared")


def join(a: Partition, b: Partition) -> Partition:
    _check_same_n(a, b)
    parent = list(range(a.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pi in (a, b):
        for block in pi.blocks:
            root = find(block[0])
            for i in block[1:]:
                parent[find(i)] = root
    return Partition.from_labels([find(i) for i in range(1, a.n + 1)])


def leq(sigma: Partition, pi: Partition) -> bool:
    """True iff sigma refines pi."""
    _check_same_n(sigma, pi)
    lab = pi.labels
    return all(len({lab[i - 1] for i in b}) == 1 for b in sigma.blocks)


def _rgs_walk(n: int, cls: PartitionClass, allowed=None) -> Iterator[tuple]:
    """Yield restricted growth strings of the class, depth first.

    ``allowed(i, block_first)`` optionally forbids placing element i (0-based)
    into the block started at ``block_first`` (used for pi <= kernel).
    """
    if n == 0:
        return
    if cls is PartitionClass.INTERVAL:
        for mask in range(1 << (n - 1)):
            lab, k = [0], 0
            # bit (i-1) set means a new block starts at i, listed lexicographically
            for i in range(1, n):
                if mask >> (n - 1 - i) & 1:
                    k += 1
                lab.append(k)
            if allowed is None or _respects(lab, allowed):
                yield tuple(lab)
        return
    if cls is PartitionClass.CYCLIC_INTERVAL:
        out = []
        for starts_mask in range(1 << n):
            starts = [i for i in range(n) if starts_mask >> i & 1]
            if len(starts) == 1:
                continue
            if not starts:
                lab = [0] * n
            else:
                lab = [0] * n
                for k, s in enumerate(starts):
                    end = starts[k + 1] if k + 1 < len(starts) else n + starts[0]
                    for i in range(s, end):
                        lab[i % n] = s
            lab = _canonical_labels(lab)
            if allowed is None or _respects(lab, allowed):
                out.append(lab)
        yield from sorted(out)
        return

    noncrossing = cls is PartitionClass.NONCROSSING
    lab = [0] * n
    first: list = []
    last: list = []

    def rec(i):
        if i == n:
            yield tuple(lab)
            return
        for b in range(len(first) + 1):
            if b < len(first):
                if allowed is not None and not allowed(i, first[b]):
                    continue
                if noncrossing:
                    # reopening b crosses any block c with first[c] < last[b] < last[c]
                    lb = last[b]
                    if any(first[c] < lb < last[c] for c in range(len(first))):
                        continue
                lab[i] = b
                old = last[b]
                last[b] = i
                yield from rec(i + 1)
                last[b] = old
            else:
                if allowed is not None and not allowed(i, i):
                    continue
                lab[i] = b
                first.append(i)
                last.append(i)
                yield from rec(i + 1)
                first.pop()
                last.pop()

    yield from rec(0)


def _respects(lab, allowed) -> bool:
    first = {}
    for i, b in enumerate(lab):
        f = first.setdefault(b, i)
        if not allowed(i, f):
            return False
    return True


def _canonical_labels(lab) -> tuple:
    remap: dict = {}
    return tuple(remap.setdefault(x, len(remap)) for x in lab)


def iter_partitions(n: int, cls: PartitionClass = PartitionClass.NONCROSSING) -> Iterator[Partition]:
    """Lazy enumeration without caps; memory stays O(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    for lab in _rgs_walk(n, cls):
        yield Partition.from_labels(lab)


@lru_cache(maxsize=64)
def _enumerate_cached(n: int, cls: PartitionClass) -> tuple:
    return tuple(Partition.from_labels(lab) for lab in _rgs_walk(n, cls))


def enumerate_partitions(n: int, cls: PartitionClass = PartitionClass.NONCROSSING) -> list:
    """Every partition of [n] in the class, once each, in lexicographic RGS order."""
    if n < 1:
        raise ValueError("n must be positive")
    caps.check(n, cls)
    return list(_enumerate_cached(n, cls))


def count_partitions(n: int, cls: PartitionClass = PartitionClass.NONCROSSING) -> int:
    """Count by walking restricted growth strings, without building Partition objects."""
    if n < 1:
        raise ValueError("n must be positive")
    caps.check(n, cls)
    return sum(1 for _ in _rgs_walk(n, cls))


def noncrossing_below(labels: Sequence) -> list:
    """Non-crossing partitions pi with pi <= ker(labels), as RGS tuples."""
    n = len(labels)
    caps.check(n, PartitionClass.NONCROSSING)
    return _noncrossing_below_cached(tuple(labels))


@lru_cache(maxsize=4096)
def _noncrossing_below_cached(labels: tuple) -> list:
    allowed = lambda i, f: labels[i] == labels[f]
    return list(_rgs_walk(len(labels), PartitionClass.NONCROSSING, allowed))


def sigma_from_epsilon(eps: Sequence[int]) -> Partition:
    """Each position with entry -1 starts a block; with eps[0] = +1 the last block wraps."""
    eps = list(eps)
    if not eps or any(e not in (-1, 1) for e in eps):
        raise ValueError(f"not an epsilon string: {eps}")
    n = len(eps)
    starts = [i for i, e in enumerate(eps) if e == -1]
    if len(starts) <= 1:
        return Partition.one(n)
    lab = [0] * n
    for k, s in enumerate(starts):
        end = starts[k + 1] if k + 1 < len(starts) else n + starts[0]
        for i in range(s, end):
            lab[i % n] = k
    return Partition.from_labels(lab)


def mobius_interval(sigma: Partition, tau: Partition) -> int:
    if not (is_interval(sigma) and is_interval(tau)):
        raise ValueError("mobius_interval needs interval partitions")
    if not leq(sigma, tau):
        raise OrderError(f"{sigma} is not below {tau}")
    return (-1) ** (len(sigma) - len(tau))


class _NCLattice:
    """NC(n) with vectorized refinement tests and memoized Möbius rows."""

    def __init__(self, n: int):
        self.n = n
        self.elements = enumerate_partitions(n, PartitionClass.NONCROSSING)
        self.index = {p: k for k, p in enumerate(self.elements)}
        self.labels = np.array([p.labels for p in self.elements], dtype=np.int16)
        self.sizes = np.array([len(p) for p in self.elements])
        # prev[r, i]: previous element of i's block in partition r (or i itself)
        prev = np.tile(np.arange(n), (len(self.elements), 1))
        for r, p in enumerate(self.elements):
            for block in p.blocks:
                for x, y in zip(block, block[1:]):
                    prev[r, y - 1] = x - 1
        self.prev = prev
        self._rows: dict = {}

    def down_set(self, t: int) -> np.ndarray:
        """Mask of all rho with rho <= elements[t]."""
        lab = self.labels[t]
        return (lab[self.prev] == lab[None, :]).all(axis=1)

    def row(self, k: int) -> np.ndarray:
        """mu(elements[k], tau) for every tau (zero where tau is not above)."""
        if k in self._rows:
            return self._rows[k]
        lab = self.labels
        up = np.ones(len(self.elements), dtype=bool)
        for block in self.elements[k].blocks:
            for i in block[1:]:
                up &= lab[:, i - 1] == lab[:, block[0] - 1]
        values = np.zeros(len(self.elements), dtype=object)
        order = sorted(np.flatnonzero(up), key=lambda t: -self.sizes[t])
        for t in order:
            if t == k:
                values[t] = 1
                continue
            below = self.down_set(t)
            below[t] = False
            values[t] = -sum(values[below])
        self._rows[k] = values
        return values


@lru_cache(maxsize=None)
def _nc_lattice(n: int) -> _NCLattice:
    return _NCLattice(n)


def mobius_nc(sigma: Partition, pi: Partition) -> int:
    _check_same_n(sigma, pi)
    if not (is_noncrossing(sigma) and is_noncrossing(pi)):
        raise ValueError("mobius_nc needs non-crossing partitions")
    if not leq(sigma, pi):
        raise OrderError(f"{sigma} is not below {pi}")
    lat = _nc_lattice(sigma.n)
    return int(lat.row(lat.index[sigma])[lat.index[pi]])
