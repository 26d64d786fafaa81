"""Exact integer arithmetic on truncated Dirichlet coefficient sequences.

Sequences are 1-indexed to match the usual notation ``a_1, a_2, ...``.
Nothing in this module touches floating point.
"""

from __future__ import annotations

from itertools import accumulate
from numbers import Integral
from typing import Iterable, Iterator

import numpy as np

from .errors import InputError

__all__ = [
    "CoefficientSequence",
    "DnkTable",
    "dirichlet_convolve",
    "dirichlet_inverse",
    "mobius_sieve",
    "mertens_table",
    "d_table",
]


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, Integral):
        raise InputError(f"expected an exact integer, got {x!r}")
    return int(x)


class CoefficientSequence:
    """Exact coefficients a_1..a_N of a formal Dirichlet series.

    ``seq[k]`` returns a_k for 1 <= k <= N.  Slices are not supported;
    use :meth:`values` for the raw tuple.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[int]):
        vals = tuple(_as_int(v) for v in values)
        if not vals:
            raise InputError("coefficient sequence must have length >= 1")
        self._values = vals

    @classmethod
    def unit(cls, length: int) -> "CoefficientSequence":
        return cls([1] * length)

    @classmethod
    def identity(cls, length: int) -> "CoefficientSequence":
        return cls([1] + [0] * (length - 1))

    @property
    def values(self) -> tuple[int, ...]:
        return self._values

    @property
    def normalized(self) -> bool:
        return self._values[0] == 1

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= len(self._values):
            raise IndexError(f"index {k} outside 1..{len(self._values)}")
        return self._values[k - 1]

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)

    def __eq__(self, other) -> bool:
        if isinstance(other, CoefficientSequence):
            return self._values == other._values
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._values)

    def __repr__(self) -> str:
        head = ", ".join(map(str, self._values[:8]))
        tail = ", ..." if len(self._values) > 8 else ""
        return f"CoefficientSequence([{head}{tail}], N={len(self._values)})"

    def truncate(self, length: int) -> "CoefficientSequence":
        if length > len(self._values):
            raise InputError(f"cannot truncate length {len(self._values)} sequence to {length}")
        return CoefficientSequence(self._values[:length])

    def is_unit(self) -> bool:
        return all(v == 1 for v in self._values)


def _require_normalized(a: CoefficientSequence) -> None:
    if not a.normalized:
        raise InputError(f"a_1 must equal 1, got {a[1]}")


def dirichlet_convolve(a: CoefficientSequence, b: CoefficientSequence, N: int) -> CoefficientSequence:
    """Return (a*b)_n = sum over d | n of a_d b_{n/d}, for n <= N."""
    if N < 1:
        raise InputError("N must be positive")
    if len(a) < N or len(b) < N:
        raise InputError(f"inputs have lengths {len(a)}, {len(b)}; need >= {N}")
    av, bv = a.values, b.values
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        ad = av[d - 1]
        if not ad:
            continue
        for e in range(1, N // d + 1):
            be = bv[e - 1]
            if be:
                out[d * e] += ad * be
    return CoefficientSequence(out[1:])


def dirichlet_inverse(a: CoefficientSequence) -> CoefficientSequence:
    """Formal inverse b of a, truncated to the same length.

    Uses b_n = -sum_{d | n, d > 1} a_d b_{n/d}, pushed forward to
    multiples so that each finished b_n is spread once.
    """
    _require_normalized(a)
    N = len(a)
    av = a.values
    nonzero = [(d, av[d - 1]) for d in range(2, N + 1) if av[d - 1]]
    acc = [0] * (N + 1)
    b = [0] * (N + 1)
    b[1] = 1
    for n in range(1, N + 1):
        bn = 1 if n == 1 else -acc[n]
        b[n] = bn
        if not bn:
            continue
        lim = N // n
        for d, ad in nonzero:
            if d > lim:
                break
            acc[n * d] += ad * bn
    return CoefficientSequence(b[1:])


def mobius_sieve(N: int) -> CoefficientSequence:
    """Mobius function mu(1..N) as a coefficient sequence."""
    if N < 1:
        raise InputError("N must be positive")
    mu = np.ones(N + 1, dtype=np.int8)
    composite = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return CoefficientSequence(mu[1:].tolist())


def mertens_table(N: int) -> list[int]:
    """M(0..N) where M(n) = sum_{k<=n} mu(k); index 0 holds 0."""
    return [0] + list(accumulate(mobius_sieve(N).values))


class DnkTable:
    """Exact d(n,k) for 1 <= n <= N, 0 <= k <= Kmax.

    d(n,k) is the n-th coefficient of (L(s) - 1)^k.  Access as
    ``table[n, k]``; ``table.row(k)`` gives d(0..N, k) with a padding 0
    at index 0.
    """

    __slots__ = ("N", "Kmax", "_levels")

    def __init__(self, N: int, Kmax: int, levels: list[list[int]]):
        self.N = N
        self.Kmax = Kmax
        self._levels = levels

    def __getitem__(self, key: tuple[int, int]) -> int:
        n, k = key
        if not 1 <= n <= self.N:
            raise IndexError(f"n={n} outside 1..{self.N}")
        if k < 0:
            raise IndexError("k must be non-negative")
        if k > self.Kmax:
            if n < (1 << k):
                return 0
            raise IndexError(f"k={k} beyond computed Kmax={self.Kmax}")
        return self._levels[k][n]

    def row(self, k: int) -> list[int]:
        if k > self.Kmax:
            return [0] * (self.N + 1)
        return self._levels[k]


def d_table(a: CoefficientSequence, N: int, Kmax: int) -> DnkTable:
    """Tabulate d(n,k) via d(n,k) = sum_{i | n, i > 1} a_i d(n/i, k-1)."""
    _require_normalized(a)
    if N < 1:
        raise InputError("N must be positive")
    if Kmax < 0:
        raise InputError("Kmax must be non-negative")
    if len(a) < N:
        raise InputError(f"coefficient sequence has length {len(a)}; need >= {N}")
    a_obj = np.empty(N + 1, dtype=object)
    a_obj[0] = 0
    a_obj[1:] = [int(x) for x in a.values[:N]]
    a_obj[1] = 0  # only factors i > 1 enter

    levels: list[list[int]] = []
    prev = [0] * (N + 1)
    prev[1] = 1
    levels.append(prev)
    for k in range(1, Kmax + 1):
        cur = np.zeros(N + 1, dtype=object)
        lo = 1 << (k - 1)
        if (1 << k) <= N:
            for j in range(lo, N // 2 + 1):
                dj = prev[j]
                if dj:
                    # multiples i*j for i = 2..N//j
                    cur[2 * j :: j] += a_obj[2 : N // j + 1] * dj
        prev = cur.tolist()
        levels.append(prev)
    return DnkTable(N, Kmax, levels)
