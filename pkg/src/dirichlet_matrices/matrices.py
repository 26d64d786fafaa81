"""Dense constructions of E_n(k), D_n, W_n and A_n = W_n + D_n.

Matrices are small (oracle and eigenvector checks only) and stored as
row tuples.  Two scalar modes exist and are never mixed: ``"exact"``
holds Python ints, ``"complex"`` holds Python complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral, Number
from typing import Iterable, Literal, Sequence

from .dirichlet import CoefficientSequence, dirichlet_inverse
from .errors import InputError

Mode = Literal["exact", "complex"]

__all__ = [
    "WeightVector",
    "DenseMatrix",
    "build_E",
    "build_D",
    "build_W",
    "build_A",
    "matrix_product",
    "identity",
]


class WeightVector:
    """Weights w_1..w_n with w_1 = 1, 1-indexed like CoefficientSequence."""

    __slots__ = ("_values", "mode")

    def __init__(self, values: Iterable, mode: Mode = "exact"):
        if mode == "exact":
            vals = []
            for v in values:
                if isinstance(v, bool) or not isinstance(v, Integral):
                    raise InputError(f"exact weights must be integers, got {v!r}")
                vals.append(int(v))
        elif mode == "complex":
            vals = [complex(v) for v in values]
        else:
            raise InputError(f"unknown scalar mode {mode!r}")
        if not vals:
            raise InputError("weight vector must have length >= 1")
        if vals[0] != 1:
            raise InputError(f"w_1 must equal 1, got {vals[0]!r}")
        self._values = tuple(vals)
        self.mode: Mode = mode

    @classmethod
    def unit(cls, length: int) -> "WeightVector":
        return cls([1] * length)

    @classmethod
    def dirichlet(cls, length: int, s: complex) -> "WeightVector":
        """w_k = k^{-s}; w_1 = 1 holds automatically."""
        s = complex(s)
        return cls([1.0] + [k ** (-s) for k in range(2, length + 1)], mode="complex")

    @property
    def values(self) -> tuple:
        return self._values

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, k: int):
        if not 1 <= k <= len(self._values):
            raise IndexError(f"index {k} outside 1..{len(self._values)}")
        return self._values[k - 1]

    def __iter__(self):
        return iter(self._values)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightVector):
            return self.mode == other.mode and self._values == other._values
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.mode, self._values))

    def is_unit(self) -> bool:
        return all(v == 1 for v in self._values)


@dataclass(frozen=True)
class DenseMatrix:
    rows: tuple[tuple, ...]
    mode: Mode = "exact"

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise InputError("matrix must be square")
        if self.mode == "complex":
            for r in self.rows:
                for x in r:
                    if x != x or abs(x) == float("inf"):
                        raise InputError("complex-mode entries must be finite")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]):
        """1-based (i, j) entry."""
        i, j = ij
        return self.rows[i - 1][j - 1]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(tuple(zip(*self.rows)), self.mode)

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        _check_compatible(self, other)
        rows = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return DenseMatrix(rows, self.mode)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return matrix_product(self, other)


def _check_compatible(left: DenseMatrix, right: DenseMatrix) -> None:
    if left.mode != right.mode:
        raise InputError(f"scalar mode mismatch: {left.mode} vs {right.mode}")
    if left.n != right.n:
        raise InputError(f"dimension mismatch: {left.n} vs {right.n}")


def _zero(mode: Mode):
    return 0 if mode == "exact" else 0j


def _from_dict(n: int, entries: dict[tuple[int, int], Number], mode: Mode) -> DenseMatrix:
    z = _zero(mode)
    conv = int if mode == "exact" else complex
    rows = [[z] * n for _ in range(n)]
    for (i, j), x in entries.items():
        rows[i - 1][j - 1] = conv(x)
    return DenseMatrix(tuple(tuple(r) for r in rows), mode)


def identity(n: int, mode: Mode = "exact") -> DenseMatrix:
    return build_E(n, 1, mode)


def build_E(n: int, k: int, mode: Mode = "exact") -> DenseMatrix:
    """E_n(k): ones at (i, k*i), zero elsewhere (zero matrix when k > n)."""
    if n < 1 or k < 1:
        raise InputError("need n >= 1 and k >= 1")
    return _from_dict(n, {(i, k * i): 1 for i in range(1, n // k + 1)}, mode)


def build_D(a: CoefficientSequence, n: int, mode: Mode = "exact") -> DenseMatrix:
    """D_n = sum_k a_k E_n(k); entry (i, j) is a_{j/i} when i divides j."""
    if len(a) < n:
        raise InputError(f"coefficient sequence has length {len(a)}; need >= {n}")
    entries = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1, i):
            entries[i, j] = a[j // i]
    return _from_dict(n, entries, mode)


def build_W(w: WeightVector, n: int) -> DenseMatrix:
    """First column (0, w_2, ..., w_n)^T, zeros elsewhere."""
    if len(w) < n:
        raise InputError(f"weight vector has length {len(w)}; need >= {n}")
    return _from_dict(n, {(i, 1): w[i] for i in range(2, n + 1)}, w.mode)


def build_A(
    a: CoefficientSequence,
    w: WeightVector,
    n: int,
    variant: Literal["A", "Atilde"] = "A",
) -> DenseMatrix:
    """A_n = W_n + D_n, or the tilde variant W_n + D_n^{-1}.

    B_n and C_n are obtained by passing unit sequences.  The scalar mode
    follows the weight vector.
    """
    if len(a) < n:
        raise InputError(f"coefficient sequence has length {len(a)}; need >= {n}")
    if variant == "A":
        coeffs = a.truncate(n)
    elif variant == "Atilde":
        coeffs = dirichlet_inverse(a.truncate(n))
    else:
        raise InputError(f"unknown variant {variant!r}")
    return build_W(w, n) + build_D(coeffs, n, w.mode)


def matrix_product(left: DenseMatrix, right: DenseMatrix) -> DenseMatrix:
    _check_compatible(left, right)
    z = _zero(left.mode)
    cols = list(zip(*right.rows))
    rows = []
    for r in left.rows:
        nz = [(j, x) for j, x in enumerate(r) if x]
        rows.append(tuple(sum((x * col[j] for j, x in nz), z) for col in cols))
    return DenseMatrix(tuple(rows), left.mode)
