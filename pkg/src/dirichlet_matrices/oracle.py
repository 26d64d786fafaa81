"""Brute-force exact references used to validate the formula-based paths."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import mpmath

from .errors import CapExceededError, InputError
from .matrices import DenseMatrix

CHARPOLY_CAP = 512

__all__ = [
    "IntegerPolynomial",
    "det_exact",
    "charpoly_exact",
    "eig_residual",
    "interpolation_nodes",
    "CHARPOLY_CAP",
]


class IntegerPolynomial:
    """Polynomial with exact integer coefficients c_0..c_d (lowest first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c) if c else (0,)

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, IntegerPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntegerPolynomial({list(self.coeffs)})"

    def divide_linear(self, root: int) -> tuple["IntegerPolynomial", int]:
        """Synthetic division by (x - root); returns (quotient, remainder)."""
        out = []
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop()
        return IntegerPolynomial(reversed(out)), rem

    def root_multiplicity(self, root: int) -> int:
        if self.degree < 0:
            raise InputError("zero polynomial has every root")
        p, m = self, 0
        while p.degree > 0:
            q, rem = p.divide_linear(root)
            if rem:
                break
            p, m = q, m + 1
        return m


def _require_exact(M: DenseMatrix) -> None:
    if M.mode != "exact":
        raise InputError("exact-mode matrix required")


def det_exact(M: DenseMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    _require_exact(M)
    return _bareiss([list(r) for r in M.rows])


def _bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = rows[k]
        p = rk[k]
        tail_k = rk[k + 1 :]
        for i in range(k + 1, n):
            ri = rows[i]
            f = ri[k]
            if f:
                ri[k + 1 :] = [(p * x - f * y) // prev for x, y in zip(ri[k + 1 :], tail_k)]
                ri[k] = 0
            elif p != prev:
                ri[k + 1 :] = [(p * x) // prev for x in ri[k + 1 :]]
        prev = p
    return sign * rows[n - 1][n - 1]


def interpolation_nodes(count: int) -> list[int]:
    """0, 1, -1, 2, -2, ... (``count`` nodes)."""
    nodes = [0]
    j = 1
    while len(nodes) < count:
        nodes.append(j)
        if len(nodes) < count:
            nodes.append(-j)
        j += 1
    return nodes[:count]


def charpoly_exact(M: DenseMatrix) -> IntegerPolynomial:
    """det(xI - M) by exact interpolation through n+1 determinant values."""
    _require_exact(M)
    n = M.n
    if n > CHARPOLY_CAP:
        raise CapExceededError(f"charpoly_exact is capped at n={CHARPOLY_CAP}; got n={n}")
    nodes = interpolation_nodes(n + 1)
    values = []
    for x in nodes:
        shifted = [[(x if i == j else 0) - m for j, m in enumerate(row)] for i, row in enumerate(M.rows)]
        values.append(_bareiss(shifted))
    return IntegerPolynomial(_interpolate(nodes, values))


def _interpolate(nodes: Sequence[int], values: Sequence[int]) -> list[int]:
    # Newton divided differences, then expand to the monomial basis.
    m = len(nodes)
    dd = [Fraction(v) for v in values]
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level])
    poly = [dd[m - 1]]
    for i in range(m - 2, -1, -1):
        # poly <- poly * (x - nodes[i]) + dd[i]
        shifted = [Fraction(0)] + poly
        for j, c in enumerate(poly):
            shifted[j] -= nodes[i] * c
        shifted[0] += dd[i]
        poly = shifted
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolated coefficient is not an integer")
        out.append(c.numerator)
    return out


def _as_complex_vector(vec: Sequence) -> list[complex]:
    mp_vals = [mpmath.mpmathify(x) for x in vec]
    scale = max(abs(x) for x in mp_vals)
    if scale == 0:
        raise InputError("eigenvector must be nonzero")
    return [complex(x / scale) for x in mp_vals]


def eig_residual(
    M: DenseMatrix,
    lam,
    vec: Sequence,
    side: Literal["right", "left"] = "right",
) -> float:
    """||M v - lam v|| / ||v|| in double precision (M^T for ``side="left"``)."""
    if len(vec) != M.n:
        raise InputError(f"vector length {len(vec)} does not match n={M.n}")
    if side not in ("right", "left"):
        raise InputError(f"unknown side {side!r}")
    v = _as_complex_vector(vec)
    lam_c = complex(lam)
    rows = M.rows if side == "right" else tuple(zip(*M.rows))
    sq = []
    for i, row in enumerate(rows):
        terms = [x * v[j] for j, x in enumerate(row) if x]
        terms.append(-lam_c * v[i])
        re = math.fsum(t.real for t in terms)
        im = math.fsum(t.imag for t in terms)
        sq.append(re * re + im * im)
    num = math.sqrt(math.fsum(sq))
    den = math.sqrt(math.fsum(abs(x) ** 2 for x in v))
    return num / den
