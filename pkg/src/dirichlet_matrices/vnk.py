"""Computation of the characteristic-polynomial coefficients v(n,k).

Three routes are provided:

* :func:`vnk_naive` / :func:`vl_nk` evaluate the defining weighted sums
  over a d(n,k) table and work for arbitrary integer or complex weights.
* :func:`vnk_lattice` counts ordered k-tuples of integers >= 2 whose
  product is at most n (unit coefficients and weights only).
* :func:`vnk_fast` runs the hyperbola recursion over the set of distinct
  values of floor(n/i), which needs O(sqrt n) storage and O(n^{3/4}) work
  per level.  This is the route that reaches n in the 10^10 range.

The fast route has two backends that execute the same recursion.  The
``"python"`` backend is a literal loop over Python ints.  The
``"sparse"`` backend assembles the recursion for all m at once as a
sparse nonnegative integer operator and applies it once per level with
int64 arithmetic, falling back to exact object arithmetic whenever a
level could exceed the int64 range.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .dirichlet import CoefficientSequence, d_table
from .errors import CapExceededError, InputError
from .matrices import WeightVector

log = logging.getLogger(__name__)

NAIVE_CAP = 10**6
LATTICE_CAP = 5000
# The sparse backend needs exact float64 square roots of m and int64 room
# for (isqrt(m) + 1)^2.
SPARSE_MAX_N = 1 << 52
SPARSE_MIN_N = 20_000
INT64_SAFE = 1 << 62

__all__ = [
    "FloorValueSet",
    "VnkTable",
    "floor_value_set",
    "split_point",
    "vnk_naive",
    "v_table_naive",
    "vl_nk",
    "vnk_lattice",
    "vnk_lattice_table",
    "vnk_fast",
    "save_vnk_table",
    "load_vnk_table",
    "cached_vnk_fast",
    "cache_path",
]


# ---------------------------------------------------------------------------
# definitional route


def _weighted_sum(weights: Sequence, terms: Sequence[int], complex_mode: bool):
    if not complex_mode:
        return sum(w * t for w, t in zip(weights, terms) if t)
    prods = [w * t for w, t in zip(weights, terms) if t]
    return complex(math.fsum(p.real for p in prods), math.fsum(p.imag for p in prods))


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def v_table_naive(a: CoefficientSequence, w: WeightVector, N: int, Kmax: int) -> list[list]:
    """v(m,k) for all 1 <= m <= N, 0 <= k <= Kmax, as ``table[k][m]``.

    Entry ``[k][0]`` is a padding zero.  Exact for integer weights; complex
    weights are accumulated with compensated summation.
    """
    if N > NAIVE_CAP:
        raise CapExceededError(f"definitional v(n,k) is capped at n={NAIVE_CAP}; got n={N}")
    if len(w) < N:
        raise InputError(f"weight vector has length {len(w)}; need >= {N}")
    d = d_table(a, N, Kmax)
    complex_mode = w.mode == "complex"
    wv = w.values
    out = []
    for k in range(Kmax + 1):
        row = d.row(k)
        acc = 0j if complex_mode else 0
        col = [acc]
        if complex_mode:
            re_acc, im_acc = _Neumaier(), _Neumaier()
            for m in range(1, N + 1):
                t = row[m]
                if t:
                    p = wv[m - 1] * t
                    re_acc.add(p.real)
                    im_acc.add(p.imag)
                col.append(complex(re_acc.value, im_acc.value))
        else:
            for m in range(1, N + 1):
                t = row[m]
                if t:
                    acc += wv[m - 1] * t
                col.append(acc)
        out.append(col)
    return out


def vnk_naive(a: CoefficientSequence, w: WeightVector, n: int, k: int):
    """v(n,k) = sum_{j <= n} w(j) d(j,k), straight from the definition."""
    if n < 1 or k < 0:
        raise InputError("need n >= 1 and k >= 0")
    if n > NAIVE_CAP:
        raise CapExceededError(f"definitional v(n,k) is capped at n={NAIVE_CAP}; got n={n}")
    if len(w) < n:
        raise InputError(f"weight vector has length {len(w)}; need >= {n}")
    if k > n.bit_length() - 1:
        return 0j if w.mode == "complex" else 0
    d = d_table(a, n, k)
    return _weighted_sum(w.values[:n], d.row(k)[1:], w.mode == "complex")


def vl_nk(a: CoefficientSequence, w: WeightVector, ell: int, n: int, k: int):
    """v_ell(n,k) = sum_{j <= n} w(j * ell) d(j,k)."""
    if ell < 1 or n < 1 or k < 0:
        raise InputError("need ell >= 1, n >= 1 and k >= 0")
    if len(w) < n * ell:
        raise InputError(f"weight vector has length {len(w)}; need >= {n * ell}")
    if n > NAIVE_CAP:
        raise CapExceededError(f"definitional v(n,k) is capped at n={NAIVE_CAP}; got n={n}")
    if k > n.bit_length() - 1:
        return 0j if w.mode == "complex" else 0
    d = d_table(a, n, k)
    weights = [w[j * ell] for j in range(1, n + 1)]
    return _weighted_sum(weights, d.row(k)[1:], w.mode == "complex")


# ---------------------------------------------------------------------------
# lattice enumeration (unit case)


def vnk_lattice(n: int, k: int) -> int:
    """Number of ordered k-tuples of integers >= 2 with product <= n."""
    if n < 1 or k < 0:
        raise InputError("need n >= 1 and k >= 0")
    if n > LATTICE_CAP:
        raise CapExceededError(f"lattice enumeration is capped at n={LATTICE_CAP}; got n={n}")
    if k == 0:
        return 1

    def descend(limit: int, depth: int) -> int:
        if depth == 1:
            return max(limit - 1, 0)
        total = 0
        f = 2
        # the remaining depth-1 factors need at least 2^(depth-1) of room
        while f << (depth - 1) <= limit:
            total += descend(limit // f, depth - 1)
            f += 1
        return total

    return descend(n, k)


def vnk_lattice_table(N: int) -> list[list[int]]:
    """v(m,k) for every m <= N by enumerating all tuples once.

    Returns ``table[k][m]`` for 0 <= k <= floor(log2 N), 0 <= m <= N.
    """
    if N < 1:
        raise InputError("N must be positive")
    if N > LATTICE_CAP:
        raise CapExceededError(f"lattice enumeration is capped at n={LATTICE_CAP}; got n={N}")
    r = N.bit_length() - 1
    hist = [[0] * (N + 1) for _ in range(r + 1)]
    hist[0][1] = 1
    stack = [(1, 0)]
    while stack:
        prod, depth = stack.pop()
        f = 2
        while prod * f <= N:
            p = prod * f
            hist[depth + 1][p] += 1
            stack.append((p, depth + 1))
            f += 1
    table = []
    for row in hist:
        acc = 0
        col = []
        for c in row:
            acc += c
            col.append(acc)
        table.append(col)
    return table


# ---------------------------------------------------------------------------
# floor-value set


def split_point(n: int) -> int:
    """s = floor(n / (floor(sqrt n) + 1)); either floor(sqrt n) or one less."""
    if n < 1:
        raise InputError("n must be positive")
    r = isqrt(n)
    s = n // (r + 1)
    expected = r if n - r * r >= r else r - 1
    assert s == expected, (n, s, expected)
    return s


@dataclass(frozen=True)
class FloorValueSet:
    """Sorted distinct values of floor(n/i), i = 1..n.

    The set is {1, ..., R} together with {floor(n/i) : i <= s} where
    R = floor(sqrt n) and s is the split point; its size is R + s.
    """

    n: int
    root: int
    split: int
    values: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __contains__(self, m: int) -> bool:
        if not 1 <= m <= self.n:
            return False
        return m <= self.root or self.n // (self.n // m) == m

    def slot(self, m: int) -> int:
        """Position of m in :attr:`values`."""
        if m <= self.root:
            if m < 1:
                raise KeyError(m)
            return m - 1
        i = self.n // m
        if self.n // i != m:
            raise KeyError(m)
        return len(self.values) - i

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.values, dtype=np.int64, count=len(self.values))


def floor_value_set(n: int) -> FloorValueSet:
    if n < 1:
        raise InputError("n must be positive")
    r = isqrt(n)
    s = split_point(n)
    small = range(1, r + 1)
    large = (n // i for i in range(s, 0, -1))
    return FloorValueSet(n, r, s, tuple(small) + tuple(large))


# ---------------------------------------------------------------------------
# fast route


class VnkTable:
    """v(m,k) for every m in the floor-value set of n (unit case).

    Levels are stored per k as arrays indexed by floor-value slot; values
    for m < 2^k are zero.  ``table[m, k]`` and :meth:`column` read it.
    """

    def __init__(self, fvs: FloorValueSet, levels: list[np.ndarray]):
        self.fvs = fvs
        self.n = fvs.n
        self.r = fvs.n.bit_length() - 1
        self.levels = levels

    def __getitem__(self, key: tuple[int, int]) -> int:
        m, k = key
        slot = self.fvs.slot(m)
        if k < 0:
            raise IndexError("k must be non-negative")
        if k >= len(self.levels):
            return 0
        return int(self.levels[k][slot])

    def column(self, m: int | None = None) -> list[int]:
        """[v(m,0), v(m,1), ..., v(m, floor(log2 m))] (defaults to m = n)."""
        m = self.n if m is None else m
        kmax = m.bit_length() - 1
        return [self[m, k] for k in range(kmax + 1)]

    def items(self) -> Iterator[tuple[int, int, int]]:
        """(m, k, v) for all stored entries, sorted by (k, m)."""
        for k, level in enumerate(self.levels):
            lo = 1 << k
            for slot, m in enumerate(self.fvs.values):
                if m >= lo:
                    yield m, k, int(level[slot])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VnkTable):
            return NotImplemented
        return self.n == other.n and list(self.items()) == list(other.items())


def _python_levels(fvs: FloorValueSet) -> list[np.ndarray]:
    n, R = fvs.n, fvs.root
    size = len(fvs)
    vals = fvs.values
    r = n.bit_length() - 1

    def slot(x: int) -> int:
        return x - 1 if x <= R else size - n // x

    prev = [1] * size
    levels = [np.array(prev, dtype=object)]
    for k in range(1, r + 1):
        lo_m = 1 << k
        lo_j = 1 << (k - 1)
        cur = [0] * size
        for idx, m in enumerate(vals):
            if m < lo_m:
                continue
            rm = isqrt(m)
            s = m // (rm + 1)
            tot = 0
            for i in range(2, s + 1):
                tot += prev[slot(m // i)]
            for j in range(lo_j, rm + 1):
                tot += (m // j - m // (j + 1)) * prev[j - 1]
            cur[idx] = tot
        levels.append(np.array(cur, dtype=object))
        prev = cur
    return levels


def _isqrt_vec(m: np.ndarray) -> np.ndarray:
    r = np.floor(np.sqrt(m.astype(np.float64))).astype(np.int64)
    r -= (r * r > m).astype(np.int64)
    r += ((r + 1) * (r + 1) <= m).astype(np.int64)
    return r


class _FloorOperator:
    """Row blocks of the sparse recursion operator.

    Row m holds weight 1 at slot(floor(m/i)) for 2 <= i <= s(m) and weight
    floor(m/j) - floor(m/(j+1)) at slot(j) for 1 <= j <= floor(sqrt m).
    Blocks are cached when the whole operator fits in ``cache_nnz``
    entries and rebuilt on every application otherwise.
    """

    def __init__(self, fvs: FloorValueSet, block_nnz: int = 4_000_000, cache_nnz: int = 60_000_000):
        self.fvs = fvs
        self.m = fvs.as_array()
        self.size = len(fvs)
        rm = _isqrt_vec(self.m)
        s = self.m // (rm + 1)
        self.row_nnz = np.maximum(s - 1, 0) + rm
        self.bounds = self._partition(block_nnz)
        self.total_nnz = int(self.row_nnz.sum())
        self._cache: dict[tuple[int, int], sp.csr_matrix] | None = (
            {} if self.total_nnz <= cache_nnz else None
        )

    def _partition(self, block_nnz: int) -> list[tuple[int, int]]:
        cum = np.cumsum(self.row_nnz)
        bounds = []
        start = 0
        while start < self.size:
            base = cum[start - 1] if start else 0
            stop = int(np.searchsorted(cum, base + block_nnz, side="right"))
            stop = max(stop, start + 1)
            bounds.append((start, min(stop, self.size)))
            start = stop
        return bounds

    def _slot(self, x: np.ndarray) -> np.ndarray:
        n, R = self.fvs.n, self.fvs.root
        return np.where(x <= R, x - 1, self.size - n // np.maximum(x, 1))

    def _build(self, start: int, stop: int) -> sp.csr_matrix:
        m = self.m[start:stop]
        rows = np.arange(stop - start, dtype=np.int64)
        rm = _isqrt_vec(m)
        s = m // (rm + 1)

        # first sum: i = 2..s(m)
        len1 = np.maximum(s - 1, 0)
        r1 = np.repeat(rows, len1)
        off1 = np.arange(int(len1.sum()), dtype=np.int64) - np.repeat(np.cumsum(len1) - len1, len1)
        x1 = np.repeat(m, len1) // (off1 + 2)
        c1 = self._slot(x1)
        d1 = np.ones_like(c1)

        # second sum: j = 1..floor(sqrt m), grouped by equal floor values
        r2 = np.repeat(rows, rm)
        j = np.arange(int(rm.sum()), dtype=np.int64) - np.repeat(np.cumsum(rm) - rm, rm) + 1
        mj = np.repeat(m, rm)
        d2 = mj // j - mj // (j + 1)
        c2 = j - 1

        op = sp.csr_matrix(
            (np.concatenate([d1, d2]), (np.concatenate([r1, r2]), np.concatenate([c1, c2]))),
            shape=(stop - start, self.size),
            dtype=np.int64,
        )
        op.sum_duplicates()
        return op

    def blocks(self, first_row: int) -> Iterator[tuple[int, sp.csr_matrix]]:
        for start, stop in self.bounds:
            if stop <= first_row:
                continue
            lo = max(start, first_row)
            key = (start, stop)
            if self._cache is not None and key in self._cache:
                block = self._cache[key]
            else:
                block = self._build(start, stop)
                if self._cache is not None:
                    self._cache[key] = block
            yield lo, block[lo - start :] if lo > start else block


def _apply_block(block: sp.csr_matrix, prev: np.ndarray, prev_f: np.ndarray) -> np.ndarray:
    # All weights and values are nonnegative, so the float estimate bounds
    # every partial sum; int64 is exact whenever it stays below 2^62.
    estimate = block @ prev_f
    if prev.dtype != object and (estimate.size == 0 or estimate.max() < INT64_SAFE):
        return block @ prev
    prev_obj = prev.astype(object)
    prods = block.data.astype(object) * prev_obj[block.indices]
    out = np.zeros(block.shape[0], dtype=object)
    nonempty = np.diff(block.indptr) > 0
    starts = block.indptr[:-1][nonempty]
    if starts.size:
        out[nonempty] = np.add.reduceat(prods, starts)
    return out


def _sparse_levels(fvs: FloorValueSet) -> list[np.ndarray]:
    n = fvs.n
    r = n.bit_length() - 1
    op = _FloorOperator(fvs)
    log.debug("floor operator for n=%d: %d slots, %d nonzeros", n, len(fvs), op.total_nnz)
    m = op.m
    prev = np.ones(len(fvs), dtype=np.int64)
    levels = [prev]
    for k in range(1, r + 1):
        first = int(np.searchsorted(m, 1 << k))
        prev_f = prev.astype(np.float64)
        parts = []
        for lo, block in op.blocks(first):
            parts.append(_apply_block(block, prev, prev_f))
        body = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        dtype = object if body.dtype == object else np.int64
        cur = np.zeros(len(fvs), dtype=dtype)
        cur[first:] = body
        if cur.dtype == object and max(cur, default=0) < (1 << 63):
            cur = cur.astype(np.int64)
        levels.append(cur)
        prev = cur
    return levels


def vnk_fast(n: int, *, backend: str = "auto") -> VnkTable:
    """v(m,k) for all m in the floor-value set of n, unit coefficients and weights.

    Each level k >= 1 is computed from level k-1 with
    v(m,k) = sum_{i=2}^{s} v(floor(m/i), k-1)
             + sum_{j=2^{k-1}}^{floor(sqrt m)} (floor(m/j) - floor(m/(j+1))) v(j, k-1).
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    if backend == "auto":
        backend = "sparse" if SPARSE_MIN_N <= n < SPARSE_MAX_N else "python"
    fvs = floor_value_set(n)
    if backend == "python":
        levels = _python_levels(fvs)
    elif backend == "sparse":
        if n >= SPARSE_MAX_N:
            raise InputError(f"sparse backend supports n < 2^52; got n={n}")
        levels = _sparse_levels(fvs)
    else:
        raise InputError(f"unknown backend {backend!r}")
    return VnkTable(fvs, levels)


# ---------------------------------------------------------------------------
# disk cache

CACHE_MAGIC = "vnk-cache v1"


def cache_path(cache_dir: str | os.PathLike, n: int) -> Path:
    return Path(cache_dir) / f"vnk-{n}.txt"


def save_vnk_table(table: VnkTable, path: str | os.PathLike) -> None:
    """Write the table atomically (temp file in the same directory, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"{CACHE_MAGIC} n={table.n}\n")
            for m, k, v in table.items():
                fh.write(f"{m} {k} {v}\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def load_vnk_table(path: str | os.PathLike) -> VnkTable:
    path = Path(path)
    with open(path, encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        prefix = CACHE_MAGIC + " n="
        if not header.startswith(prefix):
            raise InputError(f"{path}: not a v(n,k) cache file")
        n = int(header[len(prefix) :])
        fvs = floor_value_set(n)
        r = n.bit_length() - 1
        raw: list[list[int]] = [[0] * len(fvs) for _ in range(r + 1)]
        seen = 0
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if len(parts) != 3:
                raise InputError(f"{path}:{lineno}: expected '<m> <k> <value>'")
            m, k, v = (int(x) for x in parts)
            if not 0 <= k <= r or m not in fvs or m < (1 << k):
                raise InputError(f"{path}:{lineno}: entry ({m}, {k}) out of range for n={n}")
            raw[k][fvs.slot(m)] = v
            seen += 1
    expected = sum(len(fvs) - fvs.slot(_first_at_least(fvs, 1 << k)) for k in range(r + 1))
    if seen != expected:
        raise InputError(f"{path}: expected {expected} entries, found {seen}")
    levels = []
    for row in raw:
        if max(row, default=0) < (1 << 63):
            levels.append(np.array(row, dtype=np.int64))
        else:
            levels.append(np.array(row, dtype=object))
    return VnkTable(fvs, levels)


def _first_at_least(fvs: FloorValueSet, x: int) -> int:
    vals = fvs.values
    lo, hi = 0, len(vals)
    while lo < hi:
        mid = (lo + hi) // 2
        if vals[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return vals[lo]


def cached_vnk_fast(n: int, cache_dir: str | os.PathLike | None) -> tuple[VnkTable, bool]:
    """vnk_fast with a per-n disk cache; returns (table, loaded_from_cache)."""
    if cache_dir is None:
        return vnk_fast(n), False
    path = cache_path(cache_dir, n)
    if path.exists():
        log.info("reading cached v(n,k) table %s", path)
        return load_vnk_table(path), True
    table = vnk_fast(n)
    save_vnk_table(table, path)
    return table, False
