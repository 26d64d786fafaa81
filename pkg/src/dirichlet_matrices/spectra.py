"""Characteristic polynomials, determinants, spectra and eigenvectors of A_n.

The characteristic polynomial of A_n is carried in the shifted variable
y = x - 1 as ``q(y) = y^{r+1} - sum_{k=1}^{r} v(n,k) y^{r-k}`` together
with the multiplicity n - r - 1 of the trivial eigenvalue 1, so nothing
of size n is ever expanded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Literal, Mapping, Sequence

import mpmath
import numpy as np

from .dirichlet import CoefficientSequence, d_table, dirichlet_inverse
from .errors import ConvergenceError, InputError, SpectrumStructureError
from .matrices import WeightVector, build_A
from .oracle import IntegerPolynomial, eig_residual
from .vnk import VnkTable

# Euler-Mascheroni constant, 60 digits.
EULER_GAMMA = "0.577215664901532860606512090082402431042159335939923598805767"

DEFAULT_PRECISION = 192
MAX_ITER = 200
REPORT_VERSION = 1

__all__ = [
    "ShiftedCharPoly",
    "Root",
    "SpectrumReport",
    "EigvecReport",
    "shifted_charpoly",
    "det_from_vnk",
    "det_weighted",
    "solve_roots",
    "classify_spectrum",
    "spectrum",
    "eigenvector_right",
    "eigenvector_left",
    "EULER_GAMMA",
]


# ---------------------------------------------------------------------------
# characteristic polynomial


@dataclass(frozen=True)
class ShiftedCharPoly:
    """p_n(x) = (x-1)^{n-r-1} q(x-1) with q monic of degree r+1."""

    n: int
    v: tuple[int, ...]  # v(n,1), ..., v(n,r)

    @property
    def r(self) -> int:
        return len(self.v)

    @property
    def degree(self) -> int:
        return self.r + 1

    @property
    def trivial_multiplicity(self) -> int:
        return self.n - self.r - 1

    def coefficients(self) -> list[int]:
        """Coefficients of q(y), highest degree first."""
        return [1, 0] + [-x for x in self.v]

    def q(self, y):
        acc = 0
        for c in self.coefficients():
            acc = acc * y + c
        return acc

    def expand(self) -> IntegerPolynomial:
        """p_n(x) in the monomial basis (lowest degree first); small n only."""
        n = self.n
        # p_n(x) = (x-1)^n - sum_k v(n,k) (x-1)^{n-k-1}
        coeffs = _shifted_power(n)
        for k, vk in enumerate(self.v, start=1):
            if vk:
                for i, c in enumerate(_shifted_power(n - k - 1)):
                    coeffs[i] -= vk * c
        return IntegerPolynomial(coeffs)


def _shifted_power(m: int) -> list[int]:
    """Coefficients of (x-1)^m, lowest first."""
    return [comb(m, i) * (-1) ** (m - i) for i in range(m + 1)]


def _v_column(n: int, table) -> list[int]:
    """Normalize the accepted v-value containers to [v(n,0), ..., v(n,r)]."""
    r = n.bit_length() - 1
    if isinstance(table, VnkTable):
        if table.n != n and n not in table.fvs:
            raise InputError(f"table for n={table.n} does not cover n={n}")
        return table.column(n)
    if isinstance(table, Mapping):
        missing = [k for k in range(1, r + 1) if k not in table]
        if missing:
            raise InputError(f"missing v(n,k) for k in {missing}")
        return [table.get(0, 1)] + [table[k] for k in range(1, r + 1)]
    vals = list(table)
    if len(vals) < r + 1:
        raise InputError(f"need v(n,0..{r}), got {len(vals)} values")
    return vals[: r + 1]


def shifted_charpoly(n: int, table) -> ShiftedCharPoly:
    """Build q(y) from v(n,1..r).

    ``table`` is a :class:`VnkTable`, a mapping k -> v(n,k), or a sequence
    indexed by k starting at 0.
    """
    if n < 1:
        raise InputError("n must be positive")
    col = _v_column(n, table)
    v = tuple(int(x) for x in col[1:])
    return ShiftedCharPoly(n, v)


def det_from_vnk(n: int, table) -> int:
    """sum_{k=0}^{r} (-1)^k v(n,k), which equals det C_n = M(n) in the unit case."""
    col = _v_column(n, table)
    return sum((-1) ** k * int(x) for k, x in enumerate(col))


def det_weighted(
    a: CoefficientSequence,
    w: WeightVector,
    n: int,
    variant: Literal["A", "Atilde"] = "A",
):
    """det A_n = sum w_k b_k (b the formal inverse of a); det of the tilde variant is sum w_k a_k."""
    if len(a) < n or len(w) < n:
        raise InputError(f"sequences must have length >= {n}")
    if variant == "A":
        coeffs = dirichlet_inverse(a.truncate(n)).values
    elif variant == "Atilde":
        coeffs = a.values[:n]
    else:
        raise InputError(f"unknown variant {variant!r}")
    wv = w.values[:n]
    if w.mode == "exact":
        return sum(x * c for x, c in zip(wv, coeffs) if c)
    prods = [x * c for x, c in zip(wv, coeffs) if c]
    return complex(math.fsum(p.real for p in prods), math.fsum(p.imag for p in prods))


# ---------------------------------------------------------------------------
# roots


@dataclass
class Root:
    """A root y of q(y); the eigenvalue is 1 + y."""

    y: mpmath.mpc
    residual: mpmath.mpf  # |q(y)|
    backward_error: mpmath.mpf  # |q(y)| / sum |c_j| |y|^j
    forward_error: mpmath.mpf  # |q(y) / q'(y)|
    converged: bool
    exact_zero: bool = False
    prec: int = DEFAULT_PRECISION

    @property
    def eigenvalue(self) -> mpmath.mpc:
        with mpmath.workprec(self.prec):
            return 1 + self.y


def _horner(coeffs: Sequence, y):
    p = mpmath.mpf(0)
    dp = mpmath.mpf(0)
    for c in coeffs:
        dp = dp * y + p
        p = p * y + c
    return p, dp


def _seed_roots(coeffs: list[int], degree: int) -> list[complex]:
    try:
        seeds = np.roots(np.array([float(c) for c in coeffs], dtype=np.float64))
    except (OverflowError, np.linalg.LinAlgError):
        seeds = np.array([])
    seeds = [complex(z) for z in seeds if np.isfinite(z)]
    if len(seeds) != degree:
        # Cauchy bound circle
        bound = 1 + max(abs(c) for c in coeffs[1:]) if len(coeffs) > 1 else 1
        seeds = [bound * complex(math.cos(2 * math.pi * (i + 0.25) / degree), math.sin(2 * math.pi * (i + 0.25) / degree)) for i in range(degree)]
    # nudge coincident seeds apart; Aberth needs distinct starting points
    out: list[complex] = []
    for z in seeds:
        while any(abs(z - o) <= 1e-12 * max(1.0, abs(z)) for o in out):
            z = z * (1 + 1e-9) + 1e-9j
        out.append(z)
    return out


def solve_roots(
    poly: ShiftedCharPoly,
    precision_bits: int = DEFAULT_PRECISION,
    max_iter: int = MAX_ITER,
    strict: bool = False,
) -> list[Root]:
    """All r+1 roots of q(y) in ``precision_bits`` floating point.

    Double-precision companion eigenvalues seed a simultaneous Aberth
    iteration, followed by Newton polishing of each root.  Exact zero
    roots (when v(n,r) = 0) are split off first.  Roots that fail to
    certify are returned with ``converged=False``; with ``strict=True``
    a :class:`ConvergenceError` is raised instead.
    """
    if precision_bits < 64:
        raise InputError("precision_bits must be >= 64")
    coeffs = poly.coefficients()
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    degree = len(coeffs) - 1
    coef_bits = max(abs(c).bit_length() for c in coeffs)
    prec = max(precision_bits, coef_bits + 64)

    roots: list[Root] = []
    with mpmath.workprec(prec):
        cm = [mpmath.mpf(c) for c in coeffs]
        abs_c = [abs(c) for c in cm]
        tol = mpmath.mpf(2) ** (-(prec - 8))
        if degree > 0:
            z = [mpmath.mpc(s) for s in _seed_roots(coeffs, degree)]
            done = [False] * degree
            for _ in range(max_iter):
                for i in range(degree):
                    if done[i]:
                        continue
                    p, dp = _horner(cm, z[i])
                    if p == 0:
                        done[i] = True
                        continue
                    ratio = p / dp if dp != 0 else mpmath.mpc(0)
                    repulsion = mpmath.fsum(1 / (z[i] - z[j]) for j in range(degree) if j != i)
                    denom = 1 - ratio * repulsion
                    step = ratio / denom if denom != 0 else ratio
                    z[i] -= step
                    if abs(step) <= tol * max(1, abs(z[i])):
                        done[i] = True
                if all(done):
                    break
            for i in range(degree):
                # Newton polish with exactly represented integer coefficients
                for _ in range(3):
                    p, dp = _horner(cm, z[i])
                    if p == 0 or dp == 0:
                        break
                    z[i] -= p / dp
                p, dp = _horner(cm, z[i])
                scale = mpmath.fsum(ac * abs(z[i]) ** e for ac, e in zip(abs_c, range(degree, -1, -1)))
                backward = abs(p) / scale if scale else abs(p)
                forward = abs(p / dp) if dp != 0 else mpmath.inf
                ok = backward <= mpmath.mpf(2) ** (-(precision_bits * 3 // 4))
                roots.append(Root(mpmath.mpc(z[i]), abs(p), backward, forward, bool(ok), prec=prec))
        for _ in range(zeros):
            zero = mpmath.mpc(0)
            roots.append(Root(zero, mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0), True, exact_zero=True, prec=prec))
    if strict and not all(rt.converged for rt in roots):
        bad = [mpmath.nstr(rt.y, 10) for rt in roots if not rt.converged]
        raise ConvergenceError(f"unconverged roots for n={poly.n}: {bad}")
    return roots


def min_separation(roots: Sequence[Root]) -> mpmath.mpf | None:
    ys = [rt.y for rt in roots]
    if len(ys) < 2:
        return None
    return min(abs(ys[i] - ys[j]) for i in range(len(ys)) for j in range(i + 1, len(ys)))


# ---------------------------------------------------------------------------
# spectrum classification


@dataclass
class SpectrumReport:
    n: int
    r: int
    precision_bits: int
    roots: list[Root]
    lambda_plus: mpmath.mpf
    lambda_minus: mpmath.mpf
    small: list[mpmath.mpc]
    max_abs: mpmath.mpf | None
    max_re: mpmath.mpf | None
    delta_plus: mpmath.mpf
    delta_minus: mpmath.mpf
    trivial_multiplicity: int
    separation: mpmath.mpf | None
    separated: bool
    converged: bool

    @property
    def eigenvalues(self) -> list[mpmath.mpc]:
        return [rt.eigenvalue for rt in self.roots if not rt.exact_zero]

    def to_records(self) -> list[dict]:
        """Versioned, JSON-ready records: header, one per root, summary."""
        digits = int(self.precision_bits * math.log10(2))

        def s(x) -> str | None:
            return None if x is None else mpmath.nstr(x, digits, min_fixed=-math.inf, max_fixed=math.inf)

        recs: list[dict] = [
            {
                "record": "header",
                "version": REPORT_VERSION,
                "n": str(self.n),
                "r": self.r,
                "precision_bits": self.precision_bits,
            }
        ]
        for idx, rt in enumerate(self.roots):
            lam = rt.eigenvalue
            if rt.exact_zero:
                kind = "trivial"
            elif lam.imag == 0 and lam.real == self.lambda_plus:
                kind = "lambda_plus"
            elif lam.imag == 0 and lam.real == self.lambda_minus:
                kind = "lambda_minus"
            else:
                kind = "small"
            recs.append(
                {
                    "record": "root",
                    "index": idx,
                    "kind": kind,
                    "re": s(lam.real),
                    "im": s(lam.imag),
                    "residual": mpmath.nstr(rt.residual, 6),
                    "backward_error": mpmath.nstr(rt.backward_error, 6),
                    "forward_error": mpmath.nstr(rt.forward_error, 6),
                    "converged": rt.converged,
                }
            )
        recs.append(
            {
                "record": "summary",
                "n": str(self.n),
                "lambda_plus": s(self.lambda_plus),
                "lambda_minus": s(self.lambda_minus),
                "delta_plus": mpmath.nstr(self.delta_plus, 12),
                "delta_minus": mpmath.nstr(self.delta_minus, 12),
                "max_abs": None if self.max_abs is None else mpmath.nstr(self.max_abs, 12),
                "max_re": None if self.max_re is None else mpmath.nstr(self.max_re, 12),
                "small_count": len(self.small),
                "trivial_multiplicity": str(self.trivial_multiplicity),
                "min_separation": None if self.separation is None else mpmath.nstr(self.separation, 6),
                "separated": self.separated,
                "converged": self.converged,
            }
        )
        return recs


def asymptotic_center(n: int, sign: int) -> mpmath.mpf:
    """sign*sqrt(n) + log sqrt(n) + gamma - 1/2."""
    gamma = mpmath.mpf(EULER_GAMMA)
    return sign * mpmath.sqrt(n) + mpmath.log(mpmath.sqrt(n)) + gamma - mpmath.mpf(1) / 2


def classify_spectrum(n: int, roots: Sequence[Root], precision_bits: int = DEFAULT_PRECISION) -> SpectrumReport:
    """Split the nontrivial eigenvalues into lambda_plus, lambda_minus and the small ones.

    The two roots of largest modulus must be real with lambda_plus > 0 and
    lambda_minus <= 0 (equality only at n = 2); anything else raises
    :class:`SpectrumStructureError`.
    """
    r = n.bit_length() - 1
    work = max([precision_bits] + [rt.prec for rt in roots])
    with mpmath.workprec(work):
        real_tol = mpmath.mpf(2) ** (-(precision_bits // 2))
        live = [rt for rt in roots if not rt.exact_zero]
        lams = []
        for rt in live:
            lam = rt.eigenvalue
            if abs(lam.imag) <= real_tol * max(1, abs(lam)):
                lam = mpmath.mpc(lam.real, 0)
                rt.y = lam - 1
            lams.append(lam)
        order = sorted(range(len(lams)), key=lambda i: -abs(lams[i]))
        if len(order) < 2:
            raise SpectrumStructureError(f"n={n}: fewer than two nontrivial eigenvalues")
        top = [lams[i] for i in order[:2]]
        if any(t.imag != 0 for t in top):
            raise SpectrumStructureError(f"n={n}: largest eigenvalues are not both real: {top}")
        hi, lo = sorted((t.real for t in top), reverse=True)
        if not (hi > 0 >= lo):
            raise SpectrumStructureError(f"n={n}: expected one positive and one non-positive large eigenvalue, got {hi}, {lo}")
        small = [lams[i] for i in order[2:]]
        max_abs = max((abs(x) for x in small), default=None)
        max_re = max((x.real for x in small), default=None)
        d_plus = hi - asymptotic_center(n, +1)
        d_minus = lo - asymptotic_center(n, -1)
        sep = min_separation(live)
        worst = max((rt.forward_error for rt in live), default=mpmath.mpf(0))
        separated = sep is None or sep > 1000 * worst
        zeros = sum(1 for rt in roots if rt.exact_zero)
    return SpectrumReport(
        n=n,
        r=r,
        precision_bits=precision_bits,
        roots=list(roots),
        lambda_plus=hi,
        lambda_minus=lo,
        small=small,
        max_abs=max_abs,
        max_re=max_re,
        delta_plus=d_plus,
        delta_minus=d_minus,
        trivial_multiplicity=n - r - 1 + zeros,
        separation=sep,
        separated=bool(separated),
        converged=all(rt.converged for rt in roots),
    )


def spectrum(n: int, table, precision_bits: int = DEFAULT_PRECISION) -> SpectrumReport:
    """shifted_charpoly -> solve_roots -> classify_spectrum in one call."""
    poly = shifted_charpoly(n, table)
    roots = solve_roots(poly, precision_bits)
    return classify_spectrum(n, roots, precision_bits)


# ---------------------------------------------------------------------------
# eigenvectors


@dataclass
class EigvecReport:
    eigenvalue: mpmath.mpc
    vector: list[mpmath.mpc] = field(repr=False)
    side: str
    residual: float | None
    tolerance: float
    condition: mpmath.mpf  # 1/|lambda - 1|, the factor amplified by each power

    @property
    def failed(self) -> bool:
        return self.residual is not None and not self.residual <= self.tolerance


def _check_lambda(lam) -> mpmath.mpc:
    lam = mpmath.mpc(lam)
    if lam == 1:
        raise InputError("lambda = 1 is the trivial eigenvalue; no eigenvector formula applies")
    return lam


def _power_series(coeffs: Sequence, z):
    """sum_k coeffs[k] z^k by Horner."""
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def eigenvector_right(
    a: CoefficientSequence,
    w: WeightVector,
    n: int,
    lam,
    *,
    precision_bits: int = DEFAULT_PRECISION,
    verify: bool = True,
    tolerance: float = 1e-8,
) -> EigvecReport:
    """Right eigenvector u with u_1 = lambda - 1 and u_i = X_i(floor(n/i)).

    X_j(q) = sum_{k>=0} v_j(q,k) (lambda-1)^{-k} with
    v_j(q,k) = sum_{t<=q} w(j t) d(t,k).  The k = 0 term is w(j).
    """
    if len(a) < n or len(w) < n:
        raise InputError(f"sequences must have length >= {n}")
    r = n.bit_length() - 1
    d = d_table(a, n, r)
    rows = [d.row(k) for k in range(r + 1)]
    wv = w.values
    with mpmath.workprec(precision_bits):
        lam = _check_lambda(lam)
        z = 1 / (lam - 1)
        vec = [lam - 1]
        for i in range(2, n + 1):
            q = n // i
            kmax = q.bit_length() - 1
            coeffs = []
            for k in range(kmax + 1):
                row = rows[k]
                coeffs.append(sum(wv[i * t - 1] * row[t] for t in range(1 << k, q + 1) if row[t]))
            vec.append(_power_series([mpmath.mpmathify(c) for c in coeffs], z))
        cond = abs(z)
    residual = None
    if verify:
        residual = eig_residual(build_A(a, w, n), lam, vec, "right")
    return EigvecReport(lam, vec, "right", residual, tolerance, cond)


def eigenvector_left(
    a: CoefficientSequence,
    n: int,
    lam,
    *,
    w: WeightVector | None = None,
    precision_bits: int = DEFAULT_PRECISION,
    tolerance: float = 1e-8,
) -> EigvecReport:
    """Left eigenvector v_q = Y(q) = sum_k d(q,k) (lambda-1)^{-k}, q = 1..n.

    The entries do not involve the weights; pass ``w`` only to verify the
    vector against the dense transpose of A_n.
    """
    if len(a) < n:
        raise InputError(f"coefficient sequence must have length >= {n}")
    r = n.bit_length() - 1
    d = d_table(a, n, r)
    rows = [d.row(k) for k in range(r + 1)]
    with mpmath.workprec(precision_bits):
        lam = _check_lambda(lam)
        z = 1 / (lam - 1)
        vec = []
        for q in range(1, n + 1):
            kmax = q.bit_length() - 1
            vec.append(_power_series([rows[k][q] for k in range(kmax + 1)], z))
        cond = abs(z)
    residual = None
    if w is not None:
        residual = eig_residual(build_A(a, w, n), lam, vec, "left")
    return EigvecReport(lam, vec, "left", residual, tolerance, cond)
