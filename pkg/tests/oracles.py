"""Independent brute-force references shared by the tests."""

from functools import lru_cache


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mu_by_factorization(n):
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def ordered_factorizations(n, k):
    """Ordered k-tuples of integers >= 2 with product exactly n, by enumeration."""
    if k == 0:
        return 1 if n == 1 else 0
    return sum(ordered_factorizations(n // d, k - 1) for d in range(2, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def total_ordered_factorizations(n):
    """All ordered factorizations of n into parts >= 2 (n = 1 counts the empty one)."""
    if n == 1:
        return 1
    return sum(total_ordered_factorizations(n // d) for d in range(2, n + 1) if n % d == 0)


def cofactor_det(rows):
    """Laplace expansion along rows, memoized on the set of used columns."""
    n = len(rows)
    memo = {}

    def rec(i, used):
        if i == n:
            return 1
        key = (i, used)
        if key in memo:
            return memo[key]
        total = 0
        sign = 1
        for j in range(n):
            if used >> j & 1:
                continue
            if rows[i][j]:
                total += sign * rows[i][j] * rec(i + 1, used | (1 << j))
            sign = -sign
        memo[key] = total
        return total

    return rec(0, 0)


def nontrivial_eigenvalues(a, w, n, prec=256):
    """Roots of charpoly_exact(A_n) after dividing out every (x - 1) factor."""
    import mpmath

    from dirichlet_matrices import build_A, charpoly_exact

    p = charpoly_exact(build_A(a, w, n))
    while p.degree > 0:
        q, rem = p.divide_linear(1)
        if rem:
            break
        p = q
    if p.degree < 1:
        return []
    with mpmath.workprec(prec):
        return list(mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=2000, extraprec=4 * prec))


def count_tuples_at_most(n, k):
    """Ordered k-tuples of integers >= 2 with product <= n.

    Writes each factor as 2 + e and recurses on the remaining budget; only
    practical when the slack n / 2^k is small.
    """
    if k == 0:
        return 1 if n >= 1 else 0
    total = 0
    f = 2
    while f * 2 ** (k - 1) <= n:
        total += count_tuples_at_most(n // f, k - 1)
        f += 1
    return total


def divisor_summatory(n):
    """sum_{j <= n} tau(j) by the Dirichlet hyperbola method."""
    from math import isqrt

    r = isqrt(n)
    return 2 * sum(n // i for i in range(1, r + 1)) - r * r
