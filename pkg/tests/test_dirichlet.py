import random

import pytest
from hypothesis import given, settings, strategies as st

from dirichlet_matrices import (
    CoefficientSequence,
    InputError,
    d_table,
    dirichlet_convolve,
    dirichlet_inverse,
    mertens_table,
    mobius_sieve,
)

from oracles import divisors, mu_by_factorization, ordered_factorizations, total_ordered_factorizations

ONES = CoefficientSequence.unit


def brute_convolve(a, b, N):
    return [sum(a[d] * b[n // d] for d in divisors(n)) for n in range(1, N + 1)]


class TestConvolve:
    def test_divisor_count(self):
        out = dirichlet_convolve(ONES(6), ONES(6), 6)
        assert out[6] == len(divisors(6)) == 4

    def test_identity_right(self, rng):
        a = CoefficientSequence([rng.randint(-9, 9) for _ in range(20)])
        assert dirichlet_convolve(a, CoefficientSequence.identity(20), 12).values == a.values[:12]

    def test_ones_times_mobius(self):
        assert dirichlet_convolve(ONES(8), mobius_sieve(8), 8) == CoefficientSequence.identity(8)

    def test_short_input(self):
        with pytest.raises(InputError):
            dirichlet_convolve(ONES(5), ONES(8), 6)

    def test_matches_brute_force(self, rng):
        a = CoefficientSequence([rng.randint(-5, 5) for _ in range(40)])
        b = CoefficientSequence([rng.randint(-5, 5) for _ in range(40)])
        assert list(dirichlet_convolve(a, b, 40)) == brute_convolve(a, b, 40)


seqs = st.integers(1, 64).flatmap(
    lambda n: st.tuples(*[st.lists(st.integers(-20, 20), min_size=n, max_size=n) for _ in range(3)])
)


@settings(max_examples=60, derandomize=True, deadline=None)
@given(seqs)
def test_convolution_commutative_associative(data):
    a, b, c = (CoefficientSequence(x) for x in data)
    N = len(a)
    assert dirichlet_convolve(a, b, N) == dirichlet_convolve(b, a, N)
    left = dirichlet_convolve(dirichlet_convolve(a, b, N), c, N)
    right = dirichlet_convolve(a, dirichlet_convolve(b, c, N), N)
    assert left == right


@settings(max_examples=60, derandomize=True, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=0, max_size=80))
def test_inverse_is_involution(tail):
    a = CoefficientSequence([1] + tail)
    b = dirichlet_inverse(a)
    assert b[1] == 1
    assert dirichlet_convolve(a, b, len(a)) == CoefficientSequence.identity(len(a))
    assert dirichlet_inverse(b) == a


class TestInverse:
    def test_ones_gives_mobius(self):
        b = dirichlet_inverse(ONES(500))
        assert b.values[:6] == (1, -1, -1, 0, -1, 1)
        assert b == mobius_sieve(500)

    def test_identity(self):
        assert dirichlet_inverse(CoefficientSequence.identity(9)) == CoefficientSequence.identity(9)

    def test_hand_unrolled(self):
        a = CoefficientSequence([1, 1, 0, 0, 0, 0, 0, 0])
        assert dirichlet_inverse(a).values == (1, -1, 0, 1, 0, 0, 0, -1)

    def test_requires_unit_leading_coefficient(self):
        with pytest.raises(InputError):
            dirichlet_inverse(CoefficientSequence([2, 1, 1]))


class TestMobius:
    def test_small_values(self):
        mu = mobius_sieve(10)
        assert mu[1] == 1 and mu[4] == 0 and mu[6] == 1
        assert sum(mu) == -1

    def test_against_factorization(self):
        mu = mobius_sieve(3000)
        assert all(mu[n] == mu_by_factorization(n) for n in range(1, 3001))

    def test_mertens_table(self):
        M = mertens_table(100)
        assert M[0] == 0 and M[1] == 1 and M[10] == -1 and M[100] == 1

    def test_rejects_zero(self):
        with pytest.raises(InputError):
            mobius_sieve(0)


class TestDTable:
    def test_base_cases(self):
        t = d_table(ONES(30), 30, 4)
        assert t[1, 0] == 1 and t[2, 0] == 0
        assert all(t[n, 0] == 0 for n in range(2, 31))

    def test_two_factors_of_twelve(self):
        assert d_table(ONES(12), 12, 2)[12, 2] == 4

    def test_zero_below_power_of_two(self):
        t = d_table(ONES(200), 200, 7)
        assert t[7, 3] == 0
        assert all(t[n, k] == 0 for k in range(8) for n in range(1, min(1 << k, 201)))

    def test_recurrence_general_coefficients(self, rng):
        N = 120
        a = CoefficientSequence([1] + [rng.randint(-4, 4) for _ in range(N - 1)])
        t = d_table(a, N, 6)
        for k in range(1, 7):
            for n in range(1, N + 1):
                expected = sum(a[i] * t[n // i, k - 1] for i in divisors(n) if i > 1)
                assert t[n, k] == expected

    def test_ordered_factorizations(self):
        t = d_table(ONES(200), 200, 7)
        for n in range(1, 201):
            for k in range(8):
                assert t[n, k] == ordered_factorizations(n, k), (n, k)

    def test_row_sums_count_all_ordered_factorizations(self):
        t = d_table(ONES(200), 200, 8)
        for n in range(1, 201):
            assert sum(t[n, k] for k in range(9)) == total_ordered_factorizations(n)
