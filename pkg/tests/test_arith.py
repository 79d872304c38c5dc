import math

import pytest
from hypothesis import given, strategies as st

from x0quintic.arith import (
    class_number,
    divisors,
    factorize,
    is_squarefree,
    moebius,
    omega,
    psi,
    reduced_forms,
)


# -- independent oracles ------------------------------------------------------


def gamma0_index(N):
    """[SL_2(Z) : Gamma_0(N)] as the number of points of P^1(Z/N)."""
    pairs = sum(1 for c in range(N) for d in range(N) if math.gcd(math.gcd(c, d), N) == 1)
    units = sum(1 for u in range(N) if math.gcd(u, N) == 1)
    return pairs // units


def gauss_reduce(a, b, c):
    """Reduce a positive definite form by the classical S/T steps."""
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # translate b into (-a, a]
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def class_number_by_reduction(D, box=24):
    seen = set()
    for a in range(1, box + 1):
        for b in range(-box, box + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                seen.add(gauss_reduce(a, b, c))
    return len(seen)


def trial_divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


# -- examples -----------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, 1), (109, 110), (74, 114)])
def test_psi_examples(n, expected):
    assert psi(n) == expected


def test_psi_matches_gamma0_index():
    for N in range(1, 151):
        assert psi(N) == gamma0_index(N), N


@pytest.mark.parametrize("n,expected", [(1, 0), (46, 2), (112, 2)])
def test_omega_examples(n, expected):
    assert omega(n) == expected


@pytest.mark.parametrize("n,expected", [(1, [1]), (2, [1, 2]), (12, [1, 2, 3, 4, 6, 12])])
def test_divisors_examples(n, expected):
    assert divisors(n) == expected


def test_divisors_match_trial_division():
    for n in range(1, 600):
        assert divisors(n) == trial_divisors(n)


@pytest.mark.parametrize("n,expected", [(1, 1), (4, 0), (30, -1)])
def test_moebius_examples(n, expected):
    assert moebius(n) == expected


@pytest.mark.parametrize("D,expected", [(-3, 1), (-4, 1), (-23, 3)])
def test_class_number_examples(D, expected):
    assert class_number(D) == expected


def test_class_number_matches_reduction_oracle():
    for D in range(-200, 0):
        if D % 4 in (0, 1):
            assert class_number(D) == class_number_by_reduction(D), D


def test_reduced_forms_are_reduced_and_distinct():
    for D in range(-400, 0):
        if D % 4 not in (0, 1):
            continue
        forms = reduced_forms(D)
        assert len(set(forms)) == len(forms)
        for f in forms:
            assert gauss_reduce(*f) == f


@pytest.mark.parametrize("D", [0, 5, -1, -2, -5])
def test_class_number_rejects_non_discriminants(D):
    with pytest.raises(ValueError):
        class_number(D)


def test_factorize_up_to_a_million():
    for n in (999983, 10**6, 2**19, 3 * 5 * 7 * 11 * 13 * 17, 997 * 1009):
        assert math.prod(p**e for p, e in factorize(n).items()) == n


# -- properties -----------------------------------------------------------------

naturals = st.integers(min_value=1, max_value=10**4)


@given(naturals, naturals)
def test_psi_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert psi(m * n) == psi(m) * psi(n)


@given(st.integers(min_value=2, max_value=10**6))
def test_psi_lower_bound_and_primes(n):
    assert psi(n) >= n + 1
    assert (psi(n) == n + 1) == (len(factorize(n)) == 1 and is_squarefree(n))


@given(naturals, naturals)
def test_moebius_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert moebius(m * n) == moebius(m) * moebius(n)


@given(st.integers(min_value=2, max_value=10**5))
def test_moebius_sum_vanishes(n):
    assert sum(moebius(d) for d in divisors(n)) == 0
