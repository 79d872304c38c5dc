"""Elementary arithmetic: factorisation, multiplicative functions, class numbers."""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "factorize",
    "divisors",
    "is_squarefree",
    "omega",
    "psi",
    "moebius",
    "euler_phi",
    "mobius",
    "kronecker",
    "reduced_forms",
    "class_number",
    "is_fundamental_discriminant",
]


@lru_cache(maxsize=4096)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer as ``{p: e}``."""
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    return dict(_factor_tuple(n))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of ``n``."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n))


def psi(n: int) -> int:
    """Dedekind psi: the index of Gamma_0(n) in SL_2(Z)."""
    out = n
    for p in factorize(n):
        out = out // p * (p + 1)
    return out


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker expects n >= 1")
    result = 1
    for p, e in factorize(n).items():
        if p == 2:
            if a % 2 == 0:
                return 0
            s = 1 if a % 8 in (1, 7) else -1
        else:
            r = a % p
            if r == 0:
                return 0
            s = 1 if pow(r, (p - 1) // 2, p) == 1 else -1
        if e % 2:
            result *= s
    return result


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced positive definite forms (a, b, c) with b^2 - 4ac = D < 0.

    Only primitive forms are returned.  Reduced means |b| <= a <= c, with
    b >= 0 whenever |b| = a or a = c.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {D}")
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


@lru_cache(maxsize=4096)
def class_number(D: int) -> int:
    """Number of classes of primitive positive definite forms of discriminant D."""
    return len(reduced_forms(D))


def is_fundamental_discriminant(D: int) -> bool:
    if D % 4 == 1:
        return is_squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


moebius = mobius
