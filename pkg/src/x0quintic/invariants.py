"""Invariants of X_0(N), its Atkin-Lehner quotients, and point-count bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .arith import class_number, divisors, euler_phi, factorize, kronecker, omega, psi

__all__ = [
    "LevelInvariants",
    "QuotientSpec",
    "InvariantError",
    "level_invariants",
    "genus",
    "hall_divisors",
    "al_fixed_points",
    "quotient_genus",
    "quotient_spec",
    "star_genus",
    "ogg_point_lower_bound",
    "ogg_degree_bound_to_elliptic",
    "exact_degree_bound_to_elliptic",
    "ogg_gonality_bound",
    "abramovich_gonality_bound",
    "OGG_PRIMES",
    "abramovich_threshold",
    "ogg_uncovered_levels",
    "bound_audit",
]

OGG_PRIMES = (2, 3, 5, 7, 11, 13)


class InvariantError(ArithmeticError):
    """An identity that must hold exactly failed."""


@dataclass(frozen=True)
class LevelInvariants:
    level: int
    psi: int
    omega: int
    nu2: int
    nu3: int
    cusps: int
    genus: int

    def identity_holds(self) -> bool:
        lhs = 12 * (self.genus - 1) + 3 * self.nu2 + 4 * self.nu3 + 6 * self.cusps
        return lhs == self.psi


@dataclass(frozen=True)
class QuotientSpec:
    level: int
    d: int
    genus: int


def _nu2(N: int) -> int:
    if N % 4 == 0:
        return 0
    return math.prod(1 + kronecker(-4, p) for p in factorize(N) if p != 2)


def _nu3(N: int) -> int:
    if N % 9 == 0:
        return 0
    return math.prod(1 + kronecker(-3, p) for p in factorize(N) if p != 3)


def _cusps(N: int) -> int:
    return sum(euler_phi(math.gcd(d, N // d)) for d in divisors(N))


@lru_cache(maxsize=None)
def level_invariants(N: int) -> LevelInvariants:
    if N < 1:
        raise ValueError(f"level must be positive, got {N}")
    P, n2, n3, c = psi(N), _nu2(N), _nu3(N), _cusps(N)
    num = P - 3 * n2 - 4 * n3 - 6 * c
    if num % 12:
        raise InvariantError(f"genus identity is not integral at N={N}")
    inv = LevelInvariants(N, P, omega(N), n2, n3, c, num // 12 + 1)
    if inv.genus < 0:
        raise InvariantError(f"negative genus at N={N}")
    return inv


def genus(N: int) -> int:
    return level_invariants(N).genus


def hall_divisors(N: int) -> list[int]:
    """Divisors d > 1 of N with gcd(d, N/d) = 1."""
    return [d for d in divisors(N) if d > 1 and math.gcd(d, N // d) == 1]


# --- Atkin-Lehner fixed points ------------------------------------------------
#
# A fixed point of w_Q on X_0(N), N = Q*M, is an elliptic curve with CM by an
# order O containing a primitive element alpha of norm Q with alpha^2/Q a unit,
# together with a cyclic subgroup of order M stable under alpha.  Each order
# contributes h(O) times the number of alpha-stable cyclic subgroups of
# O/MO, counted up to the automorphisms of O (beyond +-1).

# An order is described by its discriminant, the matrix of alpha and the
# matrices of a set of unit representatives modulo +-1, all on a Z-basis {1, w}.
_Mat = tuple[tuple[int, int], tuple[int, int]]
_ID: _Mat = ((1, 0), (0, 1))


def _orders(Q: int) -> list[tuple[int, _Mat, tuple[_Mat, ...]]]:
    if Q == 2:
        return [
            (-8, ((0, -2), (1, 0)), (_ID,)),
            (-4, ((1, -1), (1, 1)), (_ID, ((0, -1), (1, 0)))),  # alpha = 1 + i
        ]
    if Q == 3:
        return [
            (-12, ((0, -3), (1, 0)), (_ID,)),
            # Z[zeta], zeta^2 = -1 - zeta, alpha = 1 + 2 zeta
            (-3, ((1, -2), (2, -1)), (_ID, ((0, -1), (1, -1)), ((-1, 1), (-1, 0)))),
        ]
    out = [(-4 * Q, ((0, -Q), (1, 0)), (_ID,))]
    if Q % 4 == 3:
        # w = (1 + sqrt(-Q))/2, alpha = 2w - 1, alpha*w = (-1 - Q)/2 + w
        out.append((-Q, ((-1, (-1 - Q) // 2), (2, 1)), (_ID,)))
    return out


def _apply(A: _Mat, v: tuple[int, int], mod: int) -> tuple[int, int]:
    return ((A[0][0] * v[0] + A[0][1] * v[1]) % mod, (A[1][0] * v[0] + A[1][1] * v[1]) % mod)


def _stable(A: _Mat, v: tuple[int, int], mod: int) -> bool:
    """Is the cyclic group generated by the canonical generator v stable under A?"""
    w = _apply(A, v, mod)
    if v[0] == 1:
        return w[1] == (w[0] * v[1]) % mod
    return w[0] == (w[1] * v[0]) % mod


def _cyclic_generators(p: int, k: int) -> list[tuple[int, int]]:
    q = p**k
    return [(1, t) for t in range(q)] + [((p * s) % q, 1) for s in range(p ** (k - 1))]


def _stable_count(p: int, k: int, alpha: _Mat, unit: _Mat) -> int:
    """Cyclic subgroups of order p^k stable under alpha and mapped to themselves by unit."""
    q = p**k
    n = 0
    for v in _cyclic_generators(p, k):
        if _stable(alpha, v, q) and _stable(unit, v, q):
            n += 1
    return n


def _check_hall(N: int, d: int) -> None:
    if d <= 1 or N % d or math.gcd(d, N // d) != 1:
        raise ValueError(f"{d} is not a Hall divisor > 1 of {N}")


@lru_cache(maxsize=None)
def al_fixed_points(N: int, d: int) -> int:
    """Number of fixed points of the Atkin-Lehner involution w_d on X_0(N)."""
    _check_hall(N, d)
    M = N // d
    pk = list(factorize(M).items())
    total = 0
    for disc, alpha, units in _orders(d):
        # Burnside over the unit group modulo +-1
        orbit_sum = 0
        for u in units:
            orbit_sum += math.prod(_stable_count(p, k, alpha, u) for p, k in pk)
        total += class_number(disc) * orbit_sum // len(units)
    if d == 4:
        # w_4 also fixes the cusps whose denominator is exactly divisible by 2
        total += _cusps(M)
    return total


@lru_cache(maxsize=None)
def quotient_genus(N: int, d: int) -> int:
    """Genus of X_0(N)/w_d via Riemann-Hurwitz."""
    g = genus(N)
    fix = al_fixed_points(N, d)
    num = 2 * g + 2 - fix
    if num % 4 or num < 0:
        raise InvariantError(f"Riemann-Hurwitz is not integral for N={N}, d={d} (fix={fix})")
    return num // 4


def quotient_spec(N: int, d: int) -> QuotientSpec:
    return QuotientSpec(N, d, quotient_genus(N, d))


def star_genus(N: int) -> int:
    """Genus of X_0(N) modulo the full Atkin-Lehner group, for omega(N) <= 2."""
    ps = [p**e for p, e in factorize(N).items()]
    if len(ps) == 1:
        return quotient_genus(N, N)
    if len(ps) != 2:
        raise NotImplementedError("star_genus is only implemented for omega(N) <= 2")
    # Klein four-group quotient: 2 g* = g1 + g2 + g3 - g
    q1, q2 = ps
    s = quotient_genus(N, q1) + quotient_genus(N, q2) + quotient_genus(N, N) - genus(N)
    if s % 2:
        raise InvariantError(f"V4 genus formula is not integral at N={N}")
    return s // 2


# --- point-count bounds --------------------------------------------------------


def _check_good_prime(N: int, p: int) -> None:
    if N % p == 0:
        raise ValueError(f"p={p} divides N={N}")


def ogg_point_lower_bound(N: int, p: int) -> int:
    """Lower bound for #X_0(N)(F_{p^2}) from supersingular points and cusps."""
    _check_good_prime(N, p)
    return -(-(p - 1) * psi(N) // 12) + 2 ** omega(N)


def ogg_degree_bound_to_elliptic(N: int, p: int) -> int:
    """Lower bound on the degree of X_0(N) -> E using the Hasse maximum (p+1)^2."""
    return -(-ogg_point_lower_bound(N, p) // (p + 1) ** 2)


def exact_degree_bound_to_elliptic(N: int, p: int, e_points_p2: int) -> int:
    """Same bound with the exact value of #E(F_{p^2})."""
    return -(-ogg_point_lower_bound(N, p) // e_points_p2)


def ogg_gonality_bound(N: int, p: int) -> int:
    """Lower bound on the gonality: a degree-d map to P^1 has at most d(p^2+1) points."""
    return -(-ogg_point_lower_bound(N, p) // (p * p + 1))


def abramovich_gonality_bound(N: int) -> int:
    return -(-325 * psi(N) // 2**15)


def abramovich_threshold(bound: int) -> int:
    """Least L with abramovich_gonality_bound(N) >= bound for every N >= L.

    Uses only psi(N) >= N + 1, so the claim holds for all N >= L, not just those checked.
    """
    L = 1
    while -(-325 * (L + 1) // 2**15) < bound:
        L += 1
    return L


def ogg_uncovered_levels(target: int, max_level: int, primes=OGG_PRIMES) -> list[int]:
    """Levels N <= max_level where no admissible prime gives a degree bound >= target."""
    out = []
    for N in range(1, max_level + 1):
        bounds = [ogg_degree_bound_to_elliptic(N, p) for p in primes if N % p]
        if not bounds or max(bounds) < target:
            out.append(N)
    return out


def bound_audit(degree: int = 5) -> dict:
    """Where the point-count bounds alone rule out a degree-`degree` map to an elliptic curve.

    Such a map composed with a degree-2 function gives gonality <= 2 * degree, so levels
    past the Abramovich threshold for 2 * degree + 1 are excluded outright; below it the
    Ogg bound must exceed `degree`.
    """
    cutoff = abramovich_threshold(2 * degree + 1)
    uncovered = ogg_uncovered_levels(degree + 1, cutoff - 1)
    return {
        "abramovich_cutoff": cutoff,
        "largest_uncovered": max(uncovered),
        "uncovered_count": len(uncovered),
        "gonality6_threshold": abramovich_threshold(6),
    }
