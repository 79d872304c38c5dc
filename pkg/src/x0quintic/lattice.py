"""The degree quadratic form on Hom(J_0(N), E) and the pentaelliptic test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import divisors, is_squarefree, mobius, psi
from .elliptic import EllipticCurveRecord, an

__all__ = [
    "GramMatrix",
    "RepresentationReport",
    "ExclusionResult",
    "UnsupportedRegime",
    "InvariantViolation",
    "formula_regime_ok",
    "gram_entry",
    "gram_matrix",
    "evaluate",
    "ldl",
    "short_vectors",
    "represented_values",
    "pentaelliptic_exclusion",
    "MAX_BASIS_LEVEL",
]

MAX_BASIS_LEVEL = 778  # the divisor basis is only known to span for N below this


class UnsupportedRegime(ValueError):
    """N/M is neither squarefree nor coprime to M."""


class InvariantViolation(ArithmeticError):
    pass


def formula_regime_ok(N: int, M: int) -> bool:
    k = N // M
    return is_squarefree(k) or math.gcd(k, M) == 1


def _twisted_sum(E: EllipticCurveRecord, n: int) -> int:
    # sum over m^2 | n of mu(m) a_{n/m^2}
    s = 0
    m = 1
    while m * m <= n:
        if n % (m * m) == 0:
            mu = mobius(m)
            if mu:
                s += mu * an(E, n // (m * m))
        m += 1
    return s


def gram_entry(E: EllipticCurveRecord, N: int, d1: int, d2: int) -> int:
    """Pairing of the degeneracy maps attached to d1 and d2, scaled by deg f."""
    M = E.conductor
    if N % M:
        raise ValueError(f"conductor {M} does not divide {N}")
    k = N // M
    if k % d1 or k % d2:
        raise ValueError(f"{d1} and {d2} must divide N/M = {k}")
    if not formula_regime_ok(N, M):
        raise UnsupportedRegime(f"N/M = {k} is neither squarefree nor coprime to M = {M}")
    g = math.gcd(d1, d2)
    r = d1 * d2 // (g * g)
    if is_squarefree(r):
        a = an(E, r)
    else:
        a = _twisted_sum(E, d1 // g) * _twisted_sum(E, d2 // g)
    ratio, rem = divmod(psi(N), psi(M * r))
    assert rem == 0
    return a * ratio * E.modular_degree


@dataclass(frozen=True)
class GramMatrix:
    level: int
    curve: EllipticCurveRecord
    basis: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def value(self, v: Sequence[int]) -> int:
        return evaluate(self.entries, v)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def evaluate(Q: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    n = len(v)
    return sum(Q[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def ldl(Q: Sequence[Sequence[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact decomposition Q(x) = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2.

    Raises InvariantViolation if Q is not positive definite.
    """
    n = len(Q)
    A = [[Fraction(Q[i][j]) for j in range(n)] for i in range(n)]
    q = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i] = A[i][i]
        if q[i] <= 0:
            raise InvariantViolation("form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / q[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= q[i] * mu[i][j] * mu[i][k]
                A[k][j] = A[j][k]
    return q, mu


def short_vectors(Q: Sequence[Sequence[int]], bound: int):
    """Yield every integer vector v with Q(v) <= bound (Fincke-Pohst, exact)."""
    n = len(Q)
    q, mu = ldl(Q)
    x = [0] * n
    bound = Fraction(bound)

    def rec(i: int, remaining: Fraction):
        if i < 0:
            yield tuple(x)
            return
        c = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        # q_i (x_i - c)^2 <= remaining
        r2 = remaining / q[i]
        lo = math.ceil(c - _sqrt_upper(r2))
        hi = math.floor(c + _sqrt_upper(r2))
        for xi in range(lo, hi + 1):
            t = q[i] * (xi - c) ** 2
            if t <= remaining:
                x[i] = xi
                yield from rec(i - 1, remaining - t)
        x[i] = 0

    yield from rec(n - 1, bound)


def _sqrt_upper(r: Fraction) -> Fraction:
    # a rational >= sqrt(r), tight to within 1
    s = math.isqrt(r.numerator * r.denominator) + 1
    return Fraction(s, r.denominator)


@dataclass(frozen=True)
class RepresentationReport:
    target: int
    represented: bool
    witness: tuple[int, ...] | None
    search_bound: str

    def __post_init__(self):
        if self.represented and self.witness is None:
            raise ValueError("represented targets need a witness")


def represented_values(Q, max_t: int) -> list[RepresentationReport]:
    """Decide which of 1..max_t the positive definite form Q represents."""
    entries = Q.entries if isinstance(Q, GramMatrix) else Q
    q, _ = ldl(entries)
    witness: dict[int, tuple[int, ...]] = {}
    count = 0
    for v in short_vectors(entries, max_t):
        count += 1
        t = evaluate(entries, v)
        if 1 <= t <= max_t and (t not in witness or _key(v) < _key(witness[t])):
            witness[t] = v
    pivots = ", ".join(str(x) for x in q)
    proof = (
        f"exhaustive Fincke-Pohst enumeration of Q(v) <= {max_t} with exact "
        f"LDL pivots [{pivots}]; {count} lattice vectors examined"
    )
    out = []
    for t in range(1, max_t + 1):
        for_t = witness.get(t)
        out.append(RepresentationReport(t, for_t is not None, for_t, proof))
    return out


def _key(v: tuple[int, ...]) -> tuple:
    return (sum(abs(x) for x in v), tuple(-x for x in v))


def gram_matrix(E: EllipticCurveRecord, N: int) -> GramMatrix:
    M = E.conductor
    if N % M:
        raise ValueError(f"conductor {M} does not divide {N}")
    if N >= MAX_BASIS_LEVEL:
        raise ValueError(f"divisor basis is only established for N < {MAX_BASIS_LEVEL}")
    basis = tuple(divisors(N // M))
    entries = tuple(tuple(gram_entry(E, N, a, b) for b in basis) for a in basis)
    G = GramMatrix(N, E, basis, entries)
    _validate(G)
    return G


def _validate(G: GramMatrix) -> None:
    n = G.dim
    deg = G.curve.modular_degree
    diag = deg * psi(G.level) // psi(G.curve.conductor)
    for i in range(n):
        if G.entries[i][i] != diag:
            raise InvariantViolation(f"diagonal entry {G.entries[i][i]} != {diag}")
        for j in range(n):
            if G.entries[i][j] != G.entries[j][i]:
                raise InvariantViolation("Gram matrix is not symmetric")
            if G.entries[i][j] % deg:
                raise InvariantViolation(f"entry {G.entries[i][j]} not divisible by deg f = {deg}")
    ldl(G.entries)  # positive definiteness


@dataclass
class ExclusionResult:
    level: int
    decision: str  # EXCLUDED | UNDECIDED
    trace: list[dict] = field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return self.decision == "EXCLUDED"


def pentaelliptic_exclusion(
    N: int,
    curves: Iterable[EllipticCurveRecord],
    degree_five: Iterable[EllipticCurveRecord] = (),
) -> ExclusionResult:
    """Rule out a degree-5 map from X_0(N) to any of the given positive-rank curves.

    ``degree_five`` is the complete list of curves of modular degree 5.
    """
    deg5 = {E.label: E for E in degree_five}
    res = ExclusionResult(N, "EXCLUDED")
    for E in curves:
        step = {"curve": E.label, "conductor": E.conductor, "deg_f": E.modular_degree, "rank": E.rank}
        deg = E.modular_degree
        if formula_regime_ok(N, E.conductor):
            G = gram_matrix(E, N)
            rep = represented_values(G, 5)[4]
            step.update(gram=G.as_lists(), basis=list(G.basis))
            if not rep.represented:
                step.update(case="a", reason="Gram form does not represent 5", proof=rep.search_bound)
                res.trace.append(step)
                continue
            step.update(witness=list(rep.witness))
        else:
            step.update(regime="UNSUPPORTED_REGIME")
            if 5 % deg:
                step.update(case="b", reason=f"deg f = {deg} does not divide 5")
                res.trace.append(step)
                continue
        if deg == 1:
            step.update(case="d", reason="deg f = 1 would make E = X_0(M) of genus 1, which has rank 0")
        elif deg == 5 and E.label in deg5 and deg5[E.label].rank == 0:
            step.update(case="c", reason="the only curves of modular degree 5 have rank 0")
        elif deg == 5 and E.rank > 0:
            step.update(case="c", reason="positive rank contradicts the modular-degree-5 list")
        else:
            step.update(case=None, reason="no exclusion applies")
            res.decision = "UNDECIDED"
        res.trace.append(step)
    return res
