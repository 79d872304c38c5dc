"""Elliptic curves over Q as data: point counts and Hecke eigenvalues."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .arith import factorize

__all__ = [
    "EllipticCurveRecord",
    "BadReductionError",
    "normalize_label",
    "discriminant",
    "count_points_mod_p",
    "ap",
    "an",
    "an_list",
    "count_points_over_p2",
    "load_curves",
    "curve",
    "primes_up_to",
]


class BadReductionError(ValueError):
    """The requested operation needs good reduction at p."""


def normalize_label(label: str) -> str:
    """Return the dotted label: '37a1' -> '37.a1'; dotted labels pass through."""
    if "." in label:
        return label
    i = 0
    while i < len(label) and label[i].isdigit():
        i += 1
    if i == 0 or i == len(label):
        raise ValueError(f"not a curve label: {label!r}")
    return f"{label[:i]}.{label[i:]}"


@dataclass(frozen=True)
class EllipticCurveRecord:
    label: str
    conductor: int
    ainvs: tuple[int, int, int, int, int]
    rank: int
    modular_degree: int
    optimal: bool = True
    newform: str = ""
    provenance: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if discriminant(self.ainvs) == 0:
            raise ValueError(f"singular model for {self.label}")

    @property
    def isogeny_class(self) -> str:
        return self.label.rstrip("0123456789")

    @property
    def discriminant(self) -> int:
        return discriminant(self.ainvs)

    def has_good_reduction(self, p: int) -> bool:
        return self.conductor % p != 0


def _b_invariants(a: tuple[int, ...]) -> tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(ainvs) -> int:
    b2, b4, b6, b8 = _b_invariants(tuple(ainvs))
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _affine_count(ainvs, p: int) -> int:
    a1, a2, a3, a4, a6 = (x % p for x in ainvs)
    if p == 2:
        n = 0
        for x in range(2):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % 2
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - rhs) % 2 == 0:
                    n += 1
        return n
    # complete the square: (2y + a1 x + a3)^2 = 4 rhs + (a1 x + a3)^2
    n = 0
    for x in range(p):
        s = (4 * (x**3 + a2 * x * x + a4 * x + a6) + (a1 * x + a3) ** 2) % p
        if s == 0:
            n += 1
        elif pow(s, (p - 1) // 2, p) == 1:
            n += 2
    return n


def count_points_mod_p(E: EllipticCurveRecord, p: int) -> int:
    """#E(F_p), point at infinity included."""
    if not E.has_good_reduction(p):
        raise BadReductionError(f"{E.label} has bad reduction at {p}")
    return _affine_count(E.ainvs, p) + 1


def ap(E: EllipticCurveRecord, p: int) -> int:
    """Trace of Frobenius; at bad primes p minus the nonsingular point count.

    On a minimal model both cases reduce to p minus the affine point count,
    since the unique singular point is affine.
    """
    key = ("ap", p)
    if key not in E._cache:
        E._cache[key] = p - _affine_count(E.ainvs, p)
    return E._cache[key]


def an(E: EllipticCurveRecord, n: int) -> int:
    if n < 1:
        raise ValueError("an expects n >= 1")
    out = 1
    for p, k in factorize(n).items():
        a = ap(E, p)
        if not E.has_good_reduction(p):
            out *= a**k
            continue
        prev, cur = 1, a
        for _ in range(k - 1):
            prev, cur = cur, a * cur - p * prev
        out *= cur
    return out


def an_list(E: EllipticCurveRecord, n: int) -> list[int]:
    """[a_1, ..., a_n]."""
    return [an(E, m) for m in range(1, n + 1)]


def count_points_over_p2(E: EllipticCurveRecord, p: int) -> int:
    """#E(F_{p^2}) = p^2 + 1 - (a_p^2 - 2p)."""
    if not E.has_good_reduction(p):
        raise BadReductionError(f"{E.label} has bad reduction at {p}")
    a = ap(E, p)
    return p * p + 1 - (a * a - 2 * p)


def primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"[: min(2, n + 1)]
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


@lru_cache(maxsize=None)
def load_curves() -> dict[str, EllipticCurveRecord]:
    """Bundled curve table keyed by label."""
    out = {}
    with resources.files("x0quintic.data").joinpath("curves.csv").open() as fh:
        for row in csv.DictReader(fh):
            E = EllipticCurveRecord(
                label=row["label"],
                conductor=int(row["conductor"]),
                ainvs=tuple(int(row[k]) for k in ("a1", "a2", "a3", "a4", "a6")),
                rank=int(row["rank"]),
                modular_degree=int(row["modular_degree"]),
                optimal=row["optimal"] == "1",
                newform=row["newform"],
                provenance=row["provenance"],
            )
            out[E.label] = E
    return out


def curve(label: str) -> EllipticCurveRecord:
    return load_curves()[normalize_label(label)]
