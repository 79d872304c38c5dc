"""Cited facts: level lists, gonality values and externally computed verdicts.

Each fact carries a citation tag naming the published result it comes from.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .invariants import (
    OGG_PRIMES,
    abramovich_gonality_bound,
    genus,
    ogg_gonality_bound,
)

__all__ = [
    "parse_levels",
    "GonalityFact",
    "GonalityContradiction",
    "FactTable",
    "facts",
    "gonality_fact",
]


def parse_levels(text: str) -> frozenset[int]:
    """'1-3,7' -> {1, 2, 3, 7}."""
    out = set()
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-")
            out.update(range(int(a), int(b) + 1))
        else:
            out.add(int(part))
    return frozenset(out)


# Levels with infinitely many points of degree 2, 3 and 4.
DEGREE2 = parse_levels("1-33,35-37,39-41,43,46-50,53,59,61,65,71,79,83,89,101,131")
DEGREE3 = parse_levels("1-29,31,32,34,36,37,43,45,49,50,54,64,81")
DEGREE4 = parse_levels(
    "1-75,77-83,85-89,91,92,94-96,98-101,103,104,107,111,118,119,121,123,125,128,131,141-143,145,155,159,167,191"
)

# Levels where X_0(N) carries a rational function of degree 5, by argument.
DEG5_FUNCTION_SOURCES = {
    "genus-at-most-2-gonality": parse_levels("1-29,31,32,36,37,49,50"),
    "genus-3-4-riemann-roch-search": parse_levels("30,33,34,35,38,39,40,41,43,44,45,47,48,53,61,81"),
    "degeneracy-map-to-x0-25": parse_levels("125"),
    "explicit-degree-5-function-search": parse_levels("42,51,52,54-58,63,64,65,67,68,72,73,75,80,91,121"),
    "published-gonality-5": parse_levels("109"),
}

# Published partition of N <= 191 by finiteness of quintic points.
QUINTIC_INFINITE = parse_levels("1-45,47-58,61,63,64,65,67,68,72,73,75,80,81,91,109,121,125")
QUINTIC_FINITE = parse_levels(
    "46,59,60,62,66,69,70,71,76,78,84,87,90,93,94,95,97,102,104,105,106,108,110,112-117,119,120,"
    "122,124,126,127,129,130,132-140,144,146-154,156,157,158,160-166,168-190"
)
QUINTIC_OPEN = parse_levels(
    "74,77,79,82,83,85,86,88,89,92,96,98,99,100,101,103,107,111,118,123,128,131,141,142,143,145,155,159,167,191"
)

DENSITY5_CANDIDATES = (76, 84, 90, 93, 97, 108, 109, 112, 113, 115, 117, 127, 133, 137, 139, 147, 169)

# Levels whose positive-rank factors were shown not to give a translate in W^0_5
# by reduction modulo a prime (external finite-field computation).
NO_TRANSLATE_IN_W5 = {112: "specialization-mod-p-no-translate", 117: "specialization-mod-p-no-translate"}

# Largest level for which the gonality classification below 6 is complete.
GONALITY_TABLE_MAX = 191

# Curves of modular degree 5 (LMFDB labels).
MODULAR_DEGREE_FIVE = ("11.a1", "11.a3", "46.a2", "67.a1", "89.b2")

# Published table of quotient maps used for Castelnuovo-Severi, as
# (N, g, quotient, g(Y)); quotient "P1-deg4" is a degree-4 map to P^1.
CS_P1_ROWS = (
    (46, 5, "w23", 0), (59, 5, "w59", 0), (60, 7, "w15", 1), (62, 7, "w31", 1),
    (66, 9, "w11", 2), (69, 7, "w23", 1), (70, 9, "w35", 2), (71, 6, "w71", 0),
    (78, 11, "w39", 2), (83, 7, "w83", 1), (87, 9, "w87", 2), (89, 7, "w89", 1),
    (92, 11, "w23", 1), (94, 11, "w47", 1), (95, 9, "w95", 1), (101, 8, "w101", 1),
    (104, 11, "w104", 3), (107, 9, "w107", 2), (111, 11, "w111", 2), (119, 11, "w119", 1),
    (131, 11, "w131", 1), (141, 15, "w47", 3),
    (142, 17, "P1-deg4", 0), (143, 13, "P1-deg4", 0), (167, 14, "P1-deg4", 0), (191, 16, "P1-deg4", 0),
)
CS_ELLIPTIC_ROWS = (
    (174, 27, "w87", 8), (184, 21, "w23", 5), (222, 35, "w111", 10), (231, 29, "w231", 9),
    (248, 29, "w31", 9), (249, 27, "w83", 8), (262, 32, "w131", 9), (267, 29, "w89", 9),
)


class GonalityContradiction(ValueError):
    """A cited gonality fact is incompatible with a computed lower bound."""


@dataclass(frozen=True)
class GonalityFact:
    level: int
    lower: int
    upper: int | None
    source: str

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"gonality interval [{self.lower}, {self.upper}] is empty")


@lru_cache(maxsize=None)
def _cited_gonality() -> dict[int, tuple[int, int | None, str]]:
    out = {}
    with resources.files("x0quintic.data").joinpath("gonality.csv").open() as fh:
        rows = (line for line in fh if not line.startswith("#"))
        for row in csv.DictReader(rows):
            up = row["upper"].strip()
            out[int(row["level"])] = (int(row["lower"]), int(up) if up else None, row["citation"])
    return out


def _list_bounds(N: int) -> tuple[int, str] | None:
    """Lower bound forced by absence from the degree-2 and degree-3 lists."""
    if genus(N) == 0:
        return None
    if N not in DEGREE2 and N not in DEGREE3:
        # gonality d gives infinitely many points of degree d
        return 4, "not-in-degree-2-3-lists"
    if N not in DEGREE2:
        return 3, "not-in-degree-2-list"
    return 2, "positive-genus"


def gonality_fact(N: int, table: dict | None = None) -> GonalityFact:
    """Best known interval for the Q-gonality of X_0(N)."""
    cited = _cited_gonality() if table is None else table
    g = genus(N)
    if g == 0:
        return GonalityFact(N, 1, 1, "genus-0")
    candidates: list[tuple[int, str]] = [(abramovich_gonality_bound(N), "abramovich-bound")]
    for p in OGG_PRIMES:
        if N % p:
            candidates.append((ogg_gonality_bound(N, p), f"ogg-bound-p{p}"))
    lb = _list_bounds(N)
    if lb:
        candidates.append(lb)
    computed = max(candidates)
    if N > GONALITY_TABLE_MAX:
        candidates.append((6, "gonality-at-least-6-above-191"))
    upper = None
    if N in cited:
        lo, upper, tag = cited[N]
        if upper is not None and computed[0] > upper:
            raise GonalityContradiction(f"N={N}: computed lower bound {computed} exceeds cited {upper}")
        candidates.append((lo, tag))
    lower, source = max(candidates)
    return GonalityFact(N, lower, upper, source)


@dataclass(frozen=True)
class FactTable:
    degree2: frozenset[int] = DEGREE2
    degree3: frozenset[int] = DEGREE3
    degree4: frozenset[int] = DEGREE4

    def degree_le4(self) -> frozenset[int]:
        return self.degree2 | self.degree3 | self.degree4

    def deg5_function_source(self, N: int) -> str | None:
        for tag, levels in DEG5_FUNCTION_SOURCES.items():
            if N in levels:
                return tag
        return None

    def no_translate_verdict(self, N: int) -> str | None:
        return NO_TRANSLATE_IN_W5.get(N)


@lru_cache(maxsize=None)
def facts() -> FactTable:
    return FactTable()


# Published table of positive-rank simple factors of dimension <= 2 on the
# open levels: (N, genus, degree-5 function, A, dim, multiplicity, in W^0_4).
TABLE1 = (
    (74, 8, "?", "37.2.a.a", 1, 2, "yes*"),
    (77, 7, "?", "77.2.a.a", 1, 1, "yes†"),
    (79, 6, "?", "79.2.a.a", 1, 1, "yes†"),
    (82, 9, "no", "82.2.a.a", 1, 1, "yes†"),
    (83, 7, "no", "83.2.a.a", 1, 1, "yes†"),
    (85, 7, "?", "85.2.a.b", 2, 1, "?"),
    (86, 10, "no", "43.2.a.a", 1, 2, "yes*"),
    (88, 9, "?", "88.2.a.a", 1, 1, "?"),
    (89, 7, "no", "89.2.a.a", 1, 1, "yes†"),
    (92, 10, "no", "92.2.a.a", 1, 1, "?"),
    (99, 9, "no", "99.2.a.a", 1, 1, "yes†"),
    (101, 8, "no", "101.2.a.a", 1, 1, "yes†"),
    (103, 8, "?", "103.2.a.a", 2, 1, "yes⁺"),
    (107, 9, "no", "107.2.a.a", 2, 1, "yes⁺"),
    (111, 11, "no", "37.2.a.a", 1, 2, "yes*"),
    (118, 14, "no", "118.2.a.a", 1, 1, "yes†"),
    (123, 13, "no", "123.2.a.a", 1, 1, "?"),
    (123, 13, "no", "123.2.a.b", 1, 1, "yes†"),
    (128, 9, "no", "128.2.a.a", 1, 1, "yes†"),
    (131, 11, "no", "131.2.a.a", 1, 1, "yes†"),
    (141, 15, "no", "141.2.a.a", 1, 1, "?"),
    (141, 15, "no", "141.2.a.d", 1, 1, "yes†"),
    (142, 17, "no", "141.2.a.a", 1, 1, "yes†"),
    (142, 17, "no", "141.2.a.d", 1, 1, "?"),
    (143, 13, "no", "143.2.a.a", 1, 1, "yes†"),
    (145, 13, "no", "145.2.a.a", 1, 1, "yes†"),
    (145, 13, "no", "145.2.a.b", 2, 1, "?"),
    (155, 15, "no", "155.2.a.a", 1, 1, "?"),
    (155, 15, "no", "155.2.a.c", 1, 1, "yes†"),
    (159, 17, "no", "53.2.a.a", 1, 2, "yes*"),
    (167, 14, "no", "167.2.a.a", 2, 1, "yes⁺"),
    (191, 16, "no", "191.2.a.a", 2, 1, "yes⁺"),
)
