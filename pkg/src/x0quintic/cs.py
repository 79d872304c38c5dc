"""Castelnuovo-Severi exclusion of degree-5 maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .invariants import QuotientSpec, genus, hall_divisors, quotient_genus

__all__ = ["CsCertificate", "NotApplicable", "AuxMap", "cs_bound", "cs_excludes_deg5", "search_certificate"]

CANDIDATE_DEGREE = 5


class NotApplicable(ValueError):
    """The factoring hypothesis cannot be discharged for this auxiliary map."""


@dataclass(frozen=True)
class AuxMap:
    """An auxiliary map X_0(N) -> Y of degree m with g(Y) known."""

    degree: int
    genus: int
    description: str


@dataclass(frozen=True)
class CsCertificate:
    level: int
    source_genus: int
    aux_degree: int
    aux_genus: int
    aux: str
    candidate_degree: int
    target_genus: int
    bound: int
    excluded: bool
    coprime: bool

    def check(self) -> bool:
        b = cs_bound(self.aux_degree, self.aux_genus, self.candidate_degree, self.target_genus)
        return b == self.bound and self.excluded == (self.source_genus > b)


def cs_bound(m: int, gY: int, n: int, gZ: int) -> int:
    """Genus bound m g(Y) + n g(Z) + (m-1)(n-1) for a curve with maps of degrees m and n."""
    if m < 1 or n < 1:
        raise ValueError("map degrees must be positive")
    return m * gY + n * gZ + (m - 1) * (n - 1)


def _as_aux(aux) -> AuxMap:
    if isinstance(aux, AuxMap):
        return aux
    if isinstance(aux, QuotientSpec):
        return AuxMap(2, aux.genus, f"w{aux.d}")
    raise NotApplicable("missing auxiliary map")


def cs_excludes_deg5(N: int, target_genus: int, aux) -> CsCertificate:
    if target_genus not in (0, 1):
        raise ValueError("target genus must be 0 or 1")
    if aux is None:
        raise NotApplicable("missing auxiliary map")
    a = _as_aux(aux)
    if a.degree == 1 or math.gcd(a.degree, CANDIDATE_DEGREE) != 1:
        raise NotApplicable(f"auxiliary degree {a.degree} does not rule out a common factorisation")
    g = genus(N)
    b = cs_bound(a.degree, a.genus, CANDIDATE_DEGREE, target_genus)
    return CsCertificate(
        level=N,
        source_genus=g,
        aux_degree=a.degree,
        aux_genus=a.genus,
        aux=a.description,
        candidate_degree=CANDIDATE_DEGREE,
        target_genus=target_genus,
        bound=b,
        excluded=g > b,
        coprime=True,
    )


def search_certificate(N: int, target_genus: int, extra: tuple[AuxMap, ...] = ()) -> CsCertificate | None:
    """First excluding certificate among all Atkin-Lehner quotients and extra maps.

    Quotients are tried in increasing order of their genus, ties broken by d.
    """
    options = sorted(((quotient_genus(N, d), d) for d in hall_divisors(N)))
    for gY, d in options:
        cert = cs_excludes_deg5(N, target_genus, QuotientSpec(N, d, gY))
        if cert.excluded:
            return cert
    for a in extra:
        try:
            cert = cs_excludes_deg5(N, target_genus, a)
        except NotApplicable:
            continue
        if cert.excluded:
            return cert
    return None
