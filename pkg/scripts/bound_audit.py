"""Audit the point-count bounds behind the large-level claims.

Prints the Abramovich cut-off past which no degree-5 map to an elliptic curve exists,
the largest level below it that the Ogg bound (primes up to 13) fails to cover, and
the per-prime coverage counts.
"""

from __future__ import annotations

import collections

from x0quintic.invariants import (
    OGG_PRIMES,
    abramovich_threshold,
    bound_audit,
    ogg_degree_bound_to_elliptic,
)


def main() -> None:
    audit = bound_audit()
    print(f"Abramovich: gonality >= 6 for all N >= {abramovich_threshold(6)}")
    print(f"Abramovich: gonality >= 11 (no degree-5 map to E) for all N >= {audit['abramovich_cutoff']}")
    print(f"largest N < {audit['abramovich_cutoff']} with no Ogg certificate: {audit['largest_uncovered']}")
    best = collections.Counter()
    for N in range(audit["largest_uncovered"] + 1, audit["abramovich_cutoff"]):
        bounds = {p: ogg_degree_bound_to_elliptic(N, p) for p in OGG_PRIMES if N % p}
        p = min(q for q in bounds if bounds[q] >= 6)
        best[p] += 1
    print("smallest certifying prime over the Ogg range:", dict(sorted(best.items())))


if __name__ == "__main__":
    main()
