"""Report renderers: each recomputes a published result and diffs it against the cited values.

Every report is a plain dict with a ``divergences`` list.  A divergence is a
computed value that disagrees with the cited one and is not a documented
erratum; documented errata are listed separately under ``errata``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .classify import LATTICE_SWEEP_LIMIT, Classifier
from .cs import AuxMap, cs_excludes_deg5
from .facts import (
    CS_ELLIPTIC_ROWS,
    CS_P1_ROWS,
    DENSITY5_CANDIDATES,
    GONALITY_TABLE_MAX,
    QUINTIC_FINITE,
    QUINTIC_INFINITE,
    QUINTIC_OPEN,
    TABLE1,
)
from .invariants import genus, quotient_spec

__all__ = [
    "Erratum",
    "ERRATA",
    "candidates_report",
    "density5_report",
    "quintic_report",
    "table1_report",
    "cs_tables_report",
    "pentaelliptic_sweep",
    "THEOREMS",
]

DENSITY5_MAX = 467
DENSITY5_YES = (109,)


@dataclass(frozen=True)
class Erratum:
    """A cited value that is provably a misprint, with the corrected value."""

    report: str
    key: tuple
    field: str
    cited: object
    computed: object
    reason: str


ERRATA = (
    Erratum(
        "cs-tables",
        (92,),
        "genus",
        11,
        10,
        "the genus formula gives 10; the positive-rank table lists 10 for the same level",
    ),
    Erratum(
        "table1",
        (142, 0),
        "A",
        "141.2.a.a",
        "142.2.a.a",
        "level 141 does not divide 142; the factor of J_0(142) with these data is 142.2.a.a",
    ),
    Erratum(
        "table1",
        (142, 1),
        "A",
        "141.2.a.d",
        "142.2.a.d",
        "level 141 does not divide 142; the factor of J_0(142) with these data is 142.2.a.d",
    ),
)


def _erratum(report: str, key: tuple, field: str, cited, computed) -> Erratum | None:
    for e in ERRATA:
        if (e.report, e.key, e.field, e.cited, e.computed) == (report, key, field, cited, computed):
            return e
    return None


def _diff(report: str, key: tuple, field: str, cited, computed, out: dict) -> None:
    if cited == computed:
        return
    e = _erratum(report, key, field, cited, computed)
    entry = {"key": list(key), "field": field, "cited": cited, "computed": computed}
    if e is None:
        out["divergences"].append(entry)
    else:
        out["errata"].append({**entry, "reason": e.reason})


def _new(name: str) -> dict:
    return {"report": name, "divergences": [], "errata": []}


# -- candidate list ------------------------------------------------------------


def candidates_report(clf: Classifier) -> dict:
    out = _new("candidates")
    levels = clf.candidate_levels_density5(check=False)
    out["levels"] = levels
    _diff("candidates", (), "levels", list(DENSITY5_CANDIDATES), levels, out)
    return out


# -- density degree ----------------------------------------------------------


def density5_report(clf: Classifier, lo: int = 1, hi: int = DENSITY5_MAX) -> dict:
    out = _new("density5")
    counts: dict[str, int] = {}
    yes, open_ = [], []
    for N in range(lo, hi + 1):
        v = clf.classify_density5(N)
        counts[v.density_degree_5] = counts.get(v.density_degree_5, 0) + 1
        if v.density_degree_5 == "yes":
            yes.append(N)
        elif v.density_degree_5 == "open":
            open_.append(N)
    out.update(range=[lo, hi], counts=counts, yes=yes, open=open_)
    expected = [N for N in DENSITY5_YES if lo <= N <= hi]
    _diff("density5", (), "yes", expected, yes, out)
    _diff("density5", (), "open", [], open_, out)
    return out


# -- quintic points ----------------------------------------------------------


def quintic_report(clf: Classifier, hi: int = GONALITY_TABLE_MAX) -> dict:
    out = _new("quintic")
    parts: dict[str, list[int]] = {"infinite": [], "finite": [], "open": []}
    for N in range(1, hi + 1):
        parts[clf.classify_quintic(N).quintic_points].append(N)
    out.update(parts)
    cited = {"infinite": QUINTIC_INFINITE, "finite": QUINTIC_FINITE, "open": QUINTIC_OPEN}
    for k, levels in cited.items():
        _diff("quintic", (), k, sorted(n for n in levels if n <= hi), parts[k], out)
    return out


def quintic_tail_report(clf: Classifier, lo: int = GONALITY_TABLE_MAX + 1, hi: int = DENSITY5_MAX) -> dict:
    """Finiteness of quintic points past the gonality table, level by level."""
    out = _new("quintic-tail")
    not_finite = [N for N in range(lo, hi + 1) if clf.classify_quintic(N).quintic_points != "finite"]
    out.update(range=[lo, hi], not_finite=not_finite)
    _diff("quintic-tail", (), "not_finite", [], not_finite, out)
    return out


# -- positive-rank factor table ------------------------------------------------


def table1_report(clf: Classifier) -> dict:
    out = _new("table1")
    rows = clf.render_table1()
    out["rows"] = rows
    cited: dict[int, list[tuple]] = {}
    for r in TABLE1:
        cited.setdefault(r[0], []).append(r)
    computed: dict[int, list[dict]] = {}
    for r in rows:
        computed.setdefault(r["N"], []).append(r)
    for N in sorted(set(cited) | set(computed)):
        c_rows, k_rows = cited.get(N, []), computed.get(N, [])
        if len(c_rows) != len(k_rows):
            _diff("table1", (N,), "row_count", len(c_rows), len(k_rows), out)
        for i, (c, k) in enumerate(zip(c_rows, k_rows)):
            key = (N, i)
            _, g, deg5, A, dim, mult, w4 = c
            _diff("table1", key, "genus", g, k["genus"], out)
            _diff("table1", key, "A", A, k["A"], out)
            _diff("table1", key, "dim", dim, k["dim"], out)
            _diff("table1", key, "multiplicity", mult, k["multiplicity"], out)
            _diff("table1", key, "deg5_function", deg5, k["deg5_function"], out)
            # the rules must reproduce every positive entry and claim nothing more
            _diff("table1", key, "in_W4", w4, k["in_W4"], out)
    return out


# -- Castelnuovo-Severi tables ------------------------------------------------


def _cs_row(N: int, g: int, aux: str, gY: int, target_genus: int, out: dict, name: str) -> dict:
    key = (N,)
    if aux == "P1-deg4":
        a = AuxMap(4, 0, "degree-4 map to P1")
        computed_gY = 0
    else:
        d = int(aux[1:])
        q = quotient_spec(N, d)
        a = q
        computed_gY = q.genus
    cert = cs_excludes_deg5(N, target_genus, a)
    _diff(name, key, "genus", g, genus(N), out)
    _diff(name, key, "quotient_genus", gY, computed_gY, out)
    _diff(name, key, "excluded", True, cert.excluded and cert.check(), out)
    return {
        "N": N,
        "genus": genus(N),
        "cited_genus": g,
        "Y": aux,
        "deg": cert.aux_degree,
        "g_Y": computed_gY,
        "cited_g_Y": gY,
        "bound": cert.bound,
        "excluded": cert.excluded,
    }


def cs_tables_report(clf: Classifier | None = None) -> dict:
    out = _new("cs-tables")
    out["to_P1"] = [_cs_row(*r, 0, out, "cs-tables") for r in CS_P1_ROWS]
    out["to_elliptic"] = [_cs_row(*r, 1, out, "cs-tables") for r in CS_ELLIPTIC_ROWS]
    return out


# -- pentaelliptic sweep --------------------------------------------------------


def pentaelliptic_sweep(clf: Classifier, hi: int = LATTICE_SWEEP_LIMIT - 1, lo: int = 1) -> dict:
    out = _new("pentaelliptic")
    t0 = time.perf_counter()
    levels = []
    undecided = []
    for N in range(lo, hi + 1):
        res = clf.pentaelliptic(N)
        levels.append({"level": N, "decision": res.decision, "trace": res.trace})
        if not res.excluded:
            undecided.append(N)
    out.update(range=[lo, hi], levels=levels, undecided=undecided, seconds=round(time.perf_counter() - t0, 2))
    _diff("pentaelliptic", (), "undecided", [], undecided, out)
    return out


THEOREMS = {
    "candidates": candidates_report,
    "density5": density5_report,
    "quintic": quintic_report,
    "table1": table1_report,
    "cs-tables": cs_tables_report,
}
