"""Acceptance criteria 1-9, each driven through the public entry points.

Every test records a PASS/FAIL line (printed in the terminal summary) before asserting.
"""

import io
import itertools
import json
import time
from contextlib import redirect_stdout

import pytest
from hypothesis import given, settings, strategies as st

from conftest import ACCEPTANCE
from x0quintic.cli import main
from x0quintic.classify import default_classifier
from x0quintic.elliptic import an_list, count_points_over_p2, curve, load_curves, primes_up_to, ap
from x0quintic.facts import CS_ELLIPTIC_ROWS, CS_P1_ROWS, DENSITY5_CANDIDATES, QUINTIC_FINITE, QUINTIC_INFINITE, QUINTIC_OPEN, TABLE1
from x0quintic.invariants import (
    abramovich_gonality_bound,
    al_fixed_points,
    bound_audit,
    genus,
    hall_divisors,
    level_invariants,
    quotient_genus,
)
from x0quintic.lattice import evaluate, gram_matrix, represented_values
from x0quintic.arith import psi
from x0quintic.lmfdb import default_client

from test_elliptic import brute_count_p2
from test_lattice import naive_represented


def run_cli(*argv):
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = main(["--offline", "--format", "json", *argv])
    return code, json.loads(buf.getvalue()), time.perf_counter() - t0


def record(k, ok, detail):
    ACCEPTANCE[k] = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


@pytest.fixture(scope="module")
def sweep():
    return run_cli("sweep", "--pentaelliptic", "--max", "467")


def test_criterion_1_candidates():
    code, rep, t = run_cli("report", "--theorem", "candidates")
    ok = code == 0 and set(rep["levels"]) == set(DENSITY5_CANDIDATES) and len(rep["levels"]) == 17 and t < 10
    assert record(1, ok, f"{len(rep['levels'])} levels {rep['levels']}; {t:.1f} s")


def test_criterion_2_density_degree():
    code, verdicts, t = run_cli("classify", "--range", "1..467")
    yes = [v["level"] for v in verdicts if v["verdicts"]["density_degree_5"] == "yes"]
    open_ = [v["level"] for v in verdicts if v["verdicts"]["density_degree_5"] == "open"]
    ok = code == 0 and yes == [109] and not open_ and len(verdicts) == 467 and t < 300
    assert record(2, ok, f"yes at {yes}, open {open_}; {t:.1f} s")


def test_criterion_3_pentaelliptic_sweep(sweep):
    code, rep, t = sweep
    traced = all(lv["trace"] for lv in rep["levels"])
    curves = sum(1 for lv in rep["levels"] for s in lv["trace"] if "curve" in s)
    ok = code == 0 and rep["undecided"] == [] and len(rep["levels"]) == 467 and traced and t < 600
    assert record(3, ok, f"467 levels, {curves} per-curve steps, undecided {rep['undecided']}; {t:.1f} s")


def test_criterion_4_cs_tables_values():
    """Every row excluded with the cited auxiliary map and quotient genus; genus column checked below."""
    code, rep, _ = run_cli("report", "--theorem", "cs-tables")
    rows = rep["to_P1"] + rep["to_elliptic"]
    cited = {r[0]: r for r in CS_P1_ROWS + CS_ELLIPTIC_ROWS}
    assert len(rep["to_P1"]) == len(CS_P1_ROWS) == 26 and len(rep["to_elliptic"]) == 8
    for r in rows:
        N, g, aux, gY = cited[r["N"]]
        assert r["Y"] == aux and r["g_Y"] == gY and r["excluded"]
        assert r["deg"] == (4 if aux == "P1-deg4" else 2)
    assert code == 0 and rep["divergences"] == []


@pytest.mark.xfail(
    strict=True,
    reason="cited genus of X_0(92) is 11; the genus formula (and the positive-rank table) give 10",
)
def test_criterion_4_cs_tables_exact():
    code, rep, t = run_cli("report", "--theorem", "cs-tables")
    rows = rep["to_P1"] + rep["to_elliptic"]
    mism = [(r["N"], r["cited_genus"], r["genus"]) for r in rows if r["genus"] != r["cited_genus"]]
    ok = not mism and all(r["excluded"] and r["g_Y"] == r["cited_g_Y"] for r in rows)
    record(
        4,
        ok,
        f"{len(rows)} rows, all excluded; quotient genera exact; genus column mismatches {mism}"
        + ("" if ok else " (documented misprint; allowed to fail)"),
    )
    assert ok


def test_criterion_5_invariants(sweep):
    t0 = time.perf_counter()
    for N in range(1, 2101):
        L = level_invariants(N)
        assert 12 * (L.genus - 1) + 3 * L.nu2 + 4 * L.nu3 + 6 * L.cusps == L.psi
    pairs = 0
    for N in range(2, 2101):
        g = genus(N)
        for d in hall_divisors(N):
            fix = al_fixed_points(N, d)
            assert fix % 2 == 0 and (2 * g + 2 - fix) % 4 == 0
            pairs += 1
    for N, _, aux, gY in CS_P1_ROWS + CS_ELLIPTIC_ROWS:
        if aux.startswith("w"):
            assert quotient_genus(N, int(aux[1:])) == gY
    curves = {E.label: E for E in load_curves().values()}
    grams = small = 0
    for lv in sweep[1]["levels"]:
        N = lv["level"]
        for s in lv["trace"]:
            if "gram" not in s:
                continue
            E = curves[s["curve"]]
            G = gram_matrix(E, N)  # validates symmetry, divisibility, diagonal, definiteness
            assert G.as_lists() == s["gram"]
            diag = E.modular_degree * psi(N) // psi(E.conductor)
            assert all(G.entries[i][i] == diag for i in range(G.dim))
            grams += 1
            if G.dim <= 2:
                assert [r.represented for r in represented_values(G, 5)] == naive_represented(G.entries, 5)
                small += 1
    t = time.perf_counter() - t0
    assert record(5, True, f"genus identity N<=2100; {pairs} Hall pairs; {grams} Gram matrices ({small} of rank <= 2 vs naive); {t:.1f} s")


def test_criterion_6_hecke():
    E = curve("37a1")
    assert an_list(E, 20) == default_client().qexp("37.2.a.a")
    primes = primes_up_to(200)
    checked = 0
    for C in load_curves().values():
        for p in primes:
            if C.has_good_reduction(p):
                assert ap(C, p) ** 2 <= 4 * p
                checked += 1
    trio = ["11.a1", "37.a1", "43.a1"]
    for lab in trio:
        C = curve(lab)
        for p in (2, 3, 5):
            if C.has_good_reduction(p):
                assert count_points_over_p2(C, p) == brute_count_p2(C.ainvs, p)
    assert record(6, True, f"37a1 a_1..a_20 match; Hasse on {checked} (curve, p) pairs; F_(p^2) counts on {trio}")


def test_criterion_7_quintic():
    code, rep, t = run_cli("report", "--theorem", "quintic")
    ok = (
        code == 0
        and set(rep["infinite"]) == QUINTIC_INFINITE
        and set(rep["finite"]) == QUINTIC_FINITE
        and set(rep["open"]) == QUINTIC_OPEN
        and len(rep["open"]) == 30
        and len(rep["infinite"]) + len(rep["finite"]) + len(rep["open"]) == 191
    )
    clf = default_classifier()
    tail = [N for N in range(192, 468) if clf.classify_quintic(N).quintic_points != "finite"]
    ok = ok and not tail
    assert record(7, ok, f"{len(rep['infinite'])} infinite / {len(rep['finite'])} finite / {len(rep['open'])} open; 192..467 finite: {not tail}")


@settings(max_examples=300, deadline=None)
@given(st.integers(505, 10**7))
def test_criterion_9_abramovich_property(N):
    assert abramovich_gonality_bound(N) >= 6


def test_criterion_9_bound_audit():
    t0 = time.perf_counter()
    # exhaustive check of the property on a long initial stretch, backing the hypothesis run
    assert all(abramovich_gonality_bound(N) >= 6 for N in range(505, 200_000))
    audit = bound_audit()
    t = time.perf_counter() - t0
    ok = audit["largest_uncovered"] < 1008 and audit["largest_uncovered"] == 467 and audit["abramovich_cutoff"] == 1008 and t < 60
    assert record(
        9,
        ok,
        f"largest N without an Ogg certificate (p <= 13): {audit['largest_uncovered']}; "
        f"Abramovich covers N >= {audit['abramovich_cutoff']}; {t:.1f} s",
    )


def _table1_cells(rep):
    cited = [(r[0], r[1], r[3], r[4], r[5], r[6]) for r in TABLE1]
    got = [(r["N"], r["genus"], r["A"], r["dim"], r["multiplicity"], r["in_W4"]) for r in rep["rows"]]
    return cited, got


def test_criterion_8_table1_values():
    """All cells match except the documented level misprint in the label column."""
    code, rep, _ = run_cli("report", "--theorem", "table1")
    cited, got = _table1_cells(rep)
    assert code == 0 and rep["divergences"] == [] and len(got) == len(cited) == 32
    assert {r["N"] for r in rep["rows"]} == set(QUINTIC_OPEN) - {96, 98, 100}
    for c, k in zip(cited, got):
        assert c[:2] == k[:2] and c[3:] == k[3:]
        if c[2] != k[2]:
            assert c[0] == 142 and c[2].replace("141.", "142.") == k[2]


@pytest.mark.xfail(strict=True, reason="cited factor labels 141.2.a.* at N = 142; level 141 does not divide 142")
def test_criterion_8_table1_exact():
    code, rep, _ = run_cli("report", "--theorem", "table1")
    cited, got = _table1_cells(rep)
    mism = [(c[0], c[2], k[2]) for c, k in zip(cited, got) if c != k]
    w4 = sum(1 for c in cited if c[5] != "?")
    ok = not mism and len(got) == 32
    record(
        8,
        ok,
        f"32 rows; last column reproduces all {w4} positive entries and every '?'; mismatches {mism}"
        + ("" if ok else " (documented misprint; allowed to fail)"),
    )
    assert ok
