"""Regenerate the bundled offline snapshot with PARI/GP.

The live database is not reachable from every machine, so the snapshot that
ships with the package was produced by recomputing the relevant records from
first principles:

* weight-2 newform Galois orbits (dimension, trace form, Atkin-Lehner signs,
  analytic rank per embedding) for every level up to ``--max-orbit-level``;
* for every rational newform of level up to ``--max-conductor`` the isogeny
  class of elliptic curves, recovered from the period lattice of the form,
  with the optimal curve, ranks and modular degrees;
* the trace of every Atkin-Lehner involution on S_2(Gamma_0(N)) (used only as
  an independent test oracle for the class-number fixed point formula).

Requires ``cypari2`` (not a runtime dependency of the package).  Results are
cached per level so an interrupted run can be resumed.

    python scripts/build_snapshot.py compute --cache build/cache
    python scripts/build_snapshot.py assemble --cache build/cache
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath

ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = ROOT / "src" / "x0quintic" / "data"
ORACLE_DIR = ROOT / "tests" / "data"

PREC = 24  # decimal digits used for the period computation
TRACE_TERMS = 100

_pari = None
args_rank0_max = 200  # above this conductor only positive-rank classes are recovered


def gp(src: str):
    global _pari
    if _pari is None:
        import cypari2

        _pari = cypari2.Pari()
        _pari.allocatemem(3 * 10**9, silent=True)
        _pari(f"default(realprecision, {PREC + 10})")
        _pari(
            "per(c,d,a,nmax)=my(g=gcdext(d,c),aa,b,t,t2,s=0.,q1,q2,p1=1,p2=1);"
            "aa=g[1];b=-g[2];t=(-d+I)/c;t2=(aa*t+b)/(c*t+d);"
            "q1=exp(2*Pi*I*t);q2=exp(2*Pi*I*t2);"
            "for(n=1,nmax,p1*=q1;p2*=q2;s+=a[n+1]/n*(p2-p1));s"
        )
    return _pari(src)


def _ints(v) -> list[int]:
    return [int(x) for x in v]


# ---------------------------------------------------------------------------
# period lattice -> elliptic curve


def _to_mpc(z) -> mpmath.mpc:
    f = lambda s: str(s).replace(" ", "")
    mpmath.mp.dps = PREC + 10
    return mpmath.mpc(f(gp(f"real({z})")), f(gp(f"imag({z})")))


def _lattice_basis(periods: list[mpmath.mpc]) -> tuple[mpmath.mpc, mpmath.mpc]:
    eps = mpmath.mpf(10) ** (-(PREC - 8))
    zs = sorted((z for z in periods if abs(z) > eps), key=abs)
    w1 = zs[0]
    w2 = next(z for z in zs if abs(mpmath.im(z / w1)) > mpmath.mpf(10) ** -8)
    det = mpmath.re(w1) * mpmath.im(w2) - mpmath.im(w1) * mpmath.re(w2)
    coords = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    for z in zs:
        s = (mpmath.re(z) * mpmath.im(w2) - mpmath.im(z) * mpmath.re(w2)) / det
        t = (mpmath.re(w1) * mpmath.im(z) - mpmath.im(w1) * mpmath.re(z)) / det
        fs = Fraction(str(mpmath.nstr(s, 40))).limit_denominator(10**4)
        ft = Fraction(str(mpmath.nstr(t, 40))).limit_denominator(10**4)
        if abs(s - mpmath.mpf(fs.numerator) / fs.denominator) > eps * 1e4:
            raise ArithmeticError("period is not a rational combination of the basis")
        if abs(t - mpmath.mpf(ft.numerator) / ft.denominator) > eps * 1e4:
            raise ArithmeticError("period is not a rational combination of the basis")
        coords.append((fs, ft))
    den = math.lcm(*(c.denominator for v in coords for c in v))
    vecs = [(int(a * den), int(b * den)) for a, b in coords]
    # 2-dimensional Hermite normal form of the integer span
    g1 = 0
    for a, _ in vecs:
        g1 = math.gcd(g1, a)
    # find a vector with first coordinate g1 via extended gcd accumulation
    cur = (0, 0)
    cur_g = 0
    for a, b in vecs:
        if a == 0:
            continue
        g, x, y = _egcd(cur_g, a)
        cur = (x * cur[0] + y * a, x * cur[1] + y * b)
        cur_g = g
    second = 0
    for a, b in vecs:
        k = a // g1 if g1 else 0
        second = math.gcd(second, b - k * cur[1])
    b1 = (Fraction(cur[0], den), Fraction(cur[1], den))
    b2 = (Fraction(0), Fraction(second, den))
    to_c = lambda v: w1 * (v[0].numerator / mpmath.mpf(v[0].denominator)) + w2 * (
        v[1].numerator / mpmath.mpf(v[1].denominator)
    )
    return to_c(b1), to_c(b2)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def curve_from_form(M: int, form: str, ap_check: list[int]) -> list[int]:
    """Minimal model of an elliptic curve attached to the rational form ``form``."""
    base = M * (PREC + 2) * math.log(10) / (2 * math.pi)
    pairs = [
        (k * M, d)
        for k in (1, 2, 3)
        for d in range(1, k * M)
        if math.gcd(d, k * M) == 1
    ]
    pairs.sort(key=lambda cd: (cd[0], (cd[1] * 7919) % cd[0]))
    by_c = {k: [p for p in pairs if p[0] == k * M] for k in (1, 2, 3)}
    have = 0
    for chosen in (by_c[1][:10], by_c[1][:10] + by_c[2][:6], by_c[1][:24] + by_c[2][:12] + by_c[3][:12]):
        need = int(base * max(c for c, _ in chosen) / M) + 30
        if need > have:
            gp(f"AC=mfcoefs({form},{need})")
            have = need
        per = [_to_mpc(gp(f"per({c},{d},AC,{int(base * c / M) + 30})")) for c, d in chosen]
        try:
            w1, w2 = _lattice_basis(per)
        except (ArithmeticError, StopIteration, IndexError):
            continue
        if mpmath.im(w1 / w2) < 0:
            w1, w2 = w2, w1
        lat = f"[{mpmath.nstr(w1, PREC)}, {mpmath.nstr(w2, PREC)}]".replace("j", "*I")
        c4 = 12 * _to_mpc(gp(f"elleisnum({lat},4,1)"))
        c6 = 216 * _to_mpc(gp(f"elleisnum({lat},6,1)"))
        r4, r6 = int(mpmath.nint(mpmath.re(c4))), int(mpmath.nint(mpmath.re(c6)))
        if abs(c4 - r4) > 1e-6 or abs(c6 - r6) > 1e-6:
            continue
        try:
            E = gp(f"ellminimalmodel(ellinit([0,0,0,{-27 * r4},{-54 * r6}]))")
        except Exception:
            continue
        ainvs = _ints(E[:5])
        if int(gp(f"ellglobalred(ellinit({ainvs}))[1]")) != M:
            continue
        if _ints(gp(f"ellan(ellinit({ainvs}),{len(ap_check)})")) != ap_check:
            continue
        return ainvs
    raise RuntimeError(f"could not recover a curve at level {M}")


def isogeny_class(ainvs: list[int]) -> dict:
    W = gp(f"ellweilcurve(ellinit({ainvs}))")
    curves = [_ints(e[:5]) for e in W[0]]
    smith = [[str(x) for x in s] for s in W[1]]
    optimal = [i for i, s in enumerate(smith) if s == ["1", "1"]]
    assert len(optimal) == 1, (ainvs, smith)
    opt = curves[optimal[0]]
    iso = gp(f"ellisomat(ellinit({opt}),0,1)")
    iso_curves = [
        _ints(gp(f"ellminimalmodel(ellinit({c}))")[:5]) for c in iso[0]
    ]
    mat = iso[1]
    deg_from_opt = {}
    for j, c in enumerate(iso_curves):
        deg_from_opt[tuple(c)] = int(mat[0, j])
    assert iso_curves[0] == opt
    assert set(map(tuple, curves)) == set(deg_from_opt), (curves, iso_curves)
    d0 = gp(f"ellmoddegree(ellinit({opt}))")
    d0 = int(d0)
    an_rank = int(gp(f"ellanalyticrank(ellinit({opt}))[1]"))
    root = int(gp(f"ellrootno(ellinit({opt}))"))
    members = []
    for c in sorted(curves):
        members.append(
            {
                "ainvs": c,
                "optimal": c == opt,
                "isogeny_degree_from_optimal": deg_from_opt[tuple(c)],
                "modular_degree": d0 * deg_from_opt[tuple(c)],
            }
        )
    return {
        "curves": members,
        "analytic_rank": an_rank,
        "root_number": root,
        "optimal_modular_degree": d0,
    }


# ---------------------------------------------------------------------------
# per-level computation


def _prime_powers(M: int) -> list[int]:
    fac = gp(f"factor({M})")
    return [int(fac[i, 0]) ** int(fac[i, 1]) for i in range(int(gp(f"#factor({M})[,1]")))]


def level_record(M: int, full_orbits: bool) -> dict:
    rec: dict = {"level": M, "orbits": [], "rational": []}
    gp(f"mf=mfinit([{M},2],0)")
    dim = int(gp("mfdim(mf)"))
    rec["new_dimension"] = dim
    if dim == 0:
        return rec
    rational_names = []
    if full_orbits:
        gp("EB=mfeigenbasis(mf); FL=mffields(mf)")
        n_orb = int(gp("#EB"))
        qs = _prime_powers(M)
        al = {q: gp(f"mfatkineigenvalues(mf,{q})") for q in qs}
        for i in range(n_orb):
            deg = int(gp(f"poldegree(FL[{i + 1}])"))
            tr = gp(
                f"my(v=mfcoefs(EB[{i + 1}],{TRACE_TERMS}));"
                f"vector(#v-1,n,if(type(v[n+1])==\"t_POLMOD\",trace(v[n+1]),v[n+1]*{deg}))"
            )
            if deg == 1:
                ranks = [int(gp(f"lfunorderzero(lfunmf(mf,EB[{i + 1}]))"))]
            else:
                ranks = _ints(gp(f"[lfunorderzero(l) | l<-lfunmf(mf,EB[{i + 1}])]"))
            signs = {}
            for q in qs:
                ev = al[q][i]
                vals = {int(x) for x in ev}
                assert len(vals) == 1, (M, q, ev)
                signs[str(q)] = vals.pop()
            orbit = {
                "index": i,
                "dim": deg,
                "traces": _ints(tr),
                "analytic_ranks": ranks,
                "atkin_lehner": signs,
            }
            rec["orbits"].append(orbit)
            if deg == 1:
                gp(f"F{i}=EB[{i + 1}]")
                rational_names.append((f"F{i}", i))
        assert sum(o["dim"] for o in rec["orbits"]) == dim
    else:
        gp("SP=mfsplit(mf,1)")
        k = int(gp("#SP[2]"))
        for i in range(k):
            gp(f"F{i}=mflinear(mf,SP[1][,{i + 1}])")
            r = int(gp(f"lfunorderzero(lfunmf(mf,F{i}))"))
            rec.setdefault("rational_forms", []).append(
                {"traces": _ints(gp(f"mfcoefs(F{i},{TRACE_TERMS})[2..{TRACE_TERMS + 1}]")), "analytic_rank": r}
            )
            if r == 0 and M > args_rank0_max:
                rec["skipped_rank0"] = rec.get("skipped_rank0", 0) + 1
                continue
            rational_names.append((f"F{i}", None))
    for name, orbit_index in rational_names:
        an = _ints(gp(f"mfcoefs({name},60)[2..61]"))
        ainvs = curve_from_form(M, name, an)
        cls = isogeny_class(ainvs)
        cls["an"] = an
        cls["orbit_index"] = orbit_index
        rec["rational"].append(cls)
    return rec


def al_trace_oracle(max_level: int) -> list[dict]:
    rows = []
    for N in range(1, max_level + 1):
        gp(f"mfc=mfinit([{N},2],1)")
        g = int(gp("mfdim(mfc)"))
        fac = gp(f"factor({N})")
        ps = [int(fac[i, 0]) ** int(fac[i, 1]) for i in range(int(gp(f"#factor({N})[,1]")))]
        for mask in range(1, 1 << len(ps)):
            Q = math.prod(ps[j] for j in range(len(ps)) if mask >> j & 1)
            tr = 0 if g == 0 else int(gp(f"trace(mfatkininit(mfc,{Q})[2])"))
            assert (g + tr) % 2 == 0
            rows.append({"N": N, "d": Q, "genus": g, "quotient_genus": (g + tr) // 2})
    return rows


def compute(args) -> None:
    cache = Path(args.cache)
    cache.mkdir(parents=True, exist_ok=True)
    for M in range(1, args.max_conductor + 1):
        out = cache / f"level_{M:04d}.json"
        if out.exists():
            continue
        t0 = time.time()
        rec = level_record(M, M <= args.max_orbit_level)
        out.write_text(json.dumps(rec))
        print(f"level {M}: {len(rec['orbits'])} orbits, {len(rec['rational'])} rational,"
              f" {time.time() - t0:.1f}s", flush=True)
    extra = cache / "extra_conductors.json"
    if not extra.exists():
        recs = {}
        for M in args.extra:
            recs[M] = level_record(M, False)
            print(f"extra level {M} done", flush=True)
        extra.write_text(json.dumps(recs))
    oracle = cache / "al_oracle.json"
    if not oracle.exists():
        oracle.write_text(json.dumps(al_trace_oracle(args.oracle_max)))
        print("AL oracle done", flush=True)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("compute")
    c.add_argument("--cache", default="build/cache")
    c.add_argument("--max-conductor", type=int, default=467)
    c.add_argument("--max-orbit-level", type=int, default=200)
    c.add_argument("--oracle-max", type=int, default=300)
    c.add_argument("--extra", type=int, nargs="*", default=[])
    a = sub.add_parser("assemble")
    a.add_argument("--cache", default="build/cache")
    args = ap.parse_args(argv)
    if args.cmd == "compute":
        compute(args)
    else:
        from assemble_snapshot import assemble

        assemble(Path(args.cache), DATA_DIR, ORACLE_DIR)
    return 0


if __name__ == "__main__":
    sys.exit(main())
