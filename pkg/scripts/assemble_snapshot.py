"""Turn the per-level cache written by build_snapshot.py into package data.

Produces
  src/x0quintic/data/snapshot.json   query records {query_key, url, fetched_at, payload}
  src/x0quintic/data/curves.csv      Weierstrass models with rank and modular degree
  tests/data/al_quotient_genus.json  Atkin-Lehner quotient genera from Hecke traces
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

API = "https://www.lmfdb.org/api"
PROVENANCE = "recomputed with PARI/GP 2.15 (modular forms + period lattice); mirrors the LMFDB query in url"
QEXP_LABEL = "37.2.a.a"


def letters(i: int) -> str:
    """0 -> a, 25 -> z, 26 -> ba, ... (base 26 with a = 0)."""
    s = ""
    while True:
        s = chr(ord("a") + i % 26) + s
        i //= 26
        if i == 0:
            return s


def _orbit_labels(rec: dict) -> list[tuple[str, dict]]:
    order = sorted(rec["orbits"], key=lambda o: (o["dim"], o["traces"]))
    return [(f"{rec['level']}.2.a.{letters(k)}", o) for k, o in enumerate(order)]


def _rational_letters(rec: dict) -> dict[tuple, str]:
    """Map first-60 coefficient tuples of rational forms to class letters."""
    if rec["orbits"]:
        forms = [o["traces"] for o in rec["orbits"] if o["dim"] == 1]
    else:
        forms = [f["traces"] for f in rec.get("rational_forms", [])]
    forms.sort()
    return {tuple(t[:60]): letters(k) for k, t in enumerate(forms)}


def _record(key: str, url: str, payload, stamp: str) -> dict:
    return {"query_key": key, "url": url, "fetched_at": stamp, "source": PROVENANCE, "payload": payload}


def assemble(cache: Path, data_dir: Path, oracle_dir: Path) -> None:
    stamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    levels = sorted(cache.glob("level_*.json"))
    records = []
    curves = []
    qexp = None
    for path in levels:
        rec = json.loads(path.read_text())
        M = rec["level"]
        full = bool(rec["orbits"]) or rec["new_dimension"] == 0
        if full and M <= 200:
            payload = []
            for label, o in _orbit_labels(rec):
                ranks = o["analytic_ranks"]
                payload.append(
                    {
                        "label": label,
                        "level": M,
                        "dim": o["dim"],
                        "analytic_rank": max(ranks),
                        "embedding_analytic_ranks": ranks,
                        "atkin_lehner": [[int(q), s] for q, s in sorted(o["atkin_lehner"].items(), key=lambda x: int(x[0]))],
                        "fricke_eigenval": _fricke(o["atkin_lehner"]),
                        "trace": o["traces"][:20],
                    }
                )
                if label == QEXP_LABEL:
                    qexp = o["traces"][:20]
            records.append(
                _record(
                    f"mf_newforms:level={M}",
                    f"{API}/mf_newforms/?level={M}&weight=2&char_order=1&_format=json",
                    payload,
                    stamp,
                )
            )
        lets = _rational_letters(rec)
        all_curves = []
        for cls in rec["rational"]:
            letter = lets[tuple(cls["an"])]
            for k, c in enumerate(cls["curves"], start=1):
                row = {
                    "label": f"{M}.{letter}{k}",
                    "lmfdb_iso": f"{M}.{letter}",
                    "conductor": M,
                    "ainvs": c["ainvs"],
                    "rank": cls["analytic_rank"],
                    "degree": c["modular_degree"],
                    "optimality": 1 if c["optimal"] else 0,
                    "newform": f"{M}.2.a.{letter}",
                }
                all_curves.append(row)
        all_curves.sort(key=lambda r: (r["lmfdb_iso"].split(".")[1].rjust(4), r["label"]))
        curves.extend(all_curves)
        if M <= 200:
            records.append(
                _record(
                    f"ec_curvedata:conductor={M}",
                    f"{API}/ec_curvedata/?conductor={M}&_format=json",
                    all_curves,
                    stamp,
                )
            )
        records.append(
            _record(
                f"ec_curvedata:conductor={M}:rank>0",
                f"{API}/ec_curvedata/?conductor={M}&rank=gt0&_format=json",
                [r for r in all_curves if r["rank"] > 0],
                stamp,
            )
        )
    deg5 = [r for r in curves if r["degree"] == 5]
    records.append(_record("ec_curvedata:degree=5", f"{API}/ec_curvedata/?degree=5&_format=json", deg5, stamp))
    assert qexp is not None
    records.append(
        _record(
            f"mf_newforms:{QEXP_LABEL}:qexp",
            f"{API}/mf_newforms/?label={QEXP_LABEL}&_fields=traces&_format=json",
            qexp,
            stamp,
        )
    )
    data_dir.mkdir(parents=True, exist_ok=True)
    snap = {"schema": 1, "records": records}
    (data_dir / "snapshot.json").write_text(json.dumps(snap, sort_keys=True, separators=(",", ":")) + "\n")
    with (data_dir / "curves.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "conductor", "a1", "a2", "a3", "a4", "a6", "rank", "modular_degree", "optimal", "newform", "provenance"])
        for r in curves:
            w.writerow([r["label"], r["conductor"], *r["ainvs"], r["rank"], r["degree"], r["optimality"], r["newform"], "pari-recomputed"])
    oracle = cache / "al_oracle.json"
    if oracle.exists():
        oracle_dir.mkdir(parents=True, exist_ok=True)
        (oracle_dir / "al_quotient_genus.json").write_text(oracle.read_text())
    print(f"{len(records)} records, {len(curves)} curves, {len(deg5)} of modular degree 5")


def _fricke(signs: dict) -> int:
    out = 1
    for s in signs.values():
        out *= s
    return out
