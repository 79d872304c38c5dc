"""Command-line front end.

  x0quintic classify --level N | --range A..B
  x0quintic report --theorem {candidates|density5|quintic|table1|cs-tables}
  x0quintic sweep --pentaelliptic --max 467

Exit codes: 0 success, 2 divergence from a cited value, 3 missing data.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .classify import Classifier, Divergence
from .facts import GONALITY_TABLE_MAX, QUINTIC_FINITE, QUINTIC_INFINITE, QUINTIC_OPEN, facts
from .lmfdb import DataUnavailable, LmfdbClient, Snapshot
from .report import DENSITY5_MAX, DENSITY5_YES, THEOREMS, pentaelliptic_sweep

EXIT_OK, EXIT_DIVERGENCE, EXIT_DATA = 0, 2, 3


def expected_verdict(N: int) -> tuple[str | None, str | None]:
    """Cited (density degree 5, quintic points) for N, or None where nothing is cited."""
    if N > DENSITY5_MAX:
        return None, "finite"
    if N in facts().degree_le4():
        density = "n/a"
    else:
        density = "yes" if N in DENSITY5_YES else "no"
    if N > GONALITY_TABLE_MAX:
        return density, "finite"
    for label, levels in (("infinite", QUINTIC_INFINITE), ("finite", QUINTIC_FINITE), ("open", QUINTIC_OPEN)):
        if N in levels:
            return density, label
    return density, None


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or non-positive range {text!r}")
    return lo, hi


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("level must be positive")
    return n


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies suppress their defaults so flags work on either side of the command
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--offline", action="store_true", default=d(False), help="never touch the network")
    g.add_argument("--snapshot", metavar="PATH", default=d(None), help="snapshot file to read")
    g.add_argument("--format", choices=("text", "json"), default=d("text"))
    g.add_argument("--trace", action="store_true", default=d(False), help="print proof traces")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="x0quintic", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify levels")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--level", type=_positive)
    g.add_argument("--range", type=parse_range, metavar="A..B")

    r = sub.add_parser("report", parents=[common], help="regenerate a published result")
    r.add_argument("--theorem", choices=sorted(THEOREMS), required=True)

    s = sub.add_parser("sweep", parents=[common], help="pentaelliptic exclusion sweep")
    s.add_argument("--pentaelliptic", action="store_true", required=True)
    s.add_argument("--max", type=_positive, default=DENSITY5_MAX)
    return p


def _client(args) -> LmfdbClient:
    snap = Snapshot.load(args.snapshot) if args.snapshot else Snapshot.load()
    return LmfdbClient(snap, offline=args.offline)


def _emit(args, text_lines: list[str], payload) -> None:
    if args.format == "json":
        json.dump(payload, sys.stdout, indent=1, sort_keys=True, ensure_ascii=False)
        sys.stdout.write("\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _trace_lines(trace) -> list[str]:
    out = []
    for r in trace:
        flag = " ASSUMES_BSD" if r.assumes_bsd else ""
        role = "" if r.role == "primary" else f" ({r.role})"
        out.append(f"    {r.rule}{role} [{r.citation}]{flag} -> {json.dumps(r.outputs, ensure_ascii=False)}")
    return out


def cmd_classify(args, clf: Classifier) -> int:
    lo, hi = (args.level, args.level) if args.level else args.range
    verdicts, lines, mismatches = [], [], []
    for N in range(lo, hi + 1):
        v = clf.classify_quintic(N)
        verdicts.append(v.to_json())
        exp_d, exp_q = expected_verdict(N)
        bad = (exp_d is not None and exp_d != v.density_degree_5) or (exp_q is not None and exp_q != v.quintic_points)
        if bad:
            mismatches.append(N)
        mark = "  DIVERGES" if bad else ""
        extra = f"  [{'; '.join(v.assumptions)}]" if v.assumptions else ""
        lines.append(f"N={N}: density_degree_5={v.density_degree_5} quintic_points={v.quintic_points}{extra}{mark}")
        if args.trace:
            lines += _trace_lines(v.trace)
    yes = [v["level"] for v in verdicts if v["verdicts"]["density_degree_5"] == "yes"]
    if lo != hi:
        lines.append(f"density degree 5 at: {yes}; divergences: {mismatches}")
    payload = verdicts[0] if lo == hi else verdicts
    _emit(args, lines, payload)
    return EXIT_DIVERGENCE if mismatches else EXIT_OK


def _report_lines(rep: dict) -> list[str]:
    name = rep["report"]
    lines = []
    if name == "candidates":
        lines.append(f"candidate levels ({len(rep['levels'])}): {' '.join(map(str, rep['levels']))}")
    elif name == "density5":
        lines.append(f"N in {rep['range'][0]}..{rep['range'][1]}: counts {rep['counts']}")
        lines.append(f"density degree 5 exactly at: {rep['yes']}")
    elif name == "quintic":
        for k in ("infinite", "finite", "open"):
            lines.append(f"{k} ({len(rep[k])}): {' '.join(map(str, rep[k]))}")
    elif name == "table1":
        lines.append(f"{'N':>4} {'g':>3} {'deg5':>5}  {'A':<11} {'dim':>3} {'mult':>4}  W4")
        for r in rep["rows"]:
            bsd = "  ASSUMES_BSD" if r["assumes_bsd"] else ""
            lines.append(
                f"{r['N']:>4} {r['genus']:>3} {r['deg5_function']:>5}  {r['A']:<11} {r['dim']:>3} {r['multiplicity']:>4}  {r['in_W4']}{bsd}"
            )
    elif name == "cs-tables":
        for title, key in (("no degree-5 map to P1", "to_P1"), ("no degree-5 map to an elliptic curve", "to_elliptic")):
            lines.append(title)
            for r in rep[key]:
                lines.append(
                    f"  N={r['N']:<4} g={r['genus']:<3} Y={r['Y']:<8} deg={r['deg']} g(Y)={r['g_Y']:<3} bound={r['bound']:<3} excluded={r['excluded']}"
                )
    for e in rep["errata"]:
        lines.append(f"erratum {e['key']} {e['field']}: cited {e['cited']}, computed {e['computed']} ({e['reason']})")
    for d in rep["divergences"]:
        lines.append(f"DIVERGENCE {d['key']} {d['field']}: cited {d['cited']}, computed {d['computed']}")
    return lines


def cmd_report(args, clf: Classifier) -> int:
    rep = THEOREMS[args.theorem](clf)
    _emit(args, _report_lines(rep), rep)
    return EXIT_DIVERGENCE if rep["divergences"] else EXIT_OK


def cmd_sweep(args, clf: Classifier) -> int:
    rep = pentaelliptic_sweep(clf, hi=args.max)
    lines = []
    for lv in rep["levels"]:
        mech = sorted({s.get("mechanism", "") for s in lv["trace"]})
        lines.append(f"N={lv['level']}: {lv['decision']} ({', '.join(mech)}; {len(lv['trace'])} step(s))")
        if args.trace:
            for s in lv["trace"]:
                lines.append(f"    {s.get('curve', '-')}: case {s.get('case')} {s.get('reason', '')}")
    lines.append(f"undecided: {rep['undecided']}; {rep['seconds']} s")
    _emit(args, lines, rep)
    return EXIT_DIVERGENCE if rep["divergences"] else EXIT_OK


COMMANDS = {"classify": cmd_classify, "report": cmd_report, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        clf = Classifier(client=_client(args))
        code = COMMANDS[args.command](args, clf)
    except Divergence as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except DataUnavailable as exc:
        print(f"data unavailable: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data unavailable: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"[{args.command}] {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
