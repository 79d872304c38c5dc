"""Decision engine: composes the filters into per-level verdicts with proof traces."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import lru_cache

from .arith import omega
from .cs import AuxMap, search_certificate
from .facts import (
    DENSITY5_CANDIDATES,
    GONALITY_TABLE_MAX,
    FactTable,
    facts,
    gonality_fact,
)
from .invariants import (
    OGG_PRIMES,
    abramovich_gonality_bound,
    genus,
    ogg_degree_bound_to_elliptic,
    quotient_genus,
    star_genus,
)
from .lattice import ExclusionResult, pentaelliptic_exclusion
from .lmfdb import LmfdbClient, NewformFactor, default_client, multiplicity

__all__ = [
    "RuleRecord",
    "Verdict",
    "Classifier",
    "Divergence",
    "LATTICE_SWEEP_LIMIT",
]

LATTICE_SWEEP_LIMIT = 468  # the Gram-form argument is run below this level
PENTA_DEGREE = 5


class Divergence(AssertionError):
    """A computed result disagrees with a published value."""


@dataclass
class RuleRecord:
    rule: str
    inputs: dict
    outputs: dict
    citation: str
    assumes_bsd: bool = False
    role: str = "primary"

    @property
    def applies(self) -> bool:
        return bool(self.outputs.get("applies"))

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Verdict:
    level: int
    density_degree_5: str  # yes | no | n/a | open
    quintic_points: str  # infinite | finite | open
    trace: list[RuleRecord] = field(default_factory=list)

    @property
    def assumptions(self) -> list[str]:
        out = []
        for r in self.trace:
            if r.assumes_bsd:
                out.append(f"ASSUMES_BSD ({r.rule})")
        return out

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "verdicts": {"density_degree_5": self.density_degree_5, "quintic_points": self.quintic_points},
            "trace": [r.to_json() for r in self.trace],
            "assumptions": self.assumptions,
        }


class Classifier:
    """Applies the case analysis level by level; all lookups are cached."""

    def __init__(self, client: LmfdbClient | None = None, table: FactTable | None = None):
        self.client = client or default_client()
        self.facts = table or facts()
        self._cache: dict = {}
        self.rules = {
            "degree-le4": self.rule_degree_le4,
            "gonality-5-witness": self.rule_gonality5,
            "candidate-exclusion": self.rule_candidate_exclusion,
            "rank0": self.rank0_rule,
            "dim-bound": self.dim_bound_rule,
            "debarre-fahlaoui": self.df_exclusion_rule,
            "no-translate-in-W5": self.rule_no_translate,
            "j0-rank-zero": self.rule_j0_rank_zero,
            "deg5-function": self.rule_deg5_function,
            "cs-no-deg5-function": self.rule_cs_p1,
            "positive-rank-open": self.rule_positive_rank_open,
        }

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- data ------------------------------------------------------------

    def factors(self, N: int) -> list[NewformFactor]:
        return self._memo(("factors", N), lambda: self.client.fetch_newform_factors(N))

    def positive_rank_curves(self, N: int):
        return self._memo(("posrank", N), lambda: self.client.positive_rank_elliptic_with_conductor_dividing(N))

    def degree_five_curves(self):
        return self._memo("deg5", self.client.modular_degree_five_curves)

    def gonality(self, N: int):
        return self._memo(("gon", N), lambda: gonality_fact(N))

    # -- pentaelliptic -----------------------------------------------------

    def pentaelliptic(self, N: int) -> ExclusionResult:
        """Rule out a degree-5 map to a positive-rank elliptic curve."""
        return self._memo(("penta", N), lambda: self._pentaelliptic(N))

    def _pentaelliptic(self, N: int) -> ExclusionResult:
        if N < LATTICE_SWEEP_LIMIT:
            res = pentaelliptic_exclusion(N, self.positive_rank_curves(N), self.degree_five_curves())
            if not res.trace:
                res.trace.append({"case": "vacuous", "reason": "no positive-rank curve of conductor dividing N"})
            for step in res.trace:
                step.setdefault("mechanism", "gram-form")
            return res
        bounds = {p: ogg_degree_bound_to_elliptic(N, p) for p in OGG_PRIMES if N % p}
        best = max(bounds, key=lambda p: bounds[p])
        step = {
            "mechanism": "ogg-degree-bound",
            "prime": best,
            "degree_bound": bounds[best],
            "abramovich": abramovich_gonality_bound(N),
        }
        if bounds[best] > PENTA_DEGREE:
            step["reason"] = f"every map to an elliptic curve has degree >= {bounds[best]}"
            return ExclusionResult(N, "EXCLUDED", [step])
        if abramovich_gonality_bound(N) > 2 * PENTA_DEGREE:
            step["reason"] = "a degree-5 map to E would give gonality <= 10"
            return ExclusionResult(N, "EXCLUDED", [step])
        step["reason"] = "no bound applies"
        return ExclusionResult(N, "UNDECIDED", [step])

    # -- rules -------------------------------------------------------------

    def has_infinitely_many_degree_le4(self, N: int) -> bool:
        return N in self.facts.degree_le4()

    def rule_degree_le4(self, N: int) -> RuleRecord:
        f = self.facts
        lists = [d for d, s in ((2, f.degree2), (3, f.degree3), (4, f.degree4)) if N in s]
        return RuleRecord("degree-le4", {"N": N}, {"applies": bool(lists), "degrees": lists}, "degree-2-3-4-lists")

    def rule_gonality5(self, N: int) -> RuleRecord:
        gf = self.gonality(N)
        ok = not self.has_infinitely_many_degree_le4(N) and gf.upper == PENTA_DEGREE
        return RuleRecord(
            "gonality-5-witness",
            {"N": N},
            {"applies": ok, "gonality": [gf.lower, gf.upper]},
            gf.source,
        )

    def rule_candidate_exclusion(self, N: int) -> RuleRecord:
        gf = self.gonality(N)
        g = genus(N)
        penta = self.pentaelliptic(N)
        ok = (
            not self.has_infinitely_many_degree_le4(N)
            and gf.lower > PENTA_DEGREE
            and g >= 12
            and penta.excluded
        )
        out = {
            "applies": ok,
            "genus": g,
            "gonality_lower": gf.lower,
            "pentaelliptic": penta.decision,
            "mechanism": sorted({s.get("mechanism", "") for s in penta.trace}),
        }
        return RuleRecord("candidate-exclusion", {"N": N}, out, f"gonality>=6-genus>=12-reduction;{gf.source}")

    def _j0_rank_zero(self, N: int) -> tuple[bool, list[str]]:
        pos = [f.label for f in self.factors(N) if f.analytic_rank > 0]
        return not pos, pos

    def rule_j0_rank_zero(self, N: int) -> RuleRecord:
        ok, pos = self._j0_rank_zero(N)
        return RuleRecord("j0-rank-zero", {"N": N}, {"applies": ok, "positive_rank_factors": pos}, "analytic-rank-0-implies-rank-0")

    def rank0_rule(self, N: int) -> RuleRecord:
        ok, pos = self._j0_rank_zero(N)
        gf = self.gonality(N)
        return RuleRecord(
            "rank0",
            {"N": N},
            {"applies": ok and gf.lower > PENTA_DEGREE, "positive_rank_factors": pos, "gonality_lower": gf.lower},
            "rank-zero-jacobian",
        )

    def dim_bound_rule(self, N: int) -> RuleRecord:
        g = genus(N)
        gf = self.gonality(N)
        pos = [(f.label, f.dimension) for f in self.factors(N) if f.analytic_rank > 0]
        small = [lab for lab, dim in pos if dim <= 2]
        ok = g >= 6 and gf.lower > PENTA_DEGREE and not small
        return RuleRecord(
            "dim-bound",
            {"N": N},
            {"applies": ok, "genus": g, "positive_rank_factors": [list(p) for p in pos], "small_positive": small},
            "translate-dimension-bound",
        )

    def df_exclusion_rule(self, N: int) -> RuleRecord:
        g = genus(N)
        gf = self.gonality(N)
        curves = [E.label for E in self.positive_rank_curves(N)]
        ok = g >= 9 and gf.lower > PENTA_DEGREE and not curves
        return RuleRecord(
            "debarre-fahlaoui",
            {"N": N},
            {"applies": ok, "genus": g, "positive_rank_curves": curves},
            "debarre-fahlaoui-needs-positive-rank-elliptic",
        )

    def rule_no_translate(self, N: int) -> RuleRecord:
        tag = self.facts.no_translate_verdict(N)
        return RuleRecord("no-translate-in-W5", {"N": N}, {"applies": tag is not None}, tag or "none")

    def rule_deg5_function(self, N: int) -> RuleRecord:
        tag = self.facts.deg5_function_source(N)
        return RuleRecord("deg5-function", {"N": N}, {"applies": tag is not None}, tag or "none")

    def cs_certificate(self, N: int):
        def run():
            gf = self.gonality(N)
            extra = ()
            if gf.upper == 4:
                extra = (AuxMap(4, 0, "degree-4 map to P1"),)
            return search_certificate(N, 0, extra)

        return self._memo(("cs", N), run)

    def rule_cs_p1(self, N: int) -> RuleRecord:
        cert = self.cs_certificate(N)
        out = {"applies": cert is not None}
        if cert is not None:
            out.update(aux=cert.aux, aux_degree=cert.aux_degree, aux_genus=cert.aux_genus, genus=cert.source_genus, bound=cert.bound)
        return RuleRecord("cs-no-deg5-function", {"N": N}, out, "castelnuovo-severi")

    def rule_positive_rank_open(self, N: int) -> RuleRecord:
        pos = [f for f in self.factors(N) if f.analytic_rank > 0]
        # analytic rank <= 1 per embedding gives the algebraic rank unconditionally
        bsd = any(f.analytic_rank >= 2 for f in pos)
        return RuleRecord(
            "positive-rank-open",
            {"N": N},
            {"applies": bool(pos), "positive_rank_factors": [f.label for f in pos]},
            "translates-of-positive-rank-factors-unresolved",
            assumes_bsd=bsd,
        )

    def replay(self, record: RuleRecord) -> bool:
        """Re-run a recorded rule and compare outputs."""
        again = self.rules[record.rule](**record.inputs)
        return again.outputs == record.outputs

    # -- candidates ----------------------------------------------------------

    def candidate_levels_density5(self, check: bool = True) -> list[int]:
        out = []
        for N in range(1, GONALITY_TABLE_MAX + 1):
            if self.has_infinitely_many_degree_le4(N):
                continue
            gf = self.gonality(N)
            if gf.lower > PENTA_DEGREE and genus(N) >= 12:
                continue
            out.append(N)
        if check and tuple(out) != DENSITY5_CANDIDATES:
            raise Divergence(f"candidate list {out} differs from the published one")
        return out

    # -- verdicts ------------------------------------------------------------

    def classify_density5(self, N: int) -> Verdict:
        return self._memo(("d5", N), lambda: self._density5(N))

    def _density5(self, N: int) -> Verdict:
        v = Verdict(N, "open", "open")
        r = self.rule_degree_le4(N)
        v.trace.append(r)
        if r.applies:
            v.density_degree_5 = "n/a"
            return v
        r = self.rule_gonality5(N)
        if r.applies:
            v.trace.append(r)
            v.density_degree_5 = "yes"
            return v
        if N > GONALITY_TABLE_MAX or N not in self.candidate_levels_density5(check=False):
            r = self.rule_candidate_exclusion(N)
            v.trace.append(r)
            v.density_degree_5 = "no" if r.applies else "open"
            return v
        fired = [rule(N) for rule in (self.rank0_rule, self.dim_bound_rule, self.df_exclusion_rule, self.rule_no_translate)]
        applying = [r for r in fired if r.applies]
        if applying:
            v.trace.append(applying[0])
            for extra in applying[1:]:
                extra.role = "corroboration"
                v.trace.append(extra)
            v.density_degree_5 = "no"
        return v

    def classify_quintic(self, N: int) -> Verdict:
        return self._memo(("q", N), lambda: self._quintic(N))

    def _quintic(self, N: int) -> Verdict:
        d5 = self.classify_density5(N)
        v = Verdict(N, d5.density_degree_5, "open", list(d5.trace))
        r = self.rule_deg5_function(N)
        if r.applies:
            v.trace.append(r)
            v.quintic_points = "infinite"
            return v
        if d5.density_degree_5 == "yes":
            v.quintic_points = "infinite"
            return v
        if d5.density_degree_5 == "no":
            # finitely many points of every degree <= 5
            v.quintic_points = "finite"
            return v
        if d5.density_degree_5 == "n/a":
            r0 = self.rule_j0_rank_zero(N)
            cs = self.rule_cs_p1(N)
            v.trace += [r0, cs]
            if r0.applies and cs.applies:
                v.quintic_points = "finite"
                return v
            if not r0.applies:
                v.trace.append(self.rule_positive_rank_open(N))
        return v

    # -- table of positive-rank factors on the open levels -------------------

    def deg5_function_column(self, N: int) -> str:
        if self.cs_certificate(N) is not None or self.gonality(N).lower > PENTA_DEGREE:
            return "no"
        return "?"

    def w4_column(self, N: int, A: NewformFactor) -> str:
        if A.dimension == 1 and A.level == N:
            E = [c for c in self.client.curves_with_conductor(N) if c.optimal and c.newform == A.label]
            if E and E[0].modular_degree <= 4:
                return "yes†"
        if (
            A.dimension == 1
            and A.level < N
            and multiplicity(N, A) == 2
            and omega(N) == 2
            and star_genus(N) == 1
            and all(s == 1 for _, s in A.atkin_lehner)
        ):
            return "yes*"
        if A.dimension == 2 and A.level == N and quotient_genus(N, N) == 2 and A.fricke == 1:
            return "yes⁺"
        return "?"

    def table1_rows(self, N: int) -> list[dict]:
        pos = [f for f in self.factors(N) if f.analytic_rank > 0 and f.dimension <= 2]
        pos.sort(key=lambda f: (f.level, len(f.label), f.label))
        rows = []
        for A in pos:
            rows.append(
                {
                    "N": N,
                    "genus": genus(N),
                    "deg5_function": self.deg5_function_column(N),
                    "A": A.label,
                    "dim": A.dimension,
                    "multiplicity": multiplicity(N, A),
                    "in_W4": self.w4_column(N, A),
                    "assumes_bsd": A.analytic_rank >= 2,
                }
            )
        return rows

    def render_table1(self, levels=None) -> list[dict]:
        from .facts import QUINTIC_OPEN

        out = []
        for N in sorted(levels or QUINTIC_OPEN):
            out.extend(self.table1_rows(N))
        return out


@lru_cache(maxsize=None)
def default_classifier() -> Classifier:
    return Classifier()


def level_mechanism(N: int) -> str:
    return "gram-form" if N < LATTICE_SWEEP_LIMIT else "ogg-degree-bound"

