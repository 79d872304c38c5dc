import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from x0quintic.classify import Classifier, Divergence, default_classifier
from x0quintic.facts import DEGREE2, DEGREE3, DEGREE4, FactTable


@pytest.fixture(scope="module")
def clf():
    return default_classifier()


@pytest.mark.parametrize("N,val", [(109, False), (131, True), (1, True)])
def test_degree_le4_membership(clf, N, val):
    assert clf.has_infinitely_many_degree_le4(N) is val


def test_fact_lists_are_the_cited_ones():
    assert len(DEGREE2) == 55 and 131 in DEGREE2 and 109 not in DEGREE2
    assert max(DEGREE3) == 81 and 109 not in DEGREE3
    assert max(DEGREE4) == 191 and 109 not in DEGREE4


def test_candidates(clf):
    out = clf.candidate_levels_density5()
    assert 109 in out and len(out) == 17 and 131 not in out


def test_candidate_divergence_is_signalled(clf):
    # dropping 109 from the degree-4-free set changes nothing; adding it to the degree-2 list does
    table = FactTable(degree2=DEGREE2 | {109})
    with pytest.raises(Divergence):
        Classifier(clf.client, table).candidate_levels_density5()


def test_rank0_rule(clf):
    assert clf.rank0_rule(76).applies
    assert not clf.rank0_rule(109).applies
    assert clf.rule_j0_rank_zero(46).applies
    v = clf.classify_quintic(46)
    assert v.quintic_points == "finite"
    assert [r.rule for r in v.trace][-2:] == ["j0-rank-zero", "cs-no-deg5-function"]


def test_dim_bound_rule(clf):
    assert clf.dim_bound_rule(97).applies
    assert clf.dim_bound_rule(169).applies
    r = clf.dim_bound_rule(93)
    assert not r.applies and r.outputs["small_positive"]


def test_df_rule(clf):
    assert clf.df_exclusion_rule(93).applies
    assert clf.df_exclusion_rule(147).applies
    assert not clf.df_exclusion_rule(112).applies


def test_density5_examples(clf):
    v = clf.classify_density5(109)
    assert v.density_degree_5 == "yes" and v.trace[-1].rule == "gonality-5-witness"
    v = clf.classify_density5(117)
    assert v.density_degree_5 == "no" and v.trace[-1].rule == "no-translate-in-W5"
    assert clf.classify_density5(112).trace[-1].rule == "no-translate-in-W5"
    assert clf.classify_density5(50).density_degree_5 == "n/a"


def test_density5_rule_order_among_candidates(clf):
    primary = {N: clf.classify_density5(N).trace[1].rule for N in clf.candidate_levels_density5() if N != 109}
    assert primary[76] == "rank0"
    assert primary[97] == "dim-bound"
    assert primary[93] == "debarre-fahlaoui"
    assert set(primary.values()) <= {"rank0", "dim-bound", "debarre-fahlaoui", "no-translate-in-W5"}


def test_quintic_examples(clf):
    assert clf.classify_quintic(46).quintic_points == "finite"
    v = clf.classify_quintic(125)
    assert v.quintic_points == "infinite" and v.trace[-1].citation == "degeneracy-map-to-x0-25"
    assert clf.classify_quintic(77).quintic_points == "open"


def test_table1_examples(clf):
    rows = {r["N"]: r for r in clf.render_table1([74, 83, 92])}
    r = rows[74]
    assert (r["genus"], r["deg5_function"], r["A"], r["dim"], r["multiplicity"], r["in_W4"]) == (8, "?", "37.2.a.a", 1, 2, "yes*")
    r = rows[83]
    assert (r["genus"], r["deg5_function"], r["A"], r["dim"], r["multiplicity"], r["in_W4"]) == (7, "no", "83.2.a.a", 1, 1, "yes†")
    assert rows[92]["in_W4"] == "?"


def test_mechanism_recorded_past_468(clf):
    v = clf.classify_density5(500)
    assert v.density_degree_5 == "no"
    assert v.trace[-1].outputs["mechanism"] == ["ogg-degree-bound"]
    assert clf.classify_density5(300).trace[-1].outputs["mechanism"] == ["gram-form"]


def test_verdict_json_schema(clf):
    js = clf.classify_quintic(109).to_json()
    assert set(js) == {"level", "verdicts", "trace", "assumptions"}
    assert js["verdicts"] == {"density_degree_5": "yes", "quintic_points": "infinite"}


levels = st.integers(1, 467)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(levels)
def test_traces_replay(clf, N):
    for v in (clf.classify_density5(N), clf.classify_quintic(N)):
        for r in v.trace:
            assert clf.replay(r), (N, r.rule)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(levels)
def test_definite_verdicts_have_traces(clf, N):
    v = clf.classify_quintic(N)
    if v.density_degree_5 in ("yes", "no") or v.quintic_points in ("finite", "infinite"):
        assert v.trace
    for r in v.trace:
        if r.assumes_bsd:
            # only rules that read analytic ranks may rely on BSD
            assert "positive_rank_factors" in r.outputs


def test_bsd_flag_only_for_higher_analytic_rank(clf):
    for N in range(1, 192):
        for r in clf.classify_quintic(N).trace:
            if r.assumes_bsd:
                facs = {f.label: f for f in clf.factors(N)}
                assert any(facs[l].analytic_rank >= 2 for l in r.outputs["positive_rank_factors"])
