import math

import pytest
from hypothesis import given, strategies as st

from conftest import dags
from oracles import influential as brute_influential, lm_marginals, progeny_counts
from progeny_select.generators import (
    FIGURE1_AGENTS,
    FIGURE4_AGENTS,
    enumerate_dags,
    figure1_fixture,
    figure4_fixture,
    two_star,
)
from progeny_select.graph import build_dag
from progeny_select.influential import influential_set
from progeny_select.mechanisms import (
    OPTIMAL_BETA,
    InvalidBeta,
    beta_lm,
    default_mechanisms,
    get_mechanism,
    lald,
    ldm,
)

A1 = FIGURE1_AGENTS
A4 = FIGURE4_AGENTS


def test_optimal_beta_value():
    assert OPTIMAL_BETA == pytest.approx(0.5906161091496412, abs=1e-15)


def test_lm_on_figure1():
    d = beta_lm(figure1_fixture())
    got = [d.marginal(A1[t]) for t in ("i4", "i3", "i2", "i1")]
    assert got == pytest.approx([0.59, 0.13, 0.11, 0.09], abs=0.005)
    # closed forms with progenies 7, 6, 5, 4
    rest = 1 - OPTIMAL_BETA
    want = [OPTIMAL_BETA, rest * math.log2(5 / 4), rest * math.log2(6 / 5), rest * math.log2(7 / 6)]
    assert got == pytest.approx(want, abs=1e-12)
    assert d.marginal(A1["j"]) == 0.0


def test_lm_single_member_gets_beta_and_rest_is_empty():
    g = two_star(3)
    d = beta_lm(g, 0.75)
    assert d.probability([4]) == pytest.approx(0.75)
    assert d.probability([]) == pytest.approx(0.25)
    assert d.meta == {"beta": 0.75, "incentive_compatible": True}


def test_lm_beta_one_is_deterministic():
    d = beta_lm(figure1_fixture(), 1.0)
    assert d.outcomes == ((((A1["i4"],)), 1.0),)


@pytest.mark.parametrize("beta", [-0.1, 1.5, float("nan")])
def test_invalid_beta(beta):
    with pytest.raises(InvalidBeta):
        beta_lm(figure1_fixture(), beta)
    with pytest.raises(InvalidBeta):
        get_mechanism("beta-lm", beta)


def test_low_beta_is_flagged():
    assert beta_lm(build_dag(2, []), 0.3).meta["incentive_compatible"] is False


def test_ldm_on_figure1_and_two_star():
    assert ldm(figure1_fixture()).outcomes == (((A1["i3"], A1["i4"]), 1.0),)
    for y in (2, 5, 9):
        assert ldm(two_star(y)).outcomes == (((y + 1,), 1.0),)


def test_ldm_single_agent():
    d = ldm(build_dag(1, []))
    assert d.to_dict()["outcomes"] == [{"set": [1], "p": 1.0}]


def test_lald_on_figure4():
    d = lald(figure4_fixture())
    assert d.marginal(A4["i4"]) == pytest.approx(1.0, abs=1e-12)
    assert d.marginal(A4["i1"]) == pytest.approx(0.59, abs=0.005)
    assert d.probability([A4["i1"], A4["i4"]]) == pytest.approx(OPTIMAL_BETA, abs=1e-12)
    assert d.probability([A4["i4"]]) == pytest.approx(1 - OPTIMAL_BETA, abs=1e-12)
    assert d.meta["case"] == "extended"


def test_lald_nested_case_matches_formula():
    # S1 = S2 on a chain: last member always, companion from the rest
    g = figure1_fixture()
    assert influential_set(g, 2).members == influential_set(g, 1).members
    d = lald(g)
    rest = 1 - OPTIMAL_BETA
    assert d.marginal(A1["i4"]) == pytest.approx(1.0)
    assert d.marginal(A1["i3"]) == pytest.approx(OPTIMAL_BETA)
    assert d.marginal(A1["i2"]) == pytest.approx(rest * math.log2(6 / 5))
    assert d.marginal(A1["i1"]) == pytest.approx(rest * math.log2(7 / 6))
    assert d.meta["case"] == "nested"


def test_lald_tied_case():
    # last 2-set member sits inside the 1-set while the 2-set is larger
    g = build_dag(5, [(1, 5), (4, 2), (4, 3), (5, 4)])
    s1, s2 = influential_set(g, 1).members, influential_set(g, 2).members
    assert s2[-1] in s1 and set(s2) - set(s1)
    d = lald(g)
    assert d.meta["case"] == "tied"
    assert d.marginal(s2[-1]) == pytest.approx(1.0)
    rest = [a for a in s1 if a != s2[-1]]
    assert d.marginal(rest[-1]) == pytest.approx(OPTIMAL_BETA)


def _check_distribution(d, g, k):
    assert all(p > 0 for _, p in d.outcomes)
    assert d.total == pytest.approx(1.0, abs=1e-12)
    subsets = [s for s, _ in d.outcomes]
    assert len(set(subsets)) == len(subsets)
    assert all(len(s) <= k and list(s) == sorted(set(s)) for s in subsets)
    assert all(1 <= a <= g.n for s in subsets for a in s)
    assert sum(d.marginals) == pytest.approx(sum(p * len(s) for s, p in d.outcomes))


@given(dags(max_n=10))
def test_every_mechanism_returns_a_distribution(g):
    for m in default_mechanisms() + [get_mechanism("beta-lm", 0.3)]:
        _check_distribution(m(g), g, m.k)


@given(dags(max_n=10), st.floats(0, 1))
def test_lm_singleton_mass_fits(g, beta):
    # mass on singletons telescopes to beta + (1 - beta) log2(P(i_1)/P(i_m)) <= 1
    s1 = influential_set(g, 1).members
    c = g.progeny_counts
    d = beta_lm(g, beta)
    single = math.fsum(p for s, p in d.outcomes if len(s) == 1)
    assert single == pytest.approx(beta + (1 - beta) * math.log2(c[s1[0]] / c[s1[-1]]), abs=1e-12)
    assert single <= 1 + 1e-12


@pytest.mark.parametrize("beta", [0.5, OPTIMAL_BETA, 0.75, 1.0])
def test_lm_marginals_match_reference_on_small_dags(beta):
    for n in range(1, 5):
        for g in enumerate_dags(n):
            d = beta_lm(g, beta)
            assert list(d.marginals) == pytest.approx(lm_marginals(n, g.edges, beta), abs=1e-12)


def test_ldm_support_on_small_dags():
    for n in range(1, 5):
        for g in enumerate_dags(n):
            s1 = brute_influential(n, g.edges, 1)
            assert ldm(g).outcomes == ((tuple(sorted(s1[-2:])), 1.0),)


def test_lald_always_selects_last_two_set_member():
    for n in range(1, 5):
        for g in enumerate_dags(n):
            d = lald(g)
            last = brute_influential(n, g.edges, 2)[-1]
            assert d.marginal(last) == pytest.approx(1.0)
            assert all(len(s) == 2 or s == (last,) for s, _ in d.outcomes)


def test_to_dict_lists_every_agent():
    d = beta_lm(figure1_fixture()).to_dict()
    assert sorted(d["marginals"], key=int) == [str(a) for a in range(1, 9)]
    assert d["k"] == 1


def test_mechanism_lookup():
    assert get_mechanism("LDM").label == "ldm"
    assert get_mechanism("beta_lm", 0.5).label == "beta-lm(beta=0.5)"
    with pytest.raises(ValueError):
        get_mechanism("ldm", 0.5)
    with pytest.raises(ValueError):
        get_mechanism("nope")


def test_progeny_reference_agrees_on_fixture():
    g = figure4_fixture()
    assert list(g.progeny_counts) == progeny_counts(g.n, g.edges)
