from itertools import combinations

import pytest
from hypothesis import given

from conftest import dags
from oracles import influential as brute_influential
from progeny_select.generators import (
    FIGURE1_AGENTS,
    FIGURE4_AGENTS,
    enumerate_dags,
    figure1_fixture,
    figure4_fixture,
    random_corpus,
    two_star,
)
from progeny_select.graph import build_dag, hide_edges
from progeny_select.influential import UnsupportedK, check_structure, influential_set


@pytest.mark.parametrize("k", [1, 2])
def test_matches_definition_on_all_small_dags(k):
    for n in range(1, 6):
        for g in enumerate_dags(n):
            assert influential_set(g, k).members == brute_influential(n, g.edges, k), g


@pytest.mark.parametrize("k", [1, 2])
@given(g=dags(max_n=9))
def test_matches_definition_on_larger_dags(k, g):
    assert influential_set(g, k).members == brute_influential(g.n, g.edges, k)


def test_figure1_one_set():
    a = FIGURE1_AGENTS
    s = influential_set(figure1_fixture(), 1)
    assert s.members == (a["i1"], a["i2"], a["i3"], a["i4"])
    assert a["j"] not in s
    assert s.last == a["i4"]


def test_figure4_sets():
    a = FIGURE4_AGENTS
    g = figure4_fixture()
    assert influential_set(g, 1).members == (a["i1"],)
    assert influential_set(g, 2).members == (a["i1"], a["i2"], a["i3"], a["i4"])


def test_two_star_one_set_is_the_winning_hub():
    assert influential_set(two_star(5), 1).members == (6,)


def test_single_agent():
    g = build_dag(1, [])
    assert influential_set(g, 1).members == (1,)
    assert influential_set(g, 2).members == (1,)


def test_unsupported_k():
    with pytest.raises(UnsupportedK):
        influential_set(build_dag(3, []), 3)


def _beaten_by(g, i):
    c = g.progeny_counts
    return sum((c[a], a) > (c[i], i) for a in range(1, g.n + 1) if a != i)


def test_partial_hiding_never_ranks_higher_than_full_hiding():
    # the membership test hides every out-edge; no smaller subset can do better
    for n in range(1, 5):
        for g in enumerate_dags(n):
            for i in range(1, n + 1):
                out = sorted(g.out_edges(i))
                full = _beaten_by(hide_edges(g, i, out), i)
                for r in range(len(out)):
                    for sub in combinations(out, r):
                        assert _beaten_by(hide_edges(g, i, sub), i) >= full


def test_structure_report_on_figure1():
    g = figure1_fixture()
    rep = check_structure(g, influential_set(g, 1))
    assert rep.passed, rep.to_dict()
    # lowest member still carries at least half the top progeny: 4 >= 7 / 2
    assert 2 * g.progeny_counts[FIGURE1_AGENTS["i4"]] >= g.progeny_counts[FIGURE1_AGENTS["i1"]]


def test_structure_report_on_figure4_takes_split_branch():
    g = figure4_fixture()
    a = FIGURE4_AGENTS
    assert not g.reaches(a["i2"], a["i1"])
    rep = check_structure(g, influential_set(g, 2))
    assert rep.passed
    assert "split-chain" in {c.name for c in rep.checks}


def test_structure_holds_on_random_graphs():
    for g in random_corpus(1000, 12, seed=7, max_out_degree=None):
        for k in (1, 2):
            rep = check_structure(g, influential_set(g, k))
            assert rep.passed, (g, rep.to_dict())


@given(dags(max_n=9))
def test_one_set_inside_two_set(g):
    s1, s2 = influential_set(g, 1), influential_set(g, 2)
    assert set(s1.members) <= set(s2.members)
    assert s1.members[0] == g.ranking[0]
    if g.n >= 2:
        assert s2.members[:2] == g.ranking[:2]


def test_structure_check_catches_a_broken_set():
    from progeny_select.influential import InfluentialSet

    g = build_dag(3, [])
    rep = check_structure(g, InfluentialSet(1, (3, 2)))
    assert not rep.passed
    assert {c.name for c in rep.failures()} >= {"chain"}
