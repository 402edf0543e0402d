import pytest

from oracles import acyclic_count
from progeny_select.generators import (
    FAMILIES,
    InvalidSize,
    NTooLarge,
    build_family,
    enumerate_dags,
    figure1_fixture,
    figure3_networks,
    figure4_fixture,
    lm_tight_chain,
    random_corpus,
    random_dag,
    two_star,
)
from progeny_select.graph import dag_from_json
from progeny_select.rng import SplitMix64


def test_splitmix_reference_vectors():
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    r = SplitMix64(1234567)
    assert [r.next_u64() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_splitmix_helpers():
    r = SplitMix64(5)
    xs = [r.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert all(0 <= r.below(7) < 7 for _ in range(1000))
    items = list(range(20))
    r.shuffle(items)
    assert sorted(items) == list(range(20))
    with pytest.raises(ValueError):
        r.below(0)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 25), (4, 543)])
def test_enumeration_counts(n, count):
    graphs = list(enumerate_dags(n))
    assert len(graphs) == count
    assert len(set(graphs)) == count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_nilpotent_count(n):
    assert len(list(enumerate_dags(n))) == acyclic_count(n)


def test_enumeration_n5_count():
    assert sum(1 for _ in enumerate_dags(5)) == 29281


def test_enumeration_limits():
    with pytest.raises(NTooLarge):
        next(enumerate_dags(6))
    with pytest.raises(InvalidSize):
        next(enumerate_dags(0))


def test_random_dag_extremes():
    g = random_dag(7, 0.0, seed=3)
    assert g.edges == frozenset()
    g = random_dag(7, 1.0, seed=3)
    assert len(g.edges) == 21
    assert max(g.progeny_counts) == 7


def test_random_dag_is_deterministic():
    a = random_dag(10, 0.3, seed=42)
    b = random_dag(10, 0.3, seed=42)
    assert a.to_json() == b.to_json()
    assert a != random_dag(10, 0.3, seed=43)


def test_random_dag_out_degree_cap():
    g = random_dag(12, 1.0, seed=1, max_out_degree=3)
    assert max(len(out) for out in g.out_neighbors) == 3


def test_random_dag_validates():
    with pytest.raises(ValueError):
        random_dag(3, 1.5, seed=0)
    with pytest.raises(InvalidSize):
        random_dag(0, 0.5, seed=0)


def test_random_corpus_reproduces_and_passes_validation():
    a = [g.to_json() for g in random_corpus(200, 10, seed=9)]
    assert a == [g.to_json() for g in random_corpus(200, 10, seed=9)]
    for text in a:
        g = dag_from_json(text)
        assert 1 <= g.n <= 10
        assert max(len(o) for o in g.out_neighbors) <= 6


def test_fixtures_build():
    assert figure1_fixture().n == 8
    assert figure4_fixture().n == 12
    a, b, c = figure3_networks()
    assert a.n == b.n == c.n == 4


def test_two_star_shape():
    g = two_star(5)
    assert g.n == 10
    assert len(g.edges) == 8
    with pytest.raises(InvalidSize):
        two_star(0)


def test_chain_shape():
    g = lm_tight_chain(100)
    assert g.n == 100
    assert [g.progeny_counts[t] for t in (1, 50, 100)] == [100, 51, 1]
    with pytest.raises(InvalidSize):
        lm_tight_chain(1)


def test_family_lookup():
    assert build_family("two-star", y=3) == two_star(3)
    assert build_family("random", n=5, p=0.5, seed=1) == random_dag(5, 0.5, 1)
    with pytest.raises(KeyError):
        build_family("nope")
    with pytest.raises(InvalidSize):
        build_family("two_star")
    with pytest.raises(InvalidSize):
        build_family("figure1", y=3)
    assert set(FAMILIES["random"].params) == {"n", "p", "seed", "max_out_degree"}
