"""Graph fixtures, adversarial families, exhaustive enumeration and seeded random DAGs.

The named fixtures are defined by the properties they must satisfy (progeny
profiles and influential-set memberships).  Each constructor checks those
properties before returning and raises :class:`FixtureError` if one fails.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from .graph import Dag, _kahn, build_dag, hide_edges
from .influential import influential_set
from .rng import SplitMix64

MAX_ENUMERATION_N = 5


class InvalidSize(ValueError):
    pass


class NTooLarge(ValueError):
    pass


class FixtureError(AssertionError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise FixtureError(msg)


def _profile(g: Dag, agents) -> tuple[int, ...]:
    return tuple(g.progeny_counts[a] for a in agents)


# Agent ids of the marked agents in the fixtures below.
FIGURE1_AGENTS = {"i1": 1, "i2": 2, "i3": 3, "i4": 4, "j": 8}
FIGURE4_AGENTS = {"i1": 1, "i2": 7, "i3": 8, "i4": 9, "j": 12}


def figure1_fixture() -> Dag:
    """Path 4 -> 3 -> 2 -> 1 with leaves 5, 6, 7 following agent 4, and an isolated agent 8.

    Progenies of agents 1..4 are 7, 6, 5, 4 and all four form the 1-influential set.
    """
    g = build_dag(8, [(4, 3), (3, 2), (2, 1), (5, 4), (6, 4), (7, 4)])
    a = FIGURE1_AGENTS
    marked = (a["i1"], a["i2"], a["i3"], a["i4"])
    _require(_profile(g, marked) == (7, 6, 5, 4), f"figure1 profile {_profile(g, marked)}")
    _require(g.ranking[:4] == marked, f"figure1 ranking {g.ranking}")
    _require(influential_set(g, 1).members == marked, "figure1 1-influential set")
    _require(g.precedes(a["i4"], a["j"]), "figure1: j must rank below i4")
    return g


def two_star(y: int) -> Dag:
    """Two disjoint stars whose hubs both have progeny ``y``.

    Hub ``1`` owns leaves ``2..y``; hub ``y + 1`` owns leaves ``y + 2..2y``, so the
    second hub wins the tie and is the only member of the 1-influential set.
    """
    if not isinstance(y, int) or y < 1:
        raise InvalidSize(f"hub progeny y must be a positive integer, got {y!r}")
    lo, hi = 1, y + 1
    edges = [(lo + t, lo) for t in range(1, y)] + [(hi + t, hi) for t in range(1, y)]
    g = build_dag(2 * y, edges)
    _require(_profile(g, (hi, lo)) == (y, y), "two_star hub progeny")
    _require(influential_set(g, 1).members == (hi,), "two_star 1-influential set")
    return g


def figure3_networks() -> tuple[Dag, Dag, Dag]:
    """The chain ``4 -> 3 -> 2 -> 1`` and the two graphs reached by hiding one edge.

    ``(b)`` drops ``(2, 1)`` and ``(c)`` drops ``(3, 2)``.
    """
    a = build_dag(4, [(4, 3), (3, 2), (2, 1)])
    b = hide_edges(a, 2, {(2, 1)})
    c = hide_edges(a, 3, {(3, 2)})
    agents = (1, 2, 3, 4)
    for g, want in ((a, (4, 3, 2, 1)), (b, (1, 3, 2, 1)), (c, (2, 1, 2, 1))):
        _require(_profile(g, agents) == want, f"figure3 profile {_profile(g, agents)} != {want}")
    return a, b, c


def figure4_fixture() -> Dag:
    """A singleton 1-influential set inside a four-agent 2-influential set.

    Agent 1 is a hub with leaves 2..6 (progeny 6).  A separate path
    ``9 -> 8 -> 7`` has leaves 10 and 11 following agent 9, giving progenies
    5, 4, 3 for agents 7, 8, 9.  Agent 12 is isolated.
    """
    edges = [(t, 1) for t in range(2, 7)] + [(9, 8), (8, 7), (10, 9), (11, 9)]
    g = build_dag(12, edges)
    a = FIGURE4_AGENTS
    marked = (a["i1"], a["i2"], a["i3"], a["i4"])
    _require(_profile(g, marked) == (6, 5, 4, 3), f"figure4 profile {_profile(g, marked)}")
    _require(influential_set(g, 1).members == (a["i1"],), "figure4 1-influential set")
    _require(influential_set(g, 2).members == marked, "figure4 2-influential set")
    _require(not g.reaches(a["i2"], a["i1"]), "figure4: i2 must lie outside P(i1)")
    _require(g.precedes(a["i4"], a["j"]), "figure4: j must rank below i4")
    return g


def lm_tight_chain(m: int) -> Dag:
    """A directed path ``m -> m-1 -> ... -> 1``; agent ``t`` has progeny ``m - t + 1``."""
    if not isinstance(m, int) or m < 2:
        raise InvalidSize(f"chain length must be an integer >= 2, got {m!r}")
    return Dag(m, frozenset((t + 1, t) for t in range(1, m)))


def path(m: int) -> Dag:
    if not isinstance(m, int) or m < 1:
        raise InvalidSize(f"path length must be a positive integer, got {m!r}")
    return Dag(m, frozenset((t + 1, t) for t in range(1, m)))


def enumerate_dags(n: int) -> Iterator[Dag]:
    """Every labeled DAG on ``n`` agents, each exactly once.

    Each unordered pair is absent, oriented low->high, or high->low; the
    orientations containing a cycle are filtered out.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidSize(f"n must be a positive integer, got {n!r}")
    if n > MAX_ENUMERATION_N:
        raise NTooLarge(f"enumeration is capped at n = {MAX_ENUMERATION_N}, got {n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for states in product((0, 1, 2), repeat=len(pairs)):
        edges = []
        succ: list[list[int]] = [[] for _ in range(n + 1)]
        for (i, j), s in zip(pairs, states):
            if s == 1:
                edges.append((i, j))
                succ[i].append(j)
            elif s == 2:
                edges.append((j, i))
                succ[j].append(i)
        if _kahn(n, succ) is not None:
            yield Dag(n, frozenset(edges))


def exhaustive_corpus(n_max: int = MAX_ENUMERATION_N) -> Iterator[Dag]:
    for n in range(1, n_max + 1):
        yield from enumerate_dags(n)


def random_dag(n: int, edge_prob: float, seed: int, max_out_degree: int | None = None) -> Dag:
    """Seeded random DAG over a shuffled topological order.

    Agents ``1..n`` are shuffled into an order; every pair ``(a, b)`` with ``a``
    earlier than ``b`` then draws one uniform number and becomes the edge
    ``a -> b`` when it falls below ``edge_prob``.  Pairs are visited row by row,
    and the draw is consumed even when ``max_out_degree`` blocks the edge.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidSize(f"n must be a positive integer, got {n!r}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must lie in [0, 1], got {edge_prob!r}")
    rng = SplitMix64(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = []
    for a in range(n):
        degree = 0
        for b in range(a + 1, n):
            if rng.random() < edge_prob and (max_out_degree is None or degree < max_out_degree):
                edges.append((order[a], order[b]))
                degree += 1
    return Dag(n, frozenset(edges))


def random_corpus(
    count: int,
    n_max: int,
    seed: int,
    max_out_degree: int | None = 6,
    n_min: int = 1,
) -> Iterator[Dag]:
    """``count`` random DAGs with sizes in ``n_min..n_max`` and edge densities in [0, 1).

    A master generator seeded with ``seed`` draws, per graph, the size, the edge
    probability and the seed passed to :func:`random_dag`, in that order.
    """
    if n_min < 1 or n_max < n_min:
        raise InvalidSize(f"need 1 <= n_min <= n_max, got {n_min}..{n_max}")
    master = SplitMix64(seed)
    for _ in range(count):
        n = n_min + master.below(n_max - n_min + 1)
        p = master.random()
        yield random_dag(n, p, master.next_u64(), max_out_degree)


@dataclass(frozen=True)
class GraphFamily:
    name: str
    build: Callable[..., Dag]

    @property
    def params(self) -> tuple[str, ...]:
        return tuple(inspect.signature(self.build).parameters)

    def __call__(self, **params) -> Dag:
        unknown = set(params) - set(self.params)
        if unknown:
            raise InvalidSize(f"family {self.name!r} takes {self.params}, got {sorted(unknown)}")
        required = [
            name
            for name, prm in inspect.signature(self.build).parameters.items()
            if prm.default is inspect.Parameter.empty
        ]
        missing = [r for r in required if r not in params]
        if missing:
            raise InvalidSize(f"family {self.name!r} needs {missing}")
        return self.build(**params)


def _figure3(variant: str) -> Callable[[], Dag]:
    idx = "abc".index(variant)
    return lambda: figure3_networks()[idx]


def _random_family(n: int, p: float, seed: int, max_out_degree: int | None = None) -> Dag:
    return random_dag(n, p, seed, max_out_degree)


FAMILIES: dict[str, GraphFamily] = {
    f.name: f
    for f in (
        GraphFamily("figure1", figure1_fixture),
        GraphFamily("figure3a", _figure3("a")),
        GraphFamily("figure3b", _figure3("b")),
        GraphFamily("figure3c", _figure3("c")),
        GraphFamily("figure4", figure4_fixture),
        GraphFamily("two_star", two_star),
        GraphFamily("lm_tight_chain", lm_tight_chain),
        GraphFamily("path", path),
        GraphFamily("random", _random_family),
    )
}


def build_family(name: str, **params) -> Dag:
    key = name.replace("-", "_")
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    return FAMILIES[key](**params)
