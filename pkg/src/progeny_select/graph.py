"""Immutable DAGs, progeny (in-reachability), the strict ranking order, and edge hiding.

An edge ``(i, j)`` means *i follows j*.  The progeny of ``j`` is every agent with a
directed path **to** ``j`` (plus ``j`` itself), so influence flows against the edge
direction: the sink of a chain has the largest progeny.

Agents are 1-based everywhere in the public API.  Internally agent ``i`` is bit
``i - 1`` of a Python int used as a bitset.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class lazy:
    """Compute-once attribute for immutable objects (no locking, unlike ``cached_property``)."""

    def __init__(self, fn):
        self.fn = fn
        self.name = fn.__name__
        self.__doc__ = fn.__doc__

    def __get__(self, obj, cls=None):
        if obj is None:
            return self
        value = obj.__dict__[self.name] = self.fn(obj)
        return value


class GraphError(ValueError):
    """Base class for malformed graph input."""


class CyclicGraph(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class IdOutOfRange(GraphError):
    pass


class NotAnOutEdge(GraphError):
    pass


@dataclass(frozen=True)
class ProgenySet:
    agent: int
    members: frozenset[int]

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Dag:
    """A validated, immutable labeled DAG on agents ``1..n``.

    Build instances through :func:`build_dag`; the constructor trusts its input.
    Derived data (progeny bitsets, ranking, influential sets) is computed lazily
    and cached on the instance, which is safe because nothing ever mutates it.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    # adjacency -----------------------------------------------------------------

    @lazy
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @lazy
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """``out_neighbors[i]`` lists the agents ``i`` follows (index 0 unused)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.sorted_edges:
            adj[i].append(j)
        return tuple(map(tuple, adj))

    @lazy
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.sorted_edges:
            adj[j].append(i)
        return tuple(map(tuple, adj))

    @lazy
    def topological_order(self) -> tuple[int, ...]:
        order = _kahn(self.n, self.out_neighbors)
        assert order is not None, "Dag built without validation"
        return order

    def out_edges(self, i: int) -> frozenset[tuple[int, int]]:
        _check_id(self.n, i)
        return frozenset((i, j) for j in self.out_neighbors[i])

    # reachability ----------------------------------------------------------------

    @lazy
    def progeny_masks(self) -> tuple[int, ...]:
        """Bitset of the progeny of each agent, self included (index 0 unused)."""
        masks = [0] * (self.n + 1)
        preds = self.in_neighbors
        for v in self.topological_order:
            m = 1 << (v - 1)
            for a in preds[v]:
                m |= masks[a]
            masks[v] = m
        return tuple(masks)

    @lazy
    def descendant_masks(self) -> tuple[int, ...]:
        """Bitset of agents reachable from each agent, self excluded."""
        masks = [0] * (self.n + 1)
        succ = self.out_neighbors
        for v in reversed(self.topological_order):
            m = 0
            for s in succ[v]:
                m |= masks[s] | (1 << (s - 1))
            masks[v] = m
        return tuple(masks)

    @lazy
    def progeny_counts(self) -> tuple[int, ...]:
        """``progeny_counts[i] == |P(i)|``; index 0 holds 0."""
        return (0,) + tuple(m.bit_count() for m in self.progeny_masks[1:])

    def reaches(self, j: int, i: int) -> bool:
        """True when ``j`` is in the progeny of ``i`` (including ``j == i``)."""
        return bool(self.progeny_masks[i] >> (j - 1) & 1)

    @lazy
    def ranking(self) -> tuple[int, ...]:
        counts = self.progeny_counts
        return tuple(sorted(range(1, self.n + 1), key=lambda a: (-counts[a], -a)))

    @lazy
    def rank_of(self) -> tuple[int, ...]:
        """0-based position of each agent in :attr:`ranking` (index 0 unused)."""
        pos = [0] * (self.n + 1)
        for t, a in enumerate(self.ranking):
            pos[a] = t
        return tuple(pos)

    def precedes(self, i: int, j: int) -> bool:
        """The strict order: ``i`` beats ``j`` on progeny, ties to the larger id."""
        ci, cj = self.progeny_counts[i], self.progeny_counts[j]
        return ci > cj or (ci == cj and i > j)

    # serialization ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @lazy
    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, edges={sorted(self.edges)})"


def _check_id(n: int, i: int) -> None:
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= n:
        raise IdOutOfRange(f"agent id {i!r} outside 1..{n}")


def _kahn(n: int, succ: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    indeg = [0] * (n + 1)
    for v in range(1, n + 1):
        for s in succ[v]:
            indeg[s] += 1
    ready = [v for v in range(n, 0, -1) if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for s in succ[v]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
    return tuple(order) if len(order) == n else None


def _find_cycle_edge(n: int, succ: Sequence[Sequence[int]]) -> tuple[int, int]:
    color = [0] * (n + 1)
    for root in range(1, n + 1):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            for s in it:
                if color[s] == 1:
                    return (v, s)
                if color[s] == 0:
                    color[s] = 1
                    stack.append((s, iter(succ[s])))
                    break
            else:
                color[v] = 2
                stack.pop()
    raise AssertionError("no cycle found")


def build_dag(n: int, edges: Iterable[Sequence[int]]) -> Dag:
    """Validate ``edges`` over agents ``1..n`` and return a :class:`Dag`.

    Raises one of :class:`IdOutOfRange`, :class:`SelfLoop`,
    :class:`DuplicateEdge` or :class:`CyclicGraph`, naming the offending edge.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GraphError(f"agent count must be a positive integer, got {n!r}")
    seen: set[tuple[int, int]] = set()
    succ: list[list[int]] = [[] for _ in range(n + 1)]
    for raw in edges:
        if len(raw) != 2:
            raise GraphError(f"edge {raw!r} is not a pair")
        i, j = raw
        for v in (i, j):
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
                raise IdOutOfRange(f"edge ({i!r}, {j!r}): id {v!r} outside 1..{n}")
        if i == j:
            raise SelfLoop(f"edge ({i}, {j}) is a self-loop")
        if (i, j) in seen:
            raise DuplicateEdge(f"edge ({i}, {j}) appears more than once")
        seen.add((i, j))
        succ[i].append(j)
    if _kahn(n, succ) is None:
        i, j = _find_cycle_edge(n, succ)
        raise CyclicGraph(f"edge ({i}, {j}) closes a cycle")
    return Dag(n, frozenset(seen))


def dag_from_dict(data: dict) -> Dag:
    """Parse the ``{"n": int, "edges": [[i, j], ...]}`` graph format."""
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise GraphError('graph JSON must be an object with keys "n" and "edges"')
    edges = data["edges"]
    if not isinstance(edges, list) or any(not isinstance(e, list) for e in edges):
        raise GraphError('"edges" must be a list of [i, j] pairs')
    return build_dag(data["n"], [tuple(e) for e in edges])


def dag_from_json(text: str) -> Dag:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON: {exc}") from exc
    return dag_from_dict(data)


def progeny(g: Dag, i: int) -> ProgenySet:
    """Agents with a directed path to ``i``, together with ``i`` itself."""
    _check_id(g.n, i)
    mask = g.progeny_masks[i]
    return ProgenySet(i, frozenset(b + 1 for b in range(g.n) if mask >> b & 1))


def ranking(g: Dag) -> tuple[int, ...]:
    """All agents from highest to lowest rank."""
    return g.ranking


def hide_edges(g: Dag, i: int, subset: Iterable[tuple[int, int]]) -> Dag:
    """Return a copy of ``g`` with the given out-edges of ``i`` removed."""
    _check_id(g.n, i)
    subset = frozenset(tuple(e) for e in subset)
    for e in subset:
        if e[0] != i or e not in g.edges:
            raise NotAnOutEdge(f"edge {e} is not an out-edge of agent {i}")
    if not subset:
        return g
    # removing edges cannot create a cycle
    return Dag(g.n, g.edges - subset)
