"""Brute-force incentive-compatibility oracle.

A mechanism is manipulable on a graph when some agent can hide a subset of its
own out-edges and end up selected with strictly higher probability.  The
oracle tries every non-empty subset for every agent, so its cost is
``sum_i 2**outdeg(i)`` mechanism evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from ..graph import Dag, hide_edges
from ..mechanisms import TOLERANCE, Mechanism

MAX_WITNESSES = 50


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Violation:
    agent: int
    hidden: tuple[tuple[int, int], ...]
    x_before: float
    x_after: float

    def to_dict(self) -> dict:
        return {
            "agent": self.agent,
            "hidden": [list(e) for e in self.hidden],
            "x_before": self.x_before,
            "x_after": self.x_after,
        }


@dataclass
class IcReport:
    mechanism: str
    graph: Dag
    violations: list[Violation] = field(default_factory=list)
    subsets_examined: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "graph": self.graph.to_dict(),
            "subsets_examined": self.subsets_examined,
            "violations": [v.to_dict() for v in self.violations],
        }


def deviation_count(g: Dag) -> int:
    return sum(2 ** len(g.out_neighbors[i]) - 1 for i in range(1, g.n + 1))


def _deviations(g: Dag):
    for i in range(1, g.n + 1):
        out = [(i, j) for j in g.out_neighbors[i]]
        for r in range(1, len(out) + 1):
            for subset in combinations(out, r):
                yield i, subset


class _Marginals:
    """Marginals of several mechanisms per graph, memoized by edge set."""

    def __init__(self, mechanisms: Sequence[Mechanism]):
        self.mechanisms = list(mechanisms)
        self.memo: dict[tuple[int, frozenset], tuple[tuple[float, ...], ...]] = {}

    def __call__(self, g: Dag) -> tuple[tuple[float, ...], ...]:
        key = (g.n, g.edges)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = tuple(m(g).marginals for m in self.mechanisms)
        return hit


def _check_many(
    mechanisms: Sequence[Mechanism],
    g: Dag,
    marginals: _Marginals,
    tolerance: float,
    budget: int | None,
) -> list[IcReport]:
    total = deviation_count(g)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} deviations exceed the budget of {budget} for {g!r}")
    reports = [IcReport(m.label, g, subsets_examined=total) for m in mechanisms]
    before = marginals(g)
    for agent, hidden in _deviations(g):
        after = marginals(hide_edges(g, agent, hidden))
        for idx, report in enumerate(reports):
            x0, x1 = before[idx][agent], after[idx][agent]
            if x1 > x0 + tolerance:
                report.violations.append(Violation(agent, hidden, x0, x1))
    return reports


def ic_check(
    mechanism: Mechanism,
    g: Dag,
    tolerance: float = TOLERANCE,
    budget: int | None = None,
) -> IcReport:
    """Try every out-edge-hiding deviation of every agent on ``g``.

    ``budget`` caps the number of deviations; larger graphs raise
    :class:`BudgetExceeded` before any work is done.
    """
    return _check_many([mechanism], g, _Marginals([mechanism]), tolerance, budget)[0]


@dataclass
class AuditResult:
    mechanism: str
    graphs: int = 0
    subsets_examined: int = 0
    violating_graphs: int = 0
    witnesses: list[IcReport] = field(default_factory=list)
    rows: list[tuple[str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violating_graphs == 0

    def to_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "graphs": self.graphs,
            "subsets_examined": self.subsets_examined,
            "violating_graphs": self.violating_graphs,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def ic_audit(
    mechanisms: Sequence[Mechanism],
    corpus: Iterable[Dag],
    tolerance: float = TOLERANCE,
    budget: int | None = None,
    shared_memo: bool = True,
    max_witnesses: int = MAX_WITNESSES,
    record_rows: bool = False,
) -> dict[str, AuditResult]:
    """Run :func:`ic_check` for several mechanisms over a corpus of graphs.

    With ``shared_memo`` the marginals of every graph seen (corpus members and
    their deviations) are kept for the whole run, which pays off on exhaustive
    corpora where every deviation is itself a corpus member.  Otherwise the
    memo is cleared per corpus graph.  ``record_rows`` keeps a
    ``(graph digest, violation count)`` row per graph.
    """
    results = {m.label: AuditResult(m.label) for m in mechanisms}
    marginals = _Marginals(mechanisms)
    for g in corpus:
        if not shared_memo:
            marginals.memo.clear()
        for report in _check_many(mechanisms, g, marginals, tolerance, budget):
            res = results[report.mechanism]
            res.graphs += 1
            res.subsets_examined += report.subsets_examined
            if record_rows:
                res.rows.append((g.digest, len(report.violations)))
            if not report.passed:
                res.violating_graphs += 1
                if len(res.witnesses) < max_witnesses:
                    res.witnesses.append(report)
    return results
