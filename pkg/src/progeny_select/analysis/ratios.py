"""Expected selected progeny and approximation ratios against the best k-subset."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from ..graph import Dag
from ..mechanisms import OPTIMAL_BETA, TOLERANCE, Mechanism, SelectionDistribution

LN2 = math.log(2)
LDM_FLOOR = 0.5
LALD_FLOOR = (3 + LN2) / (4 * (1 + LN2))
MAX_WITNESSES = 50


def lm_floor(beta: float) -> float:
    """Guaranteed ratio of the logarithmic mechanism for ``1/2 <= beta <= 1``."""
    return min(0.5 * (beta + (1 - beta) / LN2), beta)


def floor_for(mechanism: Mechanism) -> float:
    if mechanism.name == "beta-lm":
        return lm_floor(mechanism.beta if mechanism.beta is not None else OPTIMAL_BETA)
    if mechanism.name == "ldm":
        return LDM_FLOOR
    if mechanism.name == "lald":
        return LALD_FLOOR
    raise ValueError(f"no known floor for {mechanism.name!r}")


class DistributionGraphMismatch(ValueError):
    pass


class KExceedsN(ValueError):
    pass


def expected_progeny(dist: SelectionDistribution, g: Dag) -> float:
    """Expected total progeny of the selected subset; the empty set contributes 0."""
    if dist.n != g.n:
        raise DistributionGraphMismatch(f"distribution over {dist.n} agents, graph has {g.n}")
    counts = g.progeny_counts
    return math.fsum(p * sum(counts[a] for a in subset) for subset, p in dist.outcomes)


def optimal_sum(g: Dag, k: int) -> int:
    """Total progeny of the ``k`` highest-ranked agents, the best any k-subset achieves."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if k > g.n:
        raise KExceedsN(f"k = {k} exceeds n = {g.n}")
    counts = g.progeny_counts
    return sum(counts[a] for a in g.ranking[:k])


def approx_ratio(mechanism: Mechanism, g: Dag, k: int | None = None) -> float:
    """Expected selected progeny over the optimum, with ``k`` capped at ``n``."""
    k = mechanism.k if k is None else k
    return expected_progeny(mechanism(g), g) / optimal_sum(g, min(k, g.n))


@dataclass
class RatioReport:
    mechanism: str
    k: int
    floor: float | None = None
    rows: list[tuple[str, float]] = field(default_factory=list)
    minimum: float = math.inf
    argmin: Dag | None = None
    below_floor: list[tuple[Dag, float]] = field(default_factory=list)
    below_floor_count: int = 0
    tolerance: float = TOLERANCE
    max_witnesses: int = MAX_WITNESSES

    def add(self, g: Dag, ratio: float) -> None:
        self.rows.append((g.digest, ratio))
        if ratio < self.minimum:
            self.minimum, self.argmin = ratio, g
        if self.is_below(ratio):
            self.below_floor_count += 1
            if len(self.below_floor) < self.max_witnesses:
                self.below_floor.append((g, ratio))

    def is_below(self, ratio: float) -> bool:
        return self.floor is not None and ratio < self.floor - self.tolerance

    @property
    def passed(self) -> bool:
        return self.below_floor_count == 0

    def to_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "k": self.k,
            "floor": self.floor,
            "graphs": len(self.rows),
            "minimum": self.minimum,
            "argmin": self.argmin.to_dict() if self.argmin is not None else None,
            "below_floor_count": self.below_floor_count,
            "below_floor": [{"graph": g.to_dict(), "ratio": r} for g, r in self.below_floor],
        }

    def csv_rows(self) -> list[tuple[str, str, float, int]]:
        """``(mechanism, graph digest, ratio, below-floor flag)`` per graph."""
        return [(self.mechanism, digest, r, int(self.is_below(r))) for digest, r in self.rows]


def ratio_sweep(
    mechanism: Mechanism,
    corpus: Iterable[Dag],
    k: int | None = None,
    floor: float | None = None,
    tolerance: float = TOLERANCE,
    max_witnesses: int = MAX_WITNESSES,
) -> RatioReport:
    """Evaluate :func:`approx_ratio` over ``corpus``, tracking the minimum.

    Graphs whose ratio falls below ``floor - tolerance`` are kept verbatim.
    """
    k = mechanism.k if k is None else k
    report = RatioReport(mechanism.label, k, floor, tolerance=tolerance, max_witnesses=max_witnesses)
    for g in corpus:
        report.add(g, approx_ratio(mechanism, g, k))
    return report
