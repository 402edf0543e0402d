"""Selection mechanisms returning full probability distributions over agent subsets.

* ``beta_lm`` picks one agent: the last member of the 1-influential set gets
  ``beta``; each earlier member gets ``(1 - beta) * log2`` of its progeny ratio
  to the next member.
* ``ldm`` picks the last two members of the 1-influential set deterministically.
* ``lald`` always picks the last member of the 2-influential set and draws a
  companion with the optimal logarithmic distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .graph import Dag, lazy
from .influential import influential_set

OPTIMAL_BETA = 1.0 / (1.0 + math.log(2))
TOLERANCE = 1e-9
# leftover mass at or below this is float noise, not an empty-set outcome
_LEFTOVER_EPS = 1e-12


class InvalidBeta(ValueError):
    pass


@dataclass(frozen=True)
class SelectionDistribution:
    """Probabilities of selecting each subset of at most ``k`` agents.

    ``outcomes`` holds ``(sorted agent tuple, probability)`` pairs with no
    duplicate subsets and no zero-probability entries.  ``n`` is the agent count
    of the graph the distribution was computed on.
    """

    k: int
    n: int
    outcomes: tuple[tuple[tuple[int, ...], float], ...]
    metadata: tuple[tuple[str, object], ...] = ()

    @lazy
    def marginals(self) -> tuple[float, ...]:
        """Selection probability of each agent; index 0 is unused and 0."""
        x = [0.0] * (self.n + 1)
        for subset, p in self.outcomes:
            for a in subset:
                x[a] += p
        return tuple(x)

    @property
    def meta(self) -> dict:
        return dict(self.metadata)

    def marginal(self, agent: int) -> float:
        return self.marginals[agent]

    def probability(self, subset: Iterable[int]) -> float:
        key = tuple(sorted(subset))
        return sum(p for s, p in self.outcomes if s == key)

    @property
    def total(self) -> float:
        return math.fsum(p for _, p in self.outcomes)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "outcomes": [{"set": list(s), "p": p} for s, p in self.outcomes],
            "marginals": {str(a): x for a, x in enumerate(self.marginals) if a},
        }


def _distribution(k: int, n: int, masses: dict[tuple[int, ...], float], **meta) -> SelectionDistribution:
    leftover = 1.0 - math.fsum(masses.values())
    if leftover > _LEFTOVER_EPS:
        masses[()] = masses.get((), 0.0) + leftover
    outcomes = tuple(sorted(((s, p) for s, p in masses.items() if p > 0.0), key=lambda sp: (len(sp[0]), sp[0])))
    return SelectionDistribution(k, n, outcomes, tuple(sorted(meta.items())))


def _log_shares(g: Dag, chain: tuple[int, ...], scale: float) -> list[tuple[int, float]]:
    """``scale * log2(P(a)/P(b))`` for each consecutive pair ``a, b`` in ``chain``."""
    counts = g.progeny_counts
    return [(a, scale * math.log2(counts[a] / counts[b])) for a, b in zip(chain, chain[1:])]


def _lm_masses(g: Dag, beta: float) -> dict[tuple[int, ...], float]:
    members = influential_set(g, 1).members
    masses = {(a,): p for a, p in _log_shares(g, members, 1.0 - beta)}
    masses[(members[-1],)] = beta
    return masses


def beta_lm(g: Dag, beta: float = OPTIMAL_BETA) -> SelectionDistribution:
    """One-agent logarithmic mechanism over the 1-influential set.

    Any ``beta`` in [0, 1] yields a valid distribution; only ``beta >= 1/2``
    resists manipulation, which is recorded as ``incentive_compatible`` in the
    metadata.
    """
    if not isinstance(beta, (int, float)) or not 0.0 <= beta <= 1.0:
        raise InvalidBeta(f"beta must lie in [0, 1], got {beta!r}")
    beta = float(beta)
    return _distribution(1, g.n, _lm_masses(g, beta), beta=beta, incentive_compatible=beta >= 0.5)


def ldm(g: Dag) -> SelectionDistribution:
    """Deterministically select the last two members of the 1-influential set."""
    members = influential_set(g, 1).members
    chosen = tuple(sorted(members[-2:]))
    return _distribution(2, g.n, {chosen: 1.0})


def lald(g: Dag) -> SelectionDistribution:
    """Last member of the 2-influential set, plus a logarithmic companion.

    The last member ``i_m`` of the 2-influential set is always selected.  The
    companion is drawn by the optimal logarithmic rule over the 1-influential
    set with ``i_m`` removed: the last remaining member gets ``OPTIMAL_BETA``
    and each earlier one ``(1 - OPTIMAL_BETA) * log2`` of its progeny ratio to
    the next.  Unassigned mass selects ``i_m`` alone.

    When the two sets coincide, ``i_m`` is the last 1-influential member and
    this is the nested formula.  When they differ, ``i_m`` normally lies
    outside the 1-influential set and the companion follows plain optimal
    ``beta_lm``.  Under exact progeny ties ``i_m`` can also belong to the
    1-influential set; dropping it there, rather than letting a draw of
    ``i_m`` collapse to a singleton, keeps the mechanism manipulation-proof.
    """
    s1 = influential_set(g, 1).members
    s2 = influential_set(g, 2).members
    last = s2[-1]
    rest = tuple(a for a in s1 if a != last)
    masses: dict[tuple[int, ...], float] = {}
    if rest:
        masses[tuple(sorted((last, rest[-1])))] = OPTIMAL_BETA
        for a, p in _log_shares(g, rest, 1.0 - OPTIMAL_BETA):
            masses[tuple(sorted((last, a)))] = p
    _fill(masses, (last,))
    if set(s2) <= set(s1):
        case = "nested"
    else:
        case = "tied" if last in s1 else "extended"
    return _distribution(2, g.n, masses, case=case)


def _fill(masses: dict[tuple[int, ...], float], subset: tuple[int, ...]) -> None:
    leftover = 1.0 - math.fsum(masses.values())
    if leftover > _LEFTOVER_EPS:
        masses[subset] = masses.get(subset, 0.0) + leftover


@dataclass(frozen=True)
class Mechanism:
    """A named mechanism bound to its parameters."""

    name: str
    k: int
    select: Callable[[Dag], SelectionDistribution]
    beta: float | None = None

    def __call__(self, g: Dag) -> SelectionDistribution:
        return self.select(g)

    @property
    def label(self) -> str:
        return self.name if self.beta is None else f"{self.name}(beta={self.beta:.12g})"


MECHANISM_NAMES = ("beta-lm", "ldm", "lald")


def get_mechanism(name: str, beta: float | None = None) -> Mechanism:
    name = name.lower().replace("_", "-")
    if name == "beta-lm":
        b = OPTIMAL_BETA if beta is None else beta
        if not 0.0 <= b <= 1.0:
            raise InvalidBeta(f"beta must lie in [0, 1], got {b!r}")
        return Mechanism("beta-lm", 1, lambda g, b=b: beta_lm(g, b), b)
    if beta is not None:
        raise ValueError(f"mechanism {name!r} takes no beta")
    if name == "ldm":
        return Mechanism("ldm", 2, ldm)
    if name == "lald":
        return Mechanism("lald", 2, lald)
    raise ValueError(f"unknown mechanism {name!r}; expected one of {MECHANISM_NAMES}")


def default_mechanisms() -> list[Mechanism]:
    """Every configuration that is expected to resist manipulation."""
    betas = (0.5, OPTIMAL_BETA, 0.75, 1.0)
    return [get_mechanism("beta-lm", b) for b in betas] + [get_mechanism("ldm"), get_mechanism("lald")]
