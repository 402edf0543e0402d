"""k-influential sets and audits of their chain structure (k in {1, 2})."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Dag

SUPPORTED_K = (1, 2)


class UnsupportedK(ValueError):
    pass


@dataclass(frozen=True)
class InfluentialSet:
    k: int
    members: tuple[int, ...]

    def __contains__(self, agent: int) -> bool:
        return agent in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def last(self) -> int:
        return self.members[-1]


def influential_set(g: Dag, k: int) -> InfluentialSet:
    """Agents who would rank in the top ``k`` after hiding all their out-edges.

    Hiding every out-edge is the strongest manipulation for rank: it leaves the
    agent's own progeny intact and shrinks each rival's as much as possible.
    Members are returned in the ranking order of the unmodified graph.
    """
    if k not in SUPPORTED_K:
        raise UnsupportedK(f"k must be one of {SUPPORTED_K}, got {k!r}")
    key = ("influential", k)
    cached = g._cache.get(key)
    if cached is None:
        beaters = _beaters(g)
        cached = InfluentialSet(k, tuple(i for i in g.ranking if beaters[i] < k))
        g._cache[key] = cached
    return cached


def _beaters(g: Dag, cap: int = max(SUPPORTED_K)) -> list[int]:
    """For each agent, how many agents still outrank it once it hides all out-edges (capped)."""
    hit = g._cache.get("beaters")
    if hit is not None:
        return hit
    counts = g.progeny_counts
    anc = g.progeny_masks
    desc = g.descendant_masks
    preds = g.in_neighbors
    topo = g.topological_order
    topo_pos = [0] * (g.n + 1)
    for t, v in enumerate(topo):
        topo_pos[v] = t

    result = [0] * (g.n + 1)
    above = 0  # bitset of agents ranked above the current one
    for i in g.ranking:
        d = desc[i]
        # Every descendant of i outranks i.  Higher-ranked agents outside the
        # descendants cannot be touched by i's edges and keep beating i.
        beaters = (above & ~d).bit_count()
        above |= 1 << (i - 1)
        if beaters < cap and d:
            ci = counts[i]
            reduced: dict[int, int] = {}
            for v in topo[topo_pos[i] + 1:]:
                if not d >> (v - 1) & 1:
                    continue
                m = 1 << (v - 1)
                for a in preds[v]:
                    if a != i:
                        m |= reduced.get(a, anc[a])
                reduced[v] = m
                cv = m.bit_count()
                if cv > ci or (cv == ci and v > i):
                    beaters += 1
                    if beaters >= cap:
                        break
        result[i] = min(beaters, cap)
    g._cache["beaters"] = result
    return result


@dataclass
class StructureCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class StructureReport:
    k: int
    members: tuple[int, ...]
    checks: list[StructureCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[StructureCheck]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(StructureCheck(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "members": list(self.members),
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _chain_from(g: Dag, seq: tuple[int, ...]) -> tuple[bool, str]:
    for a, b in zip(seq, seq[1:]):
        if a == b or not g.reaches(b, a):
            return False, f"{b} not in P({a})"
    return True, ""


def check_structure(g: Dag, s: InfluentialSet) -> StructureReport:
    """Audit the structural facts known about 1- and 2-influential sets.

    Any failed check points to a bug in :func:`influential_set`.
    """
    report = StructureReport(s.k, s.members)
    members = s.members
    counts = g.progeny_counts
    rank = g.ranking
    report.add(
        "strictly-ordered",
        all(g.precedes(a, b) for a, b in zip(members, members[1:])),
        f"members {members}",
    )

    if s.k == 1:
        report.add("contains-top", members[:1] == rank[:1], f"top agent {rank[0]}")
        ok, detail = _chain_from(g, members)
        report.add("chain", ok, detail)
        top = counts[members[0]]
        low = [t for t in members[1:] if 2 * counts[t] < top]
        report.add("half-progeny", not low, f"agents below P(i_1)/2 = {top / 2}: {low}")
        return report

    s1 = influential_set(g, 1)
    report.add("contains-1-set", set(s1.members) <= set(members), f"1-set {s1.members}")
    if g.n < 2:
        report.add("top-two", members == rank[:1], "single agent")
        return report
    first, second = rank[0], rank[1]
    report.add(
        "top-two",
        members[:2] == (first, second),
        f"expected prefix ({first}, {second}), got {members[:2]}",
    )
    if g.reaches(second, first):
        ok, detail = _chain_from(g, members)
        report.add("chain-through-second", ok, detail)
    elif len(members) > 2:
        third = members[2]
        hangs = g.reaches(third, first) or g.reaches(third, second)
        ok, detail = _chain_from(g, members[2:])
        report.add(
            "split-chain",
            hangs and ok,
            detail or f"{third} in neither P({first}) nor P({second})",
        )
    return report
