"""Exact verification of the 23/27 ceiling on any manipulation-proof two-agent mechanism.

Three four-agent networks are involved: the chain ``(a)`` and the graphs ``(b)``
and ``(c)`` that single agents of ``(a)`` can produce by hiding one out-edge.
Incentive compatibility ties selection probabilities across them, each graph's
probabilities sum to at most 2, and the best achievable worst-case ratio over
the three graphs is a small LP solved here in exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence

from ..generators import figure3_networks
from ..graph import Dag, hide_edges
from .lp import check_optimality, maximize

NETWORKS = ("a", "b", "c")
AGENTS = (1, 2, 3, 4)
BOUND = Fraction(23, 27)

# x^(target)_{target_agent} <= x^(a)_{source_agent}, as (target, target_agent, source_agent)
STATED_CONSTRAINTS = (("b", 2, 2), ("b", 1, 4), ("c", 3, 3), ("c", 1, 3))

WITNESS = {
    "a": (Fraction(2, 3), Fraction(17, 27), Fraction(19, 27), Fraction(0)),
    "b": (Fraction(0), Fraction(17, 27), Fraction(1), Fraction(10, 27)),
    "c": (Fraction(19, 27), Fraction(16, 27), Fraction(19, 27), Fraction(0)),
}


class CertificateViolation(AssertionError):
    pass


@dataclass(frozen=True)
class LpCertificate:
    """Per-network selection probabilities (agents 1..4) and the worst-case ratio."""

    values: Mapping[str, tuple[Fraction, ...]]
    objective: Fraction
    ratios: Mapping[str, Fraction] = field(default_factory=dict)
    checks: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "objective": _q(self.objective),
            "values": {g: [_q(v) for v in vals] for g, vals in self.values.items()},
            "ratios": {g: _q(r) for g, r in self.ratios.items()},
            "checks": list(self.checks),
        }


def _q(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _networks() -> dict[str, Dag]:
    return dict(zip(NETWORKS, figure3_networks()))


def _isomorphisms(src: Dag, dst: Dag) -> list[dict[int, int]]:
    if src.n != dst.n or len(src.edges) != len(dst.edges):
        return []
    agents = range(1, src.n + 1)
    out = []
    for perm in permutations(agents):
        phi = dict(zip(agents, perm))
        if {(phi[i], phi[j]) for i, j in src.edges} == dst.edges:
            out.append(phi)
    return out


def derive_constraints(nets: Mapping[str, Dag]) -> set[tuple[str, int, int]]:
    """Every IC constraint obtained from one agent of ``(a)`` hiding out-edges.

    A deviation by agent ``d`` that turns ``(a)`` into a relabeling of ``(b)`` or
    ``(c)`` forces ``d``'s image there to be selected no more often than ``d``
    is in ``(a)``.
    """
    a = nets["a"]
    found = set()
    for d in AGENTS:
        out = sorted(a.out_edges(d))
        for r in range(1, len(out) + 1):
            for subset in combinations(out, r):
                h = hide_edges(a, d, subset)
                for target in ("b", "c"):
                    for phi in _isomorphisms(h, nets[target]):
                        found.add((target, phi[d], d))
    return found


def ratio_weights(g: Dag) -> tuple[tuple[int, ...], int]:
    """Progeny weights of agents 1..4 and the best two-agent progeny total."""
    weights = tuple(g.progeny_counts[i] for i in AGENTS)
    return weights, sum(sorted(weights, reverse=True)[:2])


def check_certificate(
    values: Mapping[str, Sequence[Fraction | int]],
    constraints: Sequence[tuple[str, int, int]] = STATED_CONSTRAINTS,
) -> Fraction:
    """Validate an assignment exactly and return its worst-case ratio.

    Raises :class:`CertificateViolation` if any probability leaves [0, 1], any
    graph's total exceeds 2, or an IC constraint fails.
    """
    nets = _networks()
    vals = {g: tuple(Fraction(v) for v in values[g]) for g in NETWORKS}
    for g, xs in vals.items():
        if len(xs) != len(AGENTS):
            raise CertificateViolation(f"network {g}: expected 4 values, got {len(xs)}")
        if any(not 0 <= v <= 1 for v in xs):
            raise CertificateViolation(f"network {g}: probability outside [0, 1]: {xs}")
        if sum(xs) > 2:
            raise CertificateViolation(f"network {g}: total {sum(xs)} exceeds 2")
    for target, t_agent, s_agent in constraints:
        if vals[target][t_agent - 1] > vals["a"][s_agent - 1]:
            raise CertificateViolation(
                f"x{t_agent}^({target}) = {vals[target][t_agent - 1]} > x{s_agent}^(a) = {vals['a'][s_agent - 1]}"
            )
    return min(_ratios(nets, vals).values())


def _ratios(nets: Mapping[str, Dag], vals: Mapping[str, Sequence[Fraction]]) -> dict[str, Fraction]:
    out = {}
    for g in NETWORKS:
        weights, best = ratio_weights(nets[g])
        out[g] = sum(w * v for w, v in zip(weights, vals[g])) / best
    return out


def build_lp(constraints: Sequence[tuple[str, int, int]] = STATED_CONSTRAINTS):
    """LP over 12 probabilities plus the ratio floor ``t`` (last variable); maximize ``t``."""
    nets = _networks()
    col = {(g, i): k for k, (g, i) in enumerate((g, i) for g in NETWORKS for i in AGENTS)}
    nvar = len(col) + 1
    t = nvar - 1
    A: list[list[Fraction]] = []
    b: list[Fraction] = []

    def row() -> list[Fraction]:
        return [Fraction(0)] * nvar

    for g in NETWORKS:
        weights, best = ratio_weights(nets[g])
        r = row()
        r[t] = Fraction(1)
        for i, w in zip(AGENTS, weights):
            r[col[g, i]] = Fraction(-w, best)
        A.append(r)
        b.append(Fraction(0))
    for target, t_agent, s_agent in constraints:
        r = row()
        r[col[target, t_agent]] = Fraction(1)
        r[col["a", s_agent]] = Fraction(-1)
        A.append(r)
        b.append(Fraction(0))
    for g in NETWORKS:
        r = row()
        for i in AGENTS:
            r[col[g, i]] = Fraction(1)
        A.append(r)
        b.append(Fraction(2))
    for k in range(len(col)):
        r = row()
        r[k] = Fraction(1)
        A.append(r)
        b.append(Fraction(1))
    c = [Fraction(0)] * nvar
    c[t] = Fraction(1)
    return c, A, b, col


def verify_upper_bound() -> LpCertificate:
    """Rebuild the three networks, check the witness assignment, and solve the LP exactly.

    Returns the LP optimum as an :class:`LpCertificate`; raises
    :class:`CertificateViolation` if any step disagrees with the 23/27 claim.
    """
    checks = []
    nets = _networks()
    profiles = {g: ratio_weights(nets[g])[0] for g in NETWORKS}
    expected = {"a": (4, 3, 2, 1), "b": (1, 3, 2, 1), "c": (2, 1, 2, 1)}
    if profiles != expected:
        raise CertificateViolation(f"progeny profiles {profiles} != {expected}")
    checks.append("progeny profiles (4,3,2,1), (1,3,2,1), (2,1,2,1)")

    derived = derive_constraints(nets)
    if derived != set(STATED_CONSTRAINTS):
        raise CertificateViolation(f"hiding moves give constraints {sorted(derived)}, expected {sorted(STATED_CONSTRAINTS)}")
    checks.append(f"hiding moves yield IC constraints {sorted(derived)}")

    witness_min = check_certificate(WITNESS)
    witness_ratios = _ratios(nets, WITNESS)
    if witness_min != BOUND or any(r != BOUND for r in witness_ratios.values()):
        raise CertificateViolation(f"witness ratios {witness_ratios} != {BOUND}")
    checks.append("witness assignment feasible with every ratio exactly 23/27")

    c, A, b, col = build_lp()
    sol = maximize(c, A, b)
    problems = check_optimality(c, A, b, sol)
    if problems:
        raise CertificateViolation("LP optimality check failed: " + "; ".join(problems))
    if sol.value != BOUND:
        raise CertificateViolation(f"LP optimum {sol.value} != {BOUND}")
    checks.append("exact LP optimum 23/27 with matching dual certificate")

    values = {g: tuple(sol.x[col[g, i]] for i in AGENTS) for g in NETWORKS}
    if check_certificate(values) != sol.value:
        raise CertificateViolation("LP solution does not reproduce its own objective")
    return LpCertificate(values, sol.value, _ratios(nets, values), tuple(checks))
