"""Named verification suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..generators import exhaustive_corpus, random_corpus
from ..graph import Dag
from ..influential import check_structure, influential_set
from ..mechanisms import Mechanism, default_mechanisms, get_mechanism
from .ic import ic_audit
from .ratios import RatioReport, approx_ratio, floor_for
from .upper_bound import CertificateViolation, verify_upper_bound

SUITES = ("ic-exhaustive", "ic-random", "ratio-floors", "upper-bound", "observations")

DEFAULTS = {
    "ic-exhaustive": {"exhaustive_n": 5, "count": 0, "n_max": 10, "max_out_degree": 6},
    "ic-random": {"exhaustive_n": 0, "count": 10_000, "n_max": 10, "max_out_degree": 6},
    "ratio-floors": {"exhaustive_n": 5, "count": 10_000, "n_max": 12, "max_out_degree": None},
    "observations": {"exhaustive_n": 5, "count": 10_000, "n_max": 12, "max_out_degree": None},
    "upper-bound": {},
}


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    report: dict
    witnesses: list[dict] = field(default_factory=list)
    # (mechanism, graph digest, ratio or None, violation count)
    rows: list[tuple] = field(default_factory=list)
    message: str = ""


def corpus(exhaustive_n: int, count: int, n_max: int, seed: int, max_out_degree: int | None) -> Iterator[Dag]:
    parts = []
    if exhaustive_n:
        parts.append(exhaustive_corpus(exhaustive_n))
    if count:
        parts.append(random_corpus(count, n_max, seed, max_out_degree))
    return itertools.chain(*parts)


def floor_mechanisms() -> list[Mechanism]:
    return [get_mechanism("beta-lm"), get_mechanism("ldm"), get_mechanism("lald")]


def run_suite(
    suite: str,
    mechanisms: Sequence[Mechanism] | None = None,
    seed: int = 0,
    budget: int | None = None,
    **overrides,
) -> SuiteResult:
    """Run one named suite; ``overrides`` replace the corpus defaults in :data:`DEFAULTS`."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    if suite == "upper-bound":
        return _upper_bound()
    params = dict(DEFAULTS[suite])
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"suite {suite!r} does not take {sorted(unknown)}")
    params.update({k: v for k, v in overrides.items() if v is not None})
    graphs = corpus(seed=seed, **params)
    corpus_info = dict(params, seed=seed)

    if suite in ("ic-exhaustive", "ic-random"):
        mechs = list(mechanisms) if mechanisms else default_mechanisms()
        results = ic_audit(mechs, graphs, budget=budget, shared_memo=suite == "ic-exhaustive", record_rows=True)
        rows = [(label, digest, None, v) for label, res in results.items() for digest, v in res.rows]
        witnesses = [w.to_dict() for res in results.values() for w in res.witnesses]
        summary = {label: {k: v for k, v in res.to_dict().items() if k != "witnesses"} for label, res in results.items()}
        return SuiteResult(
            suite,
            all(r.passed for r in results.values()),
            {"suite": suite, "corpus": corpus_info, "mechanisms": summary},
            witnesses,
            rows,
        )

    if suite == "ratio-floors":
        mechs = list(mechanisms) if mechanisms else floor_mechanisms()
        reports = [RatioReport(m.label, m.k, floor_for(m)) for m in mechs]
        for g in graphs:
            for m, rep in zip(mechs, reports):
                rep.add(g, approx_ratio(m, g))
        rows = [row for rep in reports for row in rep.csv_rows()]
        witnesses = [
            {"mechanism": rep.mechanism, "ratio": r, "graph": g.to_dict()} for rep in reports for g, r in rep.below_floor
        ]
        summary = {rep.mechanism: {k: v for k, v in rep.to_dict().items() if k != "below_floor"} for rep in reports}
        return SuiteResult(
            suite,
            all(rep.passed for rep in reports),
            {"suite": suite, "corpus": corpus_info, "mechanisms": summary},
            witnesses,
            rows,
        )

    return _observations(graphs, corpus_info)


def _observations(graphs, corpus_info) -> SuiteResult:
    checked = 0
    failures = {1: 0, 2: 0}
    witnesses = []
    rows = []
    for g in graphs:
        checked += 1
        bad = 0
        for k in (1, 2):
            rep = check_structure(g, influential_set(g, k))
            if not rep.passed:
                bad += 1
                failures[k] += 1
                if len(witnesses) < 50:
                    witnesses.append({"graph": g.to_dict(), "report": rep.to_dict()})
        rows.append(("observations", g.digest, None, bad))
    report = {
        "suite": "observations",
        "corpus": corpus_info,
        "graphs": checked,
        "failures": {"k=1": failures[1], "k=2": failures[2]},
    }
    return SuiteResult("observations", not witnesses, report, witnesses, rows)


def _upper_bound() -> SuiteResult:
    try:
        cert = verify_upper_bound()
    except CertificateViolation as exc:
        return SuiteResult("upper-bound", False, {"suite": "upper-bound", "error": str(exc)}, message=str(exc))
    value = f"{cert.objective.numerator}/{cert.objective.denominator}"
    return SuiteResult("upper-bound", True, {"suite": "upper-bound", **cert.to_dict()}, message=value)
