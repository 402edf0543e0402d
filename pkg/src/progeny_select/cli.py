"""Command-line front end: ``select``, ``verify`` and ``generate``.

Exit codes: 0 success, 1 a verification suite found a violation, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from .analysis.suites import SUITES, run_suite
from .generators import FAMILIES, build_family
from .graph import GraphError, dag_from_json
from .mechanisms import MECHANISM_NAMES, OPTIMAL_BETA, SelectionDistribution, get_mechanism
from .rng import SplitMix64

FAMILY_FLAGS = {"y": int, "m": int, "n": int, "p": float, "seed": int, "max_out_degree": int}


class UsageError(Exception):
    pass


def _beta(text: str) -> float:
    if text == "optimal":
        return OPTIMAL_BETA
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"beta must be a number in [0, 1] or 'optimal', got {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"beta must lie in [0, 1], got {value}")
    return value


def _add_family_args(p: argparse.ArgumentParser, with_seed: bool = True) -> None:
    p.add_argument("--family", help=f"graph family: {', '.join(sorted(FAMILIES))}")
    p.add_argument("--y", type=int, help="two_star hub progeny")
    p.add_argument("--m", type=int, help="chain length")
    p.add_argument("--n", type=int, help="agent count (random)")
    p.add_argument("--p", type=float, help="edge probability (random)")
    if with_seed:
        p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--max-out-degree", type=int, help="out-degree cap (random)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="progeny-select", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sel = sub.add_parser("select", help="run a mechanism on one graph")
    sel.add_argument("--input", type=Path, help="graph JSON file")
    _add_family_args(sel, with_seed=False)
    sel.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    sel.add_argument("--beta", type=_beta, help="beta-lm parameter, a number in [0, 1] or 'optimal'")
    sel.add_argument("--output", type=Path, help="write the distribution here instead of stdout")
    sel.add_argument("--sample", type=int, default=0, help="draw this many subsets and print them")
    sel.add_argument("--seed", type=int, default=0, help="seed for --sample and random families")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--mechanism", choices=MECHANISM_NAMES, help="restrict to one mechanism")
    ver.add_argument("--beta", type=_beta)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--count", type=int, help="number of random graphs")
    ver.add_argument("--n-max", type=int, help="largest random graph size")
    ver.add_argument("--exhaustive-n", type=int, help="enumerate all DAGs up to this size (<= 5)")
    ver.add_argument("--max-out-degree", type=int, help="out-degree cap for random graphs")
    ver.add_argument("--budget", type=int, help="max deviations examined per graph")
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("--output-dir", type=Path, help="directory for reports (witnesses default to cwd)")

    gen = sub.add_parser("generate", help="write a graph from a named family")
    _add_family_args(gen)
    gen.add_argument("--output", type=Path, help="write here instead of stdout")
    return parser


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _family_params(args: argparse.Namespace) -> dict:
    family = FAMILIES.get(args.family.replace("-", "_"))
    if family is None:
        raise UsageError(f"unknown family {args.family!r}; known: {', '.join(sorted(FAMILIES))}")
    given = {k: getattr(args, k) for k in FAMILY_FLAGS if getattr(args, k, None) is not None}
    if args.command == "select":
        # --seed there also drives --sample, so it only reaches families that take one
        given.pop("seed", None)
    accepted = set(family.params)
    extra = set(given) - accepted
    if extra:
        raise UsageError(f"family {family.name!r} does not take {sorted('--' + e.replace('_', '-') for e in extra)}")
    return given


def _load_graph(args: argparse.Namespace):
    if (args.input is None) == (args.family is None):
        raise UsageError("give exactly one of --input or --family")
    if args.input is not None:
        try:
            text = args.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}")
        return dag_from_json(text)
    params = _family_params(args)
    if args.command == "select" and "seed" in FAMILIES[args.family.replace("-", "_")].params:
        params.setdefault("seed", args.seed)
    return build_family(args.family, **params)


def sample(dist: SelectionDistribution, count: int, seed: int) -> list[list[int]]:
    """Inverse-CDF draws over ``dist.outcomes`` in their listed order."""
    rng = SplitMix64(seed)
    draws = []
    for _ in range(count):
        u, acc = rng.random(), 0.0
        chosen = dist.outcomes[-1][0]
        for subset, p in dist.outcomes:
            acc += p
            if u < acc:
                chosen = subset
                break
        draws.append(list(chosen))
    return draws


def cmd_select(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    if args.beta is not None and args.mechanism != "beta-lm":
        raise UsageError("--beta only applies to beta-lm")
    mech = get_mechanism(args.mechanism, args.beta)
    dist = mech(g)
    _emit(_dumps(dist.to_dict()), args.output)
    if args.sample:
        if args.sample < 0:
            raise UsageError("--sample must be non-negative")
        for draw in sample(dist, args.sample, args.seed):
            print(json.dumps(draw))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    if args.family is None:
        raise UsageError("--family is required")
    g = build_family(args.family, **_family_params(args))
    _emit(_dumps(g.to_dict()), args.output)
    return 0


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("mechanism", "graph", "ratio", "violations"))
    for mech, digest, ratio, violations in rows:
        w.writerow((mech, digest, "" if ratio is None else repr(ratio), violations))
    return buf.getvalue()


def cmd_verify(args: argparse.Namespace) -> int:
    mechanisms = None
    if args.mechanism is not None:
        if args.beta is not None and args.mechanism != "beta-lm":
            raise UsageError("--beta only applies to beta-lm")
        mechanisms = [get_mechanism(args.mechanism, args.beta)]
    elif args.beta is not None:
        raise UsageError("--beta requires --mechanism beta-lm")
    if args.exhaustive_n is not None and args.exhaustive_n > 5:
        raise UsageError("--exhaustive-n is capped at 5")
    overrides = {
        "count": args.count,
        "n_max": args.n_max,
        "exhaustive_n": args.exhaustive_n,
        "max_out_degree": args.max_out_degree,
    }
    if args.suite == "upper-bound":
        if any(v is not None for v in overrides.values()) or mechanisms:
            raise UsageError("upper-bound takes no corpus or mechanism options")
        overrides = {}
    result = run_suite(args.suite, mechanisms, seed=args.seed, budget=args.budget, **overrides)

    if args.output_dir is not None:
        write_atomic(args.output_dir / f"{args.suite}.json", _dumps(dict(result.report, passed=result.passed)))
        if args.format == "csv" and result.rows:
            write_atomic(args.output_dir / f"{args.suite}.csv", _csv(result.rows))
    if result.witnesses:
        where = (args.output_dir or Path(".")) / f"{args.suite}-witnesses.json"
        write_atomic(where, _dumps(result.witnesses))
        print(f"witnesses written to {where}", file=sys.stderr)

    if args.suite == "upper-bound":
        print(result.message)
    else:
        _print_summary(result)
    return 0 if result.passed else 1


def _print_summary(result) -> None:
    report = result.report
    if "mechanisms" in report:
        for label, info in report["mechanisms"].items():
            if "minimum" in info:
                status = "PASS" if info["below_floor_count"] == 0 else "FAIL"
                print(f"{status} {label}: min ratio {info['minimum']:.12g} (floor {info['floor']:.12g}) over {info['graphs']} graphs")
            else:
                status = "PASS" if info["violating_graphs"] == 0 else "FAIL"
                print(
                    f"{status} {label}: {info['violating_graphs']} violating graphs "
                    f"({info['graphs']} graphs, {info['subsets_examined']} deviations)"
                )
    else:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} observations: {sum(report['failures'].values())} failures over {report['graphs']} graphs")


COMMANDS = {"select": cmd_select, "verify": cmd_verify, "generate": cmd_generate}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GraphError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
