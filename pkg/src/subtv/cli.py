"""Command-line surface: distance estimation, identity testing, oracle
queries, CNF export, and instance generation.

Exit codes: 0 success or ACCEPT, 1 usage or parameter error, 2 sampling
budget exhausted, 3 REJECT.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import instances, oracle
from .errors import BudgetExhausted, Error, UsageError
from .estimator import estimate_tv
from .posets import (
    Poset,
    biased_extension_sampler,
    encode_cnf,
    parse_poset,
    uniform_extension_sampler,
)
from .tester import REJECT, identity_test

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_REJECT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _in_unit(value: str) -> float:
    x = float(value)
    if not 0.0 < x < 1.0:
        raise argparse.ArgumentTypeError(f"{value} not in (0, 1)")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subtv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("instance", help="poset instance file (JSON)")
        p.add_argument("--sampler", required=True, help="uniform | biased-equal | biased:w1,w2,...")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--max-samples", type=int, default=None)
        p.add_argument("--format", choices=("table", "json"), default="table")

    est = sub.add_parser("estimate", help="estimate the TV distance from the uniform-extension distribution")
    add_run_flags(est)
    est.add_argument("--zeta", type=_in_unit, default=0.3)
    est.add_argument("--delta", type=_in_unit, default=0.2)

    tst = sub.add_parser("test", help="accept/reject identity test against the uniform-extension distribution")
    add_run_flags(tst)
    tst.add_argument("--epsilon", type=_in_unit, default=0.01)
    tst.add_argument("--eta", type=_in_unit, default=0.61)
    tst.add_argument("--delta", type=_in_unit, default=0.1)

    odtv = sub.add_parser("oracle-dtv", help="exact TV distance between two sampler specs")
    odtv.add_argument("instance")
    odtv.add_argument("--p", required=True, help="first sampler spec")
    odtv.add_argument("--q", required=True, help="second sampler spec")

    gen = sub.add_parser("gen", help="emit a synthetic poset instance")
    gen.add_argument("--family", choices=instances.FAMILIES, required=True)
    gen.add_argument("--param", required=True, help="average indegree (avgdeg) or orientation probability (bipartite)")
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument("--index", type=int, default=0)
    gen.add_argument("--out", default=None, help="output path (default stdout)")

    cnf = sub.add_parser("encode-cnf", help="export the instance as a DIMACS CNF")
    cnf.add_argument("instance")
    cnf.add_argument("--cnf-out", required=True)

    return parser


def parse_weight(token: str) -> Fraction:
    token = token.strip()
    try:
        if "/" in token:
            return Fraction(token)
        if "." in token or "e" in token or "E" in token:
            return Fraction(*float(token).as_integer_ratio())
        return Fraction(int(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad weight {token!r}: {exc}") from exc


def parse_sampler_spec(spec: str, k: int) -> tuple[str, tuple | None]:
    if spec == "uniform":
        return "uniform", None
    if spec == "biased-equal":
        return "biased", (Fraction(1),) * k
    if spec.startswith("biased:"):
        weights = tuple(parse_weight(t) for t in spec[len("biased:"):].split(","))
        if len(weights) != k:
            raise UsageError(f"sampler spec needs {k} weights, got {len(weights)}")
        if any(w <= 0 for w in weights):
            raise UsageError("weights must be positive")
        return "biased", weights
    raise UsageError(f"unknown sampler spec {spec!r}")


def build_sampler(poset: Poset, spec: str):
    kind, weights = parse_sampler_spec(spec, poset.k)
    if kind == "uniform":
        return uniform_extension_sampler(poset)
    return biased_extension_sampler(poset, weights)


def _load_poset(path: str) -> Poset:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read instance {path!r}: {exc}") from exc
    return parse_poset(text)


def _report(instance, dim, estd_dtv, samples, verdict, params, seed, wall_time, partial=False):
    return {
        "instance": instance,
        "dim": dim,
        "estd_dtv": estd_dtv,
        "samples": samples,
        "verdict": verdict,
        "params": params,
        "seed": seed,
        "wall_time": wall_time,
        "partial": partial,
    }


def _emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        print(json.dumps(report, sort_keys=True), file=out)
        return
    dtv = "-" if report["estd_dtv"] is None else f"{report['estd_dtv']:.4f}"
    verdict = report["verdict"] or "-"
    print(f"{'instance':<28} {'dim':>4} {'estd_dtv':>9} {'#samples':>12} {'A/R':>4}", file=out)
    print(
        f"{report['instance']:<28} {report['dim']:>4} {dtv:>9} {report['samples']:>12} {verdict:>4}",
        file=out,
    )


def _partial_report(args, dim, params, exc: BudgetExhausted) -> dict:
    terms = exc.partial_terms
    estd = sum(terms) / len(terms) if terms else None
    return _report(
        args.instance, dim, estd, exc.draws, None, params, args.seed, 0.0, partial=True
    )


def cmd_estimate(args) -> int:
    poset = _load_poset(args.instance)
    unknown = build_sampler(poset, args.sampler)
    known = uniform_extension_sampler(poset)
    started = time.perf_counter()
    try:
        report = estimate_tv(
            unknown,
            known,
            args.zeta,
            args.delta,
            args.seed,
            threads=args.threads,
            max_total_samples=args.max_samples,
        )
    except BudgetExhausted as exc:
        params = {"zeta": args.zeta, "delta": args.delta, "sampler": args.sampler,
                  "threads": args.threads, "max_samples": args.max_samples}
        _emit(_partial_report(args, unknown.n, params, exc), args.format)
        return EXIT_BUDGET
    wall = time.perf_counter() - started
    params = asdict(report.params) | {
        "sampler": args.sampler, "threads": args.threads, "max_samples": args.max_samples
    }
    _emit(
        _report(args.instance, unknown.n, report.dtv_estimate, report.total_samples,
                None, params, args.seed, wall),
        args.format,
    )
    return EXIT_OK


def cmd_test(args) -> int:
    poset = _load_poset(args.instance)
    unknown = build_sampler(poset, args.sampler)
    known = uniform_extension_sampler(poset)
    started = time.perf_counter()
    try:
        verdict = identity_test(
            unknown,
            known,
            args.epsilon,
            args.eta,
            args.delta,
            args.seed,
            threads=args.threads,
            max_total_samples=args.max_samples,
        )
    except BudgetExhausted as exc:
        params = {"epsilon": args.epsilon, "eta": args.eta, "delta": args.delta,
                  "sampler": args.sampler, "threads": args.threads,
                  "max_samples": args.max_samples}
        _emit(_partial_report(args, unknown.n, params, exc), args.format)
        return EXIT_BUDGET
    wall = time.perf_counter() - started
    inner = {f"est_{k}": v for k, v in asdict(verdict.estimate.params).items()}
    params = asdict(verdict.params) | inner | {
        "sampler": args.sampler, "threads": args.threads, "max_samples": args.max_samples
    }
    _emit(
        _report(args.instance, unknown.n, verdict.estimate.dtv_estimate,
                verdict.estimate.total_samples,
                "R" if verdict.decision == REJECT else "A",
                params, args.seed, wall),
        args.format,
    )
    return EXIT_REJECT if verdict.decision == REJECT else EXIT_OK


def cmd_oracle_dtv(args) -> int:
    poset = _load_poset(args.instance)
    dists = []
    for spec in (args.p, args.q):
        kind, weights = parse_sampler_spec(spec, poset.k)
        dists.append(oracle.exact_distribution(poset, kind, weights))
    tv = oracle.exact_tv(dists[0], dists[1])
    print(f"{tv} ≈ {float(tv):.6f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    doc = instances.generate_instance(args.family, args.param, args.size, args.index)
    text = instances.instance_to_json(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_encode_cnf(args) -> int:
    poset = _load_poset(args.instance)
    Path(args.cnf_out).write_text(encode_cnf(poset))
    return EXIT_OK


_COMMANDS = {
    "estimate": cmd_estimate,
    "test": cmd_test,
    "oracle-dtv": cmd_oracle_dtv,
    "gen": cmd_gen,
    "encode-cnf": cmd_encode_cnf,
}


def run_cli(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
