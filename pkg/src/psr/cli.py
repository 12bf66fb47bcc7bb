"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 exact-oracle cap exceeded,
3 reproduction mismatch (``verify-paper``).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiments
from ._backend import BACKEND
from .exact import (
    OracleLimitError,
    min_delta_sr_exact,
    probability,
)
from .explainer import ExplainerParams, explain
from .model import (
    Instance,
    LinearModel,
    PartialInstance,
    ProductDistribution,
    classify,
    format_fraction,
    greedy_prefixes,
    scores,
    to_fraction,
)
from .montecarlo import DEFAULT_CHUNK, ExactEstimator, MonteCarloEstimator, mc_estimate

SCHEMA = 1

EXIT_INVALID = 1
EXIT_ORACLE_CAP = 2
EXIT_MISMATCH = 3


def _q(v: Fraction) -> str:
    return format_fraction(v)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _model(args) -> LinearModel:
    return LinearModel.from_json(_load_json(args.model))


def _dist(args) -> ProductDistribution | None:
    return ProductDistribution.from_json(_load_json(args.dist)) if args.dist else None


def _exact_or_none(model, y, x, dist=None):
    try:
        return _q(probability(model, y, x, dist))
    except OracleLimitError:
        return None


def cmd_explain(args) -> dict:
    model, x = _model(args), Instance.parse(args.instance)
    if args.estimator == "exact":
        estimator = ExactEstimator()
    else:
        estimator = MonteCarloEstimator(args.samples, chunk_size=args.chunk_size)
    params = ExplainerParams(to_fraction(args.delta), to_fraction(args.epsilon),
                             to_fraction(args.gamma), seed=args.seed, estimator=estimator,
                             gamma_adjust=not args.raw_gamma)
    res = explain(model, x, params)
    return {
        "estimator": estimator.name,
        "delta_star": _q(res.delta_star),
        "delta_star_float": float(res.delta_star),
        "k": res.k,
        "explanation": str(res.explanation),
        "samples": res.samples,
        "steps": res.steps,
        "trace": [{"m": m, "estimate": _q(v)} for m, v in res.trace],
        "exact_probability": _exact_or_none(model, res.explanation, x),
    }


def cmd_estimate(args) -> dict:
    model, x = _model(args), Instance.parse(args.instance)
    y = PartialInstance.parse(args.partial) if args.partial else PartialInstance.unknown(model.dim)
    dist = _dist(args)
    v = mc_estimate(model, y, x, args.samples, args.seed, dist, chunk_size=args.chunk_size)
    return {
        "partial": str(y),
        "samples": args.samples,
        "estimate": _q(v),
        "estimate_float": float(v),
        "exact_probability": _exact_or_none(model, y, x, dist),
    }


def cmd_exact(args) -> dict:
    model, x = _model(args), Instance.parse(args.instance)
    out = {}
    if args.partial:
        y = PartialInstance.parse(args.partial)
        out["partial"] = str(y)
        out["probability"] = _q(probability(model, y, x, _dist(args)))
    if args.delta is not None:
        k, y = min_delta_sr_exact(model, x, to_fraction(args.delta), _dist(args), method="auto")
        out.update(k=k, explanation=str(y), probability=_q(probability(model, y, x)))
    if not out:
        raise ValueError("exact needs --delta and/or --partial")
    return out


def cmd_prefixes(args) -> dict:
    model, x = _model(args), Instance.parse(args.instance)
    s = scores(model, x)
    rows = []
    for k, y in enumerate(greedy_prefixes(model, x)):
        rows.append({"k": k, "partial": str(y), "probability": _exact_or_none(model, y, x)})
    return {"class": classify(model, x), "scores": [_q(v) for v in s], "prefixes": rows}


def cmd_gap_demo(args) -> dict:
    delta, eps, gexp = (to_fraction(v) for v in (args.delta, args.epsilon, args.gamma_exp))
    rows = experiments.gap_sweep(delta, eps, gexp, args.n)
    for r in rows:
        r["tail"] = float(r["tail"])
        r["ratio"] = _q(r["ratio"])
    return {"delta": _q(delta), "epsilon": _q(eps), "gamma_exp": _q(gexp), "rows": rows}


def cmd_local_min(args) -> dict:
    model, x = _model(args), Instance.parse(args.instance)
    rep = experiments.check_local_minimality_theorem(model, x, to_fraction(args.delta), _dist(args))
    return {
        "sufficient": rep.n_sufficient,
        "locally_minimal": rep.n_locally_minimal,
        "subset_minimal": rep.n_subset_minimal,
        "counterexamples": [str(y) for y in rep.counterexamples],
        "ok": rep.ok,
    }


def _text(payload: dict) -> str:
    lines = []
    for key, val in payload.items():
        if key == "schema":
            continue
        if isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            for row in val:
                lines.append("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psr", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p, dist=False):
        p.add_argument("--model", required=True, help="model JSON file")
        p.add_argument("--instance", required=True, help="bitstring, e.g. 10011")
        if dist:
            p.add_argument("--dist", help="product distribution JSON file")

    p = sub.add_parser("explain", parents=[common], help="randomised minimum explanation")
    model_args(p)
    p.add_argument("--delta", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--estimator", choices=("mc", "exact"), default="mc")
    p.add_argument("--samples", type=int, help="override the samples per estimate")
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK)
    p.add_argument("--raw-gamma", action="store_true", help="skip the gamma/3 adjustment")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("estimate", parents=[common], help="Monte Carlo probability of a partial instance")
    model_args(p, dist=True)
    p.add_argument("--partial", help="ternary string with '*' for unknown; default all unknown")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", parents=[common], help="exact probability or exact minimum explanation")
    model_args(p, dist=True)
    p.add_argument("--delta")
    p.add_argument("--partial")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("prefixes", parents=[common], help="scores and greedy prefixes")
    model_args(p)
    p.set_defaults(func=cmd_prefixes)

    p = sub.add_parser("gap-demo", parents=[common], help="size gap between delta and delta+epsilon explanations")
    p.add_argument("--delta", default="0.5")
    p.add_argument("--epsilon", default="0.25")
    p.add_argument("--gamma-exp", default="0.25")
    p.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])
    p.set_defaults(func=cmd_gap_demo)

    p = sub.add_parser("local-min-check", parents=[common], help="locally minimal vs subset-minimal, exhaustively")
    model_args(p, dist=True)
    p.add_argument("--delta", required=True)
    p.set_defaults(func=cmd_local_min)

    p = sub.add_parser("verify-paper", parents=[common], help="reproduce the worked examples and property suites")
    p.set_defaults(func=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-paper":
            reports = experiments.verify_paper()
            if args.output == "json":
                print(experiments.dumps(reports))
            else:
                print(f"kernel backend: {BACKEND}")
                print("\n\n".join(r.to_text() for r in reports))
            return 0 if all(r.ok for r in reports) else EXIT_MISMATCH
        payload = {"schema": SCHEMA, "command": args.command, **args.func(args)}
    except OracleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_CAP
    except (ValueError, TypeError, KeyError, IndexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps(payload, indent=2) if args.output == "json" else _text(payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
