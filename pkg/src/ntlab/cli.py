"""Command-line driver: `nt <experiment> [options]`.

Exit codes: 0 all checks within policy, 1 a check was flagged, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .arith import ArithmeticDomainError, arith_values, build_prime_table
from .dirichlet import build_character_group
from .lseries import DEFAULT_SLACK, ConfigError, classify_exceptional
from .linnik import run_linnik
from .meanvalue import M, theorem1_decompose, values
from .multfun import ContractBreach, from_name
from .pretense import DEFAULT_C, halasz_bound, taxonomy_pipeline
from .report import ExperimentConfig, envelope, write_report
from .verify import SUITES, run_verify

EXIT_OK, EXIT_FLAGGED, EXIT_CONFIG = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nt", description="Multiplicative functions in arithmetic progressions: experiments and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one inequality-verification suite")
    v.add_argument("lemma", choices=sorted(SUITES))
    v.add_argument("--D", type=int)
    v.add_argument("--x", type=float)
    v.add_argument("--y", type=float)
    v.add_argument("--T", type=float)
    v.add_argument("--c", type=float)
    v.add_argument("--k", type=int)
    v.add_argument("--delta", type=float)
    v.add_argument("--g")
    v.add_argument("--ladder", type=float, nargs="+", help="override the parameter ladder")
    v.add_argument("--instances", type=int)
    _common(v)

    d = sub.add_parser("decompose", help="progression sum = main term + exceptional terms + residual")
    d.add_argument("--g", default="one")
    d.add_argument("--D", type=int, required=True)
    d.add_argument("--a", type=int, default=1)
    d.add_argument("--y", type=float, required=True)
    d.add_argument("--alpha", type=float, default=0.5)
    d.add_argument("--J", choices=("none", "classify", "all"), default="none")
    d.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    _common(d)

    e = sub.add_parser("exceptional", help="classify exceptional characters")
    e.add_argument("--g", required=True)
    e.add_argument("--D", type=int, required=True)
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--alpha", type=float, default=0.5)
    e.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    _common(e)

    t = sub.add_parser("taxonomy", help="exceptional characters, nearness and order claims")
    t.add_argument("--g", required=True)
    t.add_argument("--D", type=int, required=True)
    t.add_argument("--x", type=float, required=True)
    t.add_argument("--c", type=float, default=1.0)
    t.add_argument("--c1", type=float, default=1.0)
    t.add_argument("--k", type=int)
    t.add_argument("--r", type=int)
    t.add_argument("--alpha", type=float)
    t.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    _common(t)

    h = sub.add_parser("halasz", help="Halasz-type bound against the actual partial sum")
    h.add_argument("--g", default="mobius")
    h.add_argument("--x", type=float, required=True)
    h.add_argument("--T", type=float, default=100.0)
    h.add_argument("--Y", type=float, default=2.0)
    h.add_argument("--beta", type=float, default=1.0)
    h.add_argument("--c", type=float, default=1.0)
    h.add_argument("--c1", type=float, default=1.0)
    _common(h)

    li = sub.add_parser("linnik", help="least primes in reduced classes and the two-sided prime sum")
    li.add_argument("--D", type=int, default=300, help="largest modulus")
    li.add_argument("--N", type=int, default=10**6)
    li.add_argument("--gamma", type=float, default=0.5)
    _common(li)

    s = sub.add_parser("sieve-stats", help="prime table summary")
    s.add_argument("--x", type=float, required=True)
    _common(s)
    return ap


def _config(args: argparse.Namespace, extra: dict) -> ExperimentConfig:
    known = {k: getattr(args, k, None) for k in ("D", "x", "y", "alpha", "delta", "T", "c", "c1", "k", "g")}
    return ExperimentConfig(
        experiment=args.command if args.command != "verify" else f"verify:{args.lemma}",
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
        extra={k: v for k, v in extra.items() if v is not None},
        **known,
    )


def _table_for(x: float):
    return build_prime_table(int(math.floor(x)))


def cmd_verify(args) -> tuple[dict, ExperimentConfig, str | None, bool]:
    cfg = _config(args, {"ladder": args.ladder, "instances": args.instances})
    res = run_verify(args.lemma, cfg)
    rep = envelope(cfg, res.to_json(), res.calibration)
    return rep, cfg, "rows", res.passed


def cmd_decompose(args):
    g = from_name(args.g)
    cfg = _config(args, {"a": args.a, "J": args.J, "slack": args.slack})
    tb = _table_for(max(args.y, args.D**2 if args.J == "classify" else 2))
    group = build_character_group(args.D) if args.D > 1 else None
    if args.J == "all" and group:
        J = [c for c in group.characters if not c.is_principal]
    elif args.J == "classify" and group:
        J = list(classify_exceptional(g, args.D, max(args.y, args.D**2), args.alpha, tb, slack=args.slack).J)
    else:
        J = []
    r = theorem1_decompose(g, args.a, args.y, args.D, J, args.alpha, tb)
    ok = r.error_envelope is None or abs(r.residual) <= r.error_envelope
    return envelope(cfg, r.to_json()), cfg, None, ok


def cmd_exceptional(args):
    g = from_name(args.g)
    cfg = _config(args, {"slack": args.slack})
    rep = classify_exceptional(g, args.D, args.x, args.alpha, _table_for(args.x), slack=args.slack)
    return envelope(cfg, rep.to_json(), {"grid_slack": args.slack}), cfg, None, True


def cmd_taxonomy(args):
    g = from_name(args.g)
    cfg = _config(args, {"r": args.r, "slack": args.slack})
    rep = taxonomy_pipeline(
        g, args.D, args.x, _table_for(args.x), c=args.c, c1=args.c1, k=args.k, alpha=args.alpha, slack=args.slack, r=args.r
    )
    ok = rep["applicable"] and rep["order_claim_holds"]
    if "theorem_B" in rep:
        ok = ok and rep["theorem_B"]["products_below_r"] and rep["theorem_B"]["squares_below_r"]
    cal = {"c_delta": DEFAULT_C, "grid_slack": args.slack}
    return envelope(cfg, rep, cal), cfg, None, bool(ok)


def cmd_halasz(args):
    g = from_name(args.g)
    cfg = _config(args, {"Y": args.Y, "beta": args.beta})
    tb = _table_for(args.x)
    res = halasz_bound(g, args.x, args.T, tb, Y=args.Y, beta=args.beta, c=args.c, c1=args.c1)
    actual = abs(M(values(g, int(args.x), tb), args.x))
    body = res.to_json()
    body["actual_abs_M"] = actual
    body["ratio_bound_over_actual"] = res.bound / actual if actual else None
    return envelope(cfg, body), cfg, None, bool(res.applicable)


def cmd_linnik(args):
    cfg = _config(args, {"N": args.N, "gamma": args.gamma})
    rep = run_linnik(args.D, args.N, args.gamma)
    ok = rep["all_classes_found"] and rep["bb13"]["within_shape"]
    cal = {"C": rep["bb13"]["C"], "calibration_D_max": rep["bb13"]["calibration_D_max"]}
    return envelope(cfg, rep, cal), cfg, "least_primes", bool(ok)


def cmd_sieve_stats(args):
    cfg = _config(args, {})
    x = int(math.floor(args.x))
    tb = build_prime_table(x)
    av = arith_values(tb)
    body = {
        "x": x,
        "prime_count": tb.prime_count(x),
        "prime_reciprocal_sum": float(tb.reciprocal_prefix[tb.prime_count(x)]),
        "mertens_M": int(np.sum(av.mobius[1:], dtype=np.int64)),
        "chebyshev_psi": float(np.sum(av.von_mangoldt)),
        "largest_prime": int(tb.primes[-1]) if tb.primes.size else None,
    }
    return envelope(cfg, body), cfg, None, True


COMMANDS = {
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "exceptional": cmd_exceptional,
    "taxonomy": cmd_taxonomy,
    "halasz": cmd_halasz,
    "linnik": cmd_linnik,
    "sieve-stats": cmd_sieve_stats,
}


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        rep, cfg, table_key, ok = COMMANDS[args.command](args)
    except (ConfigError, ArithmeticDomainError, ContractBreach, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    text = write_report(rep, cfg, table_key)
    if not cfg.out:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FLAGGED


if __name__ == "__main__":
    sys.exit(main())
