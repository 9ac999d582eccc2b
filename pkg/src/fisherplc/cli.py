"""Command-line entry point: parse, dispatch, serialize. Nothing else.

Exit codes: 0 certified/verified, 1 refuted/violation found, 2 invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__, io
from .certify import certify_equilibrium
from .games import check_well_supported, support_enumeration_nash
from .rational import format_rational, parse_rational
from .reduction import (
    DecodeError, build_price_regulating_market, build_reduction_market, check_price_regulation,
    decode_prices, roundtrip_check,
)
from .solver import SolverConfig, tatonnement

log = logging.getLogger("fisherplc")


class InputError(Exception):
    pass


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path: str):
    try:
        return io.read_json(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")


def _prices(arg: str, inputs: dict):
    text = arg.strip()
    if text.startswith("["):
        return [parse_rational(v) for v in text[1:-1].split(",") if v.strip()]
    inputs[arg] = _digest(arg)
    return io.prices_from_json(_load(arg))


def _market(path: str, inputs: dict):
    inputs[path] = _digest(path)
    return io.market_from_json(_load(path))


def _game(path: str, inputs: dict):
    inputs[path] = _digest(path)
    return io.game_from_json(_load(path))


def cmd_build_mn(args, inputs):
    m = build_price_regulating_market(args.n)
    io.write_json(args.out, io.market_to_json(m))
    return 0, {"out": args.out, "goods": m.num_goods, "buyers": m.num_buyers}


def cmd_reduce(args, inputs):
    g = _game(args.game, inputs)
    m, meta = build_reduction_market(g)
    io.write_json(args.out, io.market_to_json(m, meta))
    return 0, {"out": args.out, "n": meta.n, "goods": m.num_goods, "buyers": m.num_buyers}


def cmd_certify(args, inputs):
    m, _ = _market(args.market, inputs)
    p = _prices(args.prices, inputs)
    res = certify_equilibrium(m, p, parse_rational(args.eps), exact=args.exact)
    return (0 if res else 1), res.to_json()


def cmd_decode(args, inputs):
    m, meta = _market(args.market, inputs)
    if meta is None:
        raise InputError("market file carries no reduction meta; decode needs a reduced market")
    p = _prices(args.prices, inputs)
    tol = parse_rational(args.clamp_tol) if args.clamp_tol else None
    try:
        d = decode_prices(p, meta.n, tol)
    except DecodeError as exc:
        return 1, {"decoded": False, "error": str(exc)}
    return 0, {"decoded": True, **d.to_json()}


def cmd_nash_check(args, inputs):
    g = _game(args.game, inputs)
    inputs[args.profile] = _digest(args.profile)
    prof = io.profile_from_json(_load(args.profile))
    problem = prof.validate(g.n)
    if problem:
        raise InputError(f"invalid profile: {problem}")
    v = check_well_supported(g, prof, parse_rational(args.eps))
    out = {"well_supported": v.ok, "reason": v.reason}
    if not v.ok:
        d = v.details
        out["violation"] = {"player": d["player"], "i": d["i"] + 1, "j": d["j"] + 1, "gap": format_rational(d["gap"])}
    return (0 if v else 1), out


def cmd_oracle_nash(args, inputs):
    g = _game(args.game, inputs)
    try:
        eqs = support_enumeration_nash(g, max_n=args.max_n)
    except ValueError as exc:
        raise InputError(str(exc))
    return 0, {"equilibria": [io.profile_to_json(e) for e in eqs]}


def cmd_solve(args, inputs):
    m, _ = _market(args.market, inputs)
    initial = "uniform" if args.initial is None else tuple(_prices(args.initial, inputs))
    cfg = SolverConfig(
        step=parse_rational(args.step), max_iterations=args.max_iters, eps=parse_rational(args.eps),
        initial=initial, damping=args.damping, arithmetic=args.arithmetic, seed=args.seed,
    )
    rep = tatonnement(m, cfg)
    if args.trace:
        rep.write_trace_csv(args.trace)
    out = {
        "outcome": rep.outcome,
        "prices": io.prices_to_json(rep.prices),
        "iterations": rep.iterations,
        "restarts": rep.restarts,
        "best_residual": rep.best_residual,
    }
    if rep.certificate is not None:
        out["certificate"] = rep.certificate.to_json()
    return (0 if rep.certified else 1), out


def cmd_roundtrip(args, inputs):
    g = _game(args.game, inputs)
    p = _prices(args.prices, inputs)
    rep = roundtrip_check(
        g, p,
        parse_rational(args.eps_market) if args.eps_market else None,
        parse_rational(args.eps_nash) if args.eps_nash else None,
    )
    return (0 if rep.implication_holds else 1), rep.to_json()


def cmd_price_reg(args, inputs):
    p = _prices(args.prices, inputs)
    v = check_price_regulation(p, args.pairs, parse_rational(args.eps))
    out = {"regulated": v.ok, "reason": v.reason}
    if not v.ok:
        out["pair"] = v.details.get("pair")
        out["bound"] = v.details.get("bound")
    return (0 if v else 1), out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fisherplc", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build-mn", help="write the price-regulating market with 2n goods")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_build_mn)

    s = sub.add_parser("reduce", help="compile a sparse normalized game into a market")
    s.add_argument("--game", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("certify", help="certify an (approximate) equilibrium price vector")
    s.add_argument("--market", required=True)
    s.add_argument("--prices", required=True, help="JSON file or inline list such as [1/1,2/1]")
    s.add_argument("--eps", default="0/1")
    s.add_argument("--exact", action="store_true", help="exact clearing rule; ignores --eps")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("decode", help="decode reduced-market prices into a strategy profile")
    s.add_argument("--market", required=True)
    s.add_argument("--prices", required=True)
    s.add_argument("--clamp-tol")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("nash-check", help="check an eps-well-supported Nash equilibrium")
    s.add_argument("--game", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--eps", default="0/1")
    s.set_defaults(func=cmd_nash_check)

    s = sub.add_parser("oracle-nash", help="exact support enumeration for tiny games")
    s.add_argument("--game", required=True)
    s.add_argument("--max-n", type=int, default=4)
    s.set_defaults(func=cmd_oracle_nash)

    s = sub.add_parser("solve", help="tatonnement search with certification in the loop")
    s.add_argument("--market", required=True)
    s.add_argument("--step", default="1/4")
    s.add_argument("--max-iters", type=int, default=10_000)
    s.add_argument("--eps", default="1/100")
    s.add_argument("--initial")
    s.add_argument("--damping", choices=["fixed", "halving"], default="fixed")
    s.add_argument("--arithmetic", choices=["float", "exact"], default="float")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("roundtrip", help="certify, decode and Nash-check reduced-market prices")
    s.add_argument("--game", required=True)
    s.add_argument("--prices", required=True)
    s.add_argument("--eps-market")
    s.add_argument("--eps-nash")
    s.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("price-reg", help="check the price-regulation bounds pairwise")
    s.add_argument("--prices", required=True)
    s.add_argument("--pairs", type=int, required=True)
    s.add_argument("--eps", required=True)
    s.set_defaults(func=cmd_price_reg)
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    inputs: dict = {}
    try:
        code, report = args.func(args, inputs)
    except (InputError, ValueError, KeyError, TypeError, OSError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}, "command": args.command,
               "version": __version__}
        print(json.dumps(err, indent=1))
        print(f"fisherplc {args.command}: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "version": __version__, "inputs": inputs, **report}
    print(json.dumps(report, indent=1))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
