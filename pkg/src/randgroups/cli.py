"""Command line interface.

Exit codes: 0 success, 1 precondition or verdict failure, 2 usage error
(bad arguments, missing or unparsable input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import __version__
from .bounds import bounds_report, density_upper, stats_from_presentation
from .cancellation import conjugate, is_c_prime, piece_report
from .counting import (
    count_cyclically_reduced,
    count_cyclically_reduced_upto,
    endpoint_counts,
    omission_bound,
)
from .coverage import m_star
from .errors import DiagramError, InfeasibleConfigError, PreconditionError, PresentationParseError
from .experiment import load_config, run_experiment, to_jsonable
from .fileio import format_presentation, read_presentation
from .sampler import DensityConfig, FewRelatorConfig, make_rng, sample_density, sample_few_relator
from .words import format_word


class UsageError(Exception):
    pass


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n")


def _load(path: str):
    try:
        return read_presentation(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc


def _parse_fraction(text: str):
    from fractions import Fraction

    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def cmd_sample(args) -> int:
    if args.model == "few":
        if args.n is None:
            raise UsageError("--n is required for the few-relator model")
        p = sample_few_relator(FewRelatorConfig(args.m, args.n, args.l, args.seed))
    else:
        if args.d is None:
            raise UsageError("--d is required for the density model")
        p = sample_density(DensityConfig(args.m, args.d, args.l, args.seed))
    text = format_presentation(p)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    p = _load(args.presentation)
    report = piece_report(p)
    cov = m_star(p)
    out = {
        "m": p.m,
        "relators": len(p.relators),
        "max_length": max(p.lengths),
        "min_length": min(p.lengths),
        "lambda_star": report.lambda_star,
        "max_piece_length_per_relator": list(report.max_piece_length_per_relator),
        "witness": None,
        "m_star": cov.m_star,
        "missing_witness": format_word(cov.missing_witness, p.m) if cov.missing_witness else None,
        "per_length_counts": {str(k): v for k, v in cov.per_length_counts.items()},
    }
    if report.witness is not None:
        w = report.witness
        out["witness"] = {
            "piece": format_word(w.piece, p.m),
            "first": {**w.first._asdict(), "word": format_word(conjugate(p, w.first), p.m)},
            "second": {**w.second._asdict(), "word": format_word(conjugate(p, w.second), p.m)},
        }
    status = 0
    if args.check is not None:
        verdict = is_c_prime(p, _parse_fraction(args.check), report)
        out["c_prime"] = {"lambda": verdict.lam, "holds": verdict.holds}
        status = 0 if verdict.holds else 1
    _dump(out)
    return status


def cmd_bounds(args) -> int:
    p = _load(args.presentation)
    if p.relators:
        stats = stats_from_presentation(p)
        report = bounds_report(stats, d=args.d, l=args.l)
        _dump(asdict(report))
        return 0
    # a free group: only the density formula can be evaluated
    out = {"stats": {"m": p.m, "relators": 0}, "notes": ["no relators: presentation bounds do not apply"]}
    if args.d is not None:
        if args.l is None:
            raise UsageError("--l is required with --d for a presentation without relators")
        try:
            out["density_upper"] = density_upper(p.m, args.d, args.l)
        except PreconditionError as exc:
            out["density_upper"] = f"precondition failed: {exc}"
    _dump(out)
    return 0


def cmd_count(args) -> int:
    out = {
        "m": args.m,
        "l": args.l,
        "N_l": count_cyclically_reduced(args.m, args.l),
        "N_upto_l": count_cyclically_reduced_upto(args.m, args.l),
    }
    if args.l >= 3:
        out["endpoint_counts"] = asdict(endpoint_counts(args.m, args.l - 2))
    if args.omission is not None:
        out["omission_bound"] = omission_bound(args.m, args.l, args.omission)
    # big integers as strings keep the JSON portable
    for k in ("N_l", "N_upto_l"):
        out[k] = str(out[k])
    if "endpoint_counts" in out:
        out["endpoint_counts"] = {k: str(v) for k, v in out["endpoint_counts"].items()}
    _dump(out)
    return 0


def cmd_sweep(args) -> int:
    try:
        cfg = load_config(args.config, seed=args.seed)
    except FileNotFoundError as exc:
        raise UsageError(f"no such config file: {args.config}") from exc
    except ValueError as exc:
        if isinstance(exc, (PreconditionError, InfeasibleConfigError)):
            raise
        raise UsageError(f"cannot parse config: {exc}") from exc
    result = run_experiment(cfg)
    sys.stdout.write(result.to_csv() if args.csv else result.to_json() + "\n")
    return 0


def cmd_verify_diagram(args) -> int:
    from .diagrams import load_diagram, verify_diagram

    p = _load(args.presentation)
    try:
        dg = load_diagram(args.diagram)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {args.diagram}") from exc
    try:
        report = verify_diagram(dg, p, _parse_fraction(args.lam))
    except DiagramError as exc:
        _dump({"valid": False, "error": str(exc)})
        return 1
    out = {"valid": True, **asdict(report)}
    _dump(out)
    return 0 if report.is_reduced and report.euler_identity_holds else 1


def cmd_ball(args) -> int:
    from .cayley import cayley_ball, free_ball_size

    p = _load(args.presentation)
    ball = cayley_ball(p, args.radius)
    out = {
        "radius": args.radius,
        "vertices": len(ball),
        "level_sizes": ball.level_sizes(),
        "free_group_ball": free_ball_size(p.m, args.radius),
    }
    if args.words:
        out["words"] = [format_word(w, p.m) for w in ball.words]
    _dump(out)
    return 0


def cmd_slimness(args) -> int:
    from .cayley import measure_slimness

    p = _load(args.presentation)
    res = measure_slimness(p, args.samples, args.n_gon, args.radius, make_rng(args.seed))
    bound = 2 * max(p.lengths)
    out = {
        "max_slimness": res.max_slimness,
        "samples": len(res.per_sample),
        "n_gon_size": res.n_gon_size,
        "radius": res.radius,
        "hyperbolicity_bound": bound,
        "within_bound": res.max_slimness <= bound,
    }
    _dump(out)
    return 0 if out["within_bound"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randgroups", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="sample a random presentation")
    s.add_argument("--model", choices=["few", "density"], required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=float)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("analyze", help="pieces, lambda* and M* of a presentation")
    s.add_argument("presentation")
    s.add_argument("--check", metavar="LAMBDA", help="also decide C'(LAMBDA); exit 1 if it fails")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("bounds", help="conformal dimension bounds")
    s.add_argument("presentation")
    s.add_argument("--d", type=float, help="density for the density upper bound")
    s.add_argument("--l", type=int, help="relator length (defaults to the longest relator)")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("count", help="count cyclically reduced words")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--omission", type=int, metavar="G", help="also evaluate the omission bound for length G")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("sweep", help="run a Monte Carlo sweep from a TOML config")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--csv", action="store_true", help="emit rows as CSV instead of JSON")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify-diagram", help="check a van Kampen diagram")
    s.add_argument("diagram")
    s.add_argument("presentation")
    s.add_argument("--lambda", dest="lam", default="1/6")
    s.set_defaults(func=cmd_verify_diagram)

    s = sub.add_parser("ball", help="ball in the Cayley graph")
    s.add_argument("presentation")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--words", action="store_true", help="list the vertex names")
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("slimness", help="slimness of random geodesic polygons")
    s.add_argument("presentation")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--n-gon", type=int, default=3)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_slimness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"randgroups: {exc}", file=sys.stderr)
        return 2
    except PresentationParseError as exc:
        print(f"randgroups: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, InfeasibleConfigError, DiagramError) as exc:
        print(f"randgroups: {exc}", file=sys.stderr)
        return 1
