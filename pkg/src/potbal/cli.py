"""Command-line front end ``potbal``.

Distributions are read from JSON files (``-`` for stdin) or generated with
``gen:integers:N``, ``gen:ray:STEP:N`` or ``gen:lattice-i:N``. Growth functions
are JSON files or one of the short names ``sinpi``, ``absre``, ``zero``.

Exit status: 0 success, 1 an Unbounded verdict under ``--assert-bounded``,
2 unparsable input or arguments, 3 a violated precondition or failed check.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import io as pio
from .balayage import sweep0, sweep01, sweep1, sweep_left, sweep_strip, total_variation
from .charge import ChargeDistribution
from .construct import balance, complete_full, complete_iR, complete_R, uniformize_rh, uniformize_strip
from .criteria import (
    DomainKind,
    ScanDomain,
    dyadic_gap_report,
    eps_condition,
    inequality_scan,
    interval_gap_report,
    mr_positive,
    mu_rh_check,
    pair_gap_report,
    redheffer_bound,
)
from .errors import PotbalError
from .fixtures import generate
from .logmeasure import LindelofKind, Side, ell_side, lindelof_report
from .quadrature import DEFAULT_RTOL
from .smallsets import CoverInput, IntervalSet, exceptional_bound_check, greedy_cover, hausdorff_content, q_of_E
from .subfun import Builtin, BuiltinName, GrowthFunction, RadiusProfile, circle_mean, disk_mean, type_estimate
from .verdict import DEFAULT_N_MAX, DEFAULT_SLOPE_TOL, Verdict

EXIT_OK, EXIT_UNBOUNDED, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3

SHORT_FUNCTIONS = {
    "sinpi": BuiltinName.LOG_ABS_SIN_PI,
    "absre": BuiltinName.ABS_RE,
    "zero": BuiltinName.ZERO,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    n_max: int = DEFAULT_N_MAX
    slope_tol: float = DEFAULT_SLOPE_TOL
    quad_tol: float = DEFAULT_RTOL
    trunc: float = 1e4
    output_format: str = "json"


class UsageError(ValueError):
    """Arguments that parse but do not make sense together."""


# input helpers -----------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise pio.FormatError(f"cannot read {path}: {exc}") from exc


def load_distribution(source: str) -> ChargeDistribution:
    """Read a distribution from a path, ``-`` or a ``gen:`` generator string."""
    if source.startswith("gen:"):
        return generate(source[4:])
    return pio.distribution_from_dict(pio.loads(_read_text(source)))


def load_function(source: str, trunc: float = 1e4) -> GrowthFunction:
    """Short builtin name or JSON path; ``trunc`` is the default canonical-product truncation."""
    if source in SHORT_FUNCTIONS:
        return Builtin(SHORT_FUNCTIONS[source])
    return pio.function_from_dict(pio.loads(_read_text(source)), default_trunc=trunc)


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} numbers, got {text!r}")
    return vals


def _complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"not a complex number: {text!r}") from exc


def _intervals(items: Sequence[str] | None) -> IntervalSet:
    return IntervalSet(tuple(tuple(_floats(s, 2)) for s in items or ()))  # type: ignore[misc]


def _profile(text: str) -> RadiusProfile:
    kind, _, rest = text.partition(":")
    if kind == "const":
        return RadiusProfile.constant(_floats(rest, 1)[0])
    if kind == "power":
        c, R, P = _floats(rest, 3)
        return RadiusProfile.power_floor(c, R, P)
    raise UsageError(f"unknown radius profile {text!r}; use const:R or power:C,R,P")


def _threads() -> int | None:
    raw = os.environ.get("POTBAL_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError("POTBAL_THREADS must be a positive integer") from exc
    if n < 1:
        raise UsageError("POTBAL_THREADS must be a positive integer")
    return n


# output --------------------------------------------------------------------------


def _csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) else format(float(v), ".17g") for v in (row[c] for c in columns)])
    return buf.getvalue()


@dataclass
class Outcome:
    payload: dict
    rows: list[dict] | None = None
    columns: tuple[str, ...] = ()
    verdict: Verdict | None = None


# commands --------------------------------------------------------------------------


def _cmd_ell(args, cfg: RunConfig) -> Outcome:
    nu = load_distribution(args.nu)
    if args.r is not None or args.R is not None:
        if args.r is None or args.R is None or len(args.r) != len(args.R):
            raise UsageError("--r and --R need the same number of values")
        r, R = np.array(args.r, float), np.array(args.R, float)
    else:
        ns, Ns = np.triu_indices(cfg.n_max + 1, k=1)
        r, R = 2.0**ns, 2.0**Ns
    vals = ell_side(nu, r, R, Side(args.side))
    rows = [{"r": float(a), "R": float(b), "value": float(v)} for a, b, v in zip(r, R, vals)]
    return Outcome({"side": args.side, "rows": rows}, rows, ("r", "R", "value"))


def _cmd_lindelof(args, cfg: RunConfig) -> Outcome:
    nu = load_distribution(args.nu)
    r_max = args.r_max if args.r_max is not None else 2.0**cfg.n_max
    rep = lindelof_report(nu, LindelofKind(args.kind), r_max, cfg.slope_tol)
    rows = [{"r": r, "value": v} for r, v in rep.samples]
    return Outcome(rep.to_dict(), rows, ("r", "value"), rep.verdict)


def _cmd_sweep(args, cfg: RunConfig) -> Outcome:
    nu = load_distribution(args.nu)
    if args.strip is not None:
        bc = sweep_strip(nu, args.strip, args.r0)
    elif args.left:
        bc = sweep_left(nu, args.r0, genus1=args.genus != "0")
    else:
        bc = {"0": lambda: sweep0(nu), "1": lambda: sweep1(nu), "01": lambda: sweep01(nu, args.r0)}[args.genus]()
    out = pio.boundary_to_dict(bc)
    out["total_variation"] = total_variation(bc)
    return Outcome(out)


def _criterion_outcome(rep, extra: dict | None = None) -> Outcome:
    payload = rep.to_dict()
    if extra:
        payload.update(extra)
    return Outcome(payload, payload["rows"], ("n", "N", "ell_nu", "comparison", "gap"), rep.verdict)


def _cmd_criterion(args, cfg: RunConfig) -> Outcome:
    kind = args.kind
    nu = load_distribution(args.nu)
    if kind == "dyadic":
        if not args.M:
            raise UsageError("criterion dyadic needs --M")
        M = load_function(args.M, cfg.trunc)
        if args.intervals:
            rep = interval_gap_report(nu, M, cfg.n_max, n_samples=args.intervals, seed=args.seed,
                                      slope_tol=cfg.slope_tol, rtol=cfg.quad_tol)
        else:
            rep = dyadic_gap_report(nu, M, cfg.n_max, slope_tol=cfg.slope_tol, rtol=cfg.quad_tol, threads=_threads())
        return _criterion_outcome(rep)
    if kind in ("pair", "mr"):
        if not args.mu:
            raise UsageError(f"criterion {kind} needs --mu")
        mu = load_distribution(args.mu)
        if kind == "mr":
            return _criterion_outcome(mr_positive(nu, mu, cfg.n_max, slope_tol=cfg.slope_tol))
        if args.intervals:
            rep = interval_gap_report(nu, mu, cfg.n_max, n_samples=args.intervals, seed=args.seed, slope_tol=cfg.slope_tol)
        else:
            rep = pair_gap_report(nu, mu, cfg.n_max, slope_tol=cfg.slope_tol)
        return _criterion_outcome(rep)
    if kind == "eps":
        if args.eps is None:
            raise UsageError("criterion eps needs --eps")
        C, rep = eps_condition(nu, args.eps, cfg.n_max, slope_tol=cfg.slope_tol)
        return _criterion_outcome(rep, {"C": C, "eps": args.eps})
    if kind == "mu-rh":
        return _criterion_outcome(mu_rh_check(nu, cfg.n_max, mirrored=args.mirrored, slope_tol=cfg.slope_tol))
    if args.c is None:
        raise UsageError("criterion redheffer needs --c")
    cert = redheffer_bound(nu, args.c, cfg.n_max, slope_tol=cfg.slope_tol)
    rows = [{"n": k, "partial_sum": float(s)} for k, s in enumerate(cert.partial_sums)]
    payload = {
        "kind": "redheffer",
        "c": args.c,
        "certificate_sum": cert.certificate_sum,
        "verdict": cert.verdict.value,
        "slope": cert.slope,
        "n_max": cfg.n_max,
        "slope_tol": cfg.slope_tol,
        "pairing": list(cert.pairing),
        "rows": rows,
    }
    return Outcome(payload, rows, ("n", "partial_sum"), cert.verdict)


def _uniformization_dict(res) -> dict:
    return {
        "alpha": pio.distribution_to_dict(res.alpha),
        "beta_plus": pio.boundary_to_dict(res.beta_plus),
        "beta_minus": pio.boundary_to_dict(res.beta_minus),
        "c": res.c,
        "c_right": res.c_right,
        "c_left": res.c_left,
        "residual_sup": res.residual_sup,
        "beta_min": res.beta_min,
        "beta_certified": res.beta_certified,
    }


def _cmd_construct(args, cfg: RunConfig) -> Outcome:
    kind = args.kind
    nu = load_distribution(args.nu)
    n_max = args.levels
    if kind == "alpha":
        bal = balance(nu)
        return Outcome({"alpha": pio.distribution_to_dict(bal.alpha), "sup_eta": bal.sup_eta, "sup_combined": bal.sup_combined})
    if kind in ("uniformize", "uniformize-strip"):
        if not args.mu or args.a is None:
            raise UsageError(f"construct {kind} needs --mu and --a")
        mu = load_distribution(args.mu)
        if kind == "uniformize":
            res = uniformize_rh(nu, mu, args.a, y_max=args.y_max)
        else:
            if args.b is None:
                raise UsageError("construct uniformize-strip needs --b")
            res = uniformize_strip(nu, mu, args.a, args.b, y_max=args.y_max, n_max=n_max)
        return Outcome(_uniformization_dict(res))
    fn: Callable[..., ChargeDistribution] = {"complete-r": complete_R, "complete-ir": complete_iR, "complete": complete_full}[kind]
    out = fn(nu, n_max=n_max)
    key = {"complete-r": "gamma", "complete-ir": "beta", "complete": "delta"}[kind]
    return Outcome({key: pio.distribution_to_dict(out)})


def _cover_input(args) -> CoverInput:
    if args.points and args.intervals:
        raise UsageError("give either --points or --intervals")
    if args.points:
        return CoverInput.of_points([_complex(p) for p in args.points])
    return CoverInput.of_intervals(_intervals(args.intervals), args.line_y)


def _cmd_content(args, cfg: RunConfig) -> Outcome:
    S = _cover_input(args)
    prof = _profile(args.profile)
    est = hausdorff_content(S, args.d, prof)
    payload: dict[str, Any] = {"d": args.d, "upper": est.upper, "lower": est.lower, "exact": est.exact}
    if args.greedy:
        if S.points is None:
            raise UsageError("--greedy needs --points")
        payload["greedy"] = greedy_cover(S.points, args.d, prof)
    if args.t is not None:
        chk = exceptional_bound_check(S, args.d, prof, args.t)
        payload["bound_check"] = {"holds": chk.holds, "content_upper": chk.content_upper,
                                  "content_lower": chk.content_lower, "bound": chk.bound}
    return Outcome(payload)


def _cmd_qe(args, cfg: RunConfig) -> Outcome:
    E = _intervals(args.intervals)
    rows = [{"r": r, "q": q_of_E(E, r)} for r in args.r]
    return Outcome({"measure": E.measure(), "rows": rows}, rows, ("r", "q"))


def _cmd_means(args, cfg: RunConfig) -> Outcome:
    u = load_function(args.M, cfg.trunc)
    payload: dict[str, Any] = {}
    if args.z is not None:
        z = _complex(args.z)
        if args.r is None:
            raise UsageError("means --z needs --r")
        payload.update(
            z={"re": z.real, "im": z.imag},
            r=args.r,
            value=float(u(np.array([z]))[0]),
            disk_mean=disk_mean(u, z, args.r, rtol=cfg.quad_tol),
            circle_mean=circle_mean(u, z, args.r, rtol=cfg.quad_tol),
        )
    if args.type_r is not None:
        payload["type_estimate"] = type_estimate(u, args.type_r)
    if not payload:
        raise UsageError("means needs --z/--r or --type-r")
    return Outcome(payload)


def _cmd_scan(args, cfg: RunConfig) -> Outcome:
    dom = ScanDomain(DomainKind(args.domain), args.y_max, args.n, args.b, args.nx)
    E = _intervals(args.exclude) if args.exclude else None
    rep = inequality_scan(load_function(args.lhs, cfg.trunc), load_function(args.rhs, cfg.trunc), dom, E)
    payload = rep.to_dict()
    payload["ok"] = rep.ok
    return Outcome(payload)


# parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits 2; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nmax", type=int, default=DEFAULT_N_MAX, help="dyadic depth (default 14)")
    common.add_argument("--slope-tol", type=float, default=DEFAULT_SLOPE_TOL)
    common.add_argument("--quad-tol", type=float, default=DEFAULT_RTOL)
    common.add_argument("--trunc", type=float, default=1e4, help="default canonical-product truncation radius")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--assert-bounded", action="store_true", help="exit 1 on an Unbounded verdict")

    def dist(p: argparse.ArgumentParser, name: str = "--nu", required: bool = True) -> None:
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument(name, dest="nu", help="distribution JSON path, '-' or gen:SPEC")
        g.add_argument("--gen", dest="nu", type=lambda s: "gen:" + s, help="generator SPEC")

    parser = _Parser(prog="potbal", description="Logarithmic measures, balayage and completion of charge distributions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ell", parents=[common], help="logarithmic interval measures")
    dist(p)
    p.add_argument("--side", choices=[s.value for s in Side], default="sub")
    p.add_argument("--r", type=float, nargs="+")
    p.add_argument("--R", type=float, nargs="+")
    p.set_defaults(run=_cmd_ell)

    p = sub.add_parser("lindelof", parents=[common], help="Lindelöf sums on dyadic radii")
    dist(p)
    p.add_argument("--kind", choices=[k.value for k in LindelofKind], default="full")
    p.add_argument("--r-max", type=float)
    p.set_defaults(run=_cmd_lindelof)

    p = sub.add_parser("sweep", parents=[common], help="sweep a charge onto boundary lines")
    dist(p)
    p.add_argument("--genus", choices=("0", "1", "01"), default="0")
    p.add_argument("--r0", type=float, default=1.0)
    p.add_argument("--strip", type=float, metavar="B", help="sweep the complement of the strip |Re z| < B")
    p.add_argument("--left", action="store_true", help="sweep the left half-plane instead")
    p.set_defaults(run=_cmd_sweep)

    p = sub.add_parser("criterion", parents=[common], help="gap reports with boundedness verdicts")
    p.add_argument("kind", choices=("dyadic", "pair", "mr", "eps", "mu-rh", "redheffer"))
    dist(p)
    p.add_argument("--mu")
    p.add_argument("--M")
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--mirrored", action="store_true")
    p.add_argument("--intervals", type=int, metavar="K", help="use K random intervals instead of the dyadic grid")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_criterion)

    p = sub.add_parser("construct", parents=[common], help="balancing, uniformization and completions")
    p.add_argument("kind", choices=("alpha", "uniformize", "uniformize-strip", "complete-r", "complete-ir", "complete"))
    dist(p)
    p.add_argument("--mu")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--y-max", type=float, default=1e4)
    p.add_argument("--levels", type=int, help="dyadic depth of the checks (default from the data)")
    p.set_defaults(run=_cmd_construct)

    p = sub.add_parser("content", parents=[common], help="Hausdorff content with capped radii")
    p.add_argument("--points", nargs="+", metavar="Z")
    p.add_argument("--intervals", nargs="+", metavar="A,B")
    p.add_argument("--line-y", type=float, default=0.0)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--profile", default="const:1", help="const:R or power:C,R,P")
    p.add_argument("--t", type=float, help="also check the content outside |z| <= t")
    p.add_argument("--greedy", action="store_true")
    p.set_defaults(run=_cmd_content)

    p = sub.add_parser("qe", parents=[common], help="exceptional-set gauge m ln(e r / m)")
    p.add_argument("--intervals", nargs="+", metavar="A,B", default=[])
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.set_defaults(run=_cmd_qe)

    p = sub.add_parser("means", parents=[common], help="point value, disk and circle means, type")
    p.add_argument("--M", required=True)
    p.add_argument("--z")
    p.add_argument("--r", type=float)
    p.add_argument("--type-r", type=float, help="estimate the type from radii up to this value")
    p.set_defaults(run=_cmd_means)

    p = sub.add_parser("scan", parents=[common], help="sample lhs <= rhs on an axis, lines or strip grid")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--domain", choices=[k.value for k in DomainKind], default="axis")
    p.add_argument("--y-max", type=float, default=100.0)
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--nx", type=int, default=11)
    p.add_argument("--exclude", nargs="+", metavar="A,B")
    p.set_defaults(run=_cmd_scan)
    return parser


def _config(args) -> RunConfig:
    inputs = {k: getattr(args, k) for k in ("nu", "mu", "M", "lhs", "rhs") if getattr(args, k, None)}
    cfg = RunConfig(args.command, inputs, args.nmax, args.slope_tol, args.quad_tol, args.trunc, args.format)
    if cfg.n_max < 1 or not cfg.slope_tol > 0 or not cfg.quad_tol > 0 or not cfg.trunc > 0:
        raise UsageError("--nmax, --slope-tol, --quad-tol and --trunc must be positive")
    return cfg


def run(args: argparse.Namespace) -> tuple[int, str]:
    """Execute parsed arguments; returns the exit status and the rendered report."""
    cfg = _config(args)
    outcome: Outcome = args.run(args, cfg)
    if cfg.output_format == "csv":
        if outcome.rows is None:
            raise UsageError(f"{cfg.command} has no tabular output; use --format json")
        text = _csv(outcome.rows, outcome.columns)
    else:
        doc = {"config": asdict(cfg), **outcome.payload}
        text = pio.dumps(doc) + "\n"
    status = EXIT_UNBOUNDED if args.assert_bounded and outcome.verdict is Verdict.UNBOUNDED else EXIT_OK
    return status, text


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, text = run(args)
    except PotbalError as exc:
        print(f"potbal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, OverflowError) as exc:
        print(f"potbal: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
