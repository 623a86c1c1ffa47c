"""Command line entry point: ``stableinfo <command> [flags]``.

Exit codes: 0 success, 1 validation gate failed, 2 bad flags,
3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .info import (
    EntropyDerivativeConfig,
    ScoreKind,
    ScoreMethod,
    ScorePair,
    d_prime_numeric,
    fisher_score,
    relative_entropy_cauchy_closed,
    relative_entropy_gaussian_closed,
    relative_entropy_result,
)
from .mfi import (
    best_h,
    closed_form_d_prime,
    lsi_ratio_cauchy,
    mfi_both,
    mfi_cauchy_closed,
    mfi_chain,
    mfi_integral,
    positivity_sweep,
)
from .quadrature import QuadratureError, Tolerance
from .report import (
    format_summary,
    integrand_curve,
    read_report,
    run_validation,
    write_report,
)
from .stable import DensitySpec, EvaluationFailure, log_pdf, pdf, pdf_dx

EXIT_OK = 0
EXIT_GATE = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


def _positive(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(val) and val > 0):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return val


def _finite(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return val


def _count(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return val


def _alpha(text):
    val = _finite(text)
    if not 0 < val <= 2:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 2]: {text!r}")
    return val


def _add_numerics(p):
    p.add_argument("--eps-abs", type=_positive, default=None)
    p.add_argument("--eps-rel", type=_positive, default=None)
    p.add_argument("--max-subdivisions", type=_count, default=400)
    p.add_argument("--score-method", choices=[k.value for k in ScoreKind],
                   default=ScoreKind.ANALYTIC.value)
    p.add_argument("--score-dx", type=_positive, default=1e-6)


def _add_pair(p, alpha_default=1.5):
    p.add_argument("--alpha", type=_alpha, default=alpha_default)
    p.add_argument("--v", type=_positive, default=1.2)
    p.add_argument("--s", type=_positive, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stableinfo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", help="density, log-density and slope at points")
    p.add_argument("--alpha", type=_alpha, default=1.5)
    p.add_argument("--scale", type=_positive, default=1.0)
    p.add_argument("--x", type=_finite, action="append", required=True)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")

    p = sub.add_parser("score", help="Fisher score at points")
    p.add_argument("--alpha", type=_alpha, default=1.5)
    p.add_argument("--scale", type=_positive, default=1.0)
    p.add_argument("--x", type=_finite, action="append", required=True)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_numerics(p)

    p = sub.add_parser("kl", help="relative entropy D(g_v || g_s)")
    _add_pair(p)
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_numerics(p)

    p = sub.add_parser("dprime", help="five-point estimates of dD/dv")
    _add_pair(p)
    p.add_argument("--h", type=_positive, action="append")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_numerics(p)

    p = sub.add_parser("mfi", help="mixed fractional information")
    _add_pair(p)
    p.add_argument("--method", choices=["chain", "integral", "both"], default="both")
    p.add_argument("--h", type=_positive, action="append")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    _add_numerics(p)

    p = sub.add_parser("validate", help="consistency check, tier 1 or tier 2")
    _add_pair(p)
    p.add_argument("--tier", type=int, choices=[1, 2], default=None)
    p.add_argument("--h", type=_positive, action="append")
    p.add_argument("--gate", type=_positive, default=None,
                   help="pass threshold on relative error")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--replay", metavar="REPORT",
                   help="print the summary of an existing report and exit")
    p.add_argument("--format", choices=["table", "json"], default="table")
    _add_numerics(p)

    p = sub.add_parser("sweep", help="positivity or Cauchy LSI-ratio grid")
    p.add_argument("--kind", choices=["positivity", "lsi"], default="positivity")
    p.add_argument("--alpha", type=_alpha, action="append")
    p.add_argument("--ratio", type=_positive, action="append")
    p.add_argument("--s", type=_positive, default=1.0)
    p.add_argument("--h", type=_positive, action="append")
    p.add_argument("--out")
    p.add_argument("--format", choices=["table", "json", "csv"], default="csv")
    _add_numerics(p)

    p = sub.add_parser("integrand", help="sample the MFI integrand on a grid")
    _add_pair(p)
    p.add_argument("--x-min", type=_finite, default=-10.0)
    p.add_argument("--x-max", type=_finite, default=10.0)
    p.add_argument("--n-points", type=int, default=401)
    p.add_argument("--out")
    _add_numerics(p)
    return parser


def _tolerance(args) -> Tolerance | None:
    if args.eps_abs is None and args.eps_rel is None:
        return None
    from .info import default_tolerance

    base = default_tolerance(args.alpha)
    return Tolerance(args.eps_abs or base.eps_abs, args.eps_rel or base.eps_rel,
                     args.max_subdivisions)


def _method(args) -> ScoreMethod:
    if not 1e-8 <= args.score_dx <= 1e-3:
        raise UsageError("--score-dx must lie in [1e-8, 1e-3]")
    return ScoreMethod(args.score_method, args.score_dx)


def _cfg(args, v=None, s=None) -> EntropyDerivativeConfig:
    cfg = EntropyDerivativeConfig(tuple(args.h)) if args.h else EntropyDerivativeConfig()
    if v is not None:
        try:
            cfg.check(v, s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return cfg


def _emit_rows(header, rows, fmt, out):
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
        out.write("\n")
        return
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows([[_num(c) for c in r] for r in rows])
        return
    out.write("\t".join(header) + "\n")
    for r in rows:
        out.write("\t".join(_num(c) for c in r) + "\n")


def _num(c):
    if isinstance(c, float):
        return repr(c)
    return "" if c is None else str(c)


def _write_text(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


class _IOFailure(Exception):
    pass


def cmd_pdf(args, out):
    spec = DensitySpec(args.alpha, args.scale)
    rows = [(x, pdf(spec, x), log_pdf(spec, x), pdf_dx(spec, x)) for x in args.x]
    _emit_rows(["x", "pdf", "log_pdf", "pdf_dx"], rows, args.format, out)
    return EXIT_OK


def cmd_score(args, out):
    spec = DensitySpec(args.alpha, args.scale)
    method = _method(args)
    rows = [(x, fisher_score(spec, x, method)) for x in args.x]
    _emit_rows(["x", "score"], rows, args.format, out)
    return EXIT_OK


def cmd_kl(args, out):
    res = relative_entropy_result(ScorePair.of(args.alpha, args.v, args.s), _tolerance(args))
    closed = None
    if args.alpha == 1.0:
        closed = relative_entropy_cauchy_closed(args.v, args.s)
    elif args.alpha == 2.0:
        closed = relative_entropy_gaussian_closed(args.v, args.s)
    rows = [(args.alpha, args.v, args.s, res.value, res.abs_error_estimate, closed)]
    _emit_rows(["alpha", "v", "s", "D", "abs_error_estimate", "closed_form"], rows,
               args.format, out)
    return EXIT_OK


def cmd_dprime(args, out):
    pair = ScorePair.of(args.alpha, args.v, args.s)
    est = d_prime_numeric(pair, _cfg(args, args.v, args.s), _tolerance(args))
    exact = closed_form_d_prime(args.alpha, args.v, args.s)
    rows = [(e.h, e.value, exact, e.error) for e in est]
    _emit_rows(["h", "d_prime", "closed_form", "error"], rows, args.format, out)
    return EXIT_OK


def cmd_mfi(args, out):
    a, v, s = args.alpha, args.v, args.s
    method, tol = _method(args), _tolerance(args)
    cfg = _cfg(args, v, s)
    if args.method == "both":
        res = mfi_both(a, v, s, method, tol, cfg)
        rows = [("chain", res.chain_value), ("integral", res.integral_value),
                ("abs_discrepancy", res.abs_discrepancy),
                ("rel_discrepancy", res.rel_discrepancy)]
    elif args.method == "chain":
        dp = closed_form_d_prime(a, v, s)
        if dp is None and v != s:
            dp = best_h(d_prime_numeric(ScorePair.of(a, v, s), cfg, tol)).value
        rows = [("chain", mfi_chain(a, v, s, dp or 0.0))]
    else:
        rows = [("integral", mfi_integral(a, v, s, method, tol))]
    _emit_rows(["quantity", "value"], rows, args.format, out)
    return EXIT_OK


def cmd_validate(args, out):
    if args.replay:
        try:
            report = read_report(args.replay)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise _IOFailure(f"cannot read report {args.replay}: {exc}") from exc
    else:
        if args.tier == 1 and args.alpha not in (1.0, 2.0):
            raise UsageError("tier 1 needs --alpha 1 or --alpha 2")
        report = run_validation(args.alpha, args.v, args.s, args.tier,
                                _cfg(args, args.v, args.s), _method(args),
                                _tolerance(args), args.gate)
        if args.out:
            try:
                write_report(report, args.out)
            except OSError as exc:
                raise _IOFailure(str(exc)) from exc
    if args.format == "json":
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
    else:
        out.write(format_summary(report))
    return EXIT_OK if report.passed else EXIT_GATE


def cmd_sweep(args, out):
    alphas = args.alpha or [0.8, 1.0, 1.2, 1.5, 1.8, 2.0]
    ratios = args.ratio or [0.5, 0.8, 1.0, 1.2, 2.0]
    s = args.s
    if args.kind == "lsi":
        if args.alpha and any(a != 1.0 for a in args.alpha):
            raise UsageError("the lsi sweep is defined for alpha = 1 only")
        ratios = args.ratio or [10.0, 100.0, 1000.0, 10000.0]
        header = ["v", "s", "D", "M1", "ratio"]
        rows = []
        for r in ratios:
            v = r * s
            ratio = lsi_ratio_cauchy(v, s) if v != s else None
            rows.append((v, s, relative_entropy_cauchy_closed(v, s), mfi_cauchy_closed(v, s),
                         ratio))
    else:
        header = ["alpha", "v", "s", "mfi", "error"]
        sweep = positivity_sweep(alphas, ratios, s, _cfg(args, min(ratios) * s, s),
                                 _tolerance(args))
        rows = [(r.alpha, r.v, r.s, r.mfi, r.error) for r in sweep]
    buf = io.StringIO()
    _emit_rows(header, rows, args.format, buf)
    if args.out:
        _write_text(args.out, buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_integrand(args, out):
    if not args.x_min < args.x_max:
        raise UsageError("--x-min must be below --x-max")
    if args.n_points < 2:
        raise UsageError("--n-points must be at least 2")
    curve = integrand_curve(args.alpha, args.v, args.s, args.x_min, args.x_max,
                            args.n_points, _method(args))
    text = curve.to_csv()
    if args.out:
        _write_text(args.out, text)
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {
    "pdf": cmd_pdf,
    "score": cmd_score,
    "kl": cmd_kl,
    "dprime": cmd_dprime,
    "mfi": cmd_mfi,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
    "integrand": cmd_integrand,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"stableinfo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"stableinfo {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (QuadratureError, EvaluationFailure) as exc:
        print(f"stableinfo {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
