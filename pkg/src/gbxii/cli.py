"""``gbxii`` batch command line.

Exit codes: 0 success, 1 I/O or usage, 2 domain/precondition,
3 fit did not converge, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import distribution as dist
from . import order_statistics as ost
from .distribution import PARAM_NAMES, Params
from .errors import DomainError, GBXIIError, MomentExistenceError
from .estimation import DEFAULT_FREE, FitConfig, fit_mle
from .sampling import sample
from .verify import load_grid, run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NOT_CONVERGED = 3
EXIT_VERIFY_FAILED = 4

EVAL_FUNCTIONS = {
    "pdf": dist.pdf,
    "logpdf": dist.log_pdf,
    "cdf": dist.cdf,
    "survival": dist.survival,
    "quantile": dist.quantile,
    "hazard": dist.hazard,
}
SAMPLE_METHODS = {"invcdf": "inverse_cdf", "ratio": "ratio", "exptransform": "exp_transform"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(value) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(value), ".17g")


def parse_dist(text: str | None) -> Params:
    """``k=v,...`` over mu, sigma, lambda, theta, m, p; missing keys take defaults."""
    values = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, raw = item.partition("=")
        key = key.strip()
        if key == "lam":
            key = "lambda"
        if not sep or key not in PARAM_NAMES:
            raise DomainError(f"cannot parse distribution spec item {item!r}; expected k=v with k in {PARAM_NAMES}")
        try:
            values[key] = float(raw)
        except ValueError:
            raise DomainError(f"bad value for {key}: {raw!r}") from None
    return Params.from_dict(values)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str | None, stdout):
    if path is None:
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- commands ----------------------------------------------------------------


def cmd_eval(args, stdout):
    params = parse_dist(args.dist)
    fn = EVAL_FUNCTIONS[args.fn]
    inputs = args.u if args.fn == "quantile" and args.u is not None else args.x
    if inputs is None:
        inputs = args.u or []
    label = "u" if args.fn == "quantile" else "x"
    # validate every input before writing anything
    values = [fn(params, v) for v in inputs]
    rows = [(fmt(v), fmt(y)) for v, y in zip(inputs, values)]
    _emit(_csv_text((label, args.fn), rows), args.out, stdout)
    return EXIT_OK


def cmd_moments(args, stdout):
    params = parse_dist(args.dist)
    rows = []
    if params.is_standard:
        for n in args.orders:
            try:
                rows.append((str(n), fmt(dist.raw_moment(params, n))))
            except MomentExistenceError:
                rows.append((str(n), "undefined(m<=n/p)"))
    else:
        for name, fn, order in (("mean", dist.mean, 1), ("variance", dist.variance, 2)):
            try:
                rows.append((name, fmt(fn(params))))
            except MomentExistenceError:
                rows.append((name, f"undefined(m<={order}/p)"))
    _emit(_csv_text(("n", "moment"), rows), args.out, stdout)
    return EXIT_OK


def cmd_sample(args, stdout):
    params = parse_dist(args.dist)
    if args.n is None or args.n < 1:
        raise DomainError("sample needs --n >= 1")
    batch = sample(params, args.n, args.seed, SAMPLE_METHODS[args.method])
    text = "x\n" + "".join(fmt(v) + "\n" for v in batch.values)
    _emit(text, args.out, stdout)
    return EXIT_OK


def _read_data(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "x" not in reader.fieldnames:
            raise UsageError(f"{path}: expected a CSV with a column named 'x'")
        try:
            return np.array([float(row["x"]) for row in reader])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}: non-numeric value in column 'x' ({exc})") from None


def cmd_fit(args, stdout):
    free = tuple(s for s in (args.free or ",".join(DEFAULT_FREE)).split(",") if s)
    init = parse_dist(args.dist) if args.dist else None
    config = FitConfig(free=free, init=init)
    data = _read_data(args.data)
    result = fit_mle(data, config)
    lines = [f"{k}={fmt(v)}" for k, v in result.params.as_dict().items()]
    lines += [
        f"nll={fmt(result.neg_log_likelihood)}",
        f"converged={'true' if result.converged else 'false'}",
        f"iterations={result.iterations}",
    ]
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_orderstat(args, stdout):
    params = parse_dist(args.dist)
    fn, _, suffix = args.fn.partition(":")
    n = args.n
    if n is None:
        raise DomainError("orderstat needs --n")
    if fn in ("pdf", "cdf"):
        spec = ost.OrderStatSpec(n, args.r if args.r is not None else 1)
        evaluate = ost.order_stat_pdf if fn == "pdf" else ost.order_stat_cdf
        values = [evaluate(params, spec, x) for x in (args.x or [])]
        rows = [(fmt(x), fmt(y)) for x, y in zip(args.x or [], values)]
        text = _csv_text(("x", fn), rows)
    elif fn == "minmean":
        text = _csv_text(("quantity", "value"), [("minmean", fmt(ost.min_mean(params, n)))])
    elif fn == "minvar":
        text = _csv_text(("quantity", "value"), [("minvar", fmt(ost.min_variance(params, n)))])
    elif fn == "minmoment":
        q = float(suffix) if suffix else args.q
        if q is None:
            raise DomainError("minmoment needs a moment order: --fn minmoment:Q or --q Q")
        text = _csv_text(("quantity", "value"), [(f"minmoment:{fmt(q)}", fmt(ost.min_moment(params, n, q)))])
    else:
        raise UsageError(f"unknown orderstat function {args.fn!r}")
    _emit(text, args.out, stdout)
    return EXIT_OK


def cmd_verify(args, stdout):
    grid = None if args.grid in (None, "default") else load_grid(args.grid)
    report = run_verification(grid, jobs=args.jobs)
    _emit(report.to_csv(), args.report or args.out, stdout)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {
    "eval": cmd_eval,
    "moments": cmd_moments,
    "sample": cmd_sample,
    "fit": cmd_fit,
    "orderstat": cmd_orderstat,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbxii", description="Six-parameter generalized Burr XII toolkit.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--dist", help="k=v,... over mu,sigma,lambda,theta,m,p")
    parser.add_argument("--fn", help="function name (eval / orderstat)")
    parser.add_argument("--x", type=float, nargs="+", help="evaluation points")
    parser.add_argument("--u", type=float, nargs="+", help="probability levels (quantile)")
    parser.add_argument("--orders", type=int, nargs="*", default=[], help="moment orders")
    parser.add_argument("--n", type=int, help="sample size / order-statistic sample size")
    parser.add_argument("--r", type=int, help="order-statistic rank (1-based)")
    parser.add_argument("--q", type=float, help="moment order of the minimum")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", choices=sorted(SAMPLE_METHODS), default="invcdf")
    parser.add_argument("--data", help="CSV file with a column 'x'")
    parser.add_argument("--free", help="comma-separated free parameters for fit")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--report", help="verification report path")
    parser.add_argument("--grid", default="default", help="'default' or a CSV grid file")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for verify")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "eval" and args.fn not in EVAL_FUNCTIONS:
            raise UsageError(f"eval needs --fn in {{{','.join(EVAL_FUNCTIONS)}}}")
        if args.command == "fit" and not args.data:
            raise UsageError("fit needs --data")
        if args.command == "orderstat" and not args.fn:
            raise UsageError("orderstat needs --fn")
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        print(f"gbxii: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gbxii: I/O error: {exc}", file=stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"gbxii: {exc}", file=stderr)
        return EXIT_DOMAIN
    except GBXIIError as exc:
        print(f"gbxii: {exc}", file=stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
