"""Command-line front end: ``ropebound <subcommand> ...``.

Every subcommand prints plot-ready CSV or JSON to stdout (or ``--output``).
Failures exit non-zero with a single ``error: <kind>: <message>`` line on
stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bounds, decay, mc, ood, schedule


class _CliError(Exception):
    def __init__(self, kind, message, code=1):
        super().__init__(message)
        self.kind = kind
        self.code = code


def _num(v: float) -> str:
    return f"{v:.17g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _parse_length(text: str, k: int) -> int:
    """``32768``, ``32k`` or ``1M`` (suffixes use the k-convention)."""
    t = text.strip()
    scale = 1
    if t[-1:] in ("k", "K"):
        t, scale = t[:-1], k
    elif t[-1:] in ("m", "M"):
        t, scale = t[:-1], k * k
    try:
        value = float(t) * scale
    except ValueError:
        raise _CliError("invalid", f"bad length {text!r}", 2) from None
    if value != int(value):
        raise _CliError("invalid", f"length {text!r} is not an integer", 2)
    return int(value)


def _schedule(spec, d):
    try:
        return schedule.parse_schedule(spec, d)
    except (ValueError, OSError) as exc:
        raise _CliError("invalid", str(exc), 2) from None


def cmd_bound(args) -> str:
    length = _parse_length(args.length, args.k_convention)
    grid = args.grid if args.grid in ("sig2", "doubling") else float(args.grid)
    try:
        res = bounds.lower_bound_base(length, args.dim, tol_rel=args.tol, grid=grid)
    except bounds.UnattainableError as exc:
        raise _CliError("unattainable", str(exc)) from None
    if args.format == "csv":
        return _csv(
            ["target_length", "d", "base", "bracket_lo", "bracket_hi", "verified"],
            [[res.target_length, res.d, _num(res.base), _num(res.bracket[0]),
              _num(res.bracket[1]), str(res.verified).lower()]],
        )
    return _json(res.to_dict())


def cmd_length(args) -> str:
    sched = _schedule(args.schedule, args.dim)
    res = bounds.effective_length(sched, args.max_m)
    if args.format == "csv":
        fv = "" if res.first_violation_m is None else res.first_violation_m
        return _csv(
            ["base_or_schedule", "d", "m_limit", "effective_length", "first_violation_m"],
            [[res.base_or_schedule, res.d, res.m_limit, res.effective_length, fv]],
        )
    return _json(res.to_dict())


def cmd_curve(args) -> str:
    sched = _schedule(args.schedule, args.dim)
    samples = decay.sample_curve(sched, args.metric, args.max_m, args.stride)
    if args.format == "json":
        return _json({"schedule": sched.label, "d": sched.d, "metric": samples.metric.value,
                      "points": samples.points})
    return samples.to_csv()


def cmd_verify(args) -> str:
    sched = _schedule(args.schedule, args.dim)
    cfg = mc.McConfig(
        n_samples=args.samples, sigma=args.sigma, mu=args.mu, eps_scale=args.eps,
        seed=args.seed, distribution=args.distribution,
    )
    report = mc.estimate_gap(sched, args.m, cfg, workers=args.workers)
    out = report.to_dict()
    out["schedule"] = sched.label
    out["d"] = sched.d
    return _json(out)


def cmd_ood(args) -> str:
    train = _schedule(args.train_schedule, args.dim)
    new = _schedule(args.new_schedule, args.dim)
    try:
        rep = ood.ood_report(train, args.train_len, new, args.new_len)
    except ValueError as exc:
        raise _CliError("invalid", str(exc), 2) from None
    if args.format == "json":
        return _json({
            "any_ood": rep.any_ood,
            "per_dim": [vars(r) for r in rep.per_dim],
        })
    return rep.to_csv()


def cmd_table2(args) -> str:
    conventions = (1024, 1000) if args.k_convention == "both" else (int(args.k_convention),)
    rows = []
    for k in conventions:
        for n, res in bounds.table2(args.dim, k, tol_rel=args.tol, workers=args.workers):
            rows.append([n, _num(res.base)])
    return _csv(["context_length", "base_lower_bound"], rows)


def cmd_compare_methods(args) -> str:
    k = int(args.k_convention)
    limits = [_parse_length(r, k) for r in args.ranges.split(",") if r.strip()]
    reference = schedule.make_standard(args.pretrain_base, 128)
    rows = []
    for name, sched in (("method1", schedule.make_method1(128)), ("method2", schedule.make_method2(128))):
        any_ood = ood.ood_report(reference, args.pretrain_len, sched, args.finetune_len).any_ood
        for hi in limits:
            rows.append([name, str(any_ood).lower(), 1, hi, decay.violation_count(sched, 1, hi)])
        if len(limits) >= 2:
            lo, hi = limits[0], limits[-1]
            rows.append([name, str(any_ood).lower(), lo, hi, decay.violation_count(sched, lo, hi)])
    return _csv(["method", "ood", "m_lo", "m_hi", "violations"], rows)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ropebound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt):
        sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        sp.add_argument("--output", "-o", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("bound", help="lower bound of the base for a context length")
    sp.add_argument("--length", required=True, help="e.g. 32768, 32k or 1M")
    sp.add_argument("--dim", type=int, default=128)
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--k-convention", type=int, choices=(1024, 1000), default=1024)
    sp.add_argument("--grid", default="sig2", help="sig2, doubling or a growth ratio")
    common(sp, "json")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("length", help="effective context length of a schedule")
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--max-m", type=int, default=1_000_000)
    common(sp, "json")
    sp.set_defaults(func=cmd_length)

    sp = sub.add_parser("curve", help="sample B_m or the upper-bound factor")
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--metric", choices=("b", "upper"), default="b")
    sp.add_argument("--max-m", type=int, required=True)
    sp.add_argument("--stride", type=int, default=1)
    common(sp, "csv")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("verify", help="Monte Carlo check of the similar-vs-random gap")
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--m", type=float, required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--eps", type=float, default=None, help="std of eps (default 0.1*sigma)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--distribution", choices=mc.DISTRIBUTIONS, default="gaussian")
    sp.add_argument("--workers", type=int, default=1)
    common(sp, "json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ood", help="per-dimension rotation-angle OOD report")
    sp.add_argument("--train-schedule", required=True)
    sp.add_argument("--train-len", type=int, required=True)
    sp.add_argument("--new-schedule", required=True)
    sp.add_argument("--new-len", type=int, required=True)
    sp.add_argument("--dim", type=int, default=None)
    common(sp, "csv")
    sp.set_defaults(func=cmd_ood)

    sp = sub.add_parser("table2", help="base lower bounds for 1k .. 1M")
    sp.add_argument("--dim", type=int, default=128)
    sp.add_argument("--k-convention", choices=("1024", "1000", "both"), default="1024")
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--workers", type=int, default=1)
    common(sp, "csv")
    sp.set_defaults(func=cmd_table2)

    sp = sub.add_parser("compare-methods", help="violation counts of method1 / method2")
    sp.add_argument("--ranges", default="15k,30k")
    sp.add_argument("--k-convention", choices=("1024", "1000"), default="1024")
    sp.add_argument("--pretrain-base", type=float, default=1e4)
    sp.add_argument("--pretrain-len", type=int, default=4096)
    sp.add_argument("--finetune-len", type=int, default=32768)
    common(sp, "csv")
    sp.set_defaults(func=cmd_compare_methods)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except _CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
