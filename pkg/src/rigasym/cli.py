"""Command-line front end: ``rigasym verify-small`` and ``rigasym asymptotic-report``.

Reports contain only exact data and derived decimal renderings, so repeated
runs produce identical files; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .case_study.analysis import (
    BoundError,
    CaseConfig,
    MULTIPLIER,
    _npow,
    binomial_ratio_expansion,
    completion_bounds,
    combine_errors,
    prune_tail_bounds,
    sb_error_bound,
)
from .case_study.exact import F_sign_sweep, monotonicity_check, normalized_F_enclosure, robin_constant
from .interval import Interval

SCHEMA = 1
EX_OK, EX_VIOLATION, EX_INCONCLUSIVE, EX_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _rat(x) -> dict:
    x = Fraction(x)
    return {"exact": str(x), "decimal": f"{float(x):.10g}"}


def cmd_verify_small(args) -> int:
    if not 5 <= args.n_min <= args.n_max:
        _log("verify-small: need 5 <= --n-min <= --n-max")
        return EX_USAGE
    t = time.time()
    sweep = F_sign_sweep(args.n_min, args.n_max, exact_fallback=args.exact_fallback)
    mono = monotonicity_check(max(3, min(args.mono_max, args.n_max)))
    _log(f"sweep {args.n_min}..{args.n_max} in {time.time() - t:.1f}s")
    if args.csv:
        sweep.write_csv(args.csv)
    methods = [r[2] for r in sweep.rows]
    print(
        f"n in [{args.n_min}, {args.n_max}]: {methods.count('interval')} interval, "
        f"{methods.count('exact')} exact, {len(sweep.inconclusive)} inconclusive, "
        f"{len(sweep.failures)} violations; monotonicity to {mono.n_max}: "
        f"{'ok' if mono.ok else mono.violations}"
    )
    if sweep.failures or not mono.ok:
        return EX_VIOLATION
    if sweep.inconclusive:
        return EX_INCONCLUSIVE
    return EX_OK


def _stage(report: dict, name: str, fn):
    t = time.time()
    try:
        out = fn()
    except (BoundError, ValueError, ArithmeticError) as exc:
        report["stages"][name] = {"status": "failed", "error": str(exc)}
        _log(f"{name}: failed ({exc})")
        raise
    _log(f"{name}: {time.time() - t:.1f}s")
    return out


def build_report(cfg: CaseConfig, skip_small: bool = False, threads: int | None = None) -> dict:
    from .mellin import extract_summands, main_term_residues, shifted_integral_bound

    report: dict = {
        "schema": SCHEMA,
        "config": {
            "N": cfg.N,
            "alpha": str(cfg.alpha_split),
            "beta": str(cfg.beta),
            "R": cfg.R,
            "round_digits": cfg.round_digits,
            "A": str(cfg.A),
        },
        "stages": {},
    }
    st = report["stages"]
    ok = {}
    if not skip_small:
        sweep = _stage(report, "sweep", lambda: F_sign_sweep(5, cfg.N - 1))
        st["sweep"] = {"status": "ok" if sweep.ok else "failed", "n_max": cfg.N - 1, "failures": sweep.failures}
        mono = _stage(report, "monotonicity", lambda: monotonicity_check(200))
        st["monotonicity"] = {"status": "ok" if mono.ok else "failed", "violations": mono.violations}
        ok["sweep"], ok["monotonicity"] = sweep.ok, mono.ok
    _stage(report, "robin", lambda: robin_constant(cfg.N, cfg.A))
    st["robin"] = {"status": "ok", "A": _rat(cfg.A)}
    exp = _stage(report, "expansion", lambda: binomial_ratio_expansion(cfg))
    st["expansion"] = {
        "status": "ok",
        "exact_monomials": len(exp.monomials()),
        "cutoff_bterm": str(exp.tail),
        "bterms": [str(b) for b in exp.full.error_part().bterms()],
    }
    large, mid = _stage(report, "pruning", lambda: prune_tail_bounds(cfg))
    sb = _stage(report, "sb_error", lambda: sb_error_bound(cfg, exp.bterms))
    cm, cf, c1 = _stage(report, "completion", lambda: completion_bounds(cfg, exp))
    bounds = [large, mid, sb, cm, cf]
    st["bounds"] = {"status": "ok", "c1": _rat(c1), "items": [b.to_json() for b in bounds]}
    summands = extract_summands(exp.exact, MULTIPLIER)
    report["summand_count"] = len(summands)
    main = _stage(report, "residues", lambda: main_term_residues(summands))
    fails = main.failures({2: Fraction(-1, 8), 1: Fraction(1, 24)})
    st["residues"] = {"status": "ok" if not fails else "failed", "table": main.to_json(), "failures": fails}
    report["main_term"] = {"n^2": "-1/8", "n": "1/24"} if not fails else None
    ok["residues"] = not fails
    mellin = _stage(report, "mellin", lambda: shifted_integral_bound(summands, N=cfg.N, threads=threads))
    st["mellin"] = {"status": "ok", "C": _rat(mellin.C), "summands": [b.to_json() for b in mellin.per_summand]}
    total, collapsed = combine_errors(bounds, mellin.C, cfg.N)
    lead = Fraction(cfg.N**2, 8) - Fraction(cfg.N, 24)
    radius = Interval(total) * _npow(cfg.N, Fraction(3, 4))
    ratio = float((radius / Interval(lead)).hi)
    val = normalized_F_enclosure(cfg.N)
    env = (float((-Interval(lead) - radius).lo), float((-Interval(lead) + radius).hi))
    inside = env[0] <= val[0] and val[1] <= env[1]
    theorem_ok = ratio < 1 and inside
    st["theorem"] = {
        "status": "ok" if theorem_ok else "failed",
        "collapsed": [c.to_json() for c in collapsed],
        "C_total": _rat(total),
        "ratio_at_N": ratio,
        "envelope_at_N": list(env),
        "value_at_N": list(val),
    }
    ok["theorem"] = theorem_ok
    report["C_total"] = _rat(total)
    report["ratio_at_N"] = ratio
    needed = ("residues", "theorem") if skip_small else ("sweep", "monotonicity", "residues", "theorem")
    report["verdict"] = "settled" if all(ok.get(k) for k in needed) else "unsettled"
    return report


def cmd_asymptotic_report(args) -> int:
    try:
        cfg = CaseConfig(
            N=args.N,
            alpha_split=Fraction(args.alpha),
            beta=Fraction(args.beta),
            R=args.cutoff_R,
            round_digits=args.round_digits,
        )
    except (ValueError, BoundError) as exc:
        _log(f"asymptotic-report: {exc}")
        return EX_USAGE
    try:
        report = build_report(cfg, skip_small=args.skip_small)
    except (BoundError, ValueError, ArithmeticError) as exc:
        _log(f"asymptotic-report: stage failed: {exc}")
        return EX_VIOLATION
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(f"summands={report['summand_count']} C_total={report['C_total']['decimal']} "
          f"ratio={report['ratio_at_N']:.4f} verdict={report['verdict']}")
    return EX_OK if report["verdict"] == "settled" else EX_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigasym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    v = sub.add_parser("verify-small", help="certify F(n) < 0 for small n")
    v.add_argument("--n-min", type=int, default=5)
    v.add_argument("--n-max", type=int, default=9999)
    v.add_argument("--exact-fallback", action=argparse.BooleanOptionalAction, default=True,
                   help="decide inconclusive intervals with exact integers")
    v.add_argument("--mono-max", type=int, default=200, help="upper end of the exact monotonicity check")
    v.add_argument("--csv", metavar="PATH")
    v.set_defaults(func=cmd_verify_small)
    a = sub.add_parser("asymptotic-report", help="run the asymptotic pipeline and write a JSON report")
    a.add_argument("--N", type=int, default=10000)
    a.add_argument("--alpha", default="7/10")
    a.add_argument("--beta", default="7/10")
    a.add_argument("--cutoff-R", type=int, default=9)
    a.add_argument("--round-digits", type=int, default=4)
    a.add_argument("--skip-small", action="store_true", help="skip the small-n sweep and monotonicity stages")
    a.add_argument("--json", metavar="PATH")
    a.set_defaults(func=cmd_asymptotic_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
