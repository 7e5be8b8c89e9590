"""Command line front end.

Three modes: `compute` evaluates a single q, `range` sweeps every
suitable prime in an interval into a CSV or JSON Lines file with
checkpoint/resume support, and `verify` runs the self-check battery and
reports a PASS/FAIL table.

Exit codes: 0 success, 1 bad input, 2 a result failed its precision
gate, 3 a verify check failed.  All floating point fields are rendered
to `digits` significant decimals, rounded half to even from the exact
binary value, so output files are reproducible byte for byte across
runs, resumes and worker counts.
"""

import argparse
import csv
import decimal
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction

from . import classgroup
from .arith import is_prime, jacobi
from .classgroup import characters, class_group
from .errors import (DomainError, InputError, PrecisionError,
                     PrecisionExhausted, ResourceError, RootNumberUnstable)
from .hecke import build_psi, coefficients, enumerate_ideals_of_norm, psi_ideal
from .lfun import total_L
from .numerics import make_context
from .period import gamma_product
from .report import sha_order

COLUMNS = ("q", "h", "clgp", "digits", "L_total", "G", "sha_real",
           "sha_round", "is_square", "sha_sqrt", "residual", "max_w_dev",
           "j", "m", "n", "runtime_ms")

VERIFY_DEFAULT_QS = (7, 23, 31, 47, 71)


@dataclass
class RunConfig:
    """Everything one invocation needs; tests build these directly.

    inject_fault is deliberately not exposed as a flag: it exists so the
    test suite can prove `verify` catches corruption ("coeff" bumps one
    Dirichlet coefficient before the ideal-sum comparison runs).
    """
    mode: str
    q: int = 0
    q_min: int = 0
    q_max: int = 0
    digits: int = 32
    jobs: int = 1
    out: str = ""
    fmt: str = "csv"
    resume: bool = False
    tgrid: object = None
    safety: int = 0
    qs: tuple = ()
    inject_fault: object = None


# ---------------------------------------------------------------------------
# record serialization

def _fmt_mp(x, digits):
    """Render an mpf to `digits` significant decimals, half-even.

    Goes through the exact dyadic value man * 2^exp, so exactly one
    rounding happens and the text is independent of how the value was
    produced.
    """
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)  # the gmpy2 backend hands back mpz
    if man == 0:
        if exp != 0:
            raise InputError("cannot serialize non-finite value %r" % (x,))
        return "0"
    if exp >= 0:
        d = decimal.Decimal(man << exp)
    else:
        d = decimal.Decimal(man * 5 ** -exp)
        t = d.as_tuple()
        d = decimal.Decimal((0, t.digits, t.exponent + exp))
    if sign:
        d = d.copy_negate()  # unary minus would round at the ambient prec
    with decimal.localcontext() as dctx:
        dctx.prec = digits
        dctx.rounding = decimal.ROUND_HALF_EVEN
        d = +d
    return str(d)


def _record(rep):
    """Flatten a ShaReport into the canonical column dict (plain types
    only, so records survive pickling and both output formats)."""
    clgp = "x".join(str(d) for d in rep.clgp) or "1"
    dg = rep.digits
    return {
        "q": rep.q,
        "h": rep.h,
        "clgp": clgp,
        "digits": dg,
        "L_total": _fmt_mp(rep.L_total, dg),
        "G": _fmt_mp(rep.G, dg),
        "sha_real": _fmt_mp(rep.sha_real, dg),
        "sha_round": rep.sha_round,
        "is_square": rep.is_square,
        "sha_sqrt": rep.sha_sqrt,
        "residual": _fmt_mp(rep.residual, dg),
        "max_w_dev": _fmt_mp(rep.max_w_dev, dg),
        "j": _fmt_mp(rep.j, dg),
        "m": _fmt_mp(rep.m, dg),
        "n": _fmt_mp(rep.n, dg),
        "runtime_ms": "%.1f" % rep.runtime_ms,
    }


def _cell(v):
    # bool before anything else (bool is an int); loaded rows arrive as
    # strings and must pass through unchanged for byte-identical rewrites
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _write_out(path, fmt, records):
    """Atomic full rewrite, rows sorted by q."""
    records = sorted(records, key=lambda r: int(r["q"]))
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".cmsha-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            if fmt == "csv":
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(COLUMNS)
                for r in records:
                    w.writerow([_cell(r[c]) for c in COLUMNS])
            else:
                for r in records:
                    fh.write(json.dumps({c: r[c] for c in COLUMNS}) + "\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _load_existing(path, fmt, digits):
    """Rows of a previous run at the same digits setting; others are
    dropped (and so recomputed) since one file holds one precision."""
    if not os.path.exists(path):
        return []
    out = []
    with open(path, newline="") as fh:
        if fmt == "csv":
            rd = csv.DictReader(fh)
            if rd.fieldnames is None:
                return []
            if tuple(rd.fieldnames) != COLUMNS:
                raise InputError("resume file %s has unexpected columns" % path)
            rows = [dict(r) for r in rd]
        else:
            rows = [json.loads(line) for line in fh if line.strip()]
    for row in rows:
        try:
            if int(row["digits"]) == digits:
                out.append(row)
        except (KeyError, TypeError, ValueError):
            raise InputError("resume file %s has a malformed row" % path)
    return out


def _row_verified(row, digits):
    try:
        return float(row["residual"]) < 10.0 ** (-digits / 2.0)
    except (KeyError, TypeError, ValueError):
        return False


def _probe_writable(path):
    d = os.path.dirname(os.path.abspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".cmsha-probe-")
        os.close(fd)
        os.unlink(tmp)
        if os.path.exists(path):
            with open(path, "r+"):
                pass
    except OSError as e:
        raise InputError("output %s is not writable: %s" % (path, e))


# ---------------------------------------------------------------------------
# compute / range

def cmd_compute(cfg):
    rep = sha_order(cfg.q, cfg.digits, tgrid=cfg.tgrid, safety=cfg.safety)
    rec = _record(rep)
    if cfg.out:
        _write_out(cfg.out, cfg.fmt, [rec])
    elif cfg.fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerow([_cell(rec[c]) for c in COLUMNS])
    else:
        print(json.dumps({c: rec[c] for c in COLUMNS}))
    if not rep.verified:
        print("unverified: residual %s is above 10^-%.1f at q=%d; raise "
              "--digits and rerun" % (rec["residual"], cfg.digits / 2.0, cfg.q),
              file=sys.stderr)
        return 2
    return 0


def _range_worker(task):
    # module level so ProcessPoolExecutor can pickle it; returns only
    # plain strings/ints/bools, mpf values do not cross processes
    q, digits, safety, tgrid = task
    return _record(sha_order(q, digits, tgrid=tgrid, safety=safety))


def cmd_range(cfg):
    if cfg.q_min < 1 or cfg.q_min > cfg.q_max:
        raise InputError("need 1 <= q-min <= q-max, got %d..%d"
                         % (cfg.q_min, cfg.q_max))
    if cfg.jobs < 1:
        raise InputError("jobs must be >= 1, got %d" % cfg.jobs)
    if not cfg.out:
        raise InputError("range mode needs --out")
    _probe_writable(cfg.out)
    qs = [q for q in range(cfg.q_min, cfg.q_max + 1)
          if q % 8 == 7 and is_prime(q)]
    records = {}
    if cfg.resume:
        for row in _load_existing(cfg.out, cfg.fmt, cfg.digits):
            records[int(row["q"])] = row
    todo = []
    for q in qs:
        if q in records and _row_verified(records[q], cfg.digits):
            print("q=%d resumed" % q)
        else:
            todo.append(q)

    failures = []

    def done(q, rec):
        records[q] = rec
        _write_out(cfg.out, cfg.fmt, list(records.values()))
        ok = _row_verified(rec, cfg.digits)
        print("q=%d sha=%s %s" % (q, rec["sha_round"],
                                  "ok" if ok else "UNVERIFIED"))

    if cfg.jobs == 1 or len(todo) <= 1:
        for q in todo:
            try:
                done(q, _range_worker((q, cfg.digits, cfg.safety, cfg.tgrid)))
            except (PrecisionExhausted, ResourceError, RootNumberUnstable) as e:
                failures.append(q)
                print("q=%d failed: %s" % (q, e), file=sys.stderr)
    else:
        tasks = [(q, cfg.digits, cfg.safety, cfg.tgrid) for q in todo]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = {ex.submit(_range_worker, t): t[0] for t in tasks}
            for fut in as_completed(futs):
                q = futs[fut]
                try:
                    done(q, fut.result())
                except (PrecisionExhausted, ResourceError,
                        RootNumberUnstable) as e:
                    failures.append(q)
                    print("q=%d failed: %s" % (q, e), file=sys.stderr)
    _write_out(cfg.out, cfg.fmt, list(records.values()))
    offenders = sorted(q for q, r in records.items()
                       if not _row_verified(r, cfg.digits))
    print("wrote %d records to %s" % (len(records), cfg.out))
    if failures or offenders:
        for q in sorted(failures):
            print("no result for q=%d" % q, file=sys.stderr)
        for q in offenders:
            print("unverified result for q=%d" % q, file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# verify

def _check(checks, name, fn):
    try:
        ok, detail = fn()
    except Exception as e:  # a crashed check is a failed check, not a crash
        ok, detail = False, "%s: %s" % (type(e).__name__, e)
    checks.append((name, bool(ok), detail))


def _ideal_values(G, psi, nmax):
    """(value, class index) lists per norm, chi-independent."""
    per_n = []
    for n in range(1, nmax + 1):
        row = []
        if n % G.q:
            for ideal in enumerate_ideals_of_norm(G.q, n):
                c = (ideal.b * ideal.b + G.q) // (4 * ideal.a)
                f = classgroup.reduce(classgroup.QuadForm(ideal.a, ideal.b, c))
                row.append((psi_ideal(psi, ideal), G.index_of(f)))
        per_n.append(row)
    return per_n


def cmd_verify(cfg):
    qs = tuple(cfg.qs) or VERIFY_DEFAULT_QS
    digits = cfg.digits
    for q in qs:
        if isinstance(q, bool) or not isinstance(q, int) or not is_prime(q) \
                or q % 8 != 7:
            raise InputError("verify set needs primes congruent to 7 mod 8, "
                             "got %r" % (q,))
    ctx = make_context(digits)
    nmax = 300
    reports = {q: sha_order(q, digits) for q in qs}
    series = {}
    ideal_sums = {}
    for q in qs:
        G = class_group(q)
        psi = build_psi(G, ctx)
        chars = characters(G)
        series[q] = [(ch, coefficients(psi, ch, nmax, q)) for ch in chars]
        ideal_sums[q] = _ideal_values(G, psi, nmax)
    if cfg.inject_fault == "coeff":
        series[qs[0]][0][1].a[2] += 1
    checks = []

    def chk_class_numbers():
        bad = [q for q in qs
               if class_group(q).h != sum(jacobi(a, q)
                                          for a in range(1, (q + 1) // 2))]
        return not bad, ("character-sum formula agreed" if not bad
                         else "mismatch at q in %s" % bad)

    def chk_coefficients():
        tol = ctx.tol(6)
        for q in qs:
            G = class_group(q)
            for ch, ser in series[q]:
                tab = ch.values_on(G, ctx)
                for n in range(1, nmax + 1):
                    direct = ctx.mp.mpc(0)
                    for val, idx in ideal_sums[q][n - 1]:
                        direct += val * tab[idx]
                    if abs(ser.a[n] - direct) > tol:
                        return False, ("a_%d of chi_%d at q=%d is off by %s"
                                       % (n, ch.index, q,
                                          ctx.mp.nstr(abs(ser.a[n] - direct), 3)))
        return True, "recursion matches ideal sums for n <= %d" % nmax

    def chk_hasse():
        for q in qs:
            for ch, ser in series[q]:
                for p in range(2, nmax + 1):
                    if not is_prime(p) or p == q:
                        continue
                    if abs(ser.a[p]) > 2 * ctx.mp.sqrt(p) + ctx.tol(6):
                        return False, "Hasse bound broken at p=%d, q=%d" % (p, q)
        return True, "all |a_p| <= 2 sqrt(p) for p <= %d" % nmax

    def chk_gamma():
        worst = max(gamma_product(q, ctx).crosscheck_residual for q in qs)
        return worst < ctx.tol(3), ("route disagreement at most %s"
                                    % ctx.mp.nstr(worst, 3))

    def chk_root_numbers():
        wtol = ctx.mp.mpf(10) ** (-ctx.mp.mpf(digits) / 2)
        rtol = ctx.tol(5)
        for q in qs:
            rep = reports[q]
            if rep.max_w_dev > wtol:
                return False, "|w| off the unit circle by %s at q=%d" % (
                    ctx.mp.nstr(rep.max_w_dev, 3), q)
            worst = max(r for _, _, r in rep.per_chi)
            if worst > rtol:
                return False, "functional equation residual %s at q=%d" % (
                    ctx.mp.nstr(worst, 3), q)
        return True, "unit moduli and small equation residuals"

    def chk_tgrid():
        alt_grid = (Fraction(9, 10), Fraction(13, 10))
        for q in qs:
            alt = total_L(q, digits, tgrid=alt_grid)
            rel = abs(alt.L_total / reports[q].L_total - 1)
            if rel > ctx.tol(6):
                return False, "grid dependence %s at q=%d" % (
                    ctx.mp.nstr(rel, 3), q)
        return True, "L-product independent of the evaluation grid"

    def chk_branch():
        hit = False
        for q in qs:
            G = class_group(q)
            if not G.orders:
                continue
            hit = True
            branch = (1,) + (0,) * (len(G.orders) - 1)
            alt = total_L(q, digits, branch=branch)
            rel = abs(alt.L_total / reports[q].L_total - 1)
            if rel > ctx.tol(6):
                return False, "branch dependence %s at q=%d" % (
                    ctx.mp.nstr(rel, 3), q)
        return True, ("L-product independent of root branches" if hit
                      else "no q with h > 1 in the set; nothing to twist")

    def chk_q7():
        rep = reports.get(7)
        if rep is None:
            rep = sha_order(7, digits)
        if abs(rep.j + 3375) > ctx.tol(10) or abs(rep.m + 15) > ctx.tol(10) \
                or abs(rep.n - 27) > ctx.tol(10):
            return False, "curve data off at q=7"
        if rep.sha_round != 1 or rep.residual > ctx.mp.mpf("1e-10"):
            return False, "analytic order at q=7 is not 1"
        G = class_group(7)
        psi = build_psi(G, ctx)
        ser = coefficients(psi, characters(G)[0], 9, 7)
        for n, want in ((2, 1), (3, 0), (9, -3)):
            if abs(ser.a[n] - want) > ctx.tol(6):
                return False, "a_%d at q=7 is %s, expected %d" % (
                    n, ctx.mp.nstr(ser.a[n], 8), want)
        return True, "j = -3375, sha = 1, reference coefficients reproduced"

    def chk_square():
        for q in qs:
            rep = reports[q]
            if rep.sha_round < 1 or not rep.is_square:
                return False, "order %d at q=%d is not a positive square" % (
                    rep.sha_round, q)
            if rep.residual > ctx.mp.mpf("1e-10"):
                return False, "order at q=%d is %s from the nearest integer" % (
                    q, ctx.mp.nstr(rep.residual, 3))
        return True, "every order is a positive perfect square"

    _check(checks, "class-numbers", chk_class_numbers)
    _check(checks, "coefficients-vs-ideals", chk_coefficients)
    _check(checks, "hasse-bound", chk_hasse)
    _check(checks, "gamma-routes", chk_gamma)
    _check(checks, "root-numbers", chk_root_numbers)
    _check(checks, "tgrid-invariance", chk_tgrid)
    _check(checks, "branch-invariance", chk_branch)
    _check(checks, "q7-reference", chk_q7)
    _check(checks, "squareness", chk_square)

    width = max(len(name) for name, _, _ in checks)
    for name, ok, detail in checks:
        print("%-*s  %s  %s" % (width, name, "PASS" if ok else "FAIL", detail))
    n_bad = sum(1 for _, ok, _ in checks if not ok)
    print("%d/%d checks passed (q in %s, digits=%d)"
          % (len(checks) - n_bad, len(checks), list(qs), digits))
    return 3 if n_bad else 0


# ---------------------------------------------------------------------------
# argument plumbing

class _Parser(argparse.ArgumentParser):
    # bad usage is an input error: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _default_digits():
    raw = os.environ.get("CMSHA_DIGITS")
    if raw is None:
        return 32
    try:
        return int(raw)
    except ValueError:
        raise InputError("CMSHA_DIGITS must be an integer, got %r" % (raw,))


def _parse_tgrid(s):
    try:
        grid = tuple(Fraction(part.strip()) for part in s.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError("bad t-grid %r; want comma-separated rationals" % (s,))
    return grid


def _parse_qs(s):
    try:
        return tuple(int(part) for part in s.split(","))
    except ValueError:
        raise InputError("bad q list %r; want comma-separated integers" % (s,))


def _build_parser(digits_default):
    parser = _Parser(
        prog="cmsha",
        description="Conjectural analytic Tate-Shafarevich orders for the "
                    "CM curves attached to primes q congruent to 7 mod 8.",
        epilog="CMSHA_DIGITS in the environment changes the default "
               "precision; an explicit --digits always wins.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--digits", type=int, default=digits_default,
                       help="significant decimal digits (default %(default)s)")
        p.add_argument("--safety", type=int, default=0,
                       help="extra digits folded into the series cutoff")
        p.add_argument("--tgrid", default=None,
                       help="evaluation grid, e.g. '1,6/5,4/5'")

    p = sub.add_parser("compute", help="one q, record to stdout or --out")
    p.add_argument("q", type=int)
    p.add_argument("--out", default="")
    p.add_argument("--fmt", choices=("csv", "json"), default="csv")
    common(p)

    p = sub.add_parser("range", help="sweep primes q in [q-min, q-max]")
    p.add_argument("--q-min", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true",
                   help="keep rows already in --out at the current digits")
    common(p)

    p = sub.add_parser("verify", help="run the self-check battery")
    p.add_argument("--q", default=None,
                   help="comma-separated q set (default %s)"
                        % ",".join(str(q) for q in VERIFY_DEFAULT_QS))
    common(p)

    return parser


def main(argv=None):
    try:
        digits_default = _default_digits()
        parser = _build_parser(digits_default)
    except (InputError, DomainError, PrecisionError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        tgrid = _parse_tgrid(args.tgrid) if args.tgrid else None
        if args.cmd == "compute":
            cfg = RunConfig(mode="compute", q=args.q, digits=args.digits,
                            out=args.out, fmt=args.fmt, tgrid=tgrid,
                            safety=args.safety)
            return cmd_compute(cfg)
        if args.cmd == "range":
            cfg = RunConfig(mode="range", q_min=args.q_min, q_max=args.q_max,
                            digits=args.digits, jobs=args.jobs, out=args.out,
                            fmt=args.fmt, resume=args.resume, tgrid=tgrid,
                            safety=args.safety)
            return cmd_range(cfg)
        cfg = RunConfig(mode="verify", digits=args.digits, tgrid=tgrid,
                        safety=args.safety,
                        qs=_parse_qs(args.q) if args.q else ())
        return cmd_verify(cfg)
    except (InputError, DomainError, PrecisionError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except (PrecisionExhausted, ResourceError, RootNumberUnstable) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
