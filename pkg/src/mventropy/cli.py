"""Command-line entry point: analyze / verify / example / hyper.

Exit codes: 0 success or law pass, 1 parse errors, 2 validation errors,
3 resource caps exceeded, 4 law violations.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import report as rpt
from .dynamics import MapSequence, MultiMap
from .entropy import Caps, DEFAULT_CAPS, default_eps_grid, profile
from .errors import MvError, ParseError, ResolutionError, ResourceExceeded, \
    UnknownName, ValidationError
from .hyperspace import compare_hyper
from .ingestion import builtin, discretize, grid_space, parse_spec, realize
from .laws import LawSuite, run_suite
from .space import new_space

LOG2 = math.log(2)
LOG3 = math.log(3)
GOLDEN = math.log((1 + math.sqrt(5)) / 2)


def _caps(args):
    kw = {}
    if getattr(args, "orbit_cap", None):
        kw["orbit_cap"] = args.orbit_cap
    return Caps(**kw) if kw else DEFAULT_CAPS


def _eps_grid(args, space, p=0):
    spec = getattr(args, "eps_grid", None)
    if spec:
        if any(c in spec for c in ".,"):
            return [float(t) for t in spec.split(",") if t]
        return default_eps_grid(space, p, int(spec))
    return None


def _write(report, out_base, figures):
    paths = rpt.write_report(report, out_base)
    if figures:
        paths += rpt.render_figures(report, out_base)
    return paths


def cmd_analyze(args):
    with open(args.spec) as fh:
        text = fh.read()
    spec = parse_spec(text)
    space, seq, analysis = realize(spec)
    caps = _caps(args)
    eps = list(analysis["eps"]) if analysis["eps"] else _eps_grid(args, space)
    prof = profile(seq,
                   kinds=tuple(analysis["kinds"]),
                   eps_grid=eps,
                   n_max=args.n_max or analysis["n_max"],
                   window=args.window or analysis["window"],
                   mode=args.mode or analysis["mode"],
                   caps=caps)
    report = rpt.from_profile(prof, metadata={"spec_hash": rpt.spec_hash(text)})
    out_base = args.output or (args.spec.rsplit(".", 1)[0] + ".report")
    paths = _write(report, out_base, args.figures)
    sys.stdout.write(report.summary())
    sys.stdout.write("wrote: %s\n" % ", ".join(paths))
    return 0


def cmd_verify(args):
    suite = LawSuite(count=args.count, seed=args.seed,
                     max_points=args.max_points, n_max=args.law_n_max,
                     single_valued=args.single_valued)
    rep = run_suite(suite)
    for law in sorted(rep.checked):
        sys.stdout.write("%-26s checked=%d\n" % (law, rep.checked[law]))
    if rep.violations:
        sys.stdout.write("VIOLATIONS: %d\n" % len(rep.violations))
        for v in rep.violations:
            sys.stdout.write("%s seed=%d %s\n" % (v["law"], v["seed"], v["detail"]))
            sys.stdout.write(v["instance"])
        return 4
    sys.stdout.write("all laws hold on %d instances\n" % suite.count)
    return 0


def _two_point_space():
    import numpy as np
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    return new_space(["a", "b"], [P])


def _shift2():
    space = _two_point_space()
    full = MultiMap(space, [(0, 1), (0, 1)])
    return space, MapSequence(space, cycle=(full,))


def _golden():
    space = _two_point_space()
    m = MultiMap(space, [(0, 1), (0,)])
    return space, MapSequence(space, cycle=(m,))


def _grid_system(expr, N):
    space = grid_space(N)
    mm = discretize(builtin(expr), N, space, method="sample")
    return space, MapSequence(space, cycle=(mm,))


def stepped_eps_grid(space, N, p=0):
    """Default halvings shifted half a grid cell below the count steps."""
    off = 1.0 / (2 * N)
    return [max(v - off, off) for v in default_eps_grid(space, p)]


def _tol_line(label, value, target, ok, bound=""):
    verdict = "PASS" if ok else "FAIL"
    return "%-28s %.6f  target %.6f  %s %s\n" % (label, value, target, verdict, bound)


def example_report(name, N=1024, n_max=None, window=None, mode="auto",
                   caps=DEFAULT_CAPS):
    """Build one of the named benchmark systems, estimate, and compare
    against its known reference values. Returns (Report, lines, all_ok)."""
    lines = []
    meta = {"example": name, "grid": N}
    if name == "shift2":
        n_max = n_max or 15
        _space, seq = _shift2()
        prof = profile(seq, kinds=("KT_SEP",), eps_grid=[0.5], n_max=n_max,
                       window=window, mode=mode, caps=caps)
        h = prof.headline("KT_SEP")
        lines.append(_tol_line("h_KT (full shift)", h, LOG2, abs(h - LOG2) < 1e-9))
        return rpt.from_profile(prof, meta), lines, abs(h - LOG2) < 1e-9
    if name == "golden":
        n_max = n_max or 15
        _space, seq = _golden()
        prof = profile(seq, kinds=("KT_SEP",), eps_grid=[0.5], n_max=n_max,
                       window=window, mode=mode, caps=caps)
        h = prof.headline("KT_SEP")
        ok = abs(h - GOLDEN) <= 0.02 * GOLDEN
        lines.append(_tol_line("h_KT (golden mean)", h, GOLDEN, ok))
        return rpt.from_profile(prof, meta), lines, ok
    n_max = n_max or 10
    if name == "ex61":
        space, seq = _grid_system("tent_f | f01", N)
        eps = stepped_eps_grid(space, N)
        prof = profile(seq, kinds=("H_SEP", "BRANCH", "CM_SEP", "B_HAUS"),
                       eps_grid=eps, n_max=n_max, window=window, mode=mode, caps=caps)
        hH, hI, hCM = (prof.headline(k) for k in ("H_SEP", "BRANCH", "CM_SEP"))
        okH = abs(hH - LOG2) <= 0.1 * LOG2
        okI = abs(hI - LOG2) <= 0.1 * LOG2
        okC = hCM <= 0.05
        lines.append(_tol_line("h_H", hH, LOG2, okH, prof.headline_bound("H_SEP")))
        lines.append(_tol_line("h_i", hI, LOG2, okI, prof.headline_bound("BRANCH")))
        lines.append(_tol_line("h_CM^sep", hCM, 0.0, okC))
        return rpt.from_profile(prof, meta, notes=lines), lines, okH and okI and okC
    if name == "ex62":
        space, seq0 = _grid_system("phi0", N)
        eps = stepped_eps_grid(space, N)
        prof0 = profile(seq0, kinds=("KT_SEP",), eps_grid=eps, n_max=n_max,
                        window=window, mode=mode, caps=caps)
        _space, seqh = _grid_system("phi_half +0", N)
        profh = profile(seqh, kinds=("H_SEP", "CM_SEP"), eps_grid=eps, n_max=n_max,
                        window=window, mode=mode, caps=caps)
        hKT = prof0.headline("KT_SEP")
        hH, hCM = profh.headline("H_SEP"), profh.headline("CM_SEP")
        okK = abs(hKT - LOG2) <= 0.1 * LOG2
        okH = hH >= 0.9 * LOG2
        okC = hCM <= 0.05
        lines.append(_tol_line("h_KT (phi0)", hKT, LOG2, okK))
        lines.append(_tol_line("h_H (phi_half u {0})", hH, LOG2, okH))
        lines.append(_tol_line("h_CM^sep (phi_half u {0})", hCM, 0.0, okC))
        report = rpt.from_profile(prof0, meta, notes=lines)
        report2 = rpt.from_profile(profh, meta)
        report.rows.extend(report2.rows)
        report.headlines.update(report2.headlines)
        return report, lines, okK and okH and okC
    if name == "ex62_nonauto":
        space = grid_space(N)
        jbar = 2
        phi1 = discretize(builtin("phi1"), N, space, method="sample")
        phih = discretize(builtin("phi_half +0"), N, space, method="sample")
        seq = MapSequence(space, cycle=(phih,), prefix=(phi1,) * (jbar + 1))
        eps = stepped_eps_grid(space, N)
        prof = profile(seq, kinds=("H_SEP", "CM_SEP"), eps_grid=eps, n_max=n_max,
                       window=window, mode=mode, caps=caps)
        hH, hCM = prof.headline("H_SEP"), prof.headline("CM_SEP")
        okH = hH >= 0.9 * LOG2
        okC = hCM <= 0.05
        lines.append(_tol_line("h_H (psi, jbar=%d)" % jbar, hH, LOG2, okH))
        lines.append(_tol_line("h_CM^sep (psi)", hCM, 0.0, okC))
        lines.append("exceptional set card 2^jbar - 1 = %d (reported, not asserted)\n"
                     % (2 ** jbar - 1))
        return rpt.from_profile(prof, meta, notes=lines), lines, okH and okC
    if name == "ex64":
        space, seqh = _grid_system("phi_half +0", N)
        eps = stepped_eps_grid(space, N)
        prof = profile(seqh, kinds=("H_SEP", "B_HAUS", "CM_SEP"), eps_grid=eps,
                       n_max=n_max, window=window, mode=mode, caps=caps)
        hH, hB = prof.headline("H_SEP"), prof.headline("B_HAUS")
        okEq = hH == hB
        okH = hH >= 0.9 * LOG2
        lines.append(_tol_line("h_B", hB, LOG2, okH and okEq))
        lines.append(_tol_line("h_H", hH, LOG2, okH))
        _space1, seq1 = _grid_system("phi1 +0", N)
        prof1 = profile(seq1, kinds=("KT_SEP",), eps_grid=eps[:4], n_max=min(n_max, 8),
                        window=window, mode=mode, caps=caps)
        hKT = prof1.headline("KT_SEP")
        lines.append("h_KT(phi1 u {0}) >= %.6f (%s); reference value log 3 = %.6f "
                     "(reported, not asserted)\n"
                     % (hKT, prof1.headline_bound("KT_SEP"), LOG3))
        return rpt.from_profile(prof, meta, notes=lines), lines, okEq and okH
    raise UnknownName("unknown example '%s'" % name)


def cmd_example(args):
    report, lines, _ok = example_report(args.name, N=args.grid,
                                        n_max=args.n_max, window=args.window,
                                        mode=args.mode or "auto", caps=_caps(args))
    for line in lines:
        sys.stdout.write(line)
    if args.output:
        paths = _write(report, args.output, args.figures)
        sys.stdout.write("wrote: %s\n" % ", ".join(paths))
    return 0


def cmd_hyper(args):
    with open(args.spec) as fh:
        text = fh.read()
    spec = parse_spec(text)
    _space, seq, analysis = realize(spec)
    eps = args.eps if args.eps is not None else (
        analysis["eps"][0] if analysis["eps"] else
        default_eps_grid(seq.space, args.p)[0])
    rows = compare_hyper(seq, args.p, eps, args.n_max or analysis["n_max"],
                         mode=args.mode or "auto", caps=_caps(args))
    ok = True
    sys.stdout.write("n,s_H,s_H_bound,s_star,s_star_bound\n")
    for r in rows:
        sys.stdout.write("%d,%d,%s,%d,%s\n" % (r["n"], r["s_H"], r["s_H_bound"],
                                               r["s_star"], r["s_star_bound"]))
        if r["s_H_bound"] == "EXACT" and r["s_star_bound"] == "EXACT":
            ok = ok and r["s_H"] <= r["s_star"]
    sys.stdout.write("verdict: %s\n" % ("PASS" if ok else "FAIL"))
    return 0 if ok else 4


def build_parser():
    ap = argparse.ArgumentParser(prog="mventropy",
                                 description="parametric topological entropies of "
                                             "multivalued nonautonomous systems")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--eps-grid", default=None,
                       help="comma list of values, or a count for the geometric grid")
        p.add_argument("--mode", choices=("exact", "greedy", "auto"), default=None)
        p.add_argument("--window", type=int, default=None)
        p.add_argument("--orbit-cap", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)

    pa = sub.add_parser("analyze", help="run an entropy profile over a spec file")
    pa.add_argument("spec")
    pa.add_argument("-o", "--output", default=None, help="output base path")
    pa.add_argument("--figures", action="store_true")
    common(pa)
    pa.set_defaults(fn=cmd_analyze)

    pv = sub.add_parser("verify", help="run the finite-n law suite")
    pv.add_argument("--count", type=int, default=100)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--max-points", type=int, default=5)
    pv.add_argument("--law-n-max", type=int, default=3)
    pv.add_argument("--single-valued", action="store_true")
    pv.set_defaults(fn=cmd_verify)

    pe = sub.add_parser("example", help="reproduce a named benchmark system")
    pe.add_argument("name",
                    choices=("shift2", "golden", "ex61", "ex62", "ex62_nonauto", "ex64"))
    pe.add_argument("--grid", type=int, default=1024)
    pe.add_argument("-o", "--output", default=None)
    pe.add_argument("--figures", action="store_true")
    common(pe)
    pe.set_defaults(fn=cmd_example)

    ph = sub.add_parser("hyper", help="base-vs-hyperspace separated count table")
    ph.add_argument("spec")
    ph.add_argument("--eps", type=float, default=None)
    ph.add_argument("--p", type=int, default=0)
    common(ph)
    ph.set_defaults(fn=cmd_hyper)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ResolutionError, UnknownName) as e:
        sys.stderr.write("error: %s\n" % e)
        return 1
    except ValidationError as e:
        sys.stderr.write("validation error: %s\n" % e)
        return 2
    except ResourceExceeded as e:
        sys.stderr.write("resource limit: %s\n" % e)
        return 3
    except FileNotFoundError as e:
        sys.stderr.write("error: %s\n" % e)
        return 1
    except MvError as e:
        sys.stderr.write("error: %s\n" % e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
