"""Paper example systems, grid discretization of interval multimaps, and the
line-oriented system-spec file format."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .dynamics import MapSequence, MultiMap
from .errors import ParseError, ResolutionError, UnknownName
from .space import FiniteMetricSpace, new_space

# ---------------------------------------------------------------------------
# symbolic interval multimaps

F = Fraction
HALF = F(1, 2)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    closed_lo: bool = True
    closed_hi: bool = True

    def contains(self, x):
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.closed_lo:
            return False
        if x == self.hi and not self.closed_hi:
            return False
        return True


@dataclass(frozen=True)
class Branch:
    """domain: Interval or frozenset of rationals; value: ('affine', a, b),
    ('points', frozenset) or ('interval', lo, hi)."""
    domain: object
    value: tuple


@dataclass(frozen=True)
class IntervalMultiMap:
    branches: tuple
    name: str = ""


def union(m1: IntervalMultiMap, m2: IntervalMultiMap) -> IntervalMultiMap:
    return IntervalMultiMap(m1.branches + m2.branches, name=f"{m1.name}|{m2.name}")


def with_zero(m: IntervalMultiMap) -> IntervalMultiMap:
    z = Branch(Interval(F(0), F(1)), ("points", frozenset([F(0)])))
    return IntervalMultiMap(m.branches + (z,), name=f"{m.name}+0")


_BUILTINS = {
    # Example 6.1 tent map
    "tent_f": IntervalMultiMap((
        Branch(Interval(F(0), HALF, True, False), ("affine", F(2), F(0))),
        Branch(Interval(HALF, F(1), True, True), ("affine", F(-2), F(2))),
    ), "tent_f"),
    # Example 6.1 drop-to-zero map
    "f01": IntervalMultiMap((
        Branch(Interval(F(0), F(1), False, False), ("points", frozenset([F(0)]))),
        Branch(frozenset([F(0), F(1)]), ("points", frozenset([F(0), F(1)]))),
    ), "f01"),
    # Example 6.2 family
    "phi0": IntervalMultiMap((
        Branch(Interval(F(0), HALF, True, True), ("affine", F(2), F(0))),
        Branch(Interval(HALF, F(1), False, True), ("affine", F(2), F(-1))),
    ), "phi0"),
    "phi_half": IntervalMultiMap((
        Branch(Interval(F(0), HALF, True, False), ("affine", F(2), F(0))),
        Branch(frozenset([HALF]), ("points", frozenset([F(0), F(1)]))),
        Branch(Interval(HALF, F(1), False, True), ("affine", F(2), F(-1))),
    ), "phi_half"),
    "phi1": IntervalMultiMap((
        Branch(Interval(F(0), HALF, True, False), ("affine", F(2), F(0))),
        Branch(frozenset([HALF]), ("interval", F(0), F(1))),
        Branch(Interval(HALF, F(1), False, True), ("affine", F(2), F(-1))),
    ), "phi1"),
    "identity": IntervalMultiMap((
        Branch(Interval(F(0), F(1)), ("affine", F(1), F(0))),
    ), "identity"),
}


def builtin(name: str) -> IntervalMultiMap:
    """Builtin lookup plus the union '|' and '+0' combinators."""
    name = name.strip()
    parts = [s.strip() for s in name.split("|")]
    out = None
    for part in parts:
        add_zero = part.endswith("+0")
        if add_zero:
            part = part[:-2].strip()
        if part not in _BUILTINS:
            raise UnknownName(f"unknown builtin interval map '{part}'")
        m = _BUILTINS[part]
        if add_zero:
            m = with_zero(m)
        out = m if out is None else union(out, m)
    return out


def _branch_values_at(branch: Branch, x):
    """Closed value intervals of one branch at an exact point, or None."""
    dom = branch.domain
    if isinstance(dom, Interval):
        if not dom.contains(x):
            return None
    elif x not in dom:
        return None
    k, *args = branch.value
    if k == "affine":
        a, b = args
        v = a * x + b
        return [(v, v)]
    if k == "points":
        return [(pt, pt) for pt in sorted(args[0])]
    return [tuple(args)]  # interval


def point_values(imap: IntervalMultiMap, x):
    """Exact value set at a point, as a sorted list of closed intervals."""
    out = []
    for br in imap.branches:
        vals = _branch_values_at(br, x)
        if vals:
            out.extend(vals)
    return sorted(set(out))


def cell_value_intervals(imap: IntervalMultiMap, lo, hi):
    """Closed intervals enclosing the value set over the cell [lo, hi].

    Open domain endpoints are closed over (outer approximation): the closure
    only adds boundary values, which is sound for an enclosure.
    """
    out = []
    for br in imap.branches:
        dom = br.domain
        if isinstance(dom, Interval):
            ilo, ihi = max(lo, dom.lo), min(hi, dom.hi)
            if ilo > ihi:
                continue
            if ilo == ihi and not dom.contains(ilo):
                continue
            xs = [(ilo, ihi)]
        else:
            pts = [pt for pt in dom if lo <= pt <= hi]
            if not pts:
                continue
            xs = [(pt, pt) for pt in pts]
        k, *args = br.value
        for a, b in xs:
            if k == "affine":
                s, t = args[0] * a + args[1], args[0] * b + args[1]
                out.append((min(s, t), max(s, t)))
            elif k == "points":
                out.extend((pt, pt) for pt in args[0])
            else:
                out.append(tuple(args))
    return sorted(set(out))


# ---------------------------------------------------------------------------
# grid discretization

@lru_cache(maxsize=None)
def grid_space(N: int) -> FiniteMetricSpace:
    """The grid {0, 1/N, ..., 1} with the Euclidean metric |i-j|/N."""
    idx = np.arange(N + 1)
    P = np.abs(np.subtract.outer(idx, idx)) / float(N)
    labels = [f"{i}/{N}" for i in range(N + 1)]
    return FiniteMetricSpace(labels, [P], check=False)


def discretize(imap: IntervalMultiMap, N: int, space=None, method="enclosure") -> MultiMap:
    """Grid discretization of a symbolic interval multimap.

    method="enclosure": grid point g maps to every grid point within 1/N of
    the exact value set over the cell [g - 1/(2N), g + 1/(2N)]. Sound outer
    approximation that captures isolated multivalued points for every parity
    of N, but it inflates every image by a full cell per step; under an
    expanding map the inflation doubles each iteration and floods the grid
    after about log2(N) steps, collapsing the Hausdorff tables.

    method="sample": grid point g maps to every grid point within 1/(2N) of
    the exact value set at the point g itself. Still a sound enclosure of the
    point values (everything exact lands within half a cell) and monotone in
    the map, but with no per-step inflation, so finite exceptional orbits
    (such as {0,1} for tent_f | f01) stay finite. Used by the benchmark
    reproductions of cmd_example.
    """
    if N < 2:
        raise ValueError("grid size must be >= 2")
    space = space or grid_space(N)
    images = []
    if method == "enclosure":
        half_cell = F(1, 2 * N)
        for g in range(N + 1):
            c = F(g, N)
            lo, hi = max(F(0), c - half_cell), min(F(1), c + half_cell)
            pts = set()
            for a, b in cell_value_intervals(imap, lo, hi):
                gmin = max(0, math.ceil((a - F(1, N)) * N))
                gmax = min(N, math.floor((b + F(1, N)) * N))
                pts.update(range(gmin, gmax + 1))
            images.append(sorted(pts))
    elif method == "sample":
        for g in range(N + 1):
            pts = set()
            for a, b in point_values(imap, F(g, N)):
                gmin = max(0, math.ceil(a * N - HALF))
                gmax = min(N, math.floor(b * N + HALF))
                pts.update(range(gmin, gmax + 1))
            images.append(sorted(pts))
    else:
        raise ValueError(f"unknown discretization method '{method}'")
    return MultiMap(space, images)


def selection_on_grid(imap: IntervalMultiMap, N: int, space=None) -> MultiMap:
    """Single-valued grid selection: the smallest exact value at each grid
    point, rounded to the nearest grid point (ties down). Always contained in
    the enclosure discretization of the same map."""
    space = space or grid_space(N)
    images = []
    for g in range(N + 1):
        vals = point_values(imap, F(g, N))
        v = vals[0][0]  # smallest value (intervals sorted by lower end)
        q = v * N
        i = math.floor(q)
        if q - i > HALF:
            i += 1
        images.append((min(max(i, 0), N),))
    return MultiMap(space, images)


# ---------------------------------------------------------------------------
# system-spec files

VALID_MODES = ("exact", "greedy", "auto")


@dataclass(frozen=True)
class SystemSpec:
    points: tuple = None           # labels, for explicit spaces
    metrics: tuple = None          # tuple of row-tuples per pseudometric
    grid: int = None               # grid size N, for [0,1] discretizations
    maps: tuple = ()               # ordered (name, ("relation", ...) | ("builtin", expr))
    prefix: tuple = ()
    cycle: tuple = ()
    kinds: tuple = ("KT_SEP",)
    eps: tuple = None
    n_max: int = 10
    window: int = None
    mode: str = "auto"
    orbit_cap: int = None
    seed: int = 0


def _parse_number(tok, lineno):
    try:
        if "/" in tok:
            a, b = tok.split("/")
            return float(F(int(a), int(b)))
        return float(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad numeric literal '{tok}'", line=lineno)


def parse_spec(text: str) -> SystemSpec:
    section = None
    fields = {"maps": [], "prefix": (), "cycle": ()}
    metrics = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in ("space", "maps", "schedule", "analysis"):
                raise ParseError(f"unknown section [{section}]", line=lineno)
            continue
        if section is None:
            raise ParseError("content before any [section]", line=lineno)
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=lineno, column=1)
        key, val = (s.strip() for s in line.split("=", 1))
        if section == "space":
            if key == "points":
                fields["points"] = tuple(val.split())
            elif key == "grid":
                fields["grid"] = int(val)
            elif key == "metric":
                rows = [tuple(_parse_number(t, lineno) for t in row.split())
                        for row in val.split(";")]
                metrics.append(tuple(rows))
            else:
                raise ParseError(f"unknown space key '{key}'", line=lineno)
        elif section == "maps":
            if val.startswith("builtin"):
                fields["maps"].append((key, ("builtin", val[len("builtin"):].strip())))
            else:
                rel = []
                for part in val.split(";"):
                    part = part.strip()
                    if not part:
                        continue
                    if ":" not in part:
                        raise ParseError("relation entry needs 'point: images'", line=lineno)
                    src, imgs = part.split(":", 1)
                    rel.append((src.strip(), tuple(imgs.split())))
                fields["maps"].append((key, ("relation", tuple(rel))))
        elif section == "schedule":
            if key in ("prefix", "cycle"):
                fields[key] = tuple(val.split())
            else:
                raise ParseError(f"unknown schedule key '{key}'", line=lineno)
        elif section == "analysis":
            if key == "kinds":
                fields["kinds"] = tuple(val.split())
            elif key == "eps":
                fields["eps"] = tuple(_parse_number(t, lineno) for t in val.split())
            elif key in ("n_max", "window", "orbit_cap", "seed"):
                fields[key] = int(val)
            elif key == "mode":
                if val not in VALID_MODES:
                    raise ParseError(f"mode must be one of {VALID_MODES}", line=lineno)
                fields["mode"] = val
            else:
                raise ParseError(f"unknown analysis key '{key}'", line=lineno)
    if metrics:
        fields["metrics"] = tuple(metrics)
    fields["maps"] = tuple(fields["maps"])
    spec = SystemSpec(**fields)
    if not spec.cycle:
        raise ParseError("schedule needs a nonempty cycle")
    if spec.grid is None and spec.points is None:
        raise ParseError("space needs either grid = N or points/metric")
    return spec


def serialize_spec(spec: SystemSpec) -> str:
    out = ["[space]"]
    if spec.grid is not None:
        out.append(f"grid = {spec.grid}")
    if spec.points is not None:
        out.append("points = " + " ".join(spec.points))
    if spec.metrics is not None:
        for M in spec.metrics:
            out.append("metric = " + " ; ".join(
                " ".join(repr(float(v)) for v in row) for row in M))
    out.append("[maps]")
    for name, (kind, body) in spec.maps:
        if kind == "builtin":
            out.append(f"{name} = builtin {body}")
        else:
            out.append(f"{name} = " + " ; ".join(
                f"{src}: " + " ".join(imgs) for src, imgs in body))
    out.append("[schedule]")
    if spec.prefix:
        out.append("prefix = " + " ".join(spec.prefix))
    out.append("cycle = " + " ".join(spec.cycle))
    out.append("[analysis]")
    out.append("kinds = " + " ".join(spec.kinds))
    if spec.eps is not None:
        out.append("eps = " + " ".join(repr(float(e)) for e in spec.eps))
    out.append(f"n_max = {spec.n_max}")
    if spec.window is not None:
        out.append(f"window = {spec.window}")
    out.append(f"mode = {spec.mode}")
    if spec.orbit_cap is not None:
        out.append(f"orbit_cap = {spec.orbit_cap}")
    out.append(f"seed = {spec.seed}")
    return "\n".join(out) + "\n"


def realize(spec: SystemSpec):
    """Resolve a SystemSpec into (space, MapSequence, analysis dict)."""
    if spec.grid is not None:
        space = grid_space(spec.grid)
    else:
        if spec.metrics is None:
            raise ParseError("explicit spaces need at least one metric")
        space = new_space(spec.points, [np.array(M, dtype=float) for M in spec.metrics])
    by_name = {}
    for name, (kind, body) in spec.maps:
        if kind == "builtin":
            if spec.grid is None:
                raise ResolutionError(f"map '{name}': builtins need a grid space")
            by_name[name] = discretize(builtin(body), spec.grid, space)
        else:
            label_pos = {lbl: i for i, lbl in enumerate(space.points)}
            images = [() for _ in range(space.n)]
            for src, imgs in body:
                if src not in label_pos:
                    raise ResolutionError(f"map '{name}': unknown point '{src}'")
                for t in imgs:
                    if t not in label_pos:
                        raise ResolutionError(f"map '{name}': unknown point '{t}'")
                images[label_pos[src]] = tuple(label_pos[t] for t in imgs)
            by_name[name] = MultiMap(space, images)

    def resolve(name):
        if name not in by_name:
            raise ResolutionError(f"schedule references undefined map '{name}'")
        return by_name[name]

    seq = MapSequence(space,
                      cycle=tuple(resolve(n) for n in spec.cycle),
                      prefix=tuple(resolve(n) for n in spec.prefix))
    analysis = {
        "kinds": spec.kinds, "eps": spec.eps, "n_max": spec.n_max,
        "window": spec.window, "mode": spec.mode,
        "orbit_cap": spec.orbit_cap, "seed": spec.seed,
    }
    return space, seq, analysis
