"""Entropy estimators: per-n extremal counts, growth-rate fits, profiles.

Counts are exact wherever the configured budgets allow; above them every
shortcut carries an explicit bound direction that propagates into the
estimate (separated-greedy and lower-bound tables -> LOWER_BOUND on the rate,
spanning/subcover-greedy -> UPPER_BOUND).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _dense
from .dynamics import (
    Cover,
    MapSequence,
    MultiMap,
    cover_An_class,
    count_orbits,
    iter_f_family,
    orbit_array,
)
from .errors import ExactSizeLimit, NotASelection, OrbitCapExceeded
from .extremal import (
    EXACT,
    LOWER_BOUND,
    UPPER_BOUND,
    DistanceTable,
    SolveResult,
    max_separated,
    min_spanning,
    min_subcover,
)

# kind tag -> (family, side)
KINDS = {
    "KT_SEP": ("KT", "sep"),
    "KT_SPAN": ("KT", "span"),
    "CM_SEP": ("CM", "sep"),
    "CM_SPAN": ("CM", "span"),
    "RHO_SEP": ("RHO", "sep"),
    "RHO_SPAN": ("RHO", "span"),
    "H_SEP": ("H", "sep"),
    "H_SPAN": ("H", "span"),
    "BRANCH": ("BRANCH", "sep"),
    "U_COVER": ("U", "cover"),
    "L_COVER": ("L", "cover"),
    "B_HAUS": ("H", "sep"),  # Borsuk = Hausdorff on finite spaces
}

METRIC_KINDS = tuple(k for k, (f, s) in KINDS.items() if s != "cover")
COVER_KINDS = ("U_COVER", "L_COVER")


@dataclass(frozen=True)
class Caps:
    orbit_cap: int = 2_000_000
    exact_limit: int = 64       # vertex budget for exact solvers
    table_limit: int = 4096     # max items for materialized orbit tables
    branch_budget: int = 4096   # max total orbit tuples for exact p_n^b tables
    tuple_budget: int = 200_000  # cover block-tuple exploration budget
    hyper_limit: int = 12


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class EntropyEstimate:
    kind: str
    p: int
    eps: object            # float, or None for cover kinds
    cover_id: object       # str for cover kinds, else None
    counts: tuple
    rates: tuple
    fitted_rate: float
    bound: str


def default_window(n_max):
    return max(2, math.ceil(n_max / 2))


def fit_rate(counts, window):
    """Least-squares slope of log(count) vs n over the trailing window."""
    n_max = len(counts)
    w = max(2, min(window, n_max))
    ys = np.log(np.asarray(counts[-w:], dtype=float))
    xs = np.arange(n_max - w + 1, n_max + 1, dtype=float)
    return float(np.polyfit(xs, ys, 1)[0])


def default_eps_grid(space, p, count=8):
    """Geometric grid: diameter/2 halving down, `count` values."""
    d = space.diameter(p)
    if d <= 0:
        return [1.0]  # non-separating pseudometric; any eps gives count 1
    return [d / 2 / (2.0 ** i) for i in range(count)]


def _merge_bound(flags):
    flags = set(flags)
    if flags == {EXACT}:
        return EXACT
    if LOWER_BOUND in flags and UPPER_BOUND in flags:
        # cannot certify a direction; report the weaker (lower) claim
        return LOWER_BOUND
    return LOWER_BOUND if LOWER_BOUND in flags else UPPER_BOUND


def _solver_mode(nitems, mode, caps):
    if mode == "greedy":
        return "greedy"
    if mode == "exact":
        return "exact"
    return "exact" if nitems <= caps.exact_limit else "greedy"


def _sep_matrix(T, labels, eps, mode, caps):
    sm = _solver_mode(len(labels), mode, caps)
    return max_separated(DistanceTable(tuple(labels), T.copy()), eps, sm,
                         exact_limit=caps.exact_limit)


def _span_matrix(T, labels, eps, mode, caps):
    sm = _solver_mode(len(labels), mode, caps)
    return min_spanning(DistanceTable(tuple(labels), T.copy()), eps, sm,
                        exact_limit=caps.exact_limit)


# ---------------------------------------------------------------------------
# per-n counters

class _TableCounter:
    """Counter backed by a full m x m pseudometric table over X (or orbits)."""

    def __init__(self, T, labels, caps, downgrade=None):
        self.T = T
        self.labels = labels
        self.caps = caps
        self.downgrade = downgrade  # forced bound flag (lower-bound tables)

    def _post(self, res):
        if self.downgrade and res.bound == EXACT:
            return SolveResult(res.cardinality, res.witness, self.downgrade)
        return res

    def sep(self, eps, mode):
        return self._post(_sep_matrix(self.T, self.labels, eps, mode, self.caps))

    def span(self, eps, mode):
        return self._post(_span_matrix(self.T, self.labels, eps, mode, self.caps))


class _SandwichCounter:
    """Branch counter from L <= p_n^b <= U tables.

    Separated counts from L are valid lower bounds; when exact solves on both
    tables agree the true count is pinched and the result is EXACT.
    """

    def __init__(self, L, U, labels, caps):
        self.L, self.U, self.labels, self.caps = L, U, labels, caps

    def sep(self, eps, mode):
        res = _sep_matrix(self.L, self.labels, eps, mode, self.caps)
        if res.bound == EXACT and len(self.labels) <= self.caps.exact_limit:
            up = _sep_matrix(self.U, self.labels, eps, mode, self.caps)
            if up.bound == EXACT and up.cardinality == res.cardinality:
                return res
        return SolveResult(res.cardinality, res.witness, LOWER_BOUND)

    def span(self, eps, mode):
        # U-balls are smaller, so any U-spanning set spans under p_n^b
        res = _span_matrix(self.U, self.labels, eps, mode, self.caps)
        return SolveResult(res.cardinality, res.witness, UPPER_BOUND)


class _KTCounter:
    """Counter over the n-orbit space under pn."""

    def __init__(self, seq, p, n, mode, caps):
        self.seq, self.p, self.n, self.caps = seq, p, n, caps
        self.P = seq.space.pseudometrics[p]
        off = self.P[~np.eye(seq.space.n, dtype=bool)]
        self.dmin = float(off.min()) if off.size else 0.0
        self.total = count_orbits(seq, n)
        self._orbits = None
        self._table = None

    def _orbit_arr(self):
        if self._orbits is None:
            self._orbits = orbit_array(self.seq, self.n, cap=self.caps.orbit_cap)
        return self._orbits

    def _matrix(self):
        if self._table is None:
            self._table = _dense.orbit_pn_table(self.P, self._orbit_arr())
        return self._table

    def _fallback_sep(self, eps, mode):
        """Lower bound when the orbit space is over the cap: the better of the
        median-selection KT count (orbit inclusion) and the CM count
        (Prop. 3.1 direction)."""
        sel = median_selection(self.seq)
        traj = _selection_trajectories(sel, self.n)
        rows = lambda i: _dense.orbit_pn_rows(self.P, traj, i)
        chosen = _dense.greedy_separated_lazy(rows, len(traj), eps)
        cm = _TableCounter(_dense.cm_table(self.seq, self.p, self.n),
                           self.seq.space.points, self.caps).sep(eps, mode)
        best = max(len(chosen), cm.cardinality)
        witness = tuple(chosen) if len(chosen) >= cm.cardinality else cm.witness
        return SolveResult(best, witness, LOWER_BOUND)

    def sep(self, eps, mode):
        if self.dmin > eps:
            # distinct orbits differ at some coordinate, which alone is > eps
            return SolveResult(self.total, tuple(range(self.total)), EXACT)
        if self.total > self.caps.orbit_cap:
            if mode == "auto":
                return self._fallback_sep(eps, mode)
            raise OrbitCapExceeded(self.total, self.caps.orbit_cap)
        labels = tuple(range(self.total))
        sm = _solver_mode(self.total, mode, self.caps)
        if sm == "exact":
            return _sep_matrix(self._matrix(), labels, eps, "exact", self.caps)
        if self.total <= self.caps.table_limit:
            return _sep_matrix(self._matrix(), labels, eps, "greedy", self.caps)
        O = self._orbit_arr()
        rows = lambda i: _dense.orbit_pn_rows(self.P, O, i)
        chosen = _dense.greedy_separated_lazy(rows, self.total, eps)
        return SolveResult(len(chosen), tuple(chosen), LOWER_BOUND)

    def span(self, eps, mode):
        if self.dmin > eps:
            return SolveResult(self.total, tuple(range(self.total)), EXACT)
        if self.total > self.caps.orbit_cap:
            if mode == "auto":
                # r(eps) >= s(2 eps): a closed eps-ball holds at most one
                # point of any 2eps-separated set (pn obeys the triangle)
                res = self._fallback_sep(2 * eps, mode)
                return SolveResult(res.cardinality, res.witness, LOWER_BOUND)
            raise OrbitCapExceeded(self.total, self.caps.orbit_cap)
        labels = tuple(range(self.total))
        sm = _solver_mode(self.total, mode, self.caps)
        if sm == "exact":
            return _span_matrix(self._matrix(), labels, eps, "exact", self.caps)
        if self.total <= self.caps.table_limit:
            return _span_matrix(self._matrix(), labels, eps, "greedy", self.caps)
        # a maximal separated set is spanning; greedy gives one
        O = self._orbit_arr()
        rows = lambda i: _dense.orbit_pn_rows(self.P, O, i)
        chosen = _dense.greedy_separated_lazy(rows, self.total, eps)
        return SolveResult(len(chosen), tuple(chosen), UPPER_BOUND)


def median_selection(seq: MapSequence) -> MapSequence:
    """Deterministic single-valued selection: the median image element."""
    def sel(m: MultiMap) -> MultiMap:
        return MultiMap(m.space, [(img[len(img) // 2],) for img in m.images])
    return MapSequence(seq.space, cycle=tuple(sel(m) for m in seq.cycle),
                       prefix=tuple(sel(m) for m in seq.prefix))


def _selection_trajectories(sel: MapSequence, n):
    m = sel.space.n
    traj = np.empty((m, n), dtype=np.int64)
    traj[:, 0] = np.arange(m)
    for k in range(n - 1):
        step = np.array([img[0] for img in sel.map_at(k).images], dtype=np.int64)
        traj[:, k + 1] = step[traj[:, k]]
    return traj


def _iter_counters(seq: MapSequence, family, p, n_max, mode, caps):
    """Yield one counter per n = 1..n_max for a metric family."""
    P = seq.space.pseudometrics[p]
    labels = seq.space.points
    if family == "KT":
        for n in range(1, n_max + 1):
            yield _KTCounter(seq, p, n, mode, caps)
    elif family == "CM":
        for n in range(1, n_max + 1):
            yield _TableCounter(_dense.cm_table(seq, p, n), labels, caps)
    elif family in ("H", "RHO"):
        run = P.copy()
        yield _TableCounter(run, labels, caps)
        prev = None
        for k, S in enumerate(_dense.mask_series(seq, n_max - 1)):
            if k == 0:
                continue
            if prev is None or not np.array_equal(S, prev[0]):
                H, R = _dense.haus_rho_tables(P, S)
                prev = (S, H, R)
            T = prev[1] if family == "H" else prev[2]
            run = np.maximum(run, T)
            yield _TableCounter(run, labels, caps)
    elif family == "BRANCH":
        run = None  # running max of Hausdorff tables = the L side
        masks = _dense.mask_series(seq, n_max - 1)
        prev = None
        for n in range(1, n_max + 1):
            S = next(masks)
            if n == 1:
                H = P
            elif prev is not None and np.array_equal(S, prev[0]):
                H = prev[1]
            else:
                H = _dense.haus_rho_tables(P, S)[0]
                prev = (S, H)
            run = H.copy() if run is None else np.maximum(run, H)
            total = count_orbits(seq, n)
            if total <= caps.branch_budget:
                yield _TableCounter(_branch_table(seq, p, n, caps), labels, caps)
            else:
                U = _dense.game_table(seq, p, n)
                yield _SandwichCounter(run.copy(), U, labels, caps)
    else:
        raise ValueError(f"unknown family {family}")


def _branch_table(seq, p, n, caps):
    """Exact p_n^b matrix by orbit enumeration (small scale only)."""
    P = seq.space.pseudometrics[p]
    m = seq.space.n
    O = orbit_array(seq, n, cap=caps.orbit_cap)
    D = _dense.orbit_pn_table(P, O)
    starts = O[:, 0]
    idx = [np.flatnonzero(starts == x) for x in range(m)]
    T = np.zeros((m, m))
    for x in range(m):
        for y in range(x + 1, m):
            B = D[np.ix_(idx[x], idx[y])]
            h = max(B.min(axis=1).max(), B.min(axis=0).max())
            T[x, y] = T[y, x] = h
    return T


# ---------------------------------------------------------------------------
# single-(n, eps) count operations

def _count_metric(seq, family, side, p, eps, n, mode, caps):
    counters = _iter_counters(seq, family, p, n, mode, caps)
    counter = None
    for counter in counters:
        pass  # advance to n
    return counter.sep(eps, mode) if side == "sep" else counter.span(eps, mode)


def count_kt(seq, p, eps, n, mode="auto", side="sep", caps=DEFAULT_CAPS):
    return _count_metric(seq, "KT", side, p, eps, n, mode, caps)


def count_cm(seq, p, eps, n, mode="auto", side="sep", caps=DEFAULT_CAPS):
    return _count_metric(seq, "CM", side, p, eps, n, mode, caps)


def count_rho(seq, p, eps, n, mode="auto", side="sep", caps=DEFAULT_CAPS):
    return _count_metric(seq, "RHO", side, p, eps, n, mode, caps)


def count_haus(seq, p, eps, n, mode="auto", side="sep", caps=DEFAULT_CAPS):
    return _count_metric(seq, "H", side, p, eps, n, mode, caps)


def count_branch(seq, p, eps, n, mode="auto", side="sep", caps=DEFAULT_CAPS):
    return _count_metric(seq, "BRANCH", side, p, eps, n, mode, caps)


def count_ucover(seq, cover: Cover, n, mode="auto", caps=DEFAULT_CAPS):
    fam, seen = [], set()
    for _tup, F in iter_f_family(seq, cover, n, budget=caps.tuple_budget):
        if F not in seen:
            seen.add(F)
            fam.append(sorted(F))
    universe = range(seq.space.n)
    sm = _solver_mode(max(len(fam), seq.space.n), mode, caps)
    return min_subcover(fam, universe, sm, exact_limit=caps.exact_limit)


def count_lcover(seq, cover: Cover, n, mode="auto", caps=DEFAULT_CAPS):
    fam, seen = [], set()
    for x in range(seq.space.n):
        C = cover_An_class(seq, cover, n, x, budget=caps.tuple_budget)
        if C not in seen:
            seen.add(C)
            fam.append(sorted(C))
    universe = range(seq.space.n)
    sm = _solver_mode(max(len(fam), seq.space.n), mode, caps)
    return min_subcover(fam, universe, sm, exact_limit=caps.exact_limit)


# ---------------------------------------------------------------------------
# estimates and profiles

def _assemble(kind, p, eps, cover_id, counts, bounds, window):
    rates = tuple(math.log(c) / n for n, c in enumerate(counts, start=1))
    return EntropyEstimate(
        kind=kind, p=p, eps=eps, cover_id=cover_id,
        counts=tuple(counts), rates=rates,
        fitted_rate=fit_rate(counts, window),
        bound=_merge_bound(bounds),
    )


def estimate_grid(seq, kind, p, eps_list, n_max=10, window=None, mode="auto",
                  caps=DEFAULT_CAPS):
    """Estimates for one metric kind across an eps grid, sharing tables per n."""
    family, side = KINDS[kind]
    if side == "cover":
        raise ValueError("cover kinds take covers, not eps values")
    window = window or default_window(n_max)
    counts = {e: [] for e in eps_list}
    bounds = {e: [] for e in eps_list}
    for counter in _iter_counters(seq, family, p, n_max, mode, caps):
        for e in eps_list:
            res = counter.sep(e, mode) if side == "sep" else counter.span(e, mode)
            counts[e].append(res.cardinality)
            bounds[e].append(res.bound)
    return [_assemble(kind, p, e, None, counts[e], bounds[e], window) for e in eps_list]


def estimate(seq, kind, p=0, eps=None, cover=None, n_max=10, window=None,
             mode="auto", caps=DEFAULT_CAPS):
    """Single-cell estimate; see estimate_grid / estimate_cover for batches."""
    window = window or default_window(n_max)
    if KINDS[kind][1] == "cover":
        return estimate_cover(seq, kind, [("cover", cover)], n_max, window, mode, caps)[0]
    return estimate_grid(seq, kind, p, [eps], n_max, window, mode, caps)[0]


def estimate_cover(seq, kind, covers, n_max=10, window=None, mode="auto",
                   caps=DEFAULT_CAPS):
    """Estimates for a cover kind over a list of (cover_id, Cover) pairs."""
    window = window or default_window(n_max)
    countf = count_ucover if kind == "U_COVER" else count_lcover
    out = []
    for cid, cover in covers:
        counts, bounds = [], []
        for n in range(1, n_max + 1):
            res = countf(seq, cover, n, mode, caps)
            counts.append(res.cardinality)
            bounds.append(res.bound)
        out.append(_assemble(kind, None, None, cid, counts, bounds, window))
    return out


def greedy_ball_cover(space, p, eps):
    """Closed eps-ball cover with greedily minimized center count."""
    T = DistanceTable(space.points, space.pseudometrics[p].copy())
    centers = min_spanning(T, eps, "greedy").witness
    M = space.pseudometrics[p]
    blocks = [frozenset(np.flatnonzero(M[c] <= eps).tolist()) for c in centers]
    return Cover(space, tuple(blocks))


@dataclass
class EntropyProfile:
    estimates: dict = field(default_factory=dict)  # (kind, p, eps_key) -> EntropyEstimate
    metadata: dict = field(default_factory=dict)

    def headline(self, kind):
        vals = [e.fitted_rate for (k, _p, _e), e in self.estimates.items() if k == kind]
        if not vals:
            raise KeyError(f"no estimates for kind {kind}")
        return max(vals)

    def headline_bound(self, kind):
        cells = [e for (k, _p, _e), e in self.estimates.items() if k == kind]
        best = max(cells, key=lambda e: e.fitted_rate)
        return best.bound

    def cells(self):
        return sorted(self.estimates.keys(), key=lambda t: (t[0], t[1] or 0, str(t[2])))


def profile(seq, kinds, eps_grid=None, n_max=10, window=None, mode="auto",
            caps=DEFAULT_CAPS, eps_count=8):
    """Estimate every kind over the pseudometric family and an eps grid.

    The headline per kind is the max fitted rate over the grid, mirroring the
    sup over (p, eps) in the definitions.
    """
    window = window or default_window(n_max)
    prof = EntropyProfile(metadata={
        "n_max": n_max, "window": window, "mode": mode,
        "caps": caps.__dict__ if hasattr(caps, "__dict__") else vars(Caps()),
        "points": seq.space.n,
    })
    prof.metadata["caps"] = {k: getattr(caps, k) for k in (
        "orbit_cap", "exact_limit", "table_limit", "branch_budget",
        "tuple_budget", "hyper_limit")}
    for p in range(len(seq.space.pseudometrics)):
        grid = list(eps_grid) if eps_grid else default_eps_grid(seq.space, p, eps_count)
        for kind in kinds:
            fam, side = KINDS[kind]
            if side == "cover":
                covers = [(f"balls(p={p},eps={e:g})", greedy_ball_cover(seq.space, p, e))
                          for e in grid]
                ests = estimate_cover(seq, kind, covers, n_max, window, mode, caps)
                for e, est in zip(grid, ests):
                    prof.estimates[(kind, p, e)] = est
            else:
                for est in estimate_grid(seq, kind, p, grid, n_max, window, mode, caps):
                    prof.estimates[(kind, p, est.eps)] = est
    return prof


# ---------------------------------------------------------------------------
# Prop. 6.1 checker

def check_prop61(seq: MapSequence, selection: MapSequence, p=0, J=1, atol=0.0,
                 caps=DEFAULT_CAPS):
    """Minimal exceptional set A for the Prop. 6.1 equality up to atol.

    Outside A, |p^H(phi^[j]x, phi^[j]y) - p(f^[j]x, f^[j]y)| <= atol must hold
    for all j <= J. A is a true minimum vertex cover of the violation graph.
    """
    space = seq.space
    m = space.n
    if not selection.single_valued:
        raise NotASelection(-1, -1)
    for j in range(J + 1):
        fm, pm = selection.map_at(j), seq.map_at(j)
        for x in range(m):
            if fm.images[x][0] not in pm.images[x]:
                raise NotASelection(j, x)
    P = space.pseudometrics[p]
    viol = np.zeros((m, m), dtype=bool)
    traj = np.arange(m)
    for k, S in enumerate(_dense.mask_series(seq, J)):
        H = P if k == 0 else _dense.haus_rho_tables(P, S)[0]
        SelD = P[traj[:, None], traj[None, :]]
        viol |= np.abs(H - SelD) > atol
        if k < J:
            step = np.array([img[0] for img in selection.map_at(k).images])
            traj = step[traj]
    np.fill_diagonal(viol, False)
    return _min_vertex_cover(viol, caps)


def _min_vertex_cover(viol, caps):
    import networkx as nx

    verts = np.flatnonzero(viol.any(axis=0))
    if len(verts) == 0:
        return frozenset()
    G = nx.Graph()
    G.add_nodes_from(int(v) for v in verts)
    ii, jj = np.nonzero(np.triu(viol))
    G.add_edges_from((int(a), int(b)) for a, b in zip(ii, jj))
    if nx.is_bipartite(G):
        cover = set()
        for comp in nx.connected_components(G):
            sub = G.subgraph(comp)
            top = nx.bipartite.sets(sub)[0]
            matching = nx.bipartite.maximum_matching(sub, top_nodes=top)
            cover |= nx.bipartite.to_vertex_cover(sub, matching, top_nodes=top)
        return frozenset(int(v) for v in cover)
    if len(verts) > caps.exact_limit:
        raise ExactSizeLimit(len(verts), caps.exact_limit)
    # exact MVC = vertices minus a maximum independent set
    from .extremal import _exact_mis
    pos = {int(v): i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for a, b in G.edges:
        adj[pos[a]] |= 1 << pos[b]
        adj[pos[b]] |= 1 << pos[a]
    _card, mis = _exact_mis(adj, len(verts))
    mis = set(mis)
    return frozenset(int(verts[i]) for i in range(len(verts)) if i not in mis)
