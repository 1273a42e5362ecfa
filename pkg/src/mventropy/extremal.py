"""Extremal-set solvers: maximal separated sets, minimal spanning sets,
minimal subcovers. Exact branch-and-bound under a vertex budget, greedy with
bound flags above it.

Boundary convention (deliberate, tested): separated means strictly > eps,
spanning/covering means <= eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySet, ExactSizeLimit, Infeasible, NotACover

EXACT = "EXACT"
LOWER_BOUND = "LOWER_BOUND"
UPPER_BOUND = "UPPER_BOUND"

DEFAULT_EXACT_LIMIT = 64


@dataclass(frozen=True)
class DistanceTable:
    labels: tuple
    values: np.ndarray  # symmetric, zero diagonal

    def __post_init__(self):
        V = np.asarray(self.values, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] != len(self.labels):
            raise EmptySet("distance table shape does not match labels")
        if (V != V.T).any() or np.diag(V).any():
            raise EmptySet("distance table must be symmetric with zero diagonal")
        V.setflags(write=False)
        object.__setattr__(self, "values", V)

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class SolveResult:
    cardinality: int
    witness: tuple
    bound: str

    def __post_init__(self):
        assert len(self.witness) == self.cardinality


# --------------------------------------------------------------------------
# bitset helpers (python ints; no 64-item ceiling)

def _components(adj, verts):
    """Connected components of the graph restricted to the bitset verts."""
    comps = []
    rest = verts
    while rest:
        seed = rest & -rest
        comp, frontier = 0, seed
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            frontier = nxt & rest & ~comp
        comps.append(comp)
        rest &= ~comp
    return comps


def _bits(x):
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def _mis_component(adj, cand, best_hint=0):
    """Exact maximum independent set on one component (bitset B&B)."""
    best = [best_hint, 0]

    def matching_bound(c):
        # each matched edge costs at least one vertex; cheap and effective
        size = 0
        rem = c
        while rem:
            b = rem & -rem
            v = b.bit_length() - 1
            rem ^= b
            nb = adj[v] & rem
            if nb:
                w = nb & -nb
                rem ^= w
                size += 1
        return bin(c).count("1") - size

    def rec(cand, cur, chosen):
        # peel forced vertices: degree 0 or 1 inside cand is always safe
        while cand:
            moved = False
            c = cand
            while c:
                b = c & -c
                v = b.bit_length() - 1
                c ^= b
                nb = adj[v] & cand
                if bin(nb).count("1") <= 1:
                    cand &= ~(adj[v] | b)
                    cur += 1
                    chosen |= b
                    moved = True
                    break
            if not moved:
                break
        if not cand:
            if cur > best[0]:
                best[0], best[1] = cur, chosen
            return
        if cur + matching_bound(cand) <= best[0]:
            return
        # branch on a maximum-degree vertex: exclude it, or take it
        bestv, bestd = -1, -1
        for v in _bits(cand):
            d = bin(adj[v] & cand).count("1")
            if d > bestd:
                bestv, bestd = v, d
        b = 1 << bestv
        rec(cand & ~(adj[bestv] | b), cur + 1, chosen | b)
        rec(cand & ~b, cur, chosen)

    rec(cand, 0, 0)
    return best[0], best[1]


def _exact_mis(adj, nverts):
    full = (1 << nverts) - 1
    total, chosen = 0, 0
    for comp in _components(adj, full):
        c, w = _mis_component(adj, comp)
        total += c
        chosen |= w
    return total, tuple(sorted(_bits(chosen)))


def _exact_set_cover(universe, sets):
    """Minimum-cardinality subfamily of `sets` (bitsets) covering `universe`.

    Returns (count, tuple of set indices) or None when infeasible.
    """
    order = list(range(len(sets)))
    best = [None, None]

    def rec(unc, used, count):
        if not unc:
            if best[0] is None or count < best[0]:
                best[0], best[1] = count, tuple(used)
            return
        # pick the uncovered item with fewest covering sets
        pick, pickers = None, None
        for it in _bits(unc):
            cov = [i for i in order if sets[i] >> it & 1]
            if pickers is None or len(cov) < len(pickers):
                pick, pickers = it, cov
                if len(cov) <= 1:
                    break
        if not pickers:
            return  # infeasible branch
        maxcov = max(bin(sets[i] & unc).count("1") for i in pickers)
        if best[0] is not None:
            need = -(-bin(unc).count("1") // max(1, maxcov))
            if count + need >= best[0]:
                return
        pickers.sort(key=lambda i: (-bin(sets[i] & unc).count("1"), i))
        for i in pickers:
            used.append(i)
            rec(unc & ~sets[i], used, count + 1)
            used.pop()

    rec(universe, [], 0)
    if best[0] is None:
        return None
    return best[0], best[1]


# --------------------------------------------------------------------------
# public solvers

def max_separated(table: DistanceTable, eps, mode="exact", exact_limit=DEFAULT_EXACT_LIMIT):
    """Largest subset with all pairwise values strictly > eps."""
    if eps <= 0:
        raise EmptySet("eps must be positive")
    V = table.values
    m = len(table)
    if mode == "greedy":
        alive = np.ones(m, dtype=bool)
        chosen = []
        while alive.any():
            i = int(np.argmax(alive))  # lowest alive index
            chosen.append(i)
            alive &= V[i] > eps
        return SolveResult(len(chosen), tuple(chosen), LOWER_BOUND)
    if m > exact_limit:
        raise ExactSizeLimit(m, exact_limit)
    close = (V <= eps)
    np.fill_diagonal(close, False)
    adj = [int.from_bytes(np.packbits(close[i], bitorder="little").tobytes(), "little")
           for i in range(m)]
    card, witness = _exact_mis(adj, m)
    return SolveResult(card, witness, EXACT)


def min_spanning(table: DistanceTable, eps, mode="exact", universe=None, candidates=None,
                 exact_limit=DEFAULT_EXACT_LIMIT):
    """Smallest candidate subset R with every universe item within eps of R."""
    if eps <= 0:
        raise EmptySet("eps must be positive")
    V = table.values
    uni = list(range(len(table))) if universe is None else sorted(universe)
    cand = list(range(len(table))) if candidates is None else sorted(candidates)
    cover = V[np.ix_(cand, uni)] <= eps  # cover[c, u]
    if not cover.any(axis=0).all():
        u = uni[int(np.argmin(cover.any(axis=0)))]
        raise Infeasible(f"universe item {table.labels[u]} is not within eps of any candidate")
    if mode == "greedy":
        unc = np.ones(len(uni), dtype=bool)
        chosen = []
        while unc.any():
            gains = (cover & unc).sum(axis=1)
            c = int(np.argmax(gains))  # argmax takes the lowest index on ties
            chosen.append(cand[c])
            unc &= ~cover[c]
        return SolveResult(len(chosen), tuple(sorted(chosen)), UPPER_BOUND)
    if max(len(uni), len(cand)) > exact_limit:
        raise ExactSizeLimit(max(len(uni), len(cand)), exact_limit)
    sets = [int.from_bytes(np.packbits(cover[c], bitorder="little").tobytes(), "little")
            for c in range(len(cand))]
    res = _exact_set_cover((1 << len(uni)) - 1, sets)
    count, used = res
    return SolveResult(count, tuple(sorted(cand[i] for i in used)), EXACT)


def min_subcover(blocks, universe, mode="exact", exact_limit=DEFAULT_EXACT_LIMIT):
    """Minimum number of blocks covering the universe (the N(.) of the cover
    entropies). Blocks are iterables of items."""
    uni = sorted(set(universe))
    pos = {u: i for i, u in enumerate(uni)}
    bsets = []
    for b in blocks:
        s = 0
        for it in b:
            if it in pos:
                s |= 1 << pos[it]
        bsets.append(s)
    full = (1 << len(uni)) - 1
    merged = 0
    for s in bsets:
        merged |= s
    if merged != full:
        missing = next(u for u in uni if not (merged >> pos[u]) & 1)
        raise NotACover(f"item {missing} not covered by any block")
    if mode == "greedy":
        unc = full
        chosen = []
        while unc:
            gains = [bin(s & unc).count("1") for s in bsets]
            i = int(np.argmax(gains))
            chosen.append(i)
            unc &= ~bsets[i]
        return SolveResult(len(chosen), tuple(sorted(chosen)), UPPER_BOUND)
    if max(len(uni), len(bsets)) > exact_limit:
        raise ExactSizeLimit(max(len(uni), len(bsets)), exact_limit)
    count, used = _exact_set_cover(full, bsets)
    return SolveResult(count, tuple(sorted(used)), EXACT)
