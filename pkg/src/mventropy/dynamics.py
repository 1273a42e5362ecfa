"""Multivalued maps, nonautonomous schedules, orbits and the cover families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyImage, NotACover, OrbitCapExceeded
from .space import FiniteMetricSpace

DEFAULT_ORBIT_CAP = 2_000_000


class MultiMap:
    """A relation x -> phi(x) with every image nonempty."""

    __slots__ = ("space", "images", "_nbr", "_deg")

    def __init__(self, space: FiniteMetricSpace, images):
        imgs = []
        for x, img in enumerate(images):
            t = tuple(sorted(set(int(v) for v in img)))
            if not t:
                raise EmptyImage(f"image of point {x} is empty")
            if t[0] < 0 or t[-1] >= space.n:
                raise EmptyImage(f"image of point {x} out of range: {t}")
            imgs.append(t)
        if len(imgs) != space.n:
            raise EmptyImage(f"need {space.n} images, got {len(imgs)}")
        self.space = space
        self.images = tuple(imgs)
        self._deg = np.array([len(t) for t in imgs], dtype=np.int64)
        # ragged neighbor table padded by repeating the first neighbor; padding
        # with a real neighbor keeps min/max reductions over rows correct
        dmax = int(self._deg.max())
        nbr = np.empty((space.n, dmax), dtype=np.int64)
        for x, t in enumerate(imgs):
            nbr[x, : len(t)] = t
            nbr[x, len(t):] = t[0]
        nbr.setflags(write=False)
        self._nbr = nbr

    @property
    def single_valued(self):
        return bool((self._deg == 1).all())

    def image(self, x):
        return self.images[x]

    def transition_matrix(self):
        M = np.zeros((self.space.n, self.space.n), dtype=np.int64)
        for x, img in enumerate(self.images):
            M[x, list(img)] = 1
        return M

    def neighbor_table(self):
        """(padded neighbor index array, degree array); pads repeat a neighbor."""
        return self._nbr, self._deg

    def __eq__(self, other):
        return isinstance(other, MultiMap) and self.images == other.images \
            and self.space is other.space

    def __hash__(self):
        return hash((id(self.space), self.images))

    def __repr__(self):
        return f"MultiMap({self.images!r})"


@dataclass(frozen=True)
class MapSequence:
    """phi_{0,inf} as a finite prefix plus a periodic cycle."""

    space: FiniteMetricSpace
    cycle: tuple
    prefix: tuple = ()

    def __post_init__(self):
        if not self.cycle:
            raise EmptyImage("cycle must be nonempty")
        for m in tuple(self.prefix) + tuple(self.cycle):
            if m.space is not self.space:
                raise EmptyImage("all maps in a schedule must share the space")

    def map_at(self, j):
        if j < len(self.prefix):
            return self.prefix[j]
        return self.cycle[(j - len(self.prefix)) % len(self.cycle)]

    @property
    def single_valued(self):
        return all(m.single_valued for m in self.prefix + self.cycle)

    def distinct_maps(self, n):
        """The maps actually used for steps 0..n-1, deduplicated in order."""
        seen, out = set(), []
        for j in range(n):
            m = self.map_at(j)
            if id(m) not in seen:
                seen.add(id(m))
                out.append(m)
        return out


def autonomous(mmap: MultiMap) -> MapSequence:
    return MapSequence(mmap.space, cycle=(mmap,))


def map_at(seq: MapSequence, j):
    return seq.map_at(j)


def composed_image(seq: MapSequence, k, x):
    """phi^[k](x) = phi_{k-1}(...phi_0(x)); k=0 is the identity."""
    cur = {int(x)}
    for j in range(k):
        m = seq.map_at(j)
        nxt = set()
        for y in cur:
            nxt.update(m.images[y])
        cur = nxt
    return frozenset(cur)


def large_preimage(mmap: MultiMap, B):
    """{x : phi(x) meets B}; may be empty."""
    B = set(B)
    return frozenset(x for x, img in enumerate(mmap.images) if B.intersection(img))


def small_preimage(mmap: MultiMap, B):
    """{x : phi(x) subset of B}; may be empty."""
    B = set(B)
    return frozenset(x for x, img in enumerate(mmap.images) if B.issuperset(img))


@dataclass(frozen=True)
class OrbitSet:
    n: int
    orbits: tuple  # tuple of n-tuples, lexicographically sorted
    start: object = None  # optional start-point filter

    def __len__(self):
        return len(self.orbits)

    def as_array(self):
        return np.array(self.orbits, dtype=np.int64).reshape(len(self.orbits), self.n)


def count_orbits(seq: MapSequence, n, start=None):
    """Exact orbit count via repeated integer vector products (no enumeration)."""
    if start is None:
        v = np.ones(seq.space.n, dtype=object)
    else:
        v = np.zeros(seq.space.n, dtype=object)
        v[int(start)] = 1
    total_at_end = v
    for j in range(n - 1):
        M = seq.map_at(j).transition_matrix().astype(object)
        total_at_end = total_at_end @ M
    return int(total_at_end.sum())


def enumerate_orbits(seq: MapSequence, n, start=None, cap=DEFAULT_ORBIT_CAP):
    """All n-orbits in lexicographic order, or OrbitCapExceeded.

    Built level by level with numpy repeats, which preserves lexicographic
    order because neighbor lists are sorted.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = seq.space.n
    if start is None:
        O = np.arange(m, dtype=np.int64).reshape(m, 1)
    else:
        O = np.array([[int(start)]], dtype=np.int64)
    for j in range(n - 1):
        nbr, deg = seq.map_at(j).neighbor_table()
        last = O[:, -1]
        reps = deg[last]
        total = int(reps.sum())
        if total > cap:
            raise OrbitCapExceeded(total, cap)
        base = np.repeat(O, reps, axis=0)
        rows = nbr[last]  # (count, dmax), padded
        mask = np.arange(nbr.shape[1])[None, :] < reps[:, None]
        O = np.column_stack([base, rows[mask]])
    if len(O) > cap:
        raise OrbitCapExceeded(len(O), cap)
    return OrbitSet(n=n, orbits=tuple(map(tuple, O.tolist())), start=start)


def orbit_array(seq: MapSequence, n, start=None, cap=DEFAULT_ORBIT_CAP):
    """Like enumerate_orbits but keeps the (count, n) index array."""
    return enumerate_orbits(seq, n, start=start, cap=cap).as_array()


@dataclass(frozen=True)
class Cover:
    """An indexed list of nonempty blocks whose union is the whole space."""

    space: FiniteMetricSpace
    blocks: tuple = field(default=())

    def __post_init__(self):
        blocks = tuple(frozenset(int(i) for i in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        union = set()
        for b in blocks:
            if not b:
                raise NotACover("cover contains an empty block")
            union.update(b)
        if union != set(range(self.space.n)):
            raise NotACover("cover blocks do not union to the whole space")

    def __len__(self):
        return len(self.blocks)


def ball_cover(space: FiniteMetricSpace, p, radius, open_ball=True):
    """The cover by (open or closed) radius-balls around every point."""
    M = space.pseudometrics[p]
    if open_ball:
        blocks = [frozenset(np.flatnonzero(M[x] < radius).tolist()) for x in range(space.n)]
    else:
        blocks = [frozenset(np.flatnonzero(M[x] <= radius).tolist()) for x in range(space.n)]
    return Cover(space, tuple(blocks))


def cover_f_set(seq: MapSequence, blocks):
    """F(phi; A_0..A_{n-1}) by the backward preimage recursion."""
    blocks = [frozenset(b) for b in blocks]
    if not blocks:
        raise ValueError("need at least one block")
    cur = blocks[-1]
    for i in range(len(blocks) - 2, -1, -1):
        cur = frozenset(large_preimage(seq.map_at(i), cur)) & blocks[i] if cur else frozenset()
    return cur


def iter_f_family(seq: MapSequence, cover: Cover, n, budget=None, want_x=None):
    """Yield (block index tuple, F-set) over all block tuples with F nonempty.

    DFS over positions with forward-reachability pruning; when want_x is given
    only tuples whose F-set can contain an orbit from want_x are explored.
    Raises TupleBudgetExceeded through the caller-supplied budget counter.
    """
    from .errors import TupleBudgetExceeded

    blocks = cover.blocks
    explored = 0

    def rec(pos, chosen, reach, xreach):
        nonlocal explored
        if pos == n:
            yield tuple(chosen)
            return
        for bi, A in enumerate(blocks):
            r = reach & A
            if not r:
                continue
            xr = xreach & A if xreach is not None else None
            if xreach is not None and not xr:
                continue
            explored += 1
            if budget is not None and explored > budget:
                raise TupleBudgetExceeded(budget)
            chosen.append(bi)
            if pos + 1 < n:
                m = seq.map_at(pos)
                nxt = frozenset().union(*(m.images[u] for u in r))
                xnxt = frozenset().union(*(m.images[u] for u in xr)) if xr is not None else None
            else:
                nxt, xnxt = r, xr
            yield from rec(pos + 1, chosen, nxt, xnxt)
            chosen.pop()

    allpts = frozenset(range(seq.space.n))
    start_x = frozenset([want_x]) if want_x is not None else None
    for tup in rec(0, [], allpts, start_x):
        F = cover_f_set(seq, [blocks[i] for i in tup])
        if F:
            yield tup, F


def cover_An_class(seq: MapSequence, cover: Cover, n, x, budget=None):
    """A^n(phi,x): union of F-sets over block tuples threaded by an orbit from x."""
    out = set()
    for tup, F in iter_f_family(seq, cover, n, budget=budget, want_x=x):
        # the tuple must actually carry an orbit starting at x, which the
        # forward pruning guarantees; its F-set then joins the class
        out.update(F)
    out.add(int(x))
    return frozenset(out)
