"""The finite hyperspace K(X), the induced hypermap phi*, and the Prop. 5.1
comparison between s_H on the base and s_KT on the hyperspace."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import MapSequence, MultiMap
from .entropy import Caps, DEFAULT_CAPS, count_haus, count_kt
from .errors import SpaceTooLarge
from .space import FiniteMetricSpace

HYPER_SIZE_LIMIT = 12


@dataclass(frozen=True)
class Hyperspace:
    base: FiniteMetricSpace
    space: FiniteMetricSpace  # K(X) as a finite metric space under {p^H}
    masks: tuple              # masks[i] = bitmask of subset i; index i = mask-1

    def index_of(self, members):
        mask = 0
        for x in members:
            mask |= 1 << int(x)
        return mask - 1

    def members(self, i):
        mask = self.masks[i]
        return frozenset(b for b in range(self.base.n) if (mask >> b) & 1)


def build_hyperspace(space: FiniteMetricSpace, size_limit=HYPER_SIZE_LIMIT) -> Hyperspace:
    """All 2^|X|-1 nonempty subsets, metrized by the Hausdorff family."""
    m = space.n
    if m > size_limit:
        raise SpaceTooLarge(m, size_limit)
    count = (1 << m) - 1
    masks = tuple(range(1, count + 1))
    member = np.array([[(mask >> b) & 1 for b in range(m)] for mask in masks], dtype=bool)
    mats = []
    for P in space.pseudometrics:
        # directed distance from subset a into subset b via per-subset min rows
        DT = np.empty((count, m))
        for i in range(count):
            DT[i] = P[:, member[i]].min(axis=1)  # DT[i, g] = dist(g, subset i)
        E = np.empty((count, count))
        for a in range(count):
            E[:, a] = DT[:, member[a]].max(axis=1)  # E[b, a] = dir(a -> b)
        mats.append(np.maximum(E, E.T))
    labels = ["{" + ",".join(space.points[b] for b in range(m) if (mask >> b) & 1) + "}"
              for mask in masks]
    hspace = FiniteMetricSpace(labels, mats, check=False)
    return Hyperspace(base=space, space=hspace, masks=masks)


def lift_map(mmap: MultiMap, hyper: Hyperspace) -> MultiMap:
    """phi*(K) = union of phi over K, as a single-valued map on K(X)."""
    pim = [0] * hyper.base.n
    for x, img in enumerate(mmap.images):
        for y in img:
            pim[x] |= 1 << y
    table = []
    for mask in hyper.masks:
        out = 0
        b = mask
        while b:
            low = b & -b
            out |= pim[low.bit_length() - 1]
            b ^= low
        table.append((out - 1,))
    return MultiMap(hyper.space, table)


def lift_sequence(seq: MapSequence, hyper: Hyperspace) -> MapSequence:
    return MapSequence(hyper.space,
                       cycle=tuple(lift_map(m, hyper) for m in seq.cycle),
                       prefix=tuple(lift_map(m, hyper) for m in seq.prefix))


def embed(hyper: Hyperspace, x) -> int:
    """Index of the singleton {x} in the hyperspace."""
    return (1 << int(x)) - 1


def compare_hyper(seq: MapSequence, p, eps, n_max, mode="auto", caps=DEFAULT_CAPS,
                  size_limit=HYPER_SIZE_LIMIT):
    """Per-n pairs (s_H(phi,p,eps,n), s(phi*,p^H,eps,n)) plus bound flags."""
    hyper = build_hyperspace(seq.space, size_limit)
    lifted = lift_sequence(seq, hyper)
    rows = []
    for n in range(1, n_max + 1):
        base = count_haus(seq, p, eps, n, mode=mode, side="sep", caps=caps)
        hyp = count_kt(lifted, p, eps, n, mode=mode, side="sep", caps=caps)
        rows.append({"n": n,
                     "s_H": base.cardinality, "s_H_bound": base.bound,
                     "s_star": hyp.cardinality, "s_star_bound": hyp.bound})
    return rows
