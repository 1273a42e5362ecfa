"""Shared fixtures and independent brute-force oracles for the test suite."""

import itertools

import numpy as np
import pytest

from mventropy import MapSequence, MultiMap, new_space
from mventropy.dynamics import enumerate_orbits


def line_space(k):
    """Points 0..k-1 on a line with unit gaps."""
    idx = np.arange(k, dtype=float)
    P = np.abs(idx[:, None] - idx[None, :])
    return new_space(list(range(k)), [P])


def discrete_space(labels):
    m = len(labels)
    P = np.ones((m, m)) - np.eye(m)
    return new_space(list(labels), [P])


@pytest.fixture
def two_pt():
    return discrete_space("ab")


def seq_of(space, images, prefix_images=()):
    """Autonomous (or prefix+cycle) MapSequence from raw image lists."""
    cyc = (MultiMap(space, images),)
    pre = tuple(MultiMap(space, im) for im in prefix_images)
    return MapSequence(space, cycle=cyc, prefix=pre)


# --- independent oracles (no shared code with the implementations) ----------

def brute_pn_cm(seq, p, n, x, y):
    P = seq.space.pseudometrics[p]
    ox = enumerate_orbits(seq, n, start=x).orbits
    oy = enumerate_orbits(seq, n, start=y).orbits
    return min(max(P[a, b] for a, b in zip(tx, ty)) for tx in ox for ty in oy)


def brute_cover_f_set(seq, blocks):
    n = len(blocks)
    out = set()
    for orb in enumerate_orbits(seq, n).orbits:
        if all(orb[i] in blocks[i] for i in range(n)):
            out.add(orb[0])
    return out


def brute_max_separated(values, eps):
    """Largest subset with all pairwise values strictly > eps, by full
    enumeration (items = range(len(values)))."""
    m = len(values)
    best = 1
    for r in range(m, 0, -1):
        for sub in itertools.combinations(range(m), r):
            if all(values[a][b] > eps for a, b in itertools.combinations(sub, 2)):
                return r
    return best


def brute_min_spanning(values, eps):
    m = len(values)
    for r in range(1, m + 1):
        for sub in itertools.combinations(range(m), r):
            if all(any(values[c][u] <= eps for c in sub) for u in range(m)):
                return r
    raise AssertionError("universe not coverable")


def brute_min_subcover(blocks, universe):
    uni = set(universe)
    for r in range(1, len(blocks) + 1):
        for sub in itertools.combinations(range(len(blocks)), r):
            if set().union(*(set(blocks[i]) for i in sub)) >= uni:
                return r
    return None


def matrix_orbit_count(images, n):
    """Total n-orbit count of a relation via the 0/1 transition matrix."""
    m = len(images)
    M = np.zeros((m, m), dtype=object)
    for x, img in enumerate(images):
        for y in img:
            M[x, y] = 1
    if n == 1:
        return m
    power = np.linalg.matrix_power(M, n - 1)
    return int(power.sum())
