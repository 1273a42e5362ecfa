"""Dense numpy kernels used by the estimators at grid scale.

Everything here is cross-checked against the pointwise reference
implementations in orbitmetrics by the test suite.
"""

from __future__ import annotations

import numpy as np


def mask_series(seq, kmax):
    """Yield boolean composed-image masks S_k (k = 0..kmax); S_k[x] = phi^[k](x)."""
    m = seq.space.n
    S = np.eye(m, dtype=bool)
    yield S
    for k in range(kmax):
        M = seq.map_at(k).transition_matrix().astype(np.float32)
        S = (S.astype(np.float32) @ M) > 0
        yield S


def haus_rho_tables(P, masks):
    """Full Hausdorff and rho tables between the image sets given by masks.

    H[x,y] = Hausdorff distance of rows x,y of masks under P;
    R[x,y] = min cross-pair distance. Rows are deduplicated first.
    """
    uniq, inv = np.unique(masks, axis=0, return_inverse=True)
    U = len(uniq)
    m = P.shape[0]
    cols = [np.flatnonzero(uniq[u]) for u in range(U)]
    # DT[u, g] = min over h in set u of P[g, h]
    DT = np.empty((U, m))
    for u in range(U):
        DT[u] = P[:, cols[u]].min(axis=1)
    Emax = np.empty((U, U))
    Emin = np.empty((U, U))
    for a in range(U):
        block = DT[:, cols[a]]
        Emax[:, a] = block.max(axis=1)  # directed dist from set a into each set
        Emin[:, a] = block.min(axis=1)
    Hu = np.maximum(Emax, Emax.T)
    Ru = np.minimum(Emin, Emin.T)
    return Hu[inv][:, inv], Ru[inv][:, inv]


def cm_table(seq, p, n):
    """Full p_n^CM matrix via the backward bottleneck DP on the product relation."""
    M = seq.space.pseudometrics[p]
    C = np.zeros_like(M)
    for i in range(n - 2, -1, -1):
        nbr, _ = seq.map_at(i).neighbor_table()
        inner = np.maximum(M, C)
        T = inner[nbr[:, 0], :]
        for d in range(1, nbr.shape[1]):
            np.minimum(T, inner[nbr[:, d], :], out=T)
        C = T[:, nbr[:, 0]].copy()
        for d in range(1, nbr.shape[1]):
            np.minimum(C, T[:, nbr[:, d]], out=C)
    return np.maximum(M, C)


def game_table(seq, p, n):
    """Adaptive-game upper bound on p_n^b.

    The row player reveals each orbit step first and maximizes; the column
    player responds step by step. Because the offline inf in p_n^b sees whole
    orbits, the game value dominates both directed distances, so
    max(game, game^T) >= p_n^b pointwise.
    """
    M = seq.space.pseudometrics[p]
    G = np.zeros_like(M)
    for i in range(n - 2, -1, -1):
        nbr, _ = seq.map_at(i).neighbor_table()
        inner = np.maximum(M, G)
        # min over column responses v' in phi(v)
        T = inner[:, nbr[:, 0]]
        for d in range(1, nbr.shape[1]):
            np.minimum(T, inner[:, nbr[:, d]], out=T)
        # max over row moves u' in phi(u)
        G = T[nbr[:, 0], :].copy()
        for d in range(1, nbr.shape[1]):
            np.maximum(G, T[nbr[:, d], :], out=G)
    D = np.maximum(M, G)
    return np.maximum(D, D.T)


def orbit_pn_rows(P, orbits, i):
    """pn distances from orbit i to all orbits (orbits: (count, n) array)."""
    row = P[orbits[i, 0], orbits[:, 0]]
    for k in range(1, orbits.shape[1]):
        np.maximum(row, P[orbits[i, k], orbits[:, k]], out=row)
    return row


def orbit_pn_table(P, orbits):
    """Full pairwise pn matrix over an orbit array."""
    c = len(orbits)
    D = P[orbits[:, 0][:, None], orbits[:, 0][None, :]]
    for k in range(1, orbits.shape[1]):
        np.maximum(D, P[orbits[:, k][:, None], orbits[:, k][None, :]], out=D)
    return D.reshape(c, c)


def greedy_separated_lazy(row_fn, count, eps):
    """Greedy maximal eps-separated subset with lazily computed rows.

    Equivalent to the sequential lowest-index-first greedy: a point enters
    iff it is > eps from every earlier chosen point.
    """
    alive = np.ones(count, dtype=bool)
    chosen = []
    while alive.any():
        i = int(np.argmax(alive))
        chosen.append(i)
        alive &= row_fn(i) > eps
    return chosen
