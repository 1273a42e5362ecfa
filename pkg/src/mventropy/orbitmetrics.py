"""The five orbit-level pseudometric constructions behind the entropy kinds.

Pointwise evaluators here; the dense all-pairs table builders used by the
estimators live in _dense.py and are cross-checked against these.
"""

from __future__ import annotations

import numpy as np

from .dynamics import DEFAULT_ORBIT_CAP, MapSequence, composed_image, orbit_array
from .errors import LengthMismatch
from .space import set_hausdorff, set_rho


def pn(space, p, xs, ys):
    """Sup-metric on n-tuples: max_i p(x_i, y_i)."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"tuple lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) == 0:
        raise LengthMismatch("empty tuples")
    M = space.pseudometrics[p]
    return float(max(M[a, b] for a, b in zip(xs, ys)))


def pn_cm(seq: MapSequence, p, n, x, y):
    """Bottleneck DP over the product relation: min over orbit pairs of the
    running max of p. No orbit enumeration."""
    M = seq.space.pseudometrics[p]
    m = seq.space.n
    # C[u, v] = best achievable max over the remaining steps when the current
    # coordinates are (u, v); filled backward from step n-1
    C = np.zeros((m, m))
    for i in range(n - 2, -1, -1):
        phi = seq.map_at(i)
        inner = np.maximum(M, C)
        nbr, deg = phi.neighbor_table()
        # min over u' in phi(u) of inner[u', v], then min over v' in phi(v)
        T = inner[nbr[:, 0], :]
        for d in range(1, nbr.shape[1]):
            T = np.minimum(T, inner[nbr[:, d], :])
        C2 = T[:, nbr[:, 0]]
        for d in range(1, nbr.shape[1]):
            C2 = np.minimum(C2, T[:, nbr[:, d]])
        C = C2
    return float(max(M[x, y], C[x, y]))


def p_rho_at(seq: MapSequence, p, k, x, y):
    """rho-distance of the composed images phi^[k](x), phi^[k](y)."""
    if k == 0:
        return float(seq.space.pseudometrics[p][x, y])
    A = composed_image(seq, k, x)
    B = composed_image(seq, k, y)
    return set_rho(seq.space, p, A, B)


def p_haus_at(seq: MapSequence, p, k, x, y):
    """Hausdorff distance of the composed images phi^[k](x), phi^[k](y)."""
    if k == 0:
        return float(seq.space.pseudometrics[p][x, y])
    A = composed_image(seq, k, x)
    B = composed_image(seq, k, y)
    return set_hausdorff(seq.space, p, A, B)


def pn_branch(seq: MapSequence, p, n, x, y, cap=DEFAULT_ORBIT_CAP):
    """Hausdorff distance under pn between the full orbit sets of x and y.

    Exact by enumeration of both orbit sets; this is the documented
    scalability bottleneck of the branch entropy.
    """
    if x == y:
        return 0.0
    A = orbit_array(seq, n, start=x, cap=cap)
    B = orbit_array(seq, n, start=y, cap=cap)
    M = seq.space.pseudometrics[p]
    # pairwise pn matrix (|A|, |B|): running max over coordinates
    D = M[A[:, 0][:, None], B[:, 0][None, :]]
    for i in range(1, n):
        np.maximum(D, M[A[:, i][:, None], B[:, i][None, :]], out=D)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))
