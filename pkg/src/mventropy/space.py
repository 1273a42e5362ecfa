"""Finite pseudometric spaces and set-to-set distances (rho and Hausdorff)."""

from __future__ import annotations

import numpy as np

from .errors import (
    EmptySet,
    EmptySpace,
    NotSeparating,
    SymmetryViolation,
    TriangleViolation,
)

# Relative slack for the triangle check only: derived distances are exact max/min
# combinations of inputs, but the check itself sums two floats and fl(b+c) may
# round below b+c on perfectly valid Euclidean inputs.
_TRI_RTOL = 1e-9


class FiniteMetricSpace:
    """Labeled points plus a finite family of pseudometric matrices.

    The family plays the role of the uniformity: at least one member must
    separate every pair of distinct points. Immutable after construction.
    """

    __slots__ = ("points", "pseudometrics", "_diams")

    def __init__(self, points, pseudometrics, check=True):
        points = tuple(str(p) for p in points)
        mats = []
        for P in pseudometrics:
            M = np.asarray(P, dtype=float)
            M.setflags(write=False)
            mats.append(M)
        self.points = points
        self.pseudometrics = tuple(mats)
        if check:
            self._validate()
        self._diams = tuple(float(M.max()) if M.size else 0.0 for M in self.pseudometrics)

    # -- construction helpers ------------------------------------------------

    def _validate(self):
        n = len(self.points)
        if n == 0:
            raise EmptySpace("space has no points")
        if not self.pseudometrics:
            raise EmptySpace("space has no pseudometrics")
        for pi, M in enumerate(self.pseudometrics):
            if M.shape != (n, n):
                raise EmptySpace(f"pseudometric {pi} has shape {M.shape}, expected {(n, n)}")
            if (M < 0).any():
                i, j = np.argwhere(M < 0)[0]
                raise SymmetryViolation(f"pseudometric {pi}: negative entry at ({i},{j})")
            if np.diag(M).any():
                i = int(np.flatnonzero(np.diag(M))[0])
                raise SymmetryViolation(f"pseudometric {pi}: nonzero diagonal at ({i},{i})")
            if (M != M.T).any():
                i, j = np.argwhere(M != M.T)[0]
                raise SymmetryViolation(
                    f"pseudometric {pi}: entry ({i},{j})={M[i, j]} != ({j},{i})={M[j, i]}"
                )
            tol = _TRI_RTOL * max(1.0, float(M.max()))
            for k in range(n):
                # d(i,j) <= d(i,k) + d(k,j) for all i,j simultaneously
                slack = M - (M[:, k : k + 1] + M[k : k + 1, :])
                if (slack > tol).any():
                    i, j = np.argwhere(slack > tol)[0]
                    raise TriangleViolation(
                        f"pseudometric {pi}: d({i},{j})={M[i, j]} > "
                        f"d({i},{k})+d({k},{j})={M[i, k] + M[k, j]}"
                    )
        sep = np.zeros((n, n), dtype=bool)
        for M in self.pseudometrics:
            sep |= M > 0
        np.fill_diagonal(sep, True)
        if not sep.all():
            i, j = np.argwhere(~sep)[0]
            raise NotSeparating(f"points {i} and {j} are at distance 0 in every pseudometric")

    # -- queries ---------------------------------------------------------------

    @property
    def n(self):
        return len(self.points)

    def metric(self, p=0):
        return self.pseudometrics[p]

    def diameter(self, p=0):
        return self._diams[p]

    def dist(self, p, i, j):
        return float(self.pseudometrics[p][i, j])

    def index(self, label):
        return self.points.index(str(label))

    def __repr__(self):
        return f"FiniteMetricSpace({self.n} points, {len(self.pseudometrics)} pseudometrics)"


def new_space(points, pseudometrics):
    """Validated constructor; rejects anything violating the space invariants."""
    return FiniteMetricSpace(points, pseudometrics, check=True)


def _as_indices(space, A):
    idx = sorted(set(int(a) for a in A))
    if not idx:
        raise EmptySet("point set is empty")
    if idx[0] < 0 or idx[-1] >= space.n:
        raise EmptySet(f"point index out of range: {idx}")
    return idx


def set_rho(space, p, A, B):
    """rho-distance: min p(a,b) over all cross pairs. Not a metric."""
    A = _as_indices(space, A)
    B = _as_indices(space, B)
    M = space.pseudometrics[p]
    return float(M[np.ix_(A, B)].min())


def set_hausdorff(space, p, A, B):
    """Hausdorff distance: max of the two directed sup-inf distances."""
    A = _as_indices(space, A)
    B = _as_indices(space, B)
    M = space.pseudometrics[p][np.ix_(A, B)]
    return float(max(M.min(axis=1).max(), M.min(axis=0).max()))
