import itertools

import numpy as np
import pytest

from mventropy import new_space, set_hausdorff, set_rho
from mventropy.errors import (EmptySet, EmptySpace, NotSeparating,
                              SymmetryViolation, TriangleViolation)

from conftest import discrete_space, line_space


def test_discrete_two_point_space_valid():
    sp = new_space(["a", "b"], [np.array([[0.0, 1.0], [1.0, 0.0]])])
    assert sp.n == 2
    assert sp.pseudometrics[0][0, 1] == 1.0


def test_symmetry_violation():
    with pytest.raises(SymmetryViolation):
        new_space(["a", "b"], [np.array([[0.0, 1.0], [2.0, 0.0]])])


def test_triangle_violation():
    P = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    with pytest.raises(TriangleViolation):
        new_space([0, 1, 2], [P])


def test_empty_space_and_not_separating():
    with pytest.raises(EmptySpace):
        new_space([], [])
    with pytest.raises(NotSeparating):
        new_space(["a", "b"], [np.zeros((2, 2))])


def test_set_rho_values():
    sp = line_space(3)
    assert set_rho(sp, 0, {0, 1}, {1, 2}) == 0     # shared point
    assert set_rho(sp, 0, {0}, {2}) == 2
    d2 = discrete_space("ab")
    assert set_rho(d2, 0, {0}, {1}) == 1


def test_set_rho_empty_rejected():
    sp = line_space(3)
    with pytest.raises(EmptySet):
        set_rho(sp, 0, set(), {1})


def test_set_hausdorff_values():
    sp = line_space(3)
    assert set_hausdorff(sp, 0, {0, 2}, {0, 2}) == 0
    assert set_hausdorff(sp, 0, {0}, {0, 2}) == 2
    assert set_hausdorff(sp, 0, {0}, {1}) == 1     # singleton collapse


def test_rho_le_hausdorff_exhaustive():
    sp = line_space(4)
    subsets = [set(s) for r in range(1, 5)
               for s in itertools.combinations(range(4), r)]
    for A in subsets:
        for B in subsets:
            assert set_rho(sp, 0, A, B) <= set_hausdorff(sp, 0, A, B)
            assert set_rho(sp, 0, A, B) == set_rho(sp, 0, B, A)
            assert set_hausdorff(sp, 0, A, B) == set_hausdorff(sp, 0, B, A)


def test_hausdorff_triangle_and_identity():
    rng = np.random.default_rng(3)
    pts = rng.random((5, 2))
    P = np.sqrt(((pts[:, None] - pts[None, :]) ** 2).sum(-1))
    np.fill_diagonal(P, 0.0)
    sp = new_space(list(range(5)), [P])
    subsets = [frozenset(s) for r in range(1, 4)
               for s in itertools.combinations(range(5), r)]
    for A, B, C in itertools.product(subsets[:10], repeat=3):
        ab = set_hausdorff(sp, 0, A, B)
        assert ab <= set_hausdorff(sp, 0, A, C) + set_hausdorff(sp, 0, C, B) + 1e-9
    for A in subsets:
        for B in subsets:
            if set_hausdorff(sp, 0, A, B) == 0:
                assert A == B
