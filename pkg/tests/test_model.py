import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from evlcp.errors import ShapeMismatch
from evlcp.model import (
    DiagonalSelection,
    EvlcpProblem,
    assemble_S,
    difference_selection,
    min_map,
    residuals,
    selection_matrices,
    verify_solution,
)
from evlcp.probgen import gen_two_spd


def test_residuals_example51(ex51):
    rs = residuals(ex51, [2.25, 2.0])
    np.testing.assert_allclose(rs, [[1.75, 0.0], [0.0, 0.75]], atol=1e-15)
    # r0 = M0 x + q0 = (6.75 - 4 - 1, -9 + 10 - 1), r1 = (9 - 8 - 1, -2.25 + 4 - 1)
    np.testing.assert_array_equal(residuals(ex51, [0.0, 0.0]), ex51.q)


def test_residuals_identity_blocks():
    P = EvlcpProblem(np.array([np.eye(3)] * 3), np.zeros((3, 3)))
    x = np.array([0.5, -2.0, 3.0])
    np.testing.assert_array_equal(residuals(P, x), np.tile(x, (3, 1)))


def test_residual_shape_checked(ex51):
    with pytest.raises(ShapeMismatch):
        residuals(ex51, [1.0, 2.0, 3.0])


def test_min_map_examples(ex51, ex52):
    np.testing.assert_allclose(min_map(ex51, [2.25, 2.0]), [0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(min_map(ex52, [1.0, 1.0, 1.0]), [0.0, 0.0, 0.0], atol=1e-15)
    P = EvlcpProblem(ex51.M, np.zeros((2, 2)))
    np.testing.assert_array_equal(min_map(P, [0.0, 0.0]), [0.0, 0.0])


def test_selection_matrices_examples():
    D = selection_matrices([[0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_array_equal(D.weights, [[0.5, 0.0], [0.5, 1.0]])
    r = np.array([0.3, -1.0, 4.0])
    np.testing.assert_array_equal(selection_matrices([r, r]).weights, np.full((2, 3), 0.5))
    np.testing.assert_array_equal(selection_matrices([[1.0], [0.0]]).weights, [[0.0], [1.0]])


@given(hnp.arrays(float, st.tuples(st.integers(1, 4), st.integers(1, 6)),
                  elements=st.sampled_from([-1.0, 0.0, 0.5, 2.0])))
def test_selection_is_valid(rs):
    D = selection_matrices(rs)
    assert np.all(D.weights >= 0)
    np.testing.assert_allclose(D.weights.sum(axis=0), 1.0, atol=1e-15)


def test_diagonal_selection_validation():
    with pytest.raises(ValueError):
        DiagonalSelection([[0.5, 0.5], [0.6, 0.5]])
    with pytest.raises(ValueError):
        DiagonalSelection([[1.5, 0.0], [-0.5, 1.0]])


def test_assemble_S_examples(ex51):
    np.testing.assert_array_equal(assemble_S(ex51.M, DiagonalSelection([[1.0, 1.0], [0.0, 0.0]])), ex51.M[0])
    R = gen_two_spd()
    S = assemble_S(R.M, DiagonalSelection([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_array_equal(S, [[1.0, 1.0], [1.0, 1.0]])
    M = np.random.default_rng(0).normal(size=(3, 4, 4))
    np.testing.assert_allclose(assemble_S(M, DiagonalSelection(np.full((3, 4), 1 / 3))), M.mean(axis=0))
    with pytest.raises(ShapeMismatch):
        assemble_S(M, DiagonalSelection(np.full((2, 4), 0.5)))


def test_verify_solution_examples(ex51, ex52):
    assert verify_solution(ex51, [2.25, 2.0], 1e-10).is_solution
    rep = verify_solution(ex51, [0.0, 0.0], 1e-10)
    assert not rep.is_solution and rep.residual_norm == 1.0
    assert verify_solution(ex52, [1.0, 1.0, 1.0], 1e-10).is_solution
    assert verify_solution(ex51, [2.25, 2.0]).active_map == [[1], [0]]


def test_difference_decomposition_identity():
    rng = np.random.default_rng(3)
    for _ in range(300):
        n, k = int(rng.integers(1, 6)), int(rng.integers(1, 4))
        M = rng.normal(size=(k + 1, n, n))
        P = EvlcpProblem(M, rng.normal(size=(k + 1, n)))
        Pt = EvlcpProblem(M + 0.1 * rng.normal(size=M.shape), rng.normal(size=(k + 1, n)))
        x, y = rng.normal(size=n), rng.normal(size=n)
        ra, rb = residuals(P, x), residuals(Pt, y)
        D = difference_selection(ra, rb)
        lhs = min_map(P, x) - min_map(Pt, y)
        rhs = (D.weights * (ra - rb)).sum(axis=0)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_difference_decomposition_with_ties():
    ra = np.array([[0.0, 1.0], [0.0, 1.0]])
    rb = np.array([[2.0, 0.0], [-1.0, 5.0]])
    D = difference_selection(ra, rb)
    np.testing.assert_allclose(ra.min(0) - rb.min(0), (D.weights * (ra - rb)).sum(0))


def test_vlcp_constructor():
    P = EvlcpProblem.from_lcp([[2.0, 1.0], [0.0, 3.0]], [-1.0, -1.0])
    assert P.vlcp and P.k == 1
    np.testing.assert_array_equal(P.M[0], np.eye(2))
    with pytest.raises(ShapeMismatch):
        EvlcpProblem(P.M, np.ones((2, 2)), vlcp=True)


def test_problem_is_immutable(ex51):
    with pytest.raises(ValueError):
        ex51.M[0, 0, 0] = 1.0
