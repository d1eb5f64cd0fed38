import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from evlcp import numkit
from evlcp.errors import NotNonnegative, ShapeMismatch, SingularMatrix

EX51_M0 = np.array([[3.0, -2.0], [-4.0, 5.0]])
EX52_M0 = np.array([[1.0, 0.75, 0.0], [0.75, 1.0, 0.0], [0.0, 0.75, 1.0]])

finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


def test_norm_examples():
    assert numkit.norm(EX51_M0, "inf") == 9.0
    assert numkit.norm(np.eye(4), "inf") == 1.0
    assert numkit.norm(EX52_M0, "inf") == 1.75
    assert numkit.norm(EX51_M0, "one") == 7.0
    assert numkit.norm(np.array([1.0, -3.0, 2.0])) == 3.0
    assert numkit.norm(np.array([1.0, -3.0, 2.0]), "one") == 6.0


def test_norm_rejects_other_p():
    with pytest.raises(ValueError):
        numkit.norm(EX51_M0, "two")


@given(hnp.arrays(float, st.tuples(st.integers(1, 6), st.integers(2, 6)), elements=finite))
def test_norm_inf_is_max_abs_row_sum(A):
    direct = max(sum(abs(v) for v in row) for row in A.tolist())
    assert numkit.norm(A, "inf") == pytest.approx(direct, rel=1e-12, abs=1e-300)


def test_solve_linear_examples():
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(numkit.solve_linear(np.eye(3), b), b)
    np.testing.assert_allclose(numkit.solve_linear([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])
    with pytest.raises(SingularMatrix):
        numkit.solve_linear([[1.0, 1.0], [1.0, 1.0]], [1.0, 0.0])
    with pytest.raises(SingularMatrix):
        numkit.solve_linear(np.zeros((2, 2)), [1.0, 0.0])


def test_solve_linear_random_well_conditioned():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 21))
        A = rng.uniform(-1, 1, (n, n)) + n * np.eye(n)
        b = rng.uniform(-10, 10, n)
        x = numkit.solve_linear(A, b)
        assert numkit.norm(A @ x - b) <= 1e-10 * max(1.0, numkit.norm(b))


def test_det_sign_and_value():
    assert numkit.det(EX51_M0) == pytest.approx(7.0)
    assert numkit.det([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(-1.0)


def test_comparison_matrix_examples():
    np.testing.assert_array_equal(
        numkit.comparison_matrix(EX52_M0),
        [[1.0, -0.75, 0.0], [-0.75, 1.0, 0.0], [0.0, -0.75, 1.0]],
    )
    np.testing.assert_array_equal(numkit.comparison_matrix(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(numkit.comparison_matrix([[-2.0, 1.0], [1.0, -2.0]]), [[2.0, -1.0], [-1.0, 2.0]])


@given(hnp.arrays(float, st.integers(1, 5).map(lambda n: (n, n)), elements=finite))
def test_comparison_matrix_idempotent(A):
    C = numkit.comparison_matrix(A)
    np.testing.assert_array_equal(numkit.comparison_matrix(C), C)


def test_elementwise_max_examples():
    A = np.array([[0.0, 2 / 3], [4 / 5, 0.0]])
    B = np.array([[0.0, 1.0], [0.5, 0.0]])
    np.testing.assert_array_equal(numkit.elementwise_max([A, B]), [[0.0, 1.0], [0.8, 0.0]])
    np.testing.assert_array_equal(numkit.elementwise_max([A]), A)
    np.testing.assert_array_equal(numkit.elementwise_max([A, A]), A)
    with pytest.raises(ShapeMismatch):
        numkit.elementwise_max([A, np.eye(3)])
    with pytest.raises(ShapeMismatch):
        numkit.elementwise_max([])


def test_spectral_radius_examples():
    assert numkit.spectral_radius_nonneg([[0.0, 1.0], [0.8, 0.0]]) == pytest.approx(0.8944, abs=5e-5)
    assert numkit.spectral_radius_nonneg([[0.0, 1.0], [0.8, 0.0]]) == pytest.approx(np.sqrt(0.8), abs=1e-8)
    assert numkit.spectral_radius_nonneg(np.zeros((3, 3))) == 0.0
    W = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]]
    assert numkit.spectral_radius_nonneg(W) == pytest.approx(1.0, abs=1e-8)


def test_spectral_radius_reducible_and_nilpotent():
    assert numkit.spectral_radius_nonneg([[0.0, 0.0], [1.5, 0.0]]) == 0.0
    W = np.array([[0.5, 1.0, 0.0], [0.0, 0.2, 0.0], [3.0, 0.0, 0.1]])
    assert numkit.spectral_radius_nonneg(W) == pytest.approx(0.5, abs=1e-8)


def test_spectral_radius_errors():
    with pytest.raises(NotNonnegative):
        numkit.spectral_radius_nonneg([[0.0, -1.0], [1.0, 0.0]])


def test_spectral_bracket_encloses():
    br = numkit.spectral_bracket([[0.0, 1.0], [0.8, 0.0]])
    assert br.lower <= np.sqrt(0.8) + 1e-12 and br.upper >= np.sqrt(0.8) - 1e-12
    assert br.upper - br.lower < 1e-10


def _inverse_nonneg(W, t):
    # a Z-matrix tI - W is a nonsingular M-matrix iff its inverse is nonnegative,
    # and for nonnegative W that happens exactly when t > rho(W)
    try:
        inv = np.linalg.inv(t * np.eye(len(W)) - W)
    except np.linalg.LinAlgError:
        return False
    return bool(np.all(inv >= -1e-9 * np.abs(inv).max()))


@settings(max_examples=300, deadline=None)
@given(
    hnp.arrays(float, st.integers(1, 7).map(lambda n: (n, n)), elements=st.floats(0, 10)),
    st.sampled_from([0.0, 0.3, 0.7]),
)
def test_spectral_radius_perron_bracketing(W, sparsity):
    W = W * (np.arange(W.size).reshape(W.shape) % 10 >= 10 * sparsity)
    rho = numkit.spectral_radius_nonneg(W)
    sums = W.sum(axis=1)
    assert sums.min() - 1e-8 <= rho <= sums.max() + 1e-8
    gap = 1e-6 * (1 + rho)
    assert _inverse_nonneg(W, rho + gap)
    if rho > gap:
        assert not _inverse_nonneg(W, rho - gap)


def test_spectral_radius_matches_eigvals_on_positive_matrices():
    rng = np.random.default_rng(8)
    for _ in range(300):
        n = int(rng.integers(1, 12))
        W = rng.uniform(0, 1, (n, n))
        assert numkit.spectral_radius_nonneg(W) == pytest.approx(max(abs(np.linalg.eigvals(W))), rel=1e-10)


def test_spectral_radius_denormal_entries():
    W = np.array([[0.0, 6.0, 5e-324, 0.1], [5e-324, 5e-324, 5e-324, 7.0],
                  [5e-324, 5e-324, 5.5, 6.3], [5e-324, 0.6, 5.75, 5.75]])
    assert _inverse_nonneg(W, numkit.spectral_radius_nonneg(W) + 1e-6)
