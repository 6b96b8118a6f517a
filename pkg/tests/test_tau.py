import numpy as np
import pytest

from taupint.tau import (
    SingularTauError,
    TauOperator,
    dst1,
    dst1_dense,
    tau_apply,
    tau_dense,
    tau_eigenvalues,
    tau_eigs_fast,
    tau_solve,
)
from taupint.temporal import build_B, l1_coefficients, l1_weights


def test_dst1_size_one():
    assert np.allclose(dst1(np.array([4.2])), [4.2])


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 64, 257, 1024])
def test_dst1_involution(m):
    rng = np.random.default_rng(m)
    v = rng.standard_normal(m)
    err = np.max(np.abs(dst1(dst1(v)) - v))
    assert err <= 1e-12 * max(1.0, np.abs(v).max())


def test_dst1_matches_direct_summation():
    rng = np.random.default_rng(8)
    v = rng.standard_normal(8)
    j = np.arange(1, 9)
    direct = np.array(
        [
            np.sqrt(2.0 / 9.0) * np.sum(np.sin(np.pi * i * j / 9.0) * v)
            for i in j
        ]
    )
    assert np.max(np.abs(dst1(v) - direct)) < 1e-13


def test_dst1_rejects_empty():
    with pytest.raises(ValueError):
        dst1(np.array([]))


def test_tau_dense_diagonal_case():
    t = np.zeros(6)
    t[0] = 3.5
    assert np.allclose(tau_dense(t), 3.5 * np.eye(6))


def test_tau_dense_three_by_three_by_hand():
    a, b, c = 1.3, -0.2, 0.45
    expected = np.array([[a - c, b, c], [b, a, b], [c, b, a - c]])
    assert np.allclose(tau_dense([a, b, c]), expected)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 16, 64])
def test_eigenvalue_formula_matches_dense_eigensolver(m):
    rng = np.random.default_rng(100 + m)
    t = rng.standard_normal(m)
    q = np.sort(tau_eigenvalues(t).eigs)
    dense = np.sort(np.linalg.eigvalsh(tau_dense(t)))
    assert np.max(np.abs(q - dense)) < 1e-9


def test_eigenvalues_closed_form_m2():
    a, b = 0.8, -1.1
    q = tau_eigenvalues([a, b]).eigs
    assert np.allclose(np.sort(q), np.sort([a + b, a - b]))


def test_eigenvalues_constant_diagonal():
    t = np.zeros(7)
    t[0] = 5.0
    assert np.allclose(tau_eigenvalues(t).eigs, 5.0)


def test_temporal_block_eigs_match_dense():
    coeffs = l1_coefficients(0.5, 32, 1.0)
    first_col = build_B(coeffs).symmetric_part().first_column
    q = np.sort(tau_eigenvalues(first_col).eigs)
    dense = np.sort(np.linalg.eigvalsh(tau_dense(first_col)))
    assert np.max(np.abs(q - dense)) < 1e-10


@pytest.mark.parametrize("m", [1, 2, 3, 9, 33, 64])
def test_fast_route_matches_cosine_formula(m):
    rng = np.random.default_rng(200 + m)
    t = rng.standard_normal(m)
    q = tau_eigenvalues(t).eigs
    qf = tau_eigs_fast(t).eigs
    assert np.max(np.abs(q - qf)) <= 1e-10 * max(1.0, np.abs(q).max())


def test_fast_route_identity_column():
    t = np.zeros(12)
    t[0] = 1.0
    assert np.allclose(tau_eigs_fast(t).eigs, 1.0)


def test_fast_route_laplacian_column():
    m = 16
    t = np.zeros(m)
    t[0], t[1] = 2.0, -1.0
    expected = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, m + 1) / (m + 1))
    assert np.allclose(tau_eigs_fast(t).eigs, expected)
    assert np.all(tau_eigs_fast(t).eigs > 0)


def test_apply_and_solve_identity_eigs():
    op = TauOperator(np.ones(9))
    v = np.linspace(-1, 2, 9)
    assert np.allclose(tau_apply(op, v), v)
    assert np.allclose(tau_solve(op, v), v)


def test_solve_inverts_apply():
    rng = np.random.default_rng(23)
    t = rng.standard_normal(16)
    t[0] += 8.0  # keep the operator SPD
    op = tau_eigenvalues(t)
    v = rng.standard_normal(16)
    assert np.max(np.abs(tau_solve(op, tau_apply(op, v)) - v)) < 1e-10


def test_apply_matches_dense_tau():
    rng = np.random.default_rng(29)
    t = rng.standard_normal(16)
    v = rng.standard_normal(16)
    assert np.max(np.abs(tau_apply(tau_eigenvalues(t), v) - tau_dense(t) @ v)) < 1e-10


def test_solve_rejects_near_singular():
    op = TauOperator(np.array([1.0, 1e-16]))
    with pytest.raises(SingularTauError):
        tau_solve(op, np.ones(2))


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("N", [8, 64, 512])
def test_temporal_tau_positivity_lower_bound(alpha, N):
    # min eigenvalue of the temporal tau block is at least a_{N-1} > 0
    coeffs = l1_coefficients(alpha, N, 1.0)
    first_col = build_B(coeffs).symmetric_part().first_column
    eigs = tau_eigs_fast(first_col).eigs
    a_last = l1_weights(alpha, N)[-1]
    assert a_last > 0
    assert eigs.min() >= a_last - 1e-12


def test_dst1_dense_is_orthogonal_symmetric():
    S = dst1_dense(15)
    assert np.allclose(S, S.T)
    assert np.max(np.abs(S @ S - np.eye(15))) < 1e-12
