import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D33
from ppt_forge.hermitian_core import partial_transpose, random_hermitian, random_state, random_unit
from ppt_forge.superop import (
    EIGEN_TWO_GAP,
    SuperOperator,
    build_projectors,
    build_tilde_projectors,
    eigenspace,
    extremality_test,
    herm_basis,
    null_space,
    sandwich_op,
    superop_matrix,
)


def test_basis_is_orthonormal_and_coordinates_round_trip(rng):
    hb = herm_basis(D33)
    B = hb.matrices()
    gram = np.einsum("aij,bji->ab", B, B).real
    assert np.allclose(gram, np.eye(81))
    X = random_hermitian(9, rng)
    assert np.allclose(hb.matrix(hb.coords(X)), X)
    assert np.isclose(hb.trace_coords() @ hb.coords(X), np.trace(X).real)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_partial_transpose_matrix_is_an_orthogonal_involution(seed):
    hb = herm_basis(D33)
    T = hb.partial_transpose_matrix()
    X = random_hermitian(9, np.random.default_rng(seed))
    assert np.allclose(hb.matrix(T @ hb.coords(X)), partial_transpose(X, D33))
    assert np.allclose(T @ T, np.eye(81))


def test_superop_matrix_of_identity():
    assert np.allclose(superop_matrix(lambda X: X, D33).matrix, np.eye(81))


def test_full_rank_projectors(rng):
    pr = build_projectors(random_state(9, rng), D33)
    assert np.allclose(pr.P.matrix, np.eye(81))
    assert np.allclose(pr.Q.matrix, 0) and np.allclose(pr.R.matrix, 0)
    assert np.allclose(build_tilde_projectors(np.eye(9) / 9, D33).Q.matrix, 0)


def test_rank4_projector_traces_and_action(upb_unit, rng):
    pr = build_projectors(upb_unit, D33)
    assert np.isclose(np.trace(pr.P.matrix), 16)
    assert np.isclose(np.trace(pr.Q.matrix), 25)
    assert np.isclose(np.trace(pr.R.matrix), 40)
    for S in (pr.P, pr.Q, pr.R):
        assert np.allclose(S.matrix, S.matrix.T)
        assert np.allclose(S.matrix @ S.matrix, S.matrix)
    X = random_hermitian(9, rng)
    assert np.allclose(pr.P.apply(X), pr.image @ X @ pr.image)
    assert np.allclose(pr.Q.apply(X), pr.kernel @ X @ pr.kernel)


def test_tilde_projectors_for_self_transposed_state(upb_unit, rng):
    # The real UPB state satisfies rho^P = rho, so P~ is P conjugated by the partial transpose.
    T = herm_basis(D33).partial_transpose_matrix()
    P = build_projectors(upb_unit, D33).P.matrix
    Pt = build_tilde_projectors(upb_unit, D33)
    assert np.allclose(Pt.P.matrix, T @ P @ T)
    X = random_hermitian(9, rng)
    Qt = Pt.Q
    assert np.allclose(Qt.apply(Qt.apply(X)), Qt.apply(X))


def test_q_sum_is_positive_semidefinite(state55):
    S = build_projectors(state55, D33).Q + build_tilde_projectors(state55, D33).Q
    assert np.allclose(S.matrix, S.matrix.T)
    assert np.linalg.eigvalsh(S.matrix)[0] > -1e-12


def test_superoperator_algebra(rng):
    L = rng.normal(size=(9, 9))
    A, B = sandwich_op(L, D33), SuperOperator.identity(D33)
    X = random_hermitian(9, rng)
    assert np.allclose((A @ B).apply(X), L @ X @ L.T)
    assert np.allclose((A + B).apply(X) - (A - B).apply(X), 2 * X)


def test_null_space_dimensions(state55):
    assert null_space(SuperOperator.identity(D33)).dimension == 0
    S = build_projectors(state55, D33).Q + build_tilde_projectors(state55, D33).Q
    assert null_space(S).dimension == 49


def test_eigenvalue_two_space_contains_state(upb_unit):
    S = build_projectors(upb_unit, D33).P + build_tilde_projectors(upb_unit, D33).P
    space = eigenspace(S, 2.0, EIGEN_TWO_GAP)
    x = herm_basis(D33).coords(upb_unit)
    x /= np.linalg.norm(x)
    assert np.linalg.norm(space.basis.T @ x) == pytest.approx(1.0)


def test_extremality_reference_cases(upb_unit, rng):
    mixed = extremality_test(np.eye(9) / 9, D33)
    assert not mixed.is_extremal and mixed.multiplicity_of_two == 81
    upb = extremality_test(upb_unit, D33)
    assert upb.is_extremal and upb.multiplicity_of_two == 1
    psi = np.kron(random_unit(3, rng), random_unit(3, rng))
    assert extremality_test(np.outer(psi, psi.conj()), D33).is_extremal


def test_extremality_rejects_non_ppt():
    bell = np.zeros(9)
    bell[[0, 4, 8]] = 1 / np.sqrt(3)
    with pytest.raises(ValueError):
        extremality_test(np.outer(bell, bell), D33)
