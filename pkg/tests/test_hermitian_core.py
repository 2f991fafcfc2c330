import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D33
from ppt_forge.hermitian_core import (
    BipartiteDims,
    Tolerances,
    fixed_rank_pseudoinverse,
    image_kernel_projectors,
    is_ppt,
    min_eigenvalues,
    partial_transpose,
    pseudoinverse,
    random_hermitian,
    random_state,
    random_unit,
    rank_pair,
    sl_product_transform,
    spectral_decompose,
    tensor_product,
)
from ppt_forge.product_vectors import invariants_from_dets
from ppt_forge.state_construction import separable_rank4_fixture, upb_kernel
from ppt_forge.product_vectors import OrthParams

dims_strategy = st.tuples(st.integers(2, 4), st.integers(2, 4)).map(lambda t: BipartiteDims(*t))


def test_dims_parse_and_validation():
    assert BipartiteDims.parse("3x4") == BipartiteDims(3, 4)
    assert BipartiteDims(4, 4).N == 16
    with pytest.raises(ValueError):
        BipartiteDims(1, 3)


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(zero_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(pos_tol=1e-3)


def test_tensor_product_basis_cases():
    e = np.eye(3)
    assert np.array_equal(tensor_product(e[0], e[0]), np.eye(9)[0])
    assert np.array_equal(tensor_product(np.ones(3), e[0]), [1, 0, 0, 1, 0, 0, 1, 0, 0])


def test_tensor_product_satisfies_minor_relations(rng):
    psi = tensor_product(random_unit(3, rng), random_unit(4, rng)).reshape(3, 4)
    minors = np.einsum("ij,kl->ikjl", psi, psi) - np.einsum("il,kj->ikjl", psi, psi)
    assert np.abs(minors).max() < 1e-15


def test_partial_transpose_identity_and_product(rng):
    assert np.allclose(partial_transpose(np.eye(9), D33), np.eye(9))
    phi, chi = random_unit(3, rng), random_unit(3, rng)
    X = np.kron(np.outer(phi, phi.conj()), np.outer(chi, chi.conj()))
    expected = np.kron(np.outer(phi, phi.conj()), np.outer(chi, chi.conj()).conj())
    assert np.allclose(partial_transpose(X, D33), expected)


@settings(max_examples=40, deadline=None)
@given(dims_strategy, st.integers(0, 2 ** 32 - 1))
def test_partial_transpose_preserves_trace_and_norm(dims, seed):
    X = random_hermitian(dims.N, np.random.default_rng(seed))
    Xp = partial_transpose(X, dims)
    assert np.isclose(np.trace(Xp), np.trace(X))
    assert np.isclose(np.linalg.norm(Xp), np.linalg.norm(X))
    assert np.allclose(partial_transpose(Xp, dims), X)
    assert np.allclose(Xp, Xp.conj().T)


def test_partial_transpose_rejects_wrong_shape():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(8), D33)


def test_pseudoinverse_of_invertible_and_pure(rng):
    rho = random_state(9, rng)
    assert np.allclose(pseudoinverse(rho), np.linalg.inv(rho))
    P, Q = image_kernel_projectors(rho)
    assert np.allclose(P, np.eye(9)) and np.allclose(Q, 0)
    psi = random_unit(9, rng)
    pure = np.outer(psi, psi.conj())
    assert np.allclose(pseudoinverse(pure), pure)
    assert np.allclose(image_kernel_projectors(pure)[0], pure)


def test_upb_projector_traces(upb_unit):
    P, Q = image_kernel_projectors(upb_unit)
    assert np.isclose(np.trace(P).real, 4) and np.isclose(np.trace(Q).real, 5)


def test_fixed_rank_pseudoinverse_matches_threshold_version(upb_unit):
    assert np.allclose(fixed_rank_pseudoinverse(upb_unit, 4), pseudoinverse(upb_unit))


def test_rank_pairs_of_reference_states(upb_unit):
    assert rank_pair(np.eye(9) / 9, D33) == (9, 9)
    assert rank_pair(upb_unit, D33) == (4, 4)
    fx = separable_rank4_fixture()
    assert rank_pair(fx.rho, D33) == (4, 4)
    assert np.allclose(partial_transpose(fx.rho, D33), fx.rho)


def test_rank_pair_counts_negative_eigenvalues():
    X = np.diag([1.0, -0.5, 0, 0, 0, 0, 0, 0, 0.25])
    assert spectral_decompose(X).rank == 3


def test_is_ppt_and_min_eigenvalues(rng):
    assert is_ppt(np.eye(9) / 9, D33)
    bell = np.zeros(9)
    bell[[0, 4, 8]] = 1 / np.sqrt(3)
    rho = np.outer(bell, bell)
    assert not is_ppt(rho, D33)
    assert min_eigenvalues(rho, D33)[1] == pytest.approx(-1 / 3)


def test_sl_transform_identity(upb_unit):
    assert np.allclose(sl_product_transform(upb_unit, np.eye(3), np.eye(3)), upb_unit)


def test_sl_transform_preserves_ranks_kernel_and_invariants(upb_unit, rng):
    VA = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    VB = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho2 = sl_product_transform(upb_unit, VA, VB)
    assert rank_pair(rho2, D33) == (4, 4)
    # kernel maps as (V^dagger)^{-1} Ker rho
    W = upb_kernel(OrthParams(1, 1, 1, 1))
    Vinv_dag = np.linalg.inv(np.kron(VA, VB)).conj().T
    assert np.abs(rho2 @ (Vinv_dag @ W)).max() < 1e-12
    us = np.linalg.inv(VA).conj().T @ np.array([[1, 0, 1, 1, 0], [0, 1, 0, 1, 1], [0, 0, 1, -1, 1]])
    vs = np.linalg.inv(VB).conj().T @ np.array([[1, 1, 0, 0, 1], [0, 1, 1, 1, 0], [0, -1, 0, 1, 1]])
    inv = invariants_from_dets(us, vs).as_array()
    assert np.allclose(inv, 1, rtol=1e-9)
