from itertools import combinations

import numpy as np
import pytest

from conftest import D33, D44
from ppt_forge.hermitian_core import is_ppt, partial_transpose, random_complex, rank_pair
from ppt_forge.product_vectors import (
    ProductVectorSet,
    StandardFormParams,
    random_product_set,
    standard_form_vectors,
)
from ppt_forge.state_construction import (
    FIXTURE_KERNEL_U,
    FIXTURE_KERNEL_V,
    constraint_census,
    kernel_constraint_system,
    matrix_from_product_basis,
    matrix_in_product_basis,
    reconstruct_from_kernel,
    reduced_states,
    retract_to_rank,
    search_low_rank_ppt,
    separable_rank4_fixture,
    separable_state,
    solution_space,
)
from ppt_forge.superop import extremality_test, herm_basis

REGION1 = StandardFormParams(np.array([-1, 2, 0.5, 0.25], dtype=complex))


def _standard(params=REGION1):
    return standard_form_vectors(params, D33)


def test_upb_state_spectrum_and_extremality(upb_unit):
    w = np.linalg.eigvalsh(upb_unit)
    assert np.allclose(w, [0] * 5 + [0.25] * 4, atol=1e-14)
    assert extremality_test(upb_unit, D33).is_extremal


def test_separable_fixture_structure():
    fx = separable_rank4_fixture()
    ks = fx.kernel_products
    scale = np.linalg.norm(ks.us, axis=0) / np.linalg.norm(FIXTURE_KERNEL_U, axis=0)
    assert np.allclose(ks.us, FIXTURE_KERNEL_U * scale)
    assert np.abs(fx.rho @ ks.matrix()).max() < 1e-15
    for F in (FIXTURE_KERNEL_U, FIXTURE_KERNEL_V):
        assert min(abs(np.linalg.det(F[:, list(c)])) for c in combinations(range(6), 3)) < 1e-15
    # informational only: the extremality verdict for this separable state is not asserted
    extremality_test(fx.rho, D33)


def test_separable_state_ranks(rng):
    one = random_product_set(D33, 1, rng)
    assert rank_pair(separable_state(one), D33) == (1, 1)
    six = random_product_set(D44, 6, rng)
    assert rank_pair(separable_state(six), D44) == (6, 6)
    fx = separable_rank4_fixture()
    assert np.allclose(separable_state(fx.image_products), fx.rho)
    with pytest.raises(ValueError):
        separable_state(six, weights=np.ones(6))


def test_single_vector_constraints_equal_kernel_conditions(rng):
    pset = random_product_set(D33, 1, rng)
    w, wt = pset[0].vector, pset[0].partner()
    hb = herm_basis(D33)
    cols = []
    for B in hb.matrices():
        Bw, Bpw = B @ w, partial_transpose(B, D33) @ wt
        cols.append(np.concatenate([Bw.real, Bw.imag, Bpw.real, Bpw.imag]))
    direct = 81 - np.linalg.matrix_rank(np.array(cols).T, tol=1e-10)
    S = solution_space(pset)
    assert S.shape[1] == direct
    for x in S.T:
        X = hb.matrix(x)
        assert np.abs(X @ w).max() < 1e-12 and np.abs(partial_transpose(X, D33) @ wt).max() < 1e-12


def test_ladder_three_and_four_vectors():
    pset = _standard()
    ranks = [e.num_independent for e in constraint_census(pset)]
    assert ranks[2] == 63 and ranks[3] == 75
    assert kernel_constraint_system(pset[:3]).rank() == 63


def test_three_vector_zero_pattern(rng):
    allowed = np.zeros((9, 9), dtype=bool)
    for i, j in [(1, 1), (1, 2), (1, 7), (2, 2), (2, 5), (3, 3), (3, 5), (3, 6), (5, 5), (6, 6), (6, 7), (7, 7)]:
        allowed[i, j] = allowed[j, i] = True
    pset = _standard()
    S = solution_space(pset[:3])
    assert S.shape[1] == 18
    X = herm_basis(D33).matrix(S @ rng.normal(size=18))
    elems = matrix_in_product_basis(X, pset.us[:, :3], pset.vs[:, :3])
    assert np.abs(elems[~allowed]).max() < 1e-12


def test_four_vector_relations(rng):
    S = solution_space(_standard()[:4])
    assert S.shape[1] == 6
    X = herm_basis(D33).matrix(S @ rng.normal(size=6))
    a = [X[1, 1], X[2, 2], X[3, 3], X[5, 5], X[6, 6], X[7, 7]]
    b = [X[1, 2], X[1, 7], X[2, 5], X[3, 5], X[3, 6], X[6, 7]]
    assert np.abs(np.imag(b)).max() < 1e-12
    a1, a2, a3, a4, a5, a6 = a
    b1, b2, b3, b4, b5, b6 = b
    for rel in (a1 + b1 + b2, b1 + a2 + b3, a3 + b4 + b5, b3 + b4 + a4, b5 + a5 + b6, b2 + b6 + a6,
                a1 + np.conj(b1) + b2):
        assert abs(rel) < 1e-12


def test_product_basis_round_trip(rng):
    us, vs = random_complex((3, 3), rng), random_complex((3, 3), rng)
    X = random_complex((9, 9), rng)
    X = X + X.conj().T
    assert np.allclose(matrix_from_product_basis(matrix_in_product_basis(X, us, vs), us, vs), X)
    assert np.allclose(matrix_in_product_basis(X, np.eye(3), np.eye(3)), X)


def test_five_complex_vectors_leave_only_zero(rng):
    res = reconstruct_from_kernel(_standard(StandardFormParams(random_complex(4, rng))))
    assert res.num_independent == 81 and res.state is None


def test_region_one_reconstruction():
    pset = _standard()
    res = reconstruct_from_kernel(pset)
    assert res.num_independent == 80 and res.is_ppt and res.rank_pair == (4, 4)
    assert np.abs(res.state @ pset.matrix()).max() < 1e-9
    partners = np.array([p.partner() for p in pset.vectors]).T
    assert np.abs(partial_transpose(res.state, D33) @ partners).max() < 1e-9


def test_non_corresponding_regions_give_indefinite_solution():
    res = reconstruct_from_kernel(_standard(StandardFormParams(np.array([-1, 2, 0.25, -3], dtype=complex))))
    assert res.num_independent == 80
    assert not res.is_ppt
    w = np.linalg.eigvalsh(res.state)
    wp = np.linalg.eigvalsh(partial_transpose(res.state, D33))
    assert min(w[0], wp[0]) < -1e-6


def test_4x4_ladder(rng):
    pset = random_product_set(D44, 7, rng)
    counts = [e.num_independent for e in constraint_census(pset)]
    assert counts[3:] == [172, 205, 234, 256]
    assert [e.free_params for e in constraint_census(pset[:6])][3:] == [84, 51, 22]


def test_low_rank_search_and_retraction(rng):
    res = search_low_rank_ppt(D33, 5, 5, rng)
    assert rank_pair(res.rho, D33) == (5, 5) and is_ppt(res.rho, D33)
    ra, rb = reduced_states(res.rho, D33)
    assert np.isclose(np.trace(ra).real, 1) and np.linalg.eigvalsh(rb)[0] > 0
    nudged = res.rho + 1e-6 * (np.eye(9) / 9 - res.rho)
    back = retract_to_rank(nudged, D33, 5, 5).rho
    assert rank_pair(back, D33) == (5, 5)
    assert np.linalg.norm(back - res.rho) < 1e-5
