import numpy as np
import pytest

from conftest import D33
from ppt_forge.hermitian_core import is_ppt, partial_transpose, rank_pair
from ppt_forge.perturbation import (
    InfeasiblePhaseError,
    PerturbationDirection,
    Rank45Seed,
    predicted_ranks,
    random_rank45_seed,
    rank45_direction,
    rank45_seed,
    step_finite,
    tangent_fixed_image,
    tangent_rank_preserving,
)
from ppt_forge.superop import herm_basis


def test_upb_tangent_spaces(upb_context):
    assert tangent_rank_preserving(upb_context.rho, D33).dimension == 36
    fixed = tangent_fixed_image(upb_context.rho, D33)
    assert fixed.dimension == 0 and fixed.raw_dimension == 1


def test_context_sixth_vector_is_in_kernel(upb_context):
    ctx = upb_context
    assert np.abs(ctx.rho @ ctx.sixth).max() < 1e-12
    assert np.allclose(ctx.kernel @ ctx.a_coeffs, ctx.sixth * np.vdot(ctx.kernel @ ctx.a_coeffs, ctx.sixth))
    assert ctx.a_imag_residual < 1e-10


def test_identity_phases_give_equal_coefficients(upb_context, rng):
    c = rng.normal(size=5) + 1j * rng.normal(size=5)
    seed = rank45_seed(upb_context, c, np.zeros(4))
    assert np.allclose(seed.d, seed.c) and seed.is_valid()


def test_random_seed_is_valid(upb_context, rng):
    seed = random_rank45_seed(upb_context, rng)
    assert seed.is_valid()
    assert abs(np.linalg.norm(seed.c) - 1) < 1e-12


def test_invalid_seed_reports_residuals(upb_context, rng):
    seed = random_rank45_seed(upb_context, rng)
    broken = Rank45Seed(seed.c, seed.d * np.r_[1.1, 1, 1, 1, 1], seed.a_coeffs, seed.theta)
    assert not broken.is_valid() and broken.moduli_residual() > 0.01
    with pytest.raises(ValueError):
        rank45_seed(upb_context, seed.c, np.zeros(3))


def test_infeasible_phase_when_target_out_of_range(upb_context):
    # with c concentrated on the largest |a_i| the fifth phase alone cannot reach the modulus
    a = upb_context.a_coeffs
    big = int(np.argmax(np.abs(a)))
    if big == 4:
        pytest.skip("largest coefficient sits on the free phase")
    c = np.full(5, 1e-3, dtype=complex)
    c[big] = 1
    phases = np.zeros(4)
    phases[big] = np.pi
    with pytest.raises(InfeasiblePhaseError):
        rank45_seed(upb_context, c * np.sign(a), phases)


def test_direction_counts_and_alpha_beta(upb_context, rng):
    seed = random_rank45_seed(upb_context, rng)
    free = rank45_direction(upb_context, seed, "free")
    fixed = rank45_direction(upb_context, seed, "fixedImage")
    assert free.beyond_trivial == 37 and free.rank_increasing_count == 1
    assert fixed.beyond_trivial == 5 and fixed.rank_increasing_count == 1
    assert fixed.alpha > 0 and np.isclose(fixed.alpha, fixed.beta, rtol=1e-8)
    assert fixed.w_residual < 1e-10 and fixed.z_residual < 1e-10
    with pytest.raises(ValueError):
        rank45_direction(upb_context, seed, "sideways")


def test_invalid_seed_gives_only_rank44_tangent(upb_context, rng):
    seed = random_rank45_seed(upb_context, rng)
    bad = Rank45Seed(seed.c, seed.c * np.exp(1j * np.r_[seed.theta[:4], seed.theta[4] + 0.7]),
                     seed.a_coeffs, seed.theta)
    res = rank45_direction(upb_context, bad, "fixedImage")
    assert res.beyond_trivial == 4 and res.direction is None


def test_step_raises_ranks_to_five(upb_context, state55_from_upb):
    assert rank_pair(state55_from_upb, D33) == (5, 5)
    assert is_ppt(state55_from_upb, D33)
    assert np.isclose(np.trace(state55_from_upb).real, 1)


def test_negative_step_leaves_ppt_cone(upb_context, rng):
    seed = random_rank45_seed(upb_context, rng)
    direction = rank45_direction(upb_context, seed).direction
    (m, n), ok = predicted_ranks(upb_context.rho, direction.A, D33)
    assert (m, n) == (5, 5) and ok
    back = step_finite(upb_context.rho, direction, -1e-3, D33)
    assert not back.first_order_ok and not back.is_ppt
    assert min(back.smallest_eigs) < -1e-5


def test_image_preserving_step_keeps_rank(state55, rng):
    basis = tangent_fixed_image(state55, D33).basis.basis
    A = herm_basis(D33).matrix(basis @ rng.normal(size=basis.shape[1]))
    direction = PerturbationDirection.normalized(A, state55)
    assert abs(np.trace(direction.A)) < 1e-12
    res = step_finite(state55, direction, 1e-4, D33)
    assert res.rank_pair == (5, 5) and res.is_ppt
    assert res.displacement < 1e-6


def test_normalized_direction_without_state(rng):
    X = rng.normal(size=(9, 9))
    d = PerturbationDirection.normalized(X)
    assert np.allclose(d.A, d.A.conj().T)
    assert abs(np.trace(d.A)) < 1e-12 and np.isclose(np.linalg.norm(d.A), 1)


def test_partial_transpose_of_step_matches_prediction(upb_context, state55_from_upb):
    wt = np.linalg.eigvalsh(partial_transpose(state55_from_upb, D33))
    assert np.sum(wt > 1e-9 * wt[-1]) == 5
