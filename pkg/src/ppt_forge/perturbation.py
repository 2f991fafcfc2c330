"""Perturbations rho -> rho + eps A that keep, or raise by one, the rank pair of a PPT state."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .hermitian_core import (
    DEFAULT_TOL,
    BipartiteDims,
    Tolerances,
    hermitize,
    is_ppt,
    partial_transpose,
    rank_pair,
    unit_trace,
)
from .product_vectors import FinderConfig, OrthParams, alignment, find_products_in_subspace
from .state_construction import retract_to_rank, upb_kernel, upb_state
from .superop import (
    NullSpaceResult,
    SuperOperator,
    build_projectors,
    build_tilde_projectors,
    herm_basis,
    null_space,
    sandwich_op,
    tilde_sandwich_op,
)

DIMS_3x3 = BipartiteDims(3, 3)


@dataclass(frozen=True)
class PerturbationDirection:
    A: np.ndarray = field(repr=False)
    traceless: bool = True

    @classmethod
    def normalized(cls, A: np.ndarray, rho: np.ndarray | None = None) -> "PerturbationDirection":
        """Remove the trace (along rho when given, else along the identity) and scale to unit norm."""
        A = hermitize(A)
        t = np.trace(A).real
        A = A - t * rho if rho is not None else A - t * np.eye(len(A)) / len(A)
        return cls(A / np.linalg.norm(A), True)


@dataclass(frozen=True)
class TangentSpace:
    """Solutions A of a tangent equation; ``basis`` has the trivial solution A = rho removed."""

    raw_dimension: int
    basis: NullSpaceResult

    @property
    def dimension(self) -> int:
        return self.basis.dimension


def _tangent(T: SuperOperator, rho: np.ndarray, dims: BipartiteDims, tol: Tolerances) -> TangentSpace:
    raw = null_space(T, tol)
    return TangentSpace(raw.dimension, raw.without(herm_basis(dims).coords(rho)))


def rank_preserving_operator(rho, dims, tol: Tolerances = DEFAULT_TOL) -> SuperOperator:
    """Q + Q~: its null space is the tangent space of the surface of fixed rank pair."""
    return build_projectors(rho, dims, tol).Q + build_tilde_projectors(rho, dims, tol).Q


def fixed_image_operator(rho, dims, tol: Tolerances = DEFAULT_TOL) -> SuperOperator:
    """1 - P + Q~: its null space keeps both the rank pair and the image of rho."""
    return (SuperOperator.identity(dims) - build_projectors(rho, dims, tol).P
            + build_tilde_projectors(rho, dims, tol).Q)


def tangent_rank_preserving(rho, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> TangentSpace:
    return _tangent(rank_preserving_operator(rho, dims, tol), rho, dims, tol)


def tangent_fixed_image(rho, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> TangentSpace:
    return _tangent(fixed_image_operator(rho, dims, tol), rho, dims, tol)


# ---------------------------------------------------------------- rank (4,4) -> (5,5)

class InfeasiblePhaseError(ValueError):
    """No fifth phase makes |sum a_i c_i| equal |sum a_i d_i|."""


@dataclass(frozen=True)
class UpbContext:
    """A real-UPB rank-(4,4) state with the data the 4->5 construction needs.

    ``kernel`` holds the five orthonormal product vectors w_i as columns and
    ``a_coeffs`` expands the sixth kernel product vector as sum_i a_i w_i.
    """

    params: OrthParams
    rho: np.ndarray = field(repr=False)
    kernel: np.ndarray = field(repr=False)
    sixth: np.ndarray = field(repr=False)
    a_coeffs: np.ndarray = field(repr=False)
    a_imag_residual: float = 0.0


def prepare_upb(params: OrthParams, rng: np.random.Generator,
                finder: FinderConfig = FinderConfig(restarts=100)) -> UpbContext:
    rho = upb_state(params)
    Wk = upb_kernel(params)
    found = find_products_in_subspace(Wk, DIMS_3x3, rng, finder)
    extra = [p.vector / np.linalg.norm(p.vector) for p in found.vectors
             if max(alignment(p.vector, Wk[:, i]) for i in range(5)) < 1 - 1e-6]
    if len(extra) != 1:
        raise RuntimeError(f"expected one product vector beyond the five, found {len(extra)}")
    w6 = extra[0]
    a = Wk.conj().T @ w6
    a = a * np.exp(-1j * np.angle(a[np.argmax(np.abs(a))]))
    imag = float(np.abs(a.imag).max())
    if imag > 1e-10:
        raise RuntimeError(f"sixth-vector coefficients are not real up to phase ({imag:.1e})")
    return UpbContext(params, rho, Wk, w6, a.real, imag)


@dataclass(frozen=True)
class Rank45Seed:
    c: np.ndarray
    d: np.ndarray
    a_coeffs: np.ndarray
    theta: np.ndarray

    def moduli_residual(self) -> float:
        return float(np.abs(np.abs(self.c) - np.abs(self.d)).max())

    def phase_residual(self) -> float:
        return float(abs(abs(self.a_coeffs @ self.c) - abs(self.a_coeffs @ self.d)))

    def is_valid(self, tol: float = 1e-10) -> bool:
        return (abs(np.linalg.norm(self.c) - 1) <= tol and self.moduli_residual() <= tol
                and self.phase_residual() <= tol)


def _phase_mismatch(a, c, theta4):
    def g(t5):
        return abs(a @ c) - abs(a @ (c * np.exp(1j * np.r_[theta4, t5])))
    return g


def rank45_seed(ctx: UpbContext, c: np.ndarray, phases) -> Rank45Seed:
    """Complete c and four phases to a seed by solving for the fifth phase.

    The fifth phase is bracketed by a 64-interval scan of [0, 2 pi] and refined by Brent's method.
    """
    c = np.asarray(c, dtype=complex)
    c = c / np.linalg.norm(c)
    theta4 = np.asarray(phases, dtype=float)
    if theta4.shape != (4,):
        raise ValueError("need exactly four phases")
    g = _phase_mismatch(ctx.a_coeffs, c, theta4)
    ts = np.linspace(0, 2 * np.pi, 65)
    gs = np.array([g(t) for t in ts])
    exact = np.flatnonzero(np.abs(gs) <= 1e-14)
    if exact.size:
        t5 = ts[exact[0]]
    else:
        br = np.flatnonzero(gs[:-1] * gs[1:] < 0)
        if br.size == 0:
            raise InfeasiblePhaseError("target modulus is outside the attainable range for the fifth phase")
        t5 = scipy.optimize.brentq(g, ts[br[0]], ts[br[0] + 1], xtol=1e-14)
    theta = np.r_[theta4, t5]
    return Rank45Seed(c, c * np.exp(1j * theta), ctx.a_coeffs, theta)


def random_rank45_seed(ctx: UpbContext, rng: np.random.Generator, max_tries: int = 200) -> Rank45Seed:
    for _ in range(max_tries):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        try:
            return rank45_seed(ctx, c, rng.uniform(0, 2 * np.pi, 4))
        except InfeasiblePhaseError:
            continue
    raise InfeasiblePhaseError(f"no feasible seed in {max_tries} draws")


@dataclass(frozen=True)
class Rank45Direction:
    mode: str
    raw_dimension: int           # solutions including A = rho
    rank_increasing_count: int   # solutions outside the rank-(4,4) tangent space
    direction: PerturbationDirection | None
    alpha: float = float("nan")
    beta: float = float("nan")
    w_residual: float = float("nan")   # |QAQ - alpha w w^dag|
    z_residual: float = float("nan")   # |Q~ A^P Q~ - beta z z^dag|
    flipped: bool = False

    @property
    def beyond_trivial(self) -> int:
        return self.raw_dimension - 1

    @property
    def rank_preserving_count(self) -> int:
        return self.beyond_trivial - self.rank_increasing_count


def _rank44_tangent(ctx: UpbContext, tol: Tolerances) -> np.ndarray:
    return null_space(rank_preserving_operator(ctx.rho, DIMS_3x3, tol), tol).basis


def rank45_direction(ctx: UpbContext, seed: Rank45Seed, mode: str = "fixedImage",
                     tol: Tolerances = DEFAULT_TOL, rank44: np.ndarray | None = None) -> Rank45Direction:
    """Solve for perturbations that add w to the image of rho and z to the image of rho^P.

    ``mode="free"`` only asks that the kernels shrink to the complements of w and z;
    ``mode="fixedImage"`` also pins the image to span(Img rho, w).
    """
    d = DIMS_3x3
    hb = herm_basis(d)
    w, z = ctx.kernel @ seed.c, ctx.kernel @ seed.d
    Wm, Zm = np.outer(w, w.conj()), np.outer(z, z.conj())
    proj, tproj = build_projectors(ctx.rho, d, tol), build_tilde_projectors(ctx.rho, d, tol)
    S_tilde = tproj.Q - tilde_sandwich_op(Zm, d)
    if mode == "free":
        M = proj.Q - sandwich_op(Wm, d) + S_tilde
    elif mode == "fixedImage":
        M = SuperOperator.identity(d) - sandwich_op(proj.image + Wm, d) + S_tilde
    else:
        raise ValueError(f"unknown mode {mode!r}")
    sol = null_space(M, tol).basis
    N44 = _rank44_tangent(ctx, tol) if rank44 is None else rank44
    outside = sol - N44 @ (N44.T @ sol)
    U, s, _ = np.linalg.svd(outside, full_matrices=False)
    count = int(np.sum(s > 1e-6))
    if count == 0:
        return Rank45Direction(mode, sol.shape[1], 0, None)
    A = hb.matrix(U[:, 0])
    A = A - np.trace(A).real * ctx.rho
    A = A / np.linalg.norm(A)
    Q, Qt = proj.kernel, tproj.kernel
    alpha = float(np.vdot(w, Q @ A @ Q @ w).real)
    flipped = alpha < 0
    if flipped:
        A, alpha = -A, -alpha
    Ap = partial_transpose(A, d)
    beta = float(np.vdot(z, Qt @ Ap @ Qt @ z).real)
    return Rank45Direction(mode, sol.shape[1], count, PerturbationDirection(A, True), alpha, beta,
                           float(np.linalg.norm(Q @ A @ Q - alpha * Wm)),
                           float(np.linalg.norm(Qt @ Ap @ Qt - beta * Zm)), flipped)


@dataclass(frozen=True)
class StepResult:
    rho_prime: np.ndarray = field(repr=False)
    rank_pair: tuple[int, int]
    is_ppt: bool
    smallest_eigs: tuple[float, float]     # smallest eigenvalue of rho' and rho'^P
    smallest_retained: tuple[float, float]  # smallest eigenvalue inside the predicted ranks
    first_order_ok: bool
    displacement: float                   # distance between retracted and raw step


def predicted_ranks(rho, A, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> tuple[tuple[int, int], bool]:
    """Rank pair of rho + eps A to first order for small eps > 0, and whether it stays PPT."""
    m, n = rank_pair(rho, dims, tol)
    Q = build_projectors(rho, dims, tol).kernel
    Qt = build_tilde_projectors(rho, dims, tol).kernel
    out = []
    ok = True
    for K, X in ((Q, A), (Qt, partial_transpose(A, dims))):
        w = np.linalg.eigvalsh(hermitize(K @ X @ K))
        # relative to A itself, so a kernel block that is zero up to roundoff counts as zero
        cut = tol.zero_tol * max(np.linalg.norm(X, 2), 1e-300)
        ok &= bool(w[0] >= -cut)
        out.append(int(np.sum(np.abs(w) > cut)))
    return (m + out[0], n + out[1]), ok


def step_finite(rho, direction: PerturbationDirection, epsilon: float, dims: BipartiteDims,
                tol: Tolerances = DEFAULT_TOL, retract: bool = True) -> StepResult:
    """Take rho + eps A at unit trace and, when first-order theory allows, retract it onto its surface.

    The raw step leaves O(eps^2) negative eigenvalues where first-order theory predicts
    zeros.  Retraction runs the low-rank descent from the raw step to remove them.
    """
    A = direction.A
    (m, n), ok = predicted_ranks(rho, np.sign(epsilon) * A, dims, tol)
    raw = unit_trace(rho + epsilon * A)
    out, disp = raw, 0.0
    if ok and retract and (m < dims.N or n < dims.N):
        out = retract_to_rank(raw, dims, m, n).rho
        disp = float(np.linalg.norm(out - raw))
    w = np.linalg.eigvalsh(out)
    wt = np.linalg.eigvalsh(partial_transpose(out, dims))
    return StepResult(out, rank_pair(out, dims, tol), ok and is_ppt(out, dims, tol),
                      (float(w[0]), float(wt[0])),
                      (float(w[dims.N - m]), float(wt[dims.N - n])), ok, disp)


@dataclass(frozen=True)
class Rank45Outcome:
    seed: Rank45Seed
    direction: Rank45Direction
    step: StepResult
    epsilon: float


def rank45_pipeline(ctx: UpbContext, rng: np.random.Generator, epsilon: float = 1e-3,
                    seed: Rank45Seed | None = None, halvings: int = 4) -> Rank45Outcome:
    """Random seed -> fixed-image direction -> finite step, halving eps if the step is not a PPT state."""
    seed = random_rank45_seed(ctx, rng) if seed is None else seed
    res = rank45_direction(ctx, seed, "fixedImage")
    if res.direction is None:
        raise ValueError("seed yields no rank-increasing direction")
    eps = epsilon
    for _ in range(halvings + 1):
        step = step_finite(ctx.rho, res.direction, eps, DIMS_3x3)
        if step.is_ppt and step.rank_pair == (5, 5):
            break
        eps /= 2
    return Rank45Outcome(seed, res, step, eps)


# ---------------------------------------------------------------- family dimension

@dataclass(frozen=True)
class FamilyRank:
    jacobian_singular_values: np.ndarray
    jacobian_rank: int
    linear_span: int
    rank44_dimension: int


def direction_family_rank(ctx: UpbContext, rng: np.random.Generator, span_samples: int = 60,
                          h: float = 1e-6, tol: Tolerances = DEFAULT_TOL) -> FamilyRank:
    """Dimension of the set of first-order (4,4)->(5,5) displacements eps * A.

    The displacements are taken modulo the rank-(4,4) tangent space.  The map
    (Re c, Im c, theta_1..4, eps) -> eps * A is differentiated by central differences
    while the fifth phase is tracked by Newton's method; the rank of that Jacobian
    is the dimension of the family.  The linear span of many sampled directions is
    reported too.
    """
    N44 = _rank44_tangent(ctx, tol)
    comp = np.linalg.svd(np.eye(N44.shape[0]) - N44 @ N44.T)[0][:, : N44.shape[0] - N44.shape[1]]
    base = random_rank45_seed(ctx, rng)
    hb = herm_basis(DIMS_3x3)

    def displacement(p):
        c = p[:5] + 1j * p[5:10]
        c = c / np.linalg.norm(c)
        g = _phase_mismatch(ctx.a_coeffs, c, p[10:14])
        t5 = scipy.optimize.newton(g, base.theta[4], tol=1e-15, maxiter=100)
        theta = np.r_[p[10:14], t5]
        seed = Rank45Seed(c, c * np.exp(1j * theta), ctx.a_coeffs, theta)
        A = rank45_direction(ctx, seed, "fixedImage", tol, N44).direction.A
        return p[14] * (comp.T @ hb.coords(A))

    p0 = np.r_[base.c.real, base.c.imag, base.theta[:4], 1.0]
    J = np.array([(displacement(p0 + h * e) - displacement(p0 - h * e)) / (2 * h)
                  for e in np.eye(len(p0))]).T
    s = np.linalg.svd(J, compute_uv=False)
    jrank = int(np.sum(s > 1e-4 * s[0]))
    ys = []
    for _ in range(span_samples):
        seed = random_rank45_seed(ctx, rng)
        A = rank45_direction(ctx, seed, "fixedImage", tol, N44).direction.A
        ys.append(comp.T @ hb.coords(A))
    span = int(np.linalg.matrix_rank(np.array(ys), tol=1e-8))
    return FamilyRank(s, jrank, span, N44.shape[1] - 1)
