"""Building PPT states: the UPB projection state, separable states, and reconstruction of a
state from product vectors in its kernel through a linear constraint system."""

from __future__ import annotations

import itertools
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
    random_complex,
    rank_pair,
    unit_trace,
)
from .product_vectors import OrthParams, ProductVector, ProductVectorSet, orth_standard_vectors
from .superop import herm_basis

DIMS_3x3 = BipartiteDims(3, 3)


def upb_state(op: OrthParams) -> np.ndarray:
    """(1 - sum_i w_i w_i^dagger) / 4 for the five orthonormal real product vectors of ``op``."""
    W = orth_standard_vectors(op).matrix()
    return hermitize((np.eye(9) - W @ W.conj().T) / 4)


def upb_kernel(op: OrthParams) -> np.ndarray:
    """Orthonormal kernel basis of ``upb_state(op)`` made of the five product vectors."""
    return orth_standard_vectors(op).matrix()


def separable_state(products: ProductVectorSet, weights=None) -> np.ndarray:
    if len(products) == 0:
        raise ValueError("empty product-vector set")
    k = len(products)
    weights = np.full(k, 1 / k) if weights is None else np.asarray(weights, dtype=float)
    if weights.shape != (k,) or np.any(weights <= 0) or abs(weights.sum() - 1) > 1e-12:
        raise ValueError("weights must be positive and sum to 1")
    W = products.matrix()
    return hermitize((W * weights) @ W.conj().T)


@dataclass(frozen=True)
class SeparableFixture:
    rho: np.ndarray
    image_products: ProductVectorSet
    kernel_products: ProductVectorSet


FIXTURE_IMAGE_U = np.array([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]], dtype=float)
FIXTURE_KERNEL_U = np.array([[0, 0, 0, 1, 1, 1],
                             [0, 1, -1, 0, 0, -1],
                             [1, 0, 1, 0, -1, 0]], dtype=float)
FIXTURE_KERNEL_V = np.array([[1, 1, 1, 0, 0, 0],
                             [-1, 0, 0, 1, 1, 0],
                             [0, -1, 0, -1, 0, 1]], dtype=float)


def separable_rank4_fixture(weights=None) -> SeparableFixture:
    """Separable rank-(4,4) state on the product vectors e_1e_1, e_2e_2, e_3e_3, (1,1,1)(1,1,1).

    Its kernel holds six product vectors with linearly dependent factor triples.
    """
    image = ProductVectorSet.from_factors(DIMS_3x3, FIXTURE_IMAGE_U, FIXTURE_IMAGE_U, normalize=True)
    kernel = ProductVectorSet.from_factors(DIMS_3x3, FIXTURE_KERNEL_U, FIXTURE_KERNEL_V, normalize=True)
    return SeparableFixture(separable_state(image, weights), image, kernel)


# ---------------------------------------------------------------- constraint system

@dataclass(frozen=True)
class ConstraintSystem:
    """Rows are Hermitian-basis coordinates of matrices M with Tr(rho M) = 0.

    ``sources`` tags each row with (k, x index, y index, family, part):
    family 0 is (x (x) y)^dag rho w_k, family 1 is (x (x) v_k)^dag rho (u_k (x) y),
    part is "B" (real part) or "C" (imaginary part).
    """

    dims: BipartiteDims
    rows: np.ndarray = field(repr=False)
    sources: tuple = field(repr=False)

    def rank(self, tol: Tolerances = DEFAULT_TOL) -> int:
        if len(self.rows) == 0:
            return 0
        s = np.linalg.svd(self.rows, compute_uv=False)
        return int(np.sum(s > tol.zero_tol * s[0]))


def _test_vectors(factors: np.ndarray, n: int) -> list[np.ndarray]:
    # The set's own factors plus the standard basis; the span is then all of C^n,
    # which makes the rows equivalent to rho w_k = 0 and rho^P w~_k = 0.
    own = [f / np.linalg.norm(f) for f in factors.T]
    return own + list(np.eye(n))


def kernel_constraint_system(products: ProductVectorSet) -> ConstraintSystem:
    if len(products) == 0:
        raise ValueError("empty product-vector set")
    d = products.dims
    N2 = d.N ** 2
    hb = herm_basis(d)
    xs = np.array(_test_vectors(products.us, d.nA))
    ys = np.array(_test_vectors(products.vs, d.nB))
    nx, ny = len(xs), len(ys)
    xy = np.einsum("ia,jb->ijab", xs, ys).reshape(nx, ny, d.N)
    blocks = []
    for pv in products.vectors:
        uk = pv.u / np.linalg.norm(pv.u)
        vk = pv.v / np.linalg.norm(pv.v)
        wk = np.kron(uk, vk)
        left1 = np.einsum("ia,b->iab", xs, vk).reshape(nx, 1, d.N).repeat(ny, axis=1)
        right1 = np.einsum("a,jb->jab", uk, ys).reshape(1, ny, d.N).repeat(nx, axis=0)
        # vec(right left^dag) for both families, shape (nx, ny, 2, N^2); Tr(rho A) = left^dag rho right
        vec_a = np.stack([np.einsum("b,ija->ijba", wk, xy.conj()).reshape(nx, ny, N2),
                          np.einsum("ijb,ija->ijba", right1, left1.conj()).reshape(nx, ny, N2)], axis=2)
        z = vec_a @ hb.Uh.T
        # B = A + A^dag has coordinates 2 Re z and C = i(A - A^dag) has -2 Im z
        blocks.append(np.stack([2 * z.real, -2 * z.imag], axis=3))
    all_rows = np.array(blocks).reshape(-1, N2)
    tags = list(itertools.product(range(len(products)), range(nx), range(ny), (0, 1), ("B", "C")))
    keep = np.linalg.norm(all_rows, axis=1) > 1e-14
    return ConstraintSystem(d, all_rows[keep], tuple(t for t, k in zip(tags, keep) if k))


def _right_singular(rows: np.ndarray, N2: int) -> tuple[np.ndarray, np.ndarray]:
    """Singular values padded with zeros to N2, and all N2 right singular vectors."""
    _, s, Vt = np.linalg.svd(rows, full_matrices=len(rows) < N2)
    return np.concatenate([s, np.zeros(max(N2 - len(s), 0))])[:N2], Vt


@dataclass(frozen=True)
class ReconstructionResult:
    num_independent: int
    solution_dim: int
    state: np.ndarray | None = field(default=None, repr=False)
    is_ppt: bool | None = None
    rank_pair: tuple[int, int] | None = None
    singular_gap: float = float("nan")  # ratio of the last kept to the first dropped singular value


def _fix_sign_and_trace(X: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(X)
    if abs(w[0]) > abs(w[-1]):
        X = -X
    t = np.trace(X).real
    return X / t if t > 1e-12 * np.linalg.norm(X) else X / np.linalg.norm(X)


def reconstruct_from_kernel(products: ProductVectorSet, tol: Tolerances = DEFAULT_TOL) -> ReconstructionResult:
    """Solve the kernel constraints for rho; a state is returned only when the solution is unique."""
    system = kernel_constraint_system(products)
    d = products.dims
    N2 = d.N ** 2
    s_full, Vt = _right_singular(system.rows, N2)
    r = int(np.sum(s_full > tol.zero_tol * s_full[0]))
    gap = s_full[r] / s_full[r - 1] if 0 < r < N2 else 0.0
    dim = N2 - r
    if dim != 1:
        return ReconstructionResult(r, dim, singular_gap=gap)
    X = _fix_sign_and_trace(herm_basis(d).matrix(Vt[-1]))
    return ReconstructionResult(r, dim, X, is_ppt(X, d, tol), rank_pair(X, d, tol), gap)


def solution_space(products: ProductVectorSet, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal coordinates (columns) of every Hermitian matrix meeting the kernel constraints."""
    rows = kernel_constraint_system(products).rows
    N2 = products.dims.N ** 2
    s, Vt = _right_singular(rows, N2)
    r = int(np.sum(s > tol.zero_tol * s[0]))
    return Vt[r:N2].T


@dataclass(frozen=True)
class CensusEntry:
    num_vectors: int
    num_independent: int
    free_params: int


def constraint_census(products: ProductVectorSet, tol: Tolerances = DEFAULT_TOL) -> list[CensusEntry]:
    """Independent-constraint counts as the vectors are added one at a time in order."""
    N2 = products.dims.N ** 2
    out = []
    for k in range(1, len(products) + 1):
        r = kernel_constraint_system(products[:k]).rank(tol)
        out.append(CensusEntry(k, r, N2 - r))
    return out


def product_basis(us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Columns e_ij = u_i (x) v_j in the order 11, 12, ..., 33."""
    us, vs = np.asarray(us), np.asarray(vs)
    for f in (us, vs):
        if np.linalg.svd(f / np.linalg.norm(f, axis=0), compute_uv=False)[-1] < 1e-8:
            raise ValueError("dependent factor triple")
    return np.array([np.kron(u, v) for u in us.T for v in vs.T]).T


def matrix_in_product_basis(rho: np.ndarray, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Entries e_ij^dag rho e_kl for the (generally non-orthonormal) product basis."""
    E = product_basis(us, vs)
    return E.conj().T @ rho @ E


def matrix_from_product_basis(elements: np.ndarray, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Inverse of ``matrix_in_product_basis``: sum over e^i A_ij (e^j)^dag with dual vectors e^i."""
    E = product_basis(us, vs)
    Einv = np.linalg.inv(E)
    return Einv.conj().T @ elements @ Einv


# ---------------------------------------------------------------- low-rank search

@dataclass(frozen=True)
class SearchConfig:
    max_iter: int = 5000
    ftol: float = 1e-32
    gtol: float = 1e-20
    maxcor: int = 30
    accept: float = 1e-24       # objective value accepted as converged
    min_marginal: float = 1e-6  # smallest allowed eigenvalue of either reduced state (relative to 1/n)
    attempts: int = 20


@dataclass(frozen=True)
class SearchResult:
    rho: np.ndarray = field(repr=False)
    objective: float
    iterations: int
    attempts: int


def _pt_tail_objective(dims: BipartiteDims, m: int, n: int):
    N = dims.N
    k = N - n

    def unpack(x):
        return (x[: N * m] + 1j * x[N * m:]).reshape(N, m)

    def fg(x):
        X = unpack(x)
        t = np.vdot(X, X).real
        rho = X @ X.conj().T / t
        w, V = np.linalg.eigh(partial_transpose(rho, dims))
        f = float(np.sum(w[:k] ** 2))
        G = (V[:, :k] * (2 * w[:k])) @ V[:, :k].conj().T
        H = partial_transpose(G, dims)
        gX = 2 * (H @ X) / t - 2 * np.trace(H @ rho).real / t * X
        return f, np.concatenate([gX.real.ravel(), gX.imag.ravel()])

    return unpack, fg


def _minimize_tail(X0: np.ndarray, dims: BipartiteDims, m: int, n: int, cfg: SearchConfig):
    unpack, fg = _pt_tail_objective(dims, m, n)
    x0 = np.concatenate([X0.real.ravel(), X0.imag.ravel()])
    res = scipy.optimize.minimize(fg, x0, jac=True, method="L-BFGS-B",
                                  options=dict(maxiter=cfg.max_iter, ftol=cfg.ftol,
                                               gtol=cfg.gtol, maxcor=cfg.maxcor))
    X = unpack(res.x)
    return unit_trace(X @ X.conj().T), float(res.fun), int(res.nit)


def reduced_states(rho: np.ndarray, dims: BipartiteDims) -> tuple[np.ndarray, np.ndarray]:
    R = rho.reshape(dims.nA, dims.nB, dims.nA, dims.nB)
    return np.einsum("ijkj->ik", R), np.einsum("ijil->jl", R)


def _marginals_full_rank(rho, dims, floor) -> bool:
    ra, rb = reduced_states(rho, dims)
    return (np.linalg.eigvalsh(ra)[0] > floor / dims.nA and np.linalg.eigvalsh(rb)[0] > floor / dims.nB)


def search_low_rank_ppt(dims: BipartiteDims, m: int, n: int, rng: np.random.Generator,
                        config: SearchConfig = SearchConfig()) -> SearchResult:
    """Random rank-m state pushed by quasi-Newton descent until its partial transpose has rank n.

    Writing rho = X X^dagger / Tr(X X^dagger) with X of size N x m keeps rho positive of
    rank <= m; the objective is the sum of squares of the N - n smallest eigenvalues of
    rho^P.  Results whose reduced states are rank deficient are discarded, since those
    are degenerate (effectively lower-dimensional) solutions.
    """
    for attempt in range(1, config.attempts + 1):
        X0 = random_complex((dims.N, m), rng)
        rho, f, nit = _minimize_tail(X0, dims, m, n, config)
        if f <= config.accept and rank_pair(rho, dims) == (m, n) \
                and _marginals_full_rank(rho, dims, config.min_marginal):
            return SearchResult(rho, f, nit, attempt)
    raise RuntimeError(f"no rank-({m},{n}) PPT state found in {config.attempts} attempts")


def retract_to_rank(rho: np.ndarray, dims: BipartiteDims, m: int, n: int,
                    config: SearchConfig = SearchConfig()) -> SearchResult:
    """Nearest-by-descent state of rank m whose partial transpose has rank n, started from rho."""
    w, V = np.linalg.eigh(hermitize(rho))
    X0 = V[:, -m:] * np.sqrt(np.clip(w[-m:], 0, None))
    out, f, nit = _minimize_tail(X0, dims, m, n, config)
    return SearchResult(out, f, nit, 1)
