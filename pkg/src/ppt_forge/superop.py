"""Linear maps on the real space of Hermitian N x N matrices, stored as dense real matrices.

Coordinates are taken in the orthonormal basis ``HermBasis`` (trace inner product):
the N diagonal units first, then for every i < j the symmetric and antisymmetric
off-diagonal pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .hermitian_core import (
    DEFAULT_TOL,
    BipartiteDims,
    Tolerances,
    hermitize,
    image_kernel_projectors,
    is_ppt,
    partial_transpose,
)


class HermBasis:
    """Orthonormal basis of Hermitian N x N matrices with coordinate maps.

    ``U`` holds vec(B_a) as its columns, so it is a unitary N^2 x N^2 matrix and
    Hermitian X has real coordinates ``Re(U^dagger vec X)``.
    """

    def __init__(self, dims: BipartiteDims):
        self.dims = dims
        N = dims.N
        U = np.zeros((N * N, N * N), dtype=complex)
        col = 0
        for i in range(N):
            U[i * N + i, col] = 1.0
            col += 1
        s = 1 / np.sqrt(2)
        for i in range(N):
            for j in range(i + 1, N):
                U[i * N + j, col] = s
                U[j * N + i, col] = s
                U[i * N + j, col + 1] = 1j * s
                U[j * N + i, col + 1] = -1j * s
                col += 2
        self.U = U
        self.Uh = U.conj().T
        perm = partial_transpose(np.arange(N * N).reshape(N, N), dims).ravel()
        # vec(X^P) = vec(X)[perm]
        self.Ut = U[perm]
        self.Uth = self.Ut.conj().T

    @property
    def size(self) -> int:
        return self.dims.N ** 2

    def matrices(self) -> np.ndarray:
        N = self.dims.N
        return self.U.T.reshape(-1, N, N)

    def coords(self, X: np.ndarray) -> np.ndarray:
        return (self.Uh @ np.asarray(X).ravel()).real

    def matrix(self, x: np.ndarray) -> np.ndarray:
        N = self.dims.N
        return hermitize((self.U @ x).reshape(N, N))

    def trace_coords(self) -> np.ndarray:
        """Coordinates of the identity, so that Tr X = trace_coords() @ coords(X)."""
        e = np.zeros(self.size)
        e[: self.dims.N] = 1.0
        return e

    def sandwich(self, L: np.ndarray, R: np.ndarray) -> np.ndarray:
        """Matrix of X -> L X R (Hermiticity preserving when R = L^dagger)."""
        return (self.Uh @ np.kron(L, R.T) @ self.U).real

    def tilde_sandwich(self, L: np.ndarray, R: np.ndarray) -> np.ndarray:
        """Matrix of X -> (L X^P R)^P."""
        return (self.Uth @ np.kron(L, R.T) @ self.Ut).real

    def partial_transpose_matrix(self) -> np.ndarray:
        return (self.Uh @ self.Ut).real


@lru_cache(maxsize=8)
def herm_basis(dims: BipartiteDims) -> HermBasis:
    return HermBasis(dims)


@dataclass(frozen=True)
class SuperOperator:
    dims: BipartiteDims
    matrix: np.ndarray = field(repr=False)
    kind: str = "composite"

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dims, self.matrix + other.matrix)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dims, self.matrix - other.matrix)

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dims, self.matrix @ other.matrix)

    def apply(self, X: np.ndarray) -> np.ndarray:
        hb = herm_basis(self.dims)
        return hb.matrix(self.matrix @ hb.coords(X))

    @classmethod
    def identity(cls, dims: BipartiteDims) -> "SuperOperator":
        return cls(dims, np.eye(dims.N ** 2), "identity")


def superop_matrix(fn: Callable[[np.ndarray], np.ndarray], dims: BipartiteDims,
                   kind: str = "composite") -> SuperOperator:
    """Materialize a linear map on Hermitian matrices: entry (a, b) is Tr(B_a fn(B_b))."""
    hb = herm_basis(dims)
    cols = [hb.coords(fn(B)) for B in hb.matrices()]
    return SuperOperator(dims, np.array(cols).T, kind)


def sandwich_op(L: np.ndarray, dims: BipartiteDims, kind: str = "composite") -> SuperOperator:
    """X -> L X L^dagger."""
    return SuperOperator(dims, herm_basis(dims).sandwich(L, L.conj().T), kind)


def tilde_sandwich_op(L: np.ndarray, dims: BipartiteDims, kind: str = "composite") -> SuperOperator:
    """X -> (L X^P L^dagger)^P."""
    return SuperOperator(dims, herm_basis(dims).tilde_sandwich(L, L.conj().T), kind)


@dataclass(frozen=True)
class ProjectorTriple:
    P: SuperOperator
    Q: SuperOperator
    R: SuperOperator
    image: np.ndarray = field(repr=False)   # the N x N projector behind P
    kernel: np.ndarray = field(repr=False)  # the N x N projector behind Q


def build_projectors(rho: np.ndarray, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> ProjectorTriple:
    P, Q = image_kernel_projectors(rho, tol)
    SP, SQ = sandwich_op(P, dims, "P"), sandwich_op(Q, dims, "Q")
    SR = SuperOperator(dims, np.eye(dims.N ** 2) - SP.matrix - SQ.matrix, "R")
    return ProjectorTriple(SP, SQ, SR, P, Q)


def build_tilde_projectors(rho: np.ndarray, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> ProjectorTriple:
    P, Q = image_kernel_projectors(partial_transpose(rho, dims), tol)
    SP, SQ = tilde_sandwich_op(P, dims, "tildeP"), tilde_sandwich_op(Q, dims, "tildeQ")
    SR = SuperOperator(dims, np.eye(dims.N ** 2) - SP.matrix - SQ.matrix, "tildeR")
    return ProjectorTriple(SP, SQ, SR, P, Q)


@dataclass(frozen=True)
class NullSpaceResult:
    dims: BipartiteDims
    basis: np.ndarray = field(repr=False)   # coordinates, one column per basis element
    residuals: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def matrices(self) -> list[np.ndarray]:
        hb = herm_basis(self.dims)
        return [hb.matrix(x) for x in self.basis.T]

    def without(self, direction: np.ndarray) -> "NullSpaceResult":
        """Remove one direction (given in coordinates) and re-orthonormalize."""
        d = direction / np.linalg.norm(direction)
        B = self.basis - np.outer(d, d @ self.basis)
        u, s, _ = np.linalg.svd(B, full_matrices=False)
        keep = max(self.dimension - 1, 0)
        return NullSpaceResult(self.dims, u[:, :keep], self.residuals[:keep])


def eigenspace(T: SuperOperator, target: float, tol: float) -> NullSpaceResult:
    """Eigenvectors of a symmetric superoperator with |lambda - target| <= tol.

    ``tol`` is absolute; callers that want a relative test scale it themselves.
    """
    w, V = np.linalg.eigh((T.matrix + T.matrix.T) / 2)
    sel = np.abs(w - target) <= tol
    return NullSpaceResult(T.dims, V[:, sel], np.abs(w[sel] - target))


def null_space(T: SuperOperator, tol: Tolerances = DEFAULT_TOL) -> NullSpaceResult:
    w = np.linalg.eigvalsh((T.matrix + T.matrix.T) / 2)
    scale = max(np.abs(w).max(), 1.0)
    return eigenspace(T, 0.0, tol.zero_tol * scale)


@dataclass(frozen=True)
class ExtremalityResult:
    is_extremal: bool
    multiplicity_of_two: int
    nearest_other: float  # distance from 2 of the closest eigenvalue outside the 2-space


EIGEN_TWO_GAP = 1e-6


def extremality_test(rho: np.ndarray, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> ExtremalityResult:
    """Count the solutions of (P + P~)A = 2A; a single solution (A = rho) means extremal."""
    if not is_ppt(rho, dims, tol):
        raise ValueError("state is not PPT")
    S = build_projectors(rho, dims, tol).P.matrix + build_tilde_projectors(rho, dims, tol).P.matrix
    w = np.linalg.eigvalsh((S + S.T) / 2)
    gap = np.abs(w - 2)
    inside = gap < EIGEN_TWO_GAP
    mult = int(inside.sum())
    rest = gap[~inside]
    return ExtremalityResult(mult == 1, mult, float(rest.min()) if rest.size else np.inf)
