"""Dense Hermitian linear algebra on a bipartite space C^nA (x) C^nB.

Composite indices are row-major: the pair (i, j) maps to ``i * nB + j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BipartiteDims:
    nA: int
    nB: int

    def __post_init__(self):
        if self.nA < 2 or self.nB < 2:
            raise ValueError(f"both factors need dimension >= 2, got {self.nA}x{self.nB}")

    @property
    def N(self) -> int:
        return self.nA * self.nB

    @classmethod
    def parse(cls, text: str) -> "BipartiteDims":
        a, b = text.lower().split("x")
        return cls(int(a), int(b))

    def __str__(self) -> str:
        return f"{self.nA}x{self.nB}"


@dataclass(frozen=True)
class Tolerances:
    """Thresholds shared by every rank and positivity decision.

    ``zero_tol`` is relative: an eigenvalue or singular value counts as zero
    when it is below ``zero_tol * max|value|``.  ``pos_tol`` is the most
    negative eigenvalue still accepted as nonnegative.
    """

    zero_tol: float = 1e-9
    pos_tol: float = -1e-10

    def __post_init__(self):
        if not 0 < self.zero_tol < 1:
            raise ValueError("zero_tol must lie in (0, 1)")
        if self.pos_tol > 0:
            raise ValueError("pos_tol must be <= 0")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    rank: int
    zero_tol: float = DEFAULT_TOL.zero_tol

    def _nonzero(self) -> np.ndarray:
        w = self.eigenvalues
        scale = np.abs(w).max() if w.size else 0.0
        return np.abs(w) > self.zero_tol * scale

    def image(self) -> np.ndarray:
        """Orthonormal eigenvectors of the nonzero eigenvalues."""
        return self.eigenvectors[:, self._nonzero()]

    def kernel(self) -> np.ndarray:
        return self.eigenvectors[:, ~self._nonzero()]


def hermitize(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    return (X + X.conj().T) / 2


def tensor_product(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("tensor_product expects two vectors")
    return np.kron(u, v)


def partial_transpose(X: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Transpose the second tensor factor: (X^P)[ij, kl] = X[il, kj]."""
    X = np.asarray(X)
    if X.shape != (dims.N, dims.N):
        raise ValueError(f"expected a {dims.N}x{dims.N} matrix, got {X.shape}")
    nA, nB = dims.nA, dims.nB
    return X.reshape(nA, nB, nA, nB).transpose(0, 3, 2, 1).reshape(dims.N, dims.N)


def _count_nonzero(w: np.ndarray, tol: float) -> int:
    scale = np.abs(w).max() if w.size else 0.0
    if scale == 0.0:
        return 0
    return int(np.sum(np.abs(w) > tol * scale))


def spectral_decompose(X: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SpectralData:
    w, V = np.linalg.eigh(hermitize(X))
    return SpectralData(w, V, _count_nonzero(w, tol.zero_tol), tol.zero_tol)


def pseudoinverse(X: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a positive semidefinite matrix, restricted to its numerical image."""
    sd = spectral_decompose(X, tol)
    keep = sd._nonzero()
    V, w = sd.eigenvectors[:, keep], sd.eigenvalues[keep]
    return hermitize((V / w) @ V.conj().T)


def image_kernel_projectors(X: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    sd = spectral_decompose(X, tol)
    V = sd.image()
    P = V @ V.conj().T
    return P, np.eye(len(P)) - P


def fixed_rank_projector(X: np.ndarray, rank: int) -> np.ndarray:
    """Projector onto the span of the ``rank`` top eigenvectors, with no threshold involved."""
    _, V = np.linalg.eigh(hermitize(X))
    V = V[:, V.shape[1] - rank:]
    return V @ V.conj().T


def fixed_rank_pseudoinverse(X: np.ndarray, rank: int) -> np.ndarray:
    w, V = np.linalg.eigh(hermitize(X))
    k = V.shape[1] - rank
    return (V[:, k:] / w[k:]) @ V[:, k:].conj().T


def rank_pair(rho: np.ndarray, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int]:
    m = spectral_decompose(rho, tol).rank
    n = spectral_decompose(partial_transpose(rho, dims), tol).rank
    return m, n


def min_eigenvalues(rho: np.ndarray, dims: BipartiteDims) -> tuple[float, float]:
    """Smallest eigenvalue of rho and of its partial transpose."""
    return (float(np.linalg.eigvalsh(hermitize(rho))[0]),
            float(np.linalg.eigvalsh(hermitize(partial_transpose(rho, dims)))[0]))


def is_ppt(rho: np.ndarray, dims: BipartiteDims, tol: Tolerances = DEFAULT_TOL) -> bool:
    scale = max(np.abs(np.linalg.eigvalsh(hermitize(rho))).max(), 1e-300)
    return all(lam >= tol.pos_tol * scale for lam in min_eigenvalues(rho, dims))


def unit_trace(rho: np.ndarray) -> np.ndarray:
    t = np.trace(rho).real
    if t == 0:
        raise ValueError("matrix has zero trace")
    return hermitize(rho / t)


def _unimodular(V: np.ndarray) -> np.ndarray:
    V = np.asarray(V, dtype=complex)
    det = np.linalg.det(V)
    if abs(det) < 1e-14 * max(np.abs(V).max(), 1.0) ** len(V):
        raise np.linalg.LinAlgError("singular factor matrix")
    return V / det ** (1.0 / len(V))


def sl_product_transform(rho: np.ndarray, VA: np.ndarray, VB: np.ndarray) -> np.ndarray:
    """rho -> a V rho V^dagger with V = VA (x) VB rescaled to unit determinant, then unit trace."""
    V = np.kron(_unimodular(VA), _unimodular(VB))
    return unit_trace(V @ rho @ V.conj().T)


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    x = random_complex(n, rng)
    return x / np.linalg.norm(x)


def random_hermitian(N: int, rng: np.random.Generator) -> np.ndarray:
    return hermitize(random_complex((N, N), rng))


def random_state(N: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    X = random_complex((N, rank or N), rng)
    return unit_trace(X @ X.conj().T)
