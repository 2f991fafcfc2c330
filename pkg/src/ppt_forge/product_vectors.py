"""Product vectors u (x) v: detection, counting, standard forms, invariants and a numerical finder."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

import numpy as np
import scipy.linalg

from .hermitian_core import BipartiteDims, random_unit

GENERIC_SVD_TOL = 1e-8
REAL_TOL = 1e-9


class DegenerateConfigurationError(ValueError):
    """A determinant or denominator needed by a formula vanishes."""


@dataclass(frozen=True)
class ProductVector:
    u: np.ndarray
    v: np.ndarray
    norm_factor: float = 1.0

    @property
    def vector(self) -> np.ndarray:
        return self.norm_factor * np.kron(self.u, self.v)

    def normalized(self) -> "ProductVector":
        return ProductVector(self.u, self.v, 1.0 / (np.linalg.norm(self.u) * np.linalg.norm(self.v)))

    def partner(self) -> np.ndarray:
        """u (x) v*, the vector that plays the role of u (x) v for the partial transpose."""
        return self.norm_factor * np.kron(self.u, self.v.conj())


@dataclass(frozen=True)
class ProductVectorSet:
    dims: BipartiteDims
    vectors: tuple[ProductVector, ...] = field(default_factory=tuple)

    @classmethod
    def from_factors(cls, dims: BipartiteDims, us: np.ndarray, vs: np.ndarray,
                     normalize: bool = False) -> "ProductVectorSet":
        """Build from factor matrices holding u_i and v_i as columns."""
        us = np.asarray(us, dtype=complex)
        vs = np.asarray(vs, dtype=complex)
        if us.shape[0] != dims.nA or vs.shape[0] != dims.nB or us.shape[1] != vs.shape[1]:
            raise ValueError("factor matrices do not match the dimensions")
        vecs = [ProductVector(us[:, i], vs[:, i]) for i in range(us.shape[1])]
        if normalize:
            vecs = [p.normalized() for p in vecs]
        return cls(dims, tuple(vecs))

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return ProductVectorSet(self.dims, self.vectors[idx])
        return self.vectors[idx]

    @property
    def us(self) -> np.ndarray:
        return np.array([p.u for p in self.vectors]).T

    @property
    def vs(self) -> np.ndarray:
        return np.array([p.v for p in self.vectors]).T

    def matrix(self, normalized: bool = True) -> np.ndarray:
        """The vectors w_i as columns, each scaled to unit norm when ``normalized``."""
        cols = [p.vector for p in self.vectors]
        if normalized:
            cols = [c / np.linalg.norm(c) for c in cols]
        return np.array(cols).T

    def permuted(self, order) -> "ProductVectorSet":
        """Reorder so that entry i becomes the old entry order[i] (order is 1-based)."""
        return ProductVectorSet(self.dims, tuple(self.vectors[k - 1] for k in order))

    def is_generic(self) -> bool:
        k = len(self)
        return (_all_subsets_independent(self.us, min(self.dims.nA, k))
                and _all_subsets_independent(self.vs, min(self.dims.nB, k)))


def _all_subsets_independent(cols: np.ndarray, size: int) -> bool:
    cols = cols / np.linalg.norm(cols, axis=0)
    for sub in combinations(range(cols.shape[1]), size):
        if np.linalg.svd(cols[:, sub], compute_uv=False)[-1] <= GENERIC_SVD_TOL:
            return False
    return True


def random_product_set(dims: BipartiteDims, count: int, rng: np.random.Generator) -> ProductVectorSet:
    vecs = tuple(ProductVector(random_unit(dims.nA, rng), random_unit(dims.nB, rng)) for _ in range(count))
    return ProductVectorSet(dims, vecs)


def is_product(psi: np.ndarray, dims: BipartiteDims, tol: float = 1e-9) -> bool:
    """True when every 2x2 minor psi_ij psi_kl - psi_il psi_kj vanishes relative to |psi|^2."""
    psi = np.asarray(psi)
    nrm2 = np.vdot(psi, psi).real
    if nrm2 == 0:
        raise ValueError("zero vector")
    M = psi.reshape(dims.nA, dims.nB)
    minors = np.einsum("ij,kl->ikjl", M, M) - np.einsum("il,kj->ikjl", M, M)
    return bool(np.abs(minors).max() <= tol * nrm2)


@dataclass(frozen=True)
class ProductCounts:
    K: int              # codimension of the set of product vectors
    limiting_dim: int   # smallest subspace dimension that generically contains product vectors
    count: int          # number of product vectors in a generic subspace of the limiting dimension


def product_vector_counts(nA: int, nB: int) -> ProductCounts:
    if nA < 2 or nB < 2:
        raise ValueError("both factors need dimension >= 2")
    N = nA * nB
    return ProductCounts((nA - 1) * (nB - 1), N - nA - nB + 2, comb(nA + nB - 2, nA - 1))


# ---------------------------------------------------------------- standard forms

@dataclass(frozen=True)
class StandardFormParams:
    values: np.ndarray

    @property
    def p(self): return self.values[0]
    @property
    def q(self): return self.values[1]
    @property
    def r(self): return self.values[2]
    @property
    def s(self): return self.values[3]

    def is_real(self) -> bool:
        v = self.values
        return bool(np.all(np.abs(v.imag) <= REAL_TOL * (1 + np.abs(v.real))))


@dataclass(frozen=True)
class StandardForm:
    VA: np.ndarray
    VB: np.ndarray
    params: StandardFormParams
    vectors: ProductVectorSet


def _reduce_side(cols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map the first n columns to scaled basis vectors and column n+1 to all ones.

    Returns the transform and the tails of the remaining columns after scaling
    their first component to 1.
    """
    n = cols.shape[0]
    V0 = np.linalg.inv(cols[:, :n])
    x = V0 @ cols[:, n]
    V = np.diag(1 / x) @ V0
    tails = []
    for c in cols[:, n + 1:].T:
        y = V @ c
        if abs(y[0]) <= GENERIC_SVD_TOL * np.linalg.norm(y):
            raise DegenerateConfigurationError("leading component of a transformed vector vanishes")
        tails.append(y[1:] / y[0])
    return V, np.array(tails).reshape(-1)


def to_standard_form(pset: ProductVectorSet) -> StandardForm:
    """SL x SL reduction to the unnormalized standard form.

    For 5 vectors in 3x3 the parameters are (p, q, r, s) with u_5 -> (1, p, q) and
    v_5 -> (1, r, s).  In general the first nA (nB) factors go to basis vectors,
    the next to the all-ones vector, and the tails of the rest are the parameters,
    u-side first.
    """
    d = pset.dims
    if len(pset) < max(d.nA, d.nB) + 1 or d.nA != d.nB:
        raise ValueError("standard form needs equal factor dimensions and at least n+1 vectors")
    if not pset.is_generic():
        raise DegenerateConfigurationError("some factor subset is linearly dependent")
    VA, tu = _reduce_side(pset.us)
    VB, tv = _reduce_side(pset.vs)
    params = StandardFormParams(np.concatenate([tu, tv]))
    return StandardForm(VA, VB, params, standard_form_vectors(params, d))


def standard_form_vectors(params: StandardFormParams, dims: BipartiteDims) -> ProductVectorSet:
    n = dims.nA
    vals = np.asarray(params.values, dtype=complex)
    extra = len(vals) // (2 * (n - 1))
    tu, tv = vals[: extra * (n - 1)], vals[extra * (n - 1):]

    def side(tails):
        cols = [np.eye(n)[:, i] for i in range(n)] + [np.ones(n)]
        cols += [np.concatenate([[1], tails[k * (n - 1):(k + 1) * (n - 1)]]) for k in range(extra)]
        return np.array(cols, dtype=complex).T

    return ProductVectorSet.from_factors(dims, side(tu), side(tv))


def sixth_product_vector(params: StandardFormParams) -> ProductVector:
    """The extra product vector in the span of the five 3x3 standard-form vectors."""
    p, q, r, s = params.values[:4]
    den = (p * s - q * r, q - s, r - p)
    if min(abs(x) for x in den) < 1e-12:
        raise DegenerateConfigurationError("degenerate configuration: ps-qr, q-s or r-p vanishes")
    u6 = np.array([(s - r) / den[0], (1 - s) / den[1], (r - 1) / den[2]], dtype=complex)
    v6 = np.array([(p - q) / den[0], (q - 1) / den[1], (1 - p) / den[2]], dtype=complex)
    return ProductVector(u6, v6)


# ---------------------------------------------------------------- invariants

@dataclass(frozen=True)
class Invariants:
    s1: complex
    s2: complex
    s3: complex
    s4: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3, self.s4])

    def u_side_positive(self) -> bool:
        return _real_positive(self.s1) and _real_positive(self.s2)

    def v_side_positive(self) -> bool:
        return _real_positive(self.s3) and _real_positive(self.s4)


def _real_positive(x: complex) -> bool:
    return abs(x.imag) <= REAL_TOL * (1 + abs(x.real)) and x.real > 0


def _det(cols, i, j, k):
    return np.linalg.det(cols[:, [i - 1, j - 1, k - 1]])


def invariants_from_dets(us: np.ndarray, vs: np.ndarray) -> Invariants:
    """Determinant ratios of five 3-vectors per side, unchanged by SL x SL and rescaling."""
    u, v = np.asarray(us, dtype=complex), np.asarray(vs, dtype=complex)

    def ratio(num, den):
        if abs(den) < 1e-14 * (1 + abs(num)):
            raise DegenerateConfigurationError("vanishing determinant in an invariant denominator")
        return num / den

    s1 = -ratio(_det(u, 1, 2, 4) * _det(u, 1, 3, 5), _det(u, 1, 2, 5) * _det(u, 1, 3, 4))
    s2 = -ratio(_det(u, 1, 2, 3) * _det(u, 2, 4, 5), _det(u, 1, 2, 4) * _det(u, 2, 3, 5))
    s3 = ratio(_det(v, 1, 2, 3) * _det(v, 1, 4, 5), _det(v, 1, 2, 5) * _det(v, 1, 3, 4))
    s4 = ratio(_det(v, 1, 3, 5) * _det(v, 2, 3, 4), _det(v, 1, 2, 3) * _det(v, 3, 4, 5))
    return Invariants(complex(s1), complex(s2), complex(s3), complex(s4))


def invariants_from_params(params: StandardFormParams) -> Invariants:
    p, q, r, s = (complex(x) for x in params.values[:4])
    return Invariants(-p / q, q - 1, (r - s) / s, r / (1 - r))


@dataclass(frozen=True)
class OrthParams:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) <= 0:
            raise ValueError("orthogonal-form parameters must be positive")


class NotAKernelError(ValueError):
    """Invariants are not all real and positive, so no rank-(4,4) kernel fits."""


def orth_params_from_invariants(inv: Invariants) -> OrthParams:
    s = inv.as_array()
    if not all(_real_positive(complex(x)) for x in s):
        raise NotAKernelError(f"invariants must be real and positive, got {s}")
    s1, s2, s3, s4 = s.real
    return OrthParams(np.sqrt(s1), np.sqrt(s1 * s2), np.sqrt(s3), np.sqrt(s3 * s4))


def orth_factor_matrices(op: OrthParams) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, d = op.a, op.b, op.c, op.d
    us = np.array([[1, 0, a, b, 0], [0, 1, 0, 1, a], [0, 0, b, -a, 1]], dtype=float)
    vs = np.array([[1, d, 0, 0, c], [0, 1, 1, c, 0], [0, -c, 0, 1, d]], dtype=float)
    return us, vs


def orth_standard_vectors(op: OrthParams) -> ProductVectorSet:
    """Five mutually orthogonal real product vectors, each scaled to unit norm."""
    us, vs = orth_factor_matrices(op)
    return ProductVectorSet.from_factors(BipartiteDims(3, 3), us, vs, normalize=True)


# ---------------------------------------------------------------- pentagon symmetry

Perm = tuple[int, ...]

ROTATION: Perm = (5, 1, 2, 3, 4)
REFLECTION: Perm = (4, 3, 2, 1, 5)

CLASS_REPRESENTATIVES: tuple[Perm, ...] = tuple(
    tuple(int(ch) for ch in s) for s in
    ("12345", "13245", "21345", "23145", "31245", "32145",
     "12435", "14235", "21435", "24135", "13425", "14325"))


def compose(first: Perm, then: Perm) -> Perm:
    """Apply ``first`` and then ``then`` to an ordered list: entry i ends up as old[first[then[i]]]."""
    return tuple(first[t - 1] for t in then)


def pentagon_group() -> frozenset[Perm]:
    group = {tuple(range(1, 6))}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for h in (ROTATION, REFLECTION):
            x = compose(g, h)
            if x not in group:
                group.add(x)
                frontier.append(x)
    return frozenset(group)


@dataclass(frozen=True)
class PermutationClass:
    class_id: int
    representative: Perm


def _parse_perm(perm) -> Perm:
    if isinstance(perm, str):
        perm = tuple(int(ch) for ch in perm)
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != [1, 2, 3, 4, 5]:
        raise ValueError(f"not a permutation of 1..5: {perm}")
    return perm


def coset_class(perm) -> PermutationClass:
    """Class of ``perm`` among the 12 cosets {rep followed by g : g in G}."""
    perm = _parse_perm(perm)
    G = pentagon_group()
    for k, rep in enumerate(CLASS_REPRESENTATIVES, start=1):
        if any(compose(rep, g) == perm for g in G):
            return PermutationClass(k, rep)
    raise AssertionError("representatives do not cover S5")  # pragma: no cover


@dataclass(frozen=True)
class RegionClassification:
    u_class: int | None
    v_class: int | None

    @property
    def class_id(self) -> int | None:
        return self.u_class if self.u_class is not None and self.u_class == self.v_class else None

    @property
    def representative(self) -> Perm | None:
        return CLASS_REPRESENTATIVES[self.class_id - 1] if self.class_id else None


class NotClassifiableError(ValueError):
    """Standard-form parameters are complex, so no real region applies."""


def classify_region(pset: ProductVectorSet) -> RegionClassification:
    """Find, separately for the u- and v-factors, the permutation class with all-positive invariants.

    The set is matched to a rank-(4,4) kernel exactly when both sides pick the same class.
    """
    params = to_standard_form(pset).params
    if not params.is_real():
        raise NotClassifiableError(f"parameters are not real: {params.values}")
    return classify_params(params)


def classify_params(params: StandardFormParams) -> RegionClassification:
    sf = standard_form_vectors(StandardFormParams(np.asarray(params.values).real.astype(complex)),
                               BipartiteDims(3, 3))
    if not sf.is_generic():
        raise DegenerateConfigurationError("parameters lie on a region border")
    u_class = v_class = None
    for k, rep in enumerate(CLASS_REPRESENTATIVES, start=1):
        inv = invariants_from_dets(sf.permuted(rep).us, sf.permuted(rep).vs)
        if inv.u_side_positive():
            u_class = k
        if inv.v_side_positive():
            v_class = k
    return RegionClassification(u_class, v_class)


def all_permutations() -> list[Perm]:
    return list(permutations(range(1, 6)))


# ---------------------------------------------------------------- numerical finder

@dataclass(frozen=True)
class FinderConfig:
    restarts: int = 200
    als_iterations: int = 60
    newton_iterations: int = 40
    tol: float = 1e-10
    dedup: float = 1 - 1e-6


def _orthocomplement_tensor(basis: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    C = scipy.linalg.null_space(np.asarray(basis).conj().T)
    return C.conj().T.reshape(-1, dims.nA, dims.nB)


def _refine(Ct, u, v, cfg: FinderConfig, als: bool = True):
    nA, nB = len(u), len(v)
    for _ in range(cfg.als_iterations if als else 0):
        Mv = np.einsum("kab,a->kb", Ct, u)
        _, V = np.linalg.eigh(Mv.conj().T @ Mv)
        v = V[:, 0]
        Mu = np.einsum("kab,b->ka", Ct, v)
        w, V = np.linalg.eigh(Mu.conj().T @ Mu)
        u = V[:, 0]
        if w[0] < 1e-6:
            break
    # Gauss-Newton polish with gauge rows u^dag du = 0, v^dag dv = 0
    gauge = np.zeros((2, nA + nB), dtype=complex)
    for _ in range(cfg.newton_iterations):
        r = np.einsum("kab,a,b->k", Ct, u, v)
        J = np.hstack([np.einsum("kab,b->ka", Ct, v), np.einsum("kab,a->kb", Ct, u)])
        gauge[:] = 0
        gauge[0, :nA] = u.conj()
        gauge[1, nA:] = v.conj()
        step = np.linalg.lstsq(np.vstack([J, gauge]), -np.concatenate([r, [0, 0]]), rcond=None)[0]
        u = u + step[:nA]
        v = v + step[nA:]
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        if np.linalg.norm(step) < 1e-14:
            break
    return u, v, float(np.linalg.norm(np.einsum("kab,a,b->k", Ct, u, v)))


def find_products_in_subspace(basis: np.ndarray, dims: BipartiteDims, rng: np.random.Generator,
                              config: FinderConfig = FinderConfig()) -> ProductVectorSet:
    """Search for unit product vectors u (x) v inside span(basis) from random starts.

    Odd-numbered starts first alternate exact minimizations over v and u of the
    distance to the subspace; every start is then polished with Gauss-Newton.  The
    two kinds of start have very different basins, and a product vector whose basin
    is tiny under one kind is usually well reached by the other.  Only pairs whose distance is at
    most ``config.tol`` are kept, and pairs that agree up to phase are merged.
    """
    basis = np.asarray(basis, dtype=complex)
    Ct = _orthocomplement_tensor(basis, dims)
    found: list[ProductVector] = []
    if Ct.shape[0] == 0:
        raise ValueError("subspace is the whole space")
    for i in range(config.restarts):
        u, v, res = _refine(Ct, random_unit(dims.nA, rng), random_unit(dims.nB, rng), config, als=i % 2 == 1)
        if res > config.tol:
            continue
        x = np.kron(u, v)
        if all(abs(np.vdot(p.vector, x)) <= config.dedup for p in found):
            found.append(ProductVector(u, v))
    return ProductVectorSet(dims, tuple(found))


def alignment(x: np.ndarray, y: np.ndarray) -> float:
    """|<x, y>| for the normalized vectors, so 1 means equal up to phase."""
    return float(abs(np.vdot(x, y)) / (np.linalg.norm(x) * np.linalg.norm(y)))
