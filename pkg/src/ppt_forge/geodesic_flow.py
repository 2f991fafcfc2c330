"""Curves on fixed-rank PPT surfaces: geodesics, boundary seeking, PCA of trajectories and plane sections.

A trajectory carries rho, the unit tangent A, and the fixed-rank projectors and
pseudoinverses of rho and rho^P, all advanced together by classic RK4.  Every few
steps the projectors are recomputed from an eigendecomposition and A is projected
back onto the tangent space.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import skimage.measure

from .hermitian_core import (
    DEFAULT_TOL,
    BipartiteDims,
    Tolerances,
    fixed_rank_projector,
    fixed_rank_pseudoinverse,
    hermitize,
    partial_transpose,
    rank_pair,
)
from .state_construction import retract_to_rank
from .superop import herm_basis

MODES = ("geodesicFree", "geodesicFixedImage", "boundarySeek")


@dataclass(frozen=True)
class FlowConfig:
    mode: str = "geodesicFixedImage"
    step_size: float = 1e-4
    steps: int = 10_000
    record_every: int = 100
    drift_tol: float = 1e-8
    reproject_every: int = 10
    zero_tol: float = DEFAULT_TOL.zero_tol

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")


@dataclass(frozen=True)
class FlowState:
    """Point on a trajectory.  ``P``/``rho_plus`` belong to rho, ``Pt``/``sigma_plus`` to rho^P."""

    dims: BipartiteDims
    t: float
    rho: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    P: np.ndarray = field(repr=False)
    rho_plus: np.ndarray = field(repr=False)
    Pt: np.ndarray = field(repr=False)
    sigma_plus: np.ndarray = field(repr=False)
    ranks: tuple[int, int]
    arc_length: float = 0.0

    @property
    def Q(self) -> np.ndarray:
        return np.eye(self.dims.N) - self.P

    @property
    def Qt(self) -> np.ndarray:
        return np.eye(self.dims.N) - self.Pt

    def residuals(self) -> dict[str, float]:
        rp = partial_transpose(self.rho, self.dims)
        return {
            "P_vs_rhoplus_rho": float(np.linalg.norm(self.P - self.rho_plus @ self.rho)),
            "image": float(np.linalg.norm(self.rho - self.P @ self.rho @ self.P)),
            "tilde_kernel": float(np.linalg.norm(self.Qt @ rp)),
        }


def flow_state(rho: np.ndarray, A: np.ndarray, dims: BipartiteDims,
               tol: Tolerances = DEFAULT_TOL, ranks: tuple[int, int] | None = None) -> FlowState:
    m, n = rank_pair(rho, dims, tol) if ranks is None else ranks
    rp = partial_transpose(rho, dims)
    return FlowState(dims, 0.0, hermitize(rho), hermitize(A),
                     fixed_rank_projector(rho, m), fixed_rank_pseudoinverse(rho, m),
                     fixed_rank_projector(rp, n), fixed_rank_pseudoinverse(rp, n), (m, n))


# ---------------------------------------------------------------- derivative formulas

def projector_derivative(rho_plus: np.ndarray, Q: np.ndarray, A: np.ndarray) -> np.ndarray:
    """d/dt of the image projector when rho moves with velocity A."""
    return Q @ A @ rho_plus + rho_plus @ A @ Q


def pseudoinverse_derivative(rho_plus: np.ndarray, Q: np.ndarray, A: np.ndarray) -> np.ndarray:
    r2 = rho_plus @ rho_plus
    return Q @ A @ r2 + r2 @ A @ Q - rho_plus @ A @ rho_plus


def _free(mode: str) -> bool:
    return mode in ("geodesicFree", "boundarySeek", "free")


def _constraint_matrices(dims, P, Pt, mode):
    hb = herm_basis(dims)
    I = np.eye(dims.N)
    Q, Qt = I - P, I - Pt
    T = hb.tilde_sandwich(Qt, Qt)
    if _free(mode):
        T = T + hb.sandwich(Q, Q)
    else:
        T = T + np.eye(hb.size) - hb.sandwich(P, P)
    return T


def tangent_constraint_operator(state: FlowState, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of T and dT/dt in Hermitian-basis coordinates.

    T is Q + Q~ (free) or 1 - P + Q~ (fixed image); its time derivative follows from
    dQ/dt = -dP/dt and the analogue on the partial-transpose side.  In fixed-image
    mode P is constant and only the tilde part moves.
    """
    d = state.dims
    hb = herm_basis(d)
    T = _constraint_matrices(d, state.P, state.Pt, mode)
    Ap = partial_transpose(state.A, d)
    Qt = state.Qt
    Qtd = -projector_derivative(state.sigma_plus, Qt, Ap)
    Td = hb.tilde_sandwich(Qtd, Qt) + hb.tilde_sandwich(Qt, Qtd)
    if _free(mode):
        Q = state.Q
        Qd = -projector_derivative(state.rho_plus, Q, state.A)
        Td = Td + hb.sandwich(Qd, Q) + hb.sandwich(Q, Qd)
    return T, Td


def _with_trace(T: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    # Adding e e^T / N (e = identity coordinates) keeps T positive semidefinite and
    # turns its null space into the traceless part of the tangent space.
    e = herm_basis(dims).trace_coords()
    return T + np.outer(e, e) / dims.N


def _pinv_sym(T: np.ndarray, zero_tol: float, nullity: int | None = None) -> np.ndarray:
    # With ``nullity`` given, that many smallest eigenvalues are dropped whatever their
    # size.  RK4 stages move the projectors slightly off idempotency, which would otherwise
    # let tiny spurious eigenvalues through a relative threshold.
    w, V = np.linalg.eigh((T + T.T) / 2)
    if nullity is None:
        keep = np.abs(w) > zero_tol * np.abs(w).max()
    else:
        keep = np.arange(len(w)) >= nullity
    return (V[:, keep] / w[keep]) @ V[:, keep].T


@dataclass(frozen=True)
class FlowDerivative:
    rho_dot: np.ndarray
    A_dot: np.ndarray
    P_dot: np.ndarray
    rho_plus_dot: np.ndarray
    Pt_dot: np.ndarray
    sigma_plus_dot: np.ndarray
    alpha: float


def geodesic_rhs(state: FlowState, mode: str, zero_tol: float = DEFAULT_TOL.zero_tol,
                 nullity: int | None = None) -> FlowDerivative:
    """Time derivatives along a geodesic: rho' = A and A' = alpha A - T^+ T' A.

    alpha = (T^+ T' A) . A keeps the speed constant, Tr(A' A) = 0.
    """
    d = state.dims
    hb = herm_basis(d)
    T, Td = tangent_constraint_operator(state, mode)
    a = hb.coords(state.A)
    b = _pinv_sym(_with_trace(T, d), zero_tol, nullity) @ (Td @ a)
    alpha = float(b @ a) / float(a @ a)
    A_dot = hb.matrix(alpha * a - b)
    Ap = partial_transpose(state.A, d)
    if _free(mode):
        P_dot = projector_derivative(state.rho_plus, state.Q, state.A)
    else:
        P_dot = np.zeros_like(state.P)
    return FlowDerivative(
        state.A, A_dot, P_dot,
        pseudoinverse_derivative(state.rho_plus, state.Q, state.A),
        projector_derivative(state.sigma_plus, state.Qt, Ap),
        pseudoinverse_derivative(state.sigma_plus, state.Qt, Ap),
        alpha)


def tangent_projection(state: FlowState, mode: str, zero_tol: float = DEFAULT_TOL.zero_tol,
                       nullity: int | None = None) -> np.ndarray:
    """Orthogonal projector (coordinates) onto the traceless null space of T at ``state``."""
    T = _with_trace(_constraint_matrices(state.dims, state.P, state.Pt, mode), state.dims)
    return np.eye(len(T)) - _pinv_sym(T, zero_tol, nullity) @ T


def tangent_nullity(state: FlowState, mode: str, zero_tol: float = DEFAULT_TOL.zero_tol) -> int:
    """Dimension of the traceless tangent space for ``mode`` at ``state``."""
    T = _with_trace(_constraint_matrices(state.dims, state.P, state.Pt, mode), state.dims)
    w = np.linalg.eigvalsh((T + T.T) / 2)
    return int(np.sum(np.abs(w) <= zero_tol * np.abs(w).max()))


def random_tangent_state(rho: np.ndarray, dims: BipartiteDims, mode: str, rng: np.random.Generator,
                         tol: Tolerances = DEFAULT_TOL) -> FlowState:
    """Flow state at rho with a uniformly random unit tangent direction for ``mode``."""
    hb = herm_basis(dims)
    state = flow_state(rho, np.zeros_like(rho), dims, tol)
    a = tangent_projection(state, mode, tol.zero_tol) @ rng.normal(size=dims.N ** 2)
    nrm = np.linalg.norm(a)
    if nrm < 1e-12:
        raise ValueError(f"no tangent directions in mode {mode!r} at this state")
    return replace(state, A=hb.matrix(a / nrm))


# ---------------------------------------------------------------- integration

@dataclass(frozen=True)
class Sample:
    t: float
    arc_length: float
    eig_rho: np.ndarray
    eig_pt: np.ndarray
    coords: np.ndarray = field(repr=False)
    norm_error: float = 0.0       # | |A| - 1 |
    tr_adot_a: float = 0.0        # Tr(A' A)
    image_drift: float = 0.0      # |rho - P0 rho P0| against the starting image
    trace_error: float = 0.0
    residuals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FlowEvent:
    kind: str     # boundary, drift, breakdown or stall
    t: float
    step: int
    message: str


@dataclass
class Trajectory:
    dims: BipartiteDims
    mode: str
    samples: list[Sample] = field(default_factory=list)
    events: list[FlowEvent] = field(default_factory=list)
    final: FlowState | None = None
    rank_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return not self.events

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def coords(self) -> np.ndarray:
        return np.array([s.coords for s in self.samples])

    def eigenvalue_table(self) -> np.ndarray:
        """Rows (t, arcLength, eigenvalues of rho ascending, eigenvalues of rho^P ascending)."""
        return np.array([np.concatenate([[s.t, s.arc_length], s.eig_rho, s.eig_pt]) for s in self.samples])


def _advance(state: FlowState, k: FlowDerivative, h: float) -> FlowState:
    return replace(state, rho=state.rho + h * k.rho_dot, A=state.A + h * k.A_dot,
                   P=state.P + h * k.P_dot, rho_plus=state.rho_plus + h * k.rho_plus_dot,
                   Pt=state.Pt + h * k.Pt_dot, sigma_plus=state.sigma_plus + h * k.sigma_plus_dot)


def rk4_step(state: FlowState, mode: str, h: float, zero_tol: float = DEFAULT_TOL.zero_tol,
             nullity: int | None = None) -> FlowState:
    k1 = geodesic_rhs(state, mode, zero_tol, nullity)
    k2 = geodesic_rhs(_advance(state, k1, h / 2), mode, zero_tol, nullity)
    k3 = geodesic_rhs(_advance(state, k2, h / 2), mode, zero_tol, nullity)
    k4 = geodesic_rhs(_advance(state, k3, h), mode, zero_tol, nullity)
    fields = ("rho_dot", "A_dot", "P_dot", "rho_plus_dot", "Pt_dot", "sigma_plus_dot")
    avg = FlowDerivative(*[(getattr(k1, f) + 2 * getattr(k2, f) + 2 * getattr(k3, f) + getattr(k4, f)) / 6
                           for f in fields], alpha=k1.alpha)
    new = _advance(state, avg, h)
    speed = (np.linalg.norm(state.A) + np.linalg.norm(new.A)) / 2
    return replace(new, t=state.t + h, arc_length=state.arc_length + h * speed)


def refresh(state: FlowState, mode: str, P0: np.ndarray | None = None,
            zero_tol: float = DEFAULT_TOL.zero_tol, nullity: int | None = None) -> FlowState:
    """Recompute projectors and pseudoinverses at fixed ranks, re-project A and renormalize it."""
    d = state.dims
    m, n = state.ranks
    rho = hermitize(state.rho)
    rp = partial_transpose(rho, d)
    P = fixed_rank_projector(rho, m) if P0 is None else P0
    new = replace(state, rho=rho, P=P, rho_plus=fixed_rank_pseudoinverse(rho, m),
                  Pt=fixed_rank_projector(rp, n), sigma_plus=fixed_rank_pseudoinverse(rp, n))
    hb = herm_basis(d)
    a = tangent_projection(new, mode, zero_tol, nullity) @ hb.coords(state.A)
    return replace(new, A=hb.matrix(a / np.linalg.norm(a)))


def _retained_min(rho: np.ndarray, rank: int) -> float:
    w = np.linalg.eigvalsh(rho)
    return float(w[len(w) - rank] / w[-1])


def _sample(state: FlowState, mode: str, P0, zero_tol: float, nullity: int | None = None) -> Sample:
    d = state.dims
    hb = herm_basis(d)
    der = geodesic_rhs(state, mode, zero_tol, nullity)
    P_ref = P0 if P0 is not None else state.P
    return Sample(
        state.t, state.arc_length,
        np.linalg.eigvalsh(hermitize(state.rho)),
        np.linalg.eigvalsh(hermitize(partial_transpose(state.rho, d))),
        hb.coords(state.rho),
        abs(float(np.linalg.norm(state.A)) - 1.0),
        float(hb.coords(der.A_dot) @ hb.coords(state.A)),
        float(np.linalg.norm(state.rho - P_ref @ state.rho @ P_ref)),
        abs(float(np.trace(state.rho).real) - 1.0),
        state.residuals())


def dominant_product_alignment(rho: np.ndarray, dims: BipartiteDims) -> tuple[float, float]:
    """Overlap of the top eigenvector of rho and of rho^P with its nearest product vector.

    For a unit vector the best product approximation has overlap equal to the largest
    singular value of its nA x nB reshaping.  Reported only; no threshold is applied.
    """
    out = []
    for M in (rho, partial_transpose(rho, dims)):
        top = np.linalg.eigh(hermitize(M))[1][:, -1]
        out.append(float(np.linalg.svd(top.reshape(dims.nA, dims.nB), compute_uv=False)[0]))
    return out[0], out[1]


def integrate(initial: FlowState, config: FlowConfig) -> Trajectory:
    """RK4 geodesic integration with periodic refresh, drift monitoring and boundary detection."""
    if config.mode == "boundarySeek":
        raise ValueError("use boundary_seek for the boundarySeek mode")
    mode = config.mode
    fixed = not _free(mode)
    zt = config.zero_tol
    P0 = initial.P if fixed else None
    k = tangent_nullity(initial, mode, zt)
    state = refresh(initial, mode, P0, zt, k)
    traj = Trajectory(initial.dims, mode)
    traj.samples.append(_sample(state, mode, P0, zt, k))
    traj.rank_pairs.append(rank_pair(state.rho, state.dims, Tolerances(zt)))
    m, n = state.ranks
    for step in range(1, config.steps + 1):
        prev = state
        with np.errstate(all="ignore"):
            state = rk4_step(state, mode, config.step_size, zt, k)
        if not (np.isfinite(state.rho).all() and np.isfinite(state.A).all()):
            traj.events.append(FlowEvent("breakdown", prev.t, step,
                                         "non-finite values; the step is too large this close to the boundary"))
            state = prev
            break
        if step % config.reproject_every == 0:
            state = refresh(state, mode, P0, zt, k)
        lam = min(_retained_min(state.rho, m), _retained_min(partial_transpose(state.rho, state.dims), n))
        if lam < 10 * zt:
            traj.events.append(FlowEvent("boundary", state.t, step,
                                         f"retained eigenvalue ratio {lam:.2e} below {10 * zt:.0e}"))
            break
        if step % config.record_every == 0 or step == config.steps:
            s = _sample(state, mode, P0, zt, k)
            traj.samples.append(s)
            traj.rank_pairs.append(rank_pair(state.rho, state.dims, Tolerances(zt)))
            worst = max(list(s.residuals.values()) + ([s.image_drift] if fixed else []))
            if worst > 10 * config.drift_tol:
                traj.events.append(FlowEvent("drift", state.t, step, f"consistency residual {worst:.2e}"))
                break
    traj.final = state
    return traj


# ---------------------------------------------------------------- boundary seeking

@dataclass(frozen=True)
class BoundaryResult:
    trajectory: Trajectory
    final_rho: np.ndarray = field(repr=False)
    rank_pair: tuple[int, int]
    vanishing: tuple[float, float]   # the retained smallest eigenvalues of rho and rho^P at the end
    ratio_history: np.ndarray = field(repr=False)

    @property
    def ratio(self) -> float:
        return self.vanishing[0] / self.vanishing[1]


def descent_direction(rho: np.ndarray, dims: BipartiteDims, ranks: tuple[int, int],
                      zero_tol: float = DEFAULT_TOL.zero_tol) -> tuple[np.ndarray, float]:
    """Unit traceless tangent A minimizing psi^dag A psi, psi the eigenvector of the smallest retained eigenvalue.

    Returns A and the rate psi^dag A psi.
    """
    m, n = ranks
    hb = herm_basis(dims)
    P = fixed_rank_projector(rho, m)
    Pt = fixed_rank_projector(partial_transpose(rho, dims), n)
    T = _with_trace(_constraint_matrices(dims, P, Pt, "free"), dims)
    w, V = np.linalg.eigh((T + T.T) / 2)
    B = V[:, np.abs(w) <= zero_tol * np.abs(w).max()]
    _, E = np.linalg.eigh(hermitize(rho))
    psi = E[:, dims.N - m]
    g = np.array([np.vdot(psi, hb.matrix(b) @ psi).real for b in B.T])
    gn = np.linalg.norm(g)
    if gn < 1e-12:
        return np.zeros_like(rho), 0.0
    a = -(B @ g) / gn
    return hb.matrix(a), -gn


def boundary_seek(rho: np.ndarray, dims: BipartiteDims, config: FlowConfig = FlowConfig(mode="boundarySeek"),
                  max_steps: int = 10000, step_fraction: float = 0.2, retract_every: int = 5) -> BoundaryResult:
    """Follow rho' = A(rho), steering the smallest retained eigenvalue of rho to zero.

    The tangent space turns at a rate of order 1/lambda, where lambda is the smaller of
    the two retained minimal eigenvalues, so each RK4 step uses dt = step_fraction * lambda.
    Every ``retract_every`` steps a descent pulls the point back onto the surface of the
    starting rank pair.  The run stops once the retained minima of rho and of rho^P
    have both fallen below 10 zero_tol relative to their largest eigenvalues.
    """
    ranks = rank_pair(rho, dims, Tolerances(config.zero_tol))
    m, n = ranks
    zt = config.zero_tol
    traj = Trajectory(dims, "boundarySeek")
    hb = herm_basis(dims)

    def field_at(r):
        return descent_direction(r, dims, ranks, zt)[0]

    def record(r, t):
        traj.samples.append(Sample(t, t, np.linalg.eigvalsh(hermitize(r)),
                                   np.linalg.eigvalsh(hermitize(partial_transpose(r, dims))),
                                   hb.coords(r), trace_error=abs(np.trace(r).real - 1)))
        traj.rank_pairs.append(rank_pair(r, dims, Tolerances(zt)))

    t = 0.0
    ratios = []
    reached = False
    for step in range(max_steps):
        w = np.linalg.eigvalsh(hermitize(rho))
        wt = np.linalg.eigvalsh(hermitize(partial_transpose(rho, dims)))
        lam, lam_t = w[dims.N - m], wt[dims.N - n]
        ratios.append(lam / lam_t)
        if step % config.record_every == 0:
            record(rho, t)
        if lam < 10 * zt * w[-1] and lam_t < 10 * zt * wt[-1]:
            reached = True
            break
        k1, rate = descent_direction(rho, dims, ranks, zt)
        if rate == 0.0:
            traj.events.append(FlowEvent("stall", t, step, "no descent direction in the tangent space"))
            break
        dt = step_fraction * min(lam, lam_t)
        k2 = field_at(rho + dt / 2 * k1)
        k3 = field_at(rho + dt / 2 * k2)
        k4 = field_at(rho + dt * k3)
        rho = hermitize(rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        if (step + 1) % retract_every == 0:
            rho = retract_to_rank(rho, dims, m, n).rho
        t += dt
    if not reached and not traj.events:
        traj.events.append(FlowEvent("stall", t, max_steps, "step budget exhausted before the boundary"))
    record(rho, t)
    w = np.linalg.eigvalsh(hermitize(rho))
    wt = np.linalg.eigvalsh(hermitize(partial_transpose(rho, dims)))
    return BoundaryResult(traj, rho, rank_pair(rho, dims, Tolerances(10 * zt)),
                          (float(w[dims.N - m]), float(wt[dims.N - n])), np.array(ratios))


# ---------------------------------------------------------------- analysis helpers

@dataclass(frozen=True)
class PCAResult:
    scores: np.ndarray       # samples x 2
    components: np.ndarray   # 2 x features
    variances: np.ndarray


def pca_projection(points: np.ndarray | Trajectory, n_components: int = 2) -> PCAResult:
    """Project mean-centred samples onto the leading covariance eigenvectors.

    Each component's sign is fixed so that its first nonzero loading is positive.
    """
    X = points.coords() if isinstance(points, Trajectory) else np.asarray(points, dtype=float)
    if len(X) < 3:
        raise ValueError("need at least 3 samples")
    Xc = X - X.mean(axis=0)
    w, V = np.linalg.eigh(Xc.T @ Xc / (len(X) - 1))
    order = np.argsort(w)[::-1][:n_components]
    comps = V[:, order].T
    for c in comps:
        nz = np.flatnonzero(np.abs(c) > 1e-12)
        if nz.size and c[nz[0]] < 0:
            c *= -1
    return PCAResult(Xc @ comps.T, comps, w[order])


INSIDE_P, D_ONLY, DP_ONLY, OUTSIDE = 0, 1, 2, 3


@dataclass(frozen=True)
class SectionMap:
    xs: np.ndarray
    ys: np.ndarray
    min_eig_rho: np.ndarray = field(repr=False)   # indexed [iy, ix]
    min_eig_pt: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    boundaries: dict = field(repr=False)          # name -> list of (k, 2) arrays of (x, y) points

    @property
    def spacing(self) -> float:
        return float(self.xs[1] - self.xs[0])


def _contours(values, xs, ys):
    out = []
    for c in skimage.measure.find_contours(values, 0.0):
        iy, ix = c[:, 0], c[:, 1]
        out.append(np.column_stack([np.interp(ix, np.arange(len(xs)), xs),
                                    np.interp(iy, np.arange(len(ys)), ys)]))
    return out


def plane_section_scan(rho0: np.ndarray, A1: np.ndarray, A2: np.ndarray, dims: BipartiteDims,
                       radius: float, grid: int = 201, center=(0.0, 0.0)) -> SectionMap:
    """Classify rho0 + x A1 + y A2 on a square grid by the signs of the smallest eigenvalues.

    Boundary curves of D (rho >= 0), D^P (rho^P >= 0) and their intersection P are the
    zero level sets of min eig rho, min eig rho^P and their minimum.
    """
    xs = center[0] + np.linspace(-radius, radius, grid)
    ys = center[1] + np.linspace(-radius, radius, grid)
    X, Y = np.meshgrid(xs, ys)
    stack = rho0[None, None] + X[..., None, None] * A1[None, None] + Y[..., None, None] * A2[None, None]
    nA, nB = dims.nA, dims.nB
    N = dims.N
    pt = stack.reshape(grid, grid, nA, nB, nA, nB).transpose(0, 1, 2, 5, 4, 3).reshape(grid, grid, N, N)
    e_rho = np.linalg.eigvalsh(stack)[..., 0]
    e_pt = np.linalg.eigvalsh(pt)[..., 0]
    in_d, in_dp = e_rho >= 0, e_pt >= 0
    labels = np.where(in_d & in_dp, INSIDE_P, np.where(in_d, D_ONLY, np.where(in_dp, DP_ONLY, OUTSIDE)))
    bounds = {"D": _contours(e_rho, xs, ys), "DP": _contours(e_pt, xs, ys),
              "P": _contours(np.minimum(e_rho, e_pt), xs, ys)}
    return SectionMap(xs, ys, e_rho, e_pt, labels, bounds)


def distance_to_curves(point, curves) -> float:
    best = np.inf
    for c in curves:
        best = min(best, float(np.min(np.linalg.norm(c - np.asarray(point), axis=1))))
    return best
