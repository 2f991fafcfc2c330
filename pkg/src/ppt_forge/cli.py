"""Command-line entry point.  Exit status: 0 success, 1 domain error, 2 usage or input-format error."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np
import scipy.linalg

from . import io
from .dimension_census import measure_dimension
from .geodesic_flow import (
    FlowConfig,
    boundary_seek,
    dominant_product_alignment,
    flow_state,
    integrate,
    pca_projection,
    plane_section_scan,
    random_tangent_state,
)
from .hermitian_core import BipartiteDims, Tolerances, is_ppt, rank_pair
from .perturbation import prepare_upb, rank45_direction, rank45_seed, step_finite
from .product_vectors import (
    FinderConfig,
    OrthParams,
    classify_region,
    find_products_in_subspace,
    invariants_from_params,
    product_vector_counts,
    to_standard_form,
)
from .state_construction import constraint_census, reconstruct_from_kernel, search_low_rank_ppt, upb_state
from .superop import extremality_test

GEODESIC_MODES = {"free": "geodesicFree", "fixed-image": "geodesicFixedImage", "boundary": "boundarySeek"}


class UsageError(Exception):
    pass


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} numbers, got {len(vals)}")
    return vals


def _complex_str(z) -> str:
    z = complex(z)
    return f"{z.real:.17g}" if z.imag == 0 else f"{z.real:.17g}{z.imag:+.17g}j"


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


def _save(args, path, rho, dims, provenance: str, **extra) -> None:
    meta = {"rankPair": list(rank_pair(rho, dims, args.tol)), "isPpt": bool(is_ppt(rho, dims, args.tol)),
            "provenance": provenance, **extra}
    io.save_state(path, rho, dims, meta)
    _emit("wrote", path)


# ---------------------------------------------------------------- subcommands

def cmd_upb(args) -> int:
    a, b, c, d = _floats(args.params, 4)
    op = OrthParams(a, b, c, d)
    rho = upb_state(op)
    dims = BipartiteDims(3, 3)
    _emit("rank pair", rank_pair(rho, dims, args.tol))
    if args.out:
        _save(args, args.out, rho, dims, f"upb {args.params}", orthParams=[a, b, c, d])
    return 0


def cmd_invariants(args) -> int:
    pset = io.load_vectors(args.vectors)
    if (pset.dims.nA, pset.dims.nB) != (3, 3) or len(pset) != 5:
        raise ValueError("invariants need exactly 5 product vectors in 3x3")
    sf = to_standard_form(pset)
    inv = invariants_from_params(sf.params)
    for name, val in zip(("s1", "s2", "s3", "s4"), inv.as_array()):
        _emit(name, _complex_str(val))
    for name, val in zip("pqrs", sf.params.values):
        _emit(name, _complex_str(val))
    if sf.params.is_real():
        cls = classify_region(pset)
        _emit("u class", cls.u_class)
        _emit("v class", cls.v_class)
        _emit("region class", cls.class_id if cls.class_id is not None else "mismatch")
    else:
        _emit("region class", "n/a (complex parameters)")
    return 0


def cmd_reconstruct(args) -> int:
    pset = io.load_vectors(args.vectors)
    res = reconstruct_from_kernel(pset, args.tol)
    _emit("independent constraints", res.num_independent)
    _emit("solution dimension", res.solution_dim)
    if res.state is None:
        print("no unique solution", file=sys.stderr)
        return 1
    _emit("ppt", str(res.is_ppt).lower())
    _emit("rank pair", res.rank_pair)
    if args.out:
        _save(args, args.out, res.state, pset.dims, f"reconstruct {args.vectors}")
    return 0 if res.is_ppt else 1


def cmd_census(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    pset = io.load_vectors(args.vectors)
    if pset.dims != dims:
        raise io.FormatError(f"vectors file holds {pset.dims} vectors, --dims says {dims}")
    counts = product_vector_counts(dims.nA, dims.nB)
    _emit("generic counts", counts)
    print("vectors,independent,freeParameters")
    for e in constraint_census(pset, args.tol):
        print(f"{e.num_vectors},{e.num_independent},{e.free_params}")
    return 0


def cmd_extremal(args) -> int:
    rho, dims, _ = io.load_state(args.state)
    res = extremality_test(rho, dims, args.tol)
    _emit("multiplicity of eigenvalue 2", res.multiplicity_of_two)
    _emit("extremal", str(res.is_extremal).lower())
    return 0


def cmd_dimension(args) -> int:
    rho, dims, _ = io.load_state(args.state)
    mode = {"free": "free", "fixed-image": "fixedImage"}[args.mode]
    row = measure_dimension(rho, dims, mode, args.tol)
    _emit("rank pair", row.rank_pair)
    _emit("mode", row.mode)
    _emit("dimension", row.measured)
    _emit("bound", row.bound)
    _emit("equality", str(row.equality).lower())
    return 0


def cmd_perturb45(args) -> int:
    rho, dims, meta = io.load_state(args.state)
    if "orthParams" not in meta:
        raise ValueError("state file lacks orthParams metadata; create it with the upb command")
    op = OrthParams(*meta["orthParams"])
    if np.linalg.norm(rho - upb_state(op)) > 1e-10:
        raise ValueError("state entries do not match their orthParams metadata")
    c = io.load_complex_vector(args.c, "c")
    if c.shape != (5,):
        raise io.FormatError("c must hold 5 complex coefficients")
    theta = _floats(args.phases, 4)
    ctx = prepare_upb(op, args.run.rng("finder"))
    seed = rank45_seed(ctx, c, theta)
    res = rank45_direction(ctx, seed, "fixedImage", args.tol)
    _emit("directions beyond trivial", res.beyond_trivial)
    _emit("rank increasing", res.rank_increasing_count)
    if res.direction is None:
        raise ValueError("no rank-increasing direction for these coefficients")
    step = step_finite(ctx.rho, res.direction, args.eps, dims, args.tol)
    _emit("rank pair", step.rank_pair)
    _emit("ppt", str(step.is_ppt).lower())
    _emit("smallest retained", f"{step.smallest_retained[0]:.17g},{step.smallest_retained[1]:.17g}")
    if args.out:
        _save(args, args.out, step.rho_prime, dims, f"perturb45 eps={args.eps}")
    return 0 if step.is_ppt else 1


def cmd_geodesic(args) -> int:
    rho, dims, _ = io.load_state(args.state)
    if not is_ppt(rho, dims, args.tol):
        raise ValueError("state is not PPT")
    mode = GEODESIC_MODES[args.mode]
    cfg = FlowConfig(mode=mode, step_size=args.dt, steps=args.steps, record_every=args.record_every,
                     zero_tol=args.tol.zero_tol)
    if mode == "boundarySeek":
        res = boundary_seek(rho, dims, cfg, max_steps=args.steps)
        traj = res.trajectory
        _emit("final rank pair", res.rank_pair)
        _emit("vanishing eigenvalues", f"{res.vanishing[0]:.17g},{res.vanishing[1]:.17g}")
        _emit("ratio", f"{res.ratio:.17g}")
        final = res.final_rho
    else:
        if args.direction:
            (A,), _ = io.load_matrices(args.direction, ["A"])
            start = flow_state(rho, A, dims, args.tol)
        else:
            start = random_tangent_state(rho, dims, mode, args.run.rng("direction"), args.tol)
        traj = integrate(start, cfg)
        final = traj.final.rho
        _emit("samples", len(traj.samples))
        _emit("rank pairs", sorted(set(traj.rank_pairs)))
    _emit("dominant product alignment", "%.17g,%.17g" % dominant_product_alignment(final, dims))
    for ev in traj.events:
        _emit("event", f"{ev.kind} at t={ev.t:.6g} (step {ev.step}): {ev.message}")
    if args.trace:
        io.write_trajectory_csv(args.trace, traj)
        _emit("wrote", args.trace)
    if args.pca:
        pca = pca_projection(traj)
        io.write_csv(args.pca, ["t", "pc1", "pc2"],
                     [[s.t, *row] for s, row in zip(traj.samples, pca.scores)])
        _emit("wrote", args.pca)
    if args.out:
        _save(args, args.out, final, dims, f"geodesic {args.mode} steps={args.steps}")
    return 0


def cmd_section(args) -> int:
    rho, dims, _ = io.load_state(args.state)
    (A1, A2), ddims = io.load_matrices(args.dirs, ["A1", "A2"])
    if ddims != dims:
        raise io.FormatError("direction file dims differ from the state's")
    sec = plane_section_scan(rho, A1, A2, dims, args.radius, args.grid)
    X, Y = np.meshgrid(sec.xs, sec.ys)
    rows = zip(X.ravel(), Y.ravel(), sec.min_eig_rho.ravel(), sec.min_eig_pt.ravel(), sec.labels.ravel())
    io.write_csv(args.out, ["x", "y", "minEigRho", "minEigPT", "label"], rows)
    _emit("wrote", args.out)
    if args.boundaries:
        with open(args.boundaries, "w") as fh:
            json.dump({k: [c.tolist() for c in v] for k, v in sec.boundaries.items()}, fh)
        _emit("wrote", args.boundaries)
    return 0


def cmd_findproducts(args) -> int:
    basis, dims = io.load_subspace(args.subspace)
    basis = scipy.linalg.orth(basis)
    found = find_products_in_subspace(basis, dims, args.run.rng("finder"), FinderConfig(restarts=args.restarts))
    _emit("found", len(found))
    _emit("generic count", product_vector_counts(dims.nA, dims.nB))
    if args.out:
        io.save_vectors(args.out, found)
        _emit("wrote", args.out)
    return 0


def cmd_search(args) -> int:
    dims = BipartiteDims.parse(args.dims)
    m, n = (int(x) for x in _floats(args.ranks, 2))
    res = search_low_rank_ppt(dims, m, n, args.run.rng("search"))
    _emit("rank pair", rank_pair(res.rho, dims, args.tol))
    _emit("objective", f"{res.objective:.3e}")
    _save(args, args.out, res.rho, dims, f"search {dims} ranks=({m},{n}) seed={args.run.seed}")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppt-forge", description="Low-rank PPT state toolkit.")
    p.add_argument("--seed", type=int, default=None, help="master seed (falls back to $PPT_FORGE_SEED, then 0)")
    p.add_argument("--zero-tol", type=float, default=1e-9, help="relative threshold for rank decisions")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("upb", help="rank-(4,4) state from an orthogonal unextendible product basis")
    s.add_argument("--params", required=True, help="a,b,c,d (all positive)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_upb)

    s = sub.add_parser("invariants", help="standard-form parameters, invariants and region class of 5 vectors")
    s.add_argument("--vectors", required=True)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("reconstruct", help="solve for the state whose kernel holds the given vectors")
    s.add_argument("--vectors", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("census", help="independent-constraint ladder as vectors are added")
    s.add_argument("--dims", required=True, help="e.g. 3x3 or 4x4")
    s.add_argument("--vectors", required=True)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("extremal", help="extremality test of a PPT state")
    s.add_argument("--state", required=True)
    s.set_defaults(func=cmd_extremal)

    s = sub.add_parser("dimension", help="tangent dimension of the fixed-rank surface through a state")
    s.add_argument("--state", required=True)
    s.add_argument("--mode", choices=("free", "fixed-image"), default="free")
    s.set_defaults(func=cmd_dimension)

    s = sub.add_parser("perturb45", help="finite step from a rank-(4,4) UPB state to rank (5,5)")
    s.add_argument("--state", required=True)
    s.add_argument("--c", required=True, help='JSON file {"c": [[re, im] x 5]}')
    s.add_argument("--phases", required=True, help="theta1,theta2,theta3,theta4")
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_perturb45)

    s = sub.add_parser("geodesic", help="integrate a geodesic or a boundary-seeking curve")
    s.add_argument("--state", required=True)
    s.add_argument("--mode", choices=tuple(GEODESIC_MODES), default="fixed-image")
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--dt", type=float, default=1e-4)
    s.add_argument("--record-every", type=int, default=100)
    s.add_argument("--direction", help='JSON file with the starting tangent {"dims": .., "A": ..}')
    s.add_argument("--trace", help="eigenvalue trace CSV")
    s.add_argument("--pca", help="two leading principal components CSV")
    s.add_argument("--out", help="final state JSON")
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("section", help="classify a 2D plane section by positivity of rho and rho^P")
    s.add_argument("--state", required=True)
    s.add_argument("--dirs", required=True, help='JSON file {"dims": .., "A1": .., "A2": ..}')
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--grid", type=int, default=201)
    s.add_argument("--out", required=True)
    s.add_argument("--boundaries", help="JSON file for the boundary polylines")
    s.set_defaults(func=cmd_section)

    s = sub.add_parser("findproducts", help="search a subspace for product vectors")
    s.add_argument("--subspace", required=True)
    s.add_argument("--restarts", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_findproducts)

    s = sub.add_parser("search", help="numerical search for a PPT state of a given rank pair")
    s.add_argument("--dims", default="3x3")
    s.add_argument("--ranks", required=True, help="m,n")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.tol = Tolerances(zero_tol=args.zero_tol)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        args.run = io.RunConfig(seed=io.resolve_seed(args.seed), tolerances=args.tol)
        return args.func(args)
    except (UsageError, io.FormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
