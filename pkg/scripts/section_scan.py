"""Scan a 2D plane through a (5,5) extremal state and write the labelled grid and boundary curves.

The plane is spanned by the direction towards the maximally mixed state and a random
tangent direction of the (5,5) surface, orthogonalized against the first.  Labels:
0 inside both D and D^P, 1 only D, 2 only D^P, 3 outside both.
"""

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ppt_forge.geodesic_flow import distance_to_curves, plane_section_scan, random_tangent_state
from ppt_forge.hermitian_core import BipartiteDims
from ppt_forge.io import RunConfig, resolve_seed, write_csv
from ppt_forge.state_construction import search_low_rank_ppt
from ppt_forge.superop import extremality_test

DIMS = BipartiteDims(3, 3)


@dataclass
class SectionConfig:
    seed: int = 0
    radii: tuple = (0.02, 0.1)
    grid: int = 201


def plane(rho, rng):
    A1 = np.eye(9) / 9 - rho
    A1 /= np.linalg.norm(A1)
    A2 = random_tangent_state(rho, DIMS, "geodesicFree", rng).A
    A2 = A2 - np.vdot(A1, A2).real * A1
    return A1, A2 / np.linalg.norm(A2)


def run(cfg: SectionConfig, out: Path) -> list[dict]:
    out.mkdir(parents=True, exist_ok=True)
    rng = RunConfig(seed=cfg.seed).rng("section_scan")
    rho = search_low_rank_ppt(DIMS, 5, 5, rng).rho
    A1, A2 = plane(rho, rng)
    rows = []
    for radius in cfg.radii:
        sec = plane_section_scan(rho, A1, A2, DIMS, radius, cfg.grid)
        X, Y = np.meshgrid(sec.xs, sec.ys)
        write_csv(out / f"section_r{radius:g}.csv", ["x", "y", "minEigRho", "minEigPT", "label"],
                  zip(X.ravel(), Y.ravel(), sec.min_eig_rho.ravel(), sec.min_eig_pt.ravel(),
                      sec.labels.ravel().tolist()))
        curves = {k: [c.tolist() for c in v] for k, v in sec.boundaries.items()}
        (out / f"boundaries_r{radius:g}.json").write_text(json.dumps(curves))
        row = {"radius": radius, "cell": sec.spacing,
               **{f"dist_{k}_cells": distance_to_curves((0, 0), v) / sec.spacing for k, v in sec.boundaries.items()}}
        print(json.dumps(row))
        rows.append(row)
    meta = {"config": asdict(cfg), "extremal": extremality_test(rho, DIMS).is_extremal, "scans": rows}
    (out / "summary.json").write_text(json.dumps(meta, indent=1))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="outputs/section")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--radius", type=float, nargs="+", default=list(SectionConfig.radii))
    ap.add_argument("--grid", type=int, default=SectionConfig.grid)
    a = ap.parse_args()
    run(SectionConfig(resolve_seed(a.seed), tuple(a.radius), a.grid), Path(a.out))


if __name__ == "__main__":
    main()
