"""Closed-form dimension bounds for fixed-rank PPT surfaces and their numerical measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian_core import DEFAULT_TOL, BipartiteDims, Tolerances, rank_pair
from .perturbation import tangent_fixed_image, tangent_rank_preserving

MODES = ("free", "fixedImage")


def subspace_set_dimension(N: int, r: int) -> int:
    """Real dimension of the Grassmannian of r-dimensional subspaces of C^N."""
    if not 0 <= r <= N:
        raise ValueError("need 0 <= r <= N")
    return 2 * r * (N - r)


def dimension_bound(N: int, m: int, n: int, mode: str = "free") -> int:
    """Lower bound on the surface dimension from counting the equations on A.

    Free mode: N^2 - (N-m)^2 - (N-n)^2 - 1.  Fixed image: m^2 - (N-n)^2 - 1.
    """
    if not (1 <= m <= N and 1 <= n <= N):
        raise ValueError("ranks must lie in 1..N")
    if mode == "free":
        return N * N - (N - m) ** 2 - (N - n) ** 2 - 1
    if mode == "fixedImage":
        return m * m - (N - n) ** 2 - 1
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class CensusRow:
    dims: BipartiteDims
    rank_pair: tuple[int, int]
    measured: int
    bound: int
    mode: str
    raw: int  # null-space dimension before removing A = rho

    @property
    def equality(self) -> bool:
        return self.measured == self.bound


class RankMismatchError(ValueError):
    pass


def measure_dimension(rho: np.ndarray, dims: BipartiteDims, mode: str = "free",
                      tol: Tolerances = DEFAULT_TOL, expected: tuple[int, int] | None = None) -> CensusRow:
    m, n = rank_pair(rho, dims, tol)
    if expected is not None and (m, n) != tuple(expected):
        raise RankMismatchError(f"claimed rank pair {tuple(expected)}, measured {(m, n)}")
    if mode == "free":
        ts = tangent_rank_preserving(rho, dims, tol)
    elif mode == "fixedImage":
        ts = tangent_fixed_image(rho, dims, tol)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CensusRow(dims, (m, n), ts.dimension, dimension_bound(dims.N, m, n, mode), mode, ts.raw_dimension)


def census_table(states, dims: BipartiteDims, modes=MODES, tol: Tolerances = DEFAULT_TOL) -> list[CensusRow]:
    """One row per (state, mode), states in the given order and modes inner."""
    return [measure_dimension(rho, dims, mode, tol) for rho in states for mode in modes]
