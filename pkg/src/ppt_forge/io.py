"""File formats: JSON for states, vectors and subspaces; CSV with 17 significant digits for tables."""

from __future__ import annotations

import csv
import json
import os
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hermitian_core import DEFAULT_TOL, BipartiteDims, Tolerances
from .product_vectors import ProductVector, ProductVectorSet

SEED_ENV = "PPT_FORGE_SEED"


class FormatError(ValueError):
    """Input file is malformed."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tolerances: Tolerances = DEFAULT_TOL
    output_dir: Path = Path(".")
    format: str = "json"

    def rng(self, label: str) -> np.random.Generator:
        """Independent stream for one component, derived from the master seed and a fixed label."""
        return np.random.default_rng([self.seed & (2 ** 64 - 1), zlib.crc32(label.encode())])


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise FormatError(f"{SEED_ENV} must be an integer, got {env!r}") from exc


def _pairs(z) -> list:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [_pairs(x) for x in z]


def _complex(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.shape[-1:] != (2,):
        raise FormatError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return data


def _dims(data) -> BipartiteDims:
    try:
        nA, nB = data["dims"]
        return BipartiteDims(int(nA), int(nB))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("missing or invalid 'dims' (expected [nA, nB])") from exc


def _write_json(path, data: dict) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def save_state(path, rho: np.ndarray, dims: BipartiteDims, metadata: dict | None = None) -> None:
    _write_json(path, {"dims": [dims.nA, dims.nB], "entries": _pairs(rho), "metadata": metadata or {}})


def load_state(path) -> tuple[np.ndarray, BipartiteDims, dict]:
    data = _read_json(path)
    dims = _dims(data)
    try:
        rho = _complex(data["entries"])
    except KeyError as exc:
        raise FormatError(f"{path}: missing 'entries'") from exc
    if rho.shape != (dims.N, dims.N):
        raise FormatError(f"{path}: entries must be {dims.N}x{dims.N}")
    return rho, dims, data.get("metadata", {})


def save_matrices(path, mats: dict[str, np.ndarray], dims: BipartiteDims) -> None:
    _write_json(path, {"dims": [dims.nA, dims.nB], **{k: _pairs(v) for k, v in mats.items()}})


def load_matrices(path, names) -> tuple[list[np.ndarray], BipartiteDims]:
    data = _read_json(path)
    dims = _dims(data)
    try:
        out = [_complex(data[k]) for k in names]
    except KeyError as exc:
        raise FormatError(f"{path}: missing {exc}") from exc
    for m in out:
        if m.shape != (dims.N, dims.N):
            raise FormatError(f"{path}: matrices must be {dims.N}x{dims.N}")
    return out, dims


def save_vectors(path, pset: ProductVectorSet) -> None:
    _write_json(path, {"dims": [pset.dims.nA, pset.dims.nB],
                       "vectors": [{"u": _pairs(p.u), "v": _pairs(p.v)} for p in pset.vectors]})


def load_vectors(path) -> ProductVectorSet:
    data = _read_json(path)
    dims = _dims(data)
    try:
        vecs = tuple(ProductVector(_complex(v["u"]), _complex(v["v"])) for v in data["vectors"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: 'vectors' must be a list of {{'u': ..., 'v': ...}}") from exc
    for p in vecs:
        if p.u.shape != (dims.nA,) or p.v.shape != (dims.nB,):
            raise FormatError(f"{path}: factor lengths do not match dims")
    return ProductVectorSet(dims, vecs)


def save_subspace(path, basis: np.ndarray, dims: BipartiteDims) -> None:
    _write_json(path, {"dims": [dims.nA, dims.nB], "basis": _pairs(np.asarray(basis).T)})


def load_subspace(path) -> tuple[np.ndarray, BipartiteDims]:
    data = _read_json(path)
    dims = _dims(data)
    try:
        B = _complex(data["basis"]).T
    except KeyError as exc:
        raise FormatError(f"{path}: missing 'basis'") from exc
    if B.ndim != 2 or B.shape[0] != dims.N:
        raise FormatError(f"{path}: basis vectors must have length {dims.N}")
    return B, dims


def load_complex_vector(path, key: str = "c") -> np.ndarray:
    data = _read_json(path)
    try:
        return _complex(data[key])
    except KeyError as exc:
        raise FormatError(f"{path}: missing '{key}'") from exc


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, header: list[str], rows) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) if not isinstance(x, str) else x for x in row])


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def trajectory_header(N: int) -> list[str]:
    return (["t", "arcLength"] + [f"lambda{i}" for i in range(1, N + 1)]
            + [f"lambdaP{i}" for i in range(1, N + 1)])


def write_trajectory_csv(path, traj) -> None:
    write_csv(path, trajectory_header(traj.dims.N), traj.eigenvalue_table())
