"""Forward model: apply a multiplier, sample at nodes, add bounded noise."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .filters import MultiplierFilter
from .harmonics import CoefficientVector, block_slice, eval_poly_many
from .sphere_geometry import MzFamily, SpherePoint, nodes_to_arrays

__all__ = [
    "MeasurementSet",
    "apply_multiplier",
    "sample_at",
    "add_noise",
    "simulate",
    "truth_digest",
    "write_measurements_csv",
    "read_measurements_csv",
]


@dataclass(frozen=True)
class MeasurementSet:
    """Noisy samples y_j of a filtered signal at weighted nodes.

    For synthetic data, |y_j - (Ff)(x_j)| <= beta for every j and truth_ref
    holds content digests of the truth coefficients and the filter, so error
    reports cannot silently mix runs.
    """

    nodes: tuple
    weights: np.ndarray
    y: np.ndarray
    beta: float = 0.0
    seed: Optional[int] = None
    truth_ref: Optional[dict] = None

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "y", y)
        if not (len(self.nodes) == w.size == y.size):
            raise ValueError("nodes, weights and y must have equal lengths")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


def apply_multiplier(filt: MultiplierFilter, c: CoefficientVector) -> CoefficientVector:
    """Scale each degree block of c by b_m (the diagonal action of F)."""
    if filt.m_max < c.m_max:
        raise ValueError(
            f"filter stores degrees up to {filt.m_max} but coefficients reach {c.m_max}"
        )
    out = c.coeffs.copy()
    for m in range(c.m_max + 1):
        out[block_slice(m)] *= filt.b[m]
    return CoefficientVector(c.m_max, out)


def sample_at(c: CoefficientVector, nodes: Sequence[SpherePoint]) -> np.ndarray:
    """Pointwise values of the synthesized polynomial at the nodes."""
    if len(nodes) == 0:
        return np.empty(0)
    thetas, phis = nodes_to_arrays(nodes)
    return eval_poly_many(c, thetas, phis)


def add_noise(values: np.ndarray, beta: float, seed: Optional[int] = None) -> np.ndarray:
    """values + iid uniform noise on [-beta, beta], deterministic per seed."""
    values = np.asarray(values, dtype=float)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if beta == 0:
        return values.copy()
    if seed is None:
        raise ValueError("noise with beta > 0 requires a seed")
    rng = np.random.default_rng(seed)
    return values + rng.uniform(-beta, beta, size=values.shape)


def truth_digest(truth: CoefficientVector, filt: MultiplierFilter) -> dict:
    """Content digests identifying a synthetic run."""
    return {
        "truth_sha256": hashlib.sha256(np.ascontiguousarray(truth.coeffs).tobytes()).hexdigest(),
        "truth_m_max": truth.m_max,
        "filter_sha256": hashlib.sha256(np.ascontiguousarray(filt.b).tobytes()).hexdigest(),
        "filter_provenance": filt.provenance,
    }


def simulate(
    truth: CoefficientVector,
    filt: MultiplierFilter,
    fam: MzFamily,
    beta: float = 0.0,
    seed: Optional[int] = None,
) -> MeasurementSet:
    """Measurements y_j = (F truth)(x_j) + eta_j with |eta_j| <= beta."""
    filtered = apply_multiplier(filt, truth)
    clean = sample_at(filtered, fam.nodes)
    y = add_noise(clean, beta, seed)
    return MeasurementSet(
        nodes=tuple(fam.nodes),
        weights=fam.weights.copy(),
        y=y,
        beta=beta,
        seed=seed,
        truth_ref=truth_digest(truth, filt),
    )


def write_measurements_csv(path, ms: MeasurementSet, sidecar_path=None) -> None:
    """Measurement CSV (theta,phi,weight,y) plus a JSON sidecar with metadata."""
    from .artifacts import atomic_write_text, write_json

    lines = ["theta,phi,weight,y"]
    for p, w, v in zip(ms.nodes, ms.weights, ms.y):
        lines.append(f"{p.theta:.17g},{p.phi:.17g},{w:.17g},{v:.17g}")
    atomic_write_text(path, "\n".join(lines) + "\n")
    if sidecar_path is not None:
        write_json(
            sidecar_path,
            {"beta": ms.beta, "seed": ms.seed, "truth_ref": ms.truth_ref},
        )


def read_measurements_csv(path, sidecar_path=None) -> MeasurementSet:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "theta,phi,weight,y":
            raise ValueError(f"unexpected measurement CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows, dtype=float)
    meta = {"beta": 0.0, "seed": None, "truth_ref": None}
    if sidecar_path is not None:
        with open(sidecar_path) as fh:
            meta.update(json.load(fh))
    nodes = tuple(SpherePoint(t, p % (2 * math.pi)) for t, p in data[:, :2])
    return MeasurementSet(
        nodes=nodes,
        weights=data[:, 2],
        y=data[:, 3],
        beta=float(meta["beta"]),
        seed=meta["seed"],
        truth_ref=meta["truth_ref"],
    )
