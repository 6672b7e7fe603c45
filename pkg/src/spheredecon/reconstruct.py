"""Weighted least-squares reconstruction through the SVD pseudoinverse.

The estimator minimizes sum_j |y_j - (Fp)(x_j)|^2 tau_j over diffusion
polynomials p of degree <= m.  Only degrees with b_m != 0 enter the design
matrix (the filter annihilates the rest); their coefficients are returned as
zero, which makes the solution the minimum-norm minimizer.  Row scaling by
sqrt(tau_j) keeps the conditioning of the weighted problem instead of
squaring it through normal equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import MultiplierFilter, identity_multipliers
from .harmonics import CoefficientVector, basis_matrix, num_coeffs
from .sphere_geometry import MzFamily, nodes_to_arrays

__all__ = ["LsqReport", "design_matrix", "lsq_solve", "reconstruct_direct", "solution_to_json"]

_SVD_RCOND = 1e-12


@dataclass(frozen=True)
class LsqReport:
    """Solution of one weighted least-squares solve plus solver diagnostics.

    frame_lower / frame_upper are the extreme squared singular values of the
    weighted design matrix restricted to the active columns; they play the
    role of the frame constants of the sampled system.
    """

    solution: CoefficientVector
    residual: float
    singular_values: np.ndarray
    frame_lower: float
    frame_upper: float
    rank: int
    active_degrees: tuple
    full_rank: bool


def active_degrees(filt: MultiplierFilter, m: int) -> tuple:
    """Degrees m' <= m whose multiplier does not vanish."""
    return tuple(int(d) for d in range(m + 1) if filt.b[d] != 0.0)


def design_matrix(filt: MultiplierFilter, fam: MzFamily, m: int):
    """Weighted sampling matrix of the filtered basis.

    Rows are nodes, columns the basis functions of active degrees; the entry
    is sqrt(tau_j) * b_{m'} * Y_{m'}^ell(x_j).  Returns (matrix, column
    indices into the full degree-major layout).
    """
    if m < 0:
        raise ValueError("degree must be >= 0")
    if filt.m_max < m:
        raise ValueError(f"filter stores degrees up to {filt.m_max}, requested {m}")
    if len(fam.nodes) == 0:
        raise ValueError("empty sampling family")
    act = active_degrees(filt, m)
    if not act:
        raise ValueError("all multipliers vanish up to the requested degree")
    thetas, phis = nodes_to_arrays(fam.nodes)
    basis = basis_matrix(m, thetas, phis)
    cols = np.concatenate([np.arange(d * d, (d + 1) * (d + 1)) for d in act])
    scale = np.concatenate([np.full(2 * d + 1, filt.b[d]) for d in act])
    mat = basis[:, cols] * scale[None, :] * np.sqrt(fam.weights)[:, None]
    return mat, cols


def lsq_solve(
    filt: MultiplierFilter, fam: MzFamily, m: int, y: np.ndarray
) -> LsqReport:
    """Minimum-norm weighted least squares for the degree-m hypothesis space.

    SVD with relative cutoff 1e-12 * sigma_max; rank deficiency is flagged
    (the family is then not Marcinkiewicz-Zygmund for this filter and degree)
    and the minimum-norm solution is still returned.
    """
    y = np.asarray(y, dtype=float)
    if y.size != len(fam.nodes):
        raise ValueError("y must have one entry per node")
    mat, cols = design_matrix(filt, fam, m)
    ytil = y * np.sqrt(fam.weights)
    u, sv, vt = np.linalg.svd(mat, full_matrices=False)
    cutoff = _SVD_RCOND * sv[0] if sv[0] > 0 else 0.0
    kept = sv > cutoff
    rank = int(kept.sum())
    inv = np.zeros_like(sv)
    inv[kept] = 1.0 / sv[kept]
    active_sol = vt.T @ (inv * (u.T @ ytil))
    coeffs = np.zeros(num_coeffs(m))
    coeffs[cols] = active_sol
    solution = CoefficientVector(m, coeffs)
    residual = float(np.linalg.norm(mat @ active_sol - ytil))
    full_rank = rank == mat.shape[1]
    frame_lower = float(sv[-1] ** 2)
    frame_upper = float(sv[0] ** 2)
    if full_rank and frame_lower > 0:
        # Lemma-type stability: ||solution||_2 <= A^{-1/2} ||y||_tau; a
        # violation beyond rounding means the pseudoinverse is broken.
        bound = float(np.linalg.norm(ytil)) / np.sqrt(frame_lower)
        if solution.l2_norm() > bound * (1.0 + 1e-9) + 1e-300:
            raise RuntimeError("pseudoinverse stability bound violated")
    return LsqReport(
        solution=solution,
        residual=residual,
        singular_values=sv,
        frame_lower=frame_lower,
        frame_upper=frame_upper,
        rank=rank,
        active_degrees=active_degrees(filt, m),
        full_rank=full_rank,
    )


def reconstruct_direct(fam: MzFamily, m: int, y: np.ndarray) -> LsqReport:
    """Plain sampling reconstruction: least squares with the identity filter."""
    return lsq_solve(identity_multipliers(m), fam, m, y)


def solution_to_json(report: LsqReport) -> dict:
    return {
        "m_max": report.solution.m_max,
        "coeffs": [float(v) for v in report.solution.coeffs],
        "report": {
            "residual": report.residual,
            "rank": report.rank,
            "full_rank": report.full_rank,
            "frame_lower": report.frame_lower,
            "frame_upper": report.frame_upper,
            "sigma_max": float(report.singular_values[0]),
            "sigma_min": float(report.singular_values[-1]),
            "active_degrees": list(report.active_degrees),
        },
    }
