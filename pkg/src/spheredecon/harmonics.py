"""Real spherical harmonics on S^2, orthonormal under the probability measure.

The basis is indexed by (degree m, order ell) with ell = 1 .. 2m+1, laid out
degree-major: coefficient index of (m, ell) is m^2 + ell - 1.  Normalization
uses mu(S^2) = 1, so each basis value is sqrt(4*pi) times the surface-measure
convention and the (0, 1) function is identically 1.  With this choice the
addition theorem reads sum_ell Y_m^ell(x) Y_m^ell(y) = (2m+1) P_m(cos rho),
and the squared l2 norm of a coefficient vector equals the squared L2 norm
of the synthesized function.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .special_functions import JacobiParams, jacobi_all
from .sphere_geometry import SpherePoint, geodesic_distance

__all__ = [
    "CoefficientVector",
    "num_coeffs",
    "block_slice",
    "index_of",
    "degree_of_index",
    "normalized_legendre",
    "basis_matrix",
    "eval_basis",
    "eval_poly",
    "eval_poly_many",
    "zonal_kernel",
    "sobolev_norm",
    "sobolev_weights",
    "project",
    "embed",
    "random_poly",
    "coeffs_to_json",
    "coeffs_from_json",
    "write_coeffs_json",
    "read_coeffs_json",
]

_S2 = JacobiParams.sphere(2)


def num_coeffs(m_max: int) -> int:
    return (m_max + 1) ** 2


def block_slice(m: int) -> slice:
    """Slice of the degree-m coefficient block."""
    return slice(m * m, (m + 1) * (m + 1))


def index_of(m: int, ell: int) -> int:
    if not (1 <= ell <= 2 * m + 1):
        raise ValueError(f"order ell must be in 1..{2 * m + 1} for degree {m}, got {ell}")
    return m * m + ell - 1


def degree_of_index(k: int) -> int:
    return int(math.isqrt(k))


@dataclass(frozen=True)
class CoefficientVector:
    """Generalized Fourier coefficients up to degree m_max, degree-major."""

    m_max: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", c)
        if c.shape != (num_coeffs(self.m_max),):
            raise ValueError(
                f"expected {num_coeffs(self.m_max)} coefficients for m_max={self.m_max}, "
                f"got shape {c.shape}"
            )

    def block(self, m: int) -> np.ndarray:
        if not (0 <= m <= self.m_max):
            raise ValueError(f"degree {m} out of range 0..{self.m_max}")
        return self.coeffs[block_slice(m)]

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def normalized_legendre(m_max: int, theta: np.ndarray) -> np.ndarray:
    """Colatitude factors Q[m, k] of the orthonormal basis, shape (n, m_max+1, m_max+1).

    Q[:, m, k] = sqrt((2m+1)(m-k)!/(m+k)!) * P_m^k(cos theta) for 0 <= k <= m
    (no Condon-Shortley phase), computed by the scaled recurrences: sectoral
    seed Q_{k,k} = sqrt((2k+1)/(2k)) sin(theta) Q_{k-1,k-1}, then upward in
    degree.  The scaling keeps every entry O(sqrt(2m+1)), stable far beyond
    m = 200.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    x = np.cos(theta)
    s = np.sin(theta)
    n = theta.size
    q = np.zeros((n, m_max + 1, m_max + 1))
    q[:, 0, 0] = 1.0
    for k in range(1, m_max + 1):
        q[:, k, k] = math.sqrt((2 * k + 1) / (2 * k)) * s * q[:, k - 1, k - 1]
    for k in range(m_max + 1):
        for m in range(k + 1, m_max + 1):
            alpha = math.sqrt((2 * m - 1) * (2 * m + 1) / ((m - k) * (m + k)))
            q[:, m, k] = alpha * x * q[:, m - 1, k]
            if m - k >= 2:
                beta = math.sqrt(
                    (2 * m + 1) * (m - 1 - k) * (m - 1 + k) / ((2 * m - 3) * (m - k) * (m + k))
                )
                q[:, m, k] -= beta * q[:, m - 2, k]
    return q


def basis_matrix(m_max: int, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Matrix of basis values, rows = points, columns = degree-major indices."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    q = normalized_legendre(m_max, thetas)
    n = thetas.size
    out = np.empty((n, num_coeffs(m_max)))
    ks = np.arange(1, m_max + 1)
    cos_k = np.cos(phis[:, None] * ks[None, :])
    sin_k = np.sin(phis[:, None] * ks[None, :])
    sqrt2 = math.sqrt(2.0)
    for m in range(m_max + 1):
        base = m * m
        # orders ell = 1..2m+1 map to azimuthal k = ell - 1 - m in -m..m
        for k in range(-m, 0):
            out[:, base + k + m] = sqrt2 * q[:, m, -k] * sin_k[:, -k - 1]
        out[:, base + m] = q[:, m, 0]
        for k in range(1, m + 1):
            out[:, base + k + m] = sqrt2 * q[:, m, k] * cos_k[:, k - 1]
    return out


def eval_basis(m: int, ell: int, p: SpherePoint) -> float:
    """Value of the basis function (m, ell) at a point."""
    col = index_of(m, ell)
    return float(basis_matrix(m, np.array([p.theta]), np.array([p.phi]))[0, col])


def eval_poly_many(c: CoefficientVector, thetas, phis) -> np.ndarray:
    """Synthesis at many points."""
    return basis_matrix(c.m_max, thetas, phis) @ c.coeffs


def eval_poly(c: CoefficientVector, p: SpherePoint) -> float:
    return float(eval_poly_many(c, np.array([p.theta]), np.array([p.phi]))[0])


def zonal_kernel(m: int, x: SpherePoint, y: SpherePoint) -> float:
    """(2m+1) P_m(cos rho(x, y)): the reproducing kernel of degree m."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    rho = geodesic_distance(x, y)
    return float((2 * m + 1) * jacobi_all(m, _S2, math.cos(rho))[m])


def sobolev_weights(m_max: int, sigma: float) -> np.ndarray:
    """Per-coefficient weights (1 + m(m+1))^sigma in the degree-major layout."""
    degrees = np.concatenate([np.full(2 * m + 1, m) for m in range(m_max + 1)])
    return (1.0 + degrees * (degrees + 1.0)) ** sigma


def sobolev_norm(c: CoefficientVector, sigma: float) -> float:
    """H^sigma norm: sqrt(sum c_{m,ell}^2 (1 + m(m+1))^sigma)."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    return float(np.sqrt(np.sum(c.coeffs**2 * sobolev_weights(c.m_max, sigma))))


def project(c: CoefficientVector, m: int) -> CoefficientVector:
    """Orthogonal projection onto the degree-m eigenspace."""
    if not (0 <= m <= c.m_max):
        raise ValueError(f"degree {m} out of range 0..{c.m_max}")
    out = np.zeros_like(c.coeffs)
    out[block_slice(m)] = c.block(m)
    return CoefficientVector(c.m_max, out)


def embed(c: CoefficientVector, m_max: int) -> CoefficientVector:
    """Zero-pad (or validate-truncate) to a new maximal degree."""
    if m_max < c.m_max:
        tail = c.coeffs[num_coeffs(m_max):]
        if np.any(tail != 0.0):
            raise ValueError("cannot truncate nonzero high-degree coefficients")
        return CoefficientVector(m_max, c.coeffs[: num_coeffs(m_max)].copy())
    out = np.zeros(num_coeffs(m_max))
    out[: c.coeffs.size] = c.coeffs
    return CoefficientVector(m_max, out)


def random_poly(
    m_max: int,
    sigma: float,
    seed: int,
    unit_norm: bool = False,
) -> CoefficientVector:
    """Random coefficients with degree-block norms (1 + m(m+1))^{-sigma/2 - 1/2}.

    The extra -1/2 makes the H^sigma norm of the full (infinite) model only
    marginally divergent, so truncations behave like functions of smoothness
    sigma.  Deterministic per seed; unit_norm rescales to H^sigma norm 1.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(num_coeffs(m_max))
    for m in range(m_max + 1):
        block = rng.standard_normal(2 * m + 1)
        block /= np.linalg.norm(block)
        coeffs[block_slice(m)] = block * (1.0 + m * (m + 1.0)) ** (-sigma / 2 - 0.5)
    c = CoefficientVector(m_max, coeffs)
    if unit_norm:
        c = CoefficientVector(m_max, coeffs / sobolev_norm(c, sigma))
    return c


def coeffs_to_json(c: CoefficientVector) -> dict:
    return {"m_max": c.m_max, "coeffs": [float(v) for v in c.coeffs]}


def coeffs_from_json(obj: dict) -> CoefficientVector:
    return CoefficientVector(int(obj["m_max"]), np.asarray(obj["coeffs"], dtype=float))


def write_coeffs_json(path, c: CoefficientVector) -> None:
    from .artifacts import write_json

    write_json(path, coeffs_to_json(c))


def read_coeffs_json(path) -> CoefficientVector:
    with open(path) as fh:
        return coeffs_from_json(json.load(fh))
