"""Basis orthonormality, addition theorem, Sobolev norms, synthesis."""

import math

import numpy as np
import pytest
from scipy.special import lpmv

from conftest import product_quadrature_grid, random_sphere_points
from spheredecon.harmonics import (
    CoefficientVector,
    basis_matrix,
    block_slice,
    coeffs_from_json,
    coeffs_to_json,
    embed,
    eval_basis,
    eval_poly,
    eval_poly_many,
    index_of,
    normalized_legendre,
    num_coeffs,
    project,
    random_poly,
    sobolev_norm,
    zonal_kernel,
)
from spheredecon.sphere_geometry import SpherePoint


class TestLayout:
    def test_index_of(self):
        assert index_of(0, 1) == 0
        assert index_of(3, 1) == 9
        assert index_of(3, 7) == 15

    def test_index_bounds(self):
        with pytest.raises(ValueError):
            index_of(2, 6)

    def test_num_coeffs(self):
        assert num_coeffs(5) == 36


class TestNormalizedLegendre:
    def test_against_scipy_lpmv(self):
        thetas = np.linspace(0.05, math.pi - 0.05, 9)
        q = normalized_legendre(12, thetas)
        x = np.cos(thetas)
        for m in range(13):
            for k in range(m + 1):
                norm = math.sqrt(
                    (2 * m + 1) * math.exp(
                        math.lgamma(m - k + 1) - math.lgamma(m + k + 1)
                    )
                )
                # scipy includes the Condon-Shortley phase (-1)^k
                expected = norm * lpmv(k, m, x) * (-1) ** k
                np.testing.assert_allclose(q[:, m, k], expected, rtol=1e-10, atol=1e-10)

    def test_stable_at_degree_200(self):
        q = normalized_legendre(200, np.array([1.234]))
        assert np.all(np.isfinite(q))
        # addition theorem at a single point for the top degree
        total = q[0, 200, 0] ** 2 + 2 * np.sum(q[0, 200, 1:] ** 2)
        assert total == pytest.approx(401.0, rel=1e-10)


class TestEvalBasis:
    def test_constant_function(self):
        for theta, phi in [(0.0, 0.0), (1.0, 2.0), (math.pi, 0.0)]:
            assert eval_basis(0, 1, SpherePoint(theta, phi)) == pytest.approx(1.0, abs=1e-14)

    def test_addition_theorem_diagonal(self):
        thetas, phis = random_sphere_points(20, seed=3)
        mat = basis_matrix(10, thetas, phis)
        for m in range(11):
            sums = np.sum(mat[:, block_slice(m)] ** 2, axis=1)
            np.testing.assert_allclose(sums, 2 * m + 1, atol=1e-10)

    def test_orthonormality_product_quadrature(self):
        tt, pp, ww = product_quadrature_grid(40, 80)
        mat = basis_matrix(8, tt, pp)
        gram = (mat * ww[:, None]).T @ mat
        np.testing.assert_allclose(gram, np.eye(num_coeffs(8)), atol=1e-8)


class TestEvalPoly:
    def test_constant(self):
        c = CoefficientVector(3, np.eye(16)[0])
        assert eval_poly(c, SpherePoint(0.7, 1.1)) == pytest.approx(1.0, abs=1e-14)

    def test_unit_coefficient_linearity(self):
        p = SpherePoint(1.234, 4.321)
        for m, ell in [(1, 2), (3, 5), (4, 9)]:
            c = CoefficientVector(4, np.eye(25)[index_of(m, ell)])
            assert eval_poly(c, p) == pytest.approx(eval_basis(m, ell, p), abs=1e-13)

    def test_matches_naive_sum_oracle(self):
        rng = np.random.default_rng(11)
        c = CoefficientVector(5, rng.standard_normal(36))
        thetas, phis = random_sphere_points(10, seed=8)
        vals = eval_poly_many(c, thetas, phis)
        for i in range(10):
            p = SpherePoint(thetas[i], phis[i])
            naive = sum(
                c.coeffs[index_of(m, ell)] * eval_basis(m, ell, p)
                for m in range(6)
                for ell in range(1, 2 * m + 2)
            )
            assert vals[i] == pytest.approx(naive, rel=1e-12, abs=1e-12)

    def test_parseval_against_quadrature(self):
        tt, pp, ww = product_quadrature_grid(44, 88)
        c = random_poly(10, sigma=1.0, seed=5)
        vals = eval_poly_many(c, tt, pp)
        integral = float(np.sum(vals**2 * ww))
        assert integral == pytest.approx(c.l2_norm() ** 2, abs=1e-8)


class TestZonalKernel:
    def test_diagonal_value(self):
        x = SpherePoint(0.9, 2.5)
        assert zonal_kernel(4, x, x) == pytest.approx(9.0, rel=1e-13)

    def test_antipodal_degree_one(self):
        x = SpherePoint(0.0, 0.0)
        y = SpherePoint(math.pi, 0.0)
        assert zonal_kernel(1, x, y) == pytest.approx(-3.0, rel=1e-13)

    def test_addition_theorem_off_diagonal(self):
        thetas, phis = random_sphere_points(100, seed=21)
        xs = [SpherePoint(t, p) for t, p in zip(thetas[:50], phis[:50])]
        ys = [SpherePoint(t, p) for t, p in zip(thetas[50:], phis[50:])]
        for m in (1, 3, 8, 14, 20):
            for x, y in list(zip(xs, ys))[:10]:
                lhs = zonal_kernel(m, x, y)
                bx = basis_matrix(m, np.array([x.theta]), np.array([x.phi]))[0, block_slice(m)]
                by = basis_matrix(m, np.array([y.theta]), np.array([y.phi]))[0, block_slice(m)]
                assert lhs == pytest.approx(float(bx @ by), abs=1e-10)

    def test_rotation_invariance(self):
        # pairs at the same distance give the same kernel value
        rng = np.random.default_rng(17)
        for _ in range(10):
            rho = rng.uniform(0.2, math.pi - 0.2)
            x1 = SpherePoint(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            # rotate: pick any point at distance rho from x1 via a random bearing
            y1 = _point_at_distance(x1, rho, rng.uniform(0, 2 * math.pi))
            x2 = SpherePoint(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            y2 = _point_at_distance(x2, rho, rng.uniform(0, 2 * math.pi))
            for m in (2, 7):
                assert zonal_kernel(m, x1, y1) == pytest.approx(
                    zonal_kernel(m, x2, y2), abs=1e-10
                )


def _point_at_distance(x: SpherePoint, rho: float, bearing: float) -> SpherePoint:
    """A point at geodesic distance rho from x along the given bearing."""
    u = x.unit_vector()
    ref = np.array([0.0, 0.0, 1.0]) if abs(u[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(u, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    direction = math.cos(bearing) * e1 + math.sin(bearing) * e2
    v = math.cos(rho) * u + math.sin(rho) * direction
    v /= np.linalg.norm(v)
    theta = math.acos(max(-1.0, min(1.0, v[2])))
    phi = math.atan2(v[1], v[0]) % (2 * math.pi)
    return SpherePoint(theta, phi)


class TestSobolevNorm:
    def test_constant_any_sigma(self):
        c = CoefficientVector(4, np.eye(25)[0])
        for sigma in (0.0, 1.0, 3.7):
            assert sobolev_norm(c, sigma) == pytest.approx(1.0, abs=1e-14)

    def test_sigma_zero_is_l2(self):
        c = random_poly(6, sigma=0.5, seed=2)
        assert sobolev_norm(c, 0.0) == pytest.approx(c.l2_norm(), rel=1e-14)

    def test_single_degree_one_term(self):
        c = CoefficientVector(2, np.eye(9)[index_of(1, 2)])
        assert sobolev_norm(c, 2.0) == pytest.approx(3.0, rel=1e-14)

    def test_monotone_in_sigma(self):
        c = random_poly(8, sigma=1.0, seed=9)
        assert sobolev_norm(c, 2.5) >= sobolev_norm(c, 1.5) >= sobolev_norm(c, 0.0)

    def test_rejects_negative_sigma(self):
        with pytest.raises(ValueError):
            sobolev_norm(random_poly(2, 1.0, 1), -0.5)


class TestProject:
    def test_constant_projection(self):
        c = CoefficientVector(3, np.eye(16)[0])
        assert np.array_equal(project(c, 0).coeffs, c.coeffs)

    def test_decomposition(self):
        c = random_poly(5, sigma=1.0, seed=13)
        total = np.zeros_like(c.coeffs)
        for m in range(6):
            total += project(c, m).coeffs
        np.testing.assert_array_equal(total, c.coeffs)

    def test_disjoint_supports(self):
        c = random_poly(5, sigma=1.0, seed=14)
        assert float(project(c, 2).coeffs @ project(c, 4).coeffs) == 0.0


class TestRandomPoly:
    def test_deterministic(self):
        a = random_poly(7, sigma=2.0, seed=4)
        b = random_poly(7, sigma=2.0, seed=4)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_unit_norm(self):
        c = random_poly(9, sigma=1.5, seed=6, unit_norm=True)
        assert sobolev_norm(c, 1.5) == pytest.approx(1.0, abs=1e-12)

    def test_block_decay_profile(self):
        c = random_poly(12, sigma=2.0, seed=8)
        for m in range(13):
            assert np.linalg.norm(c.block(m)) == pytest.approx(
                (1 + m * (m + 1.0)) ** (-1.5), rel=1e-12
            )


class TestEmbedAndJson:
    def test_embed_roundtrip(self):
        c = random_poly(4, sigma=1.0, seed=3)
        big = embed(c, 9)
        assert big.m_max == 9
        np.testing.assert_array_equal(big.coeffs[: num_coeffs(4)], c.coeffs)
        back = embed(big, 4)
        np.testing.assert_array_equal(back.coeffs, c.coeffs)

    def test_truncation_guard(self):
        c = random_poly(4, sigma=1.0, seed=3)
        with pytest.raises(ValueError):
            embed(c, 2)

    def test_json_roundtrip(self):
        c = random_poly(3, sigma=1.0, seed=1)
        back = coeffs_from_json(coeffs_to_json(c))
        assert back.m_max == 3
        np.testing.assert_array_equal(back.coeffs, c.coeffs)
