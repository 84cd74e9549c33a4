"""Exterior algebra: Gram-determinant oracle, Hodge star, eta bases, pairings."""

import itertools
import math

import numpy as np
import pytest

from slantgeo import exterior
from slantgeo.catalog import (ex27_tangent_basis, ex28_tangent_basis,
                              slant_plane_basis_4d, slant_plane_basis_8d)
from slantgeo.cxstruct import jalpha_block_matrix
from slantgeo.exterior import (ETA, MultiVector2k, OrientedPlane, hodge_star,
                               is_decomposable, j0_block_matrix, mu_constant,
                               omega_power_pairing, project_pm, star_pairing,
                               wedge2, zeta_hat_pairing)

EYE4 = np.eye(4)


def det_pairing_oracle(x, y, z, w):
    """<x^y, z^w> by the 2x2 determinant formula, independent of wedge2."""
    return np.linalg.det(np.array([[x @ z, x @ w], [y @ z, y @ w]]))


class TestWedge:
    def test_basis_case(self):
        out = wedge2(EYE4[0], EYE4[1])
        assert np.allclose(out, [1, 0, 0, 0, 0, 0])

    def test_antisymmetry_self(self):
        x = np.array([0.3, -1.2, 2.0, 0.7])
        assert np.allclose(wedge2(x, x), 0.0)
        y = np.array([1.0, 0.25, -0.5, 2.0])
        assert np.allclose(wedge2(x, y), -wedge2(y, x))

    def test_spec_example_against_det_oracle(self):
        x = np.array([1.0, 0.0, 0.0, 0.0])
        y = np.array([0.0, 1.0, 1.0, 0.0])
        w = wedge2(x, y)
        # e1^e2 + e1^e3, norm sqrt(2)
        assert np.allclose(w, [1, 1, 0, 0, 0, 0])
        assert np.linalg.norm(w) == pytest.approx(math.sqrt(2.0), abs=1e-15)
        for k, (i, j) in enumerate(exterior.PAIRS):
            assert w[k] == pytest.approx(
                det_pairing_oracle(x, y, EYE4[i], EYE4[j]), abs=1e-14)

    def test_gram_determinant_identity_random(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            x = rng.normal(size=4)
            y = rng.normal(size=4)
            w = wedge2(x, y)
            lhs = w @ w
            rhs = det_pairing_oracle(x, y, x, y)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

    def test_norm_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            x = rng.normal(size=4)
            y = rng.normal(size=4)
            w = wedge2(x, y)
            rhs = (x @ x) * (y @ y) - (x @ y) ** 2
            assert w @ w == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestHodgeStar:
    def test_basis_images(self):
        assert np.allclose(hodge_star([1, 0, 0, 0, 0, 0]), [0, 0, 0, 0, 0, 1])

    def test_eta_eigenvectors(self):
        for k in range(3):
            assert np.allclose(hodge_star(ETA[k]), ETA[k])
        for k in range(3, 6):
            assert np.allclose(hodge_star(ETA[k]), -ETA[k])

    def test_involution_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            xi = rng.normal(size=6)
            assert np.allclose(hodge_star(hodge_star(xi)), xi)

    def test_star_is_orthogonal_complement(self):
        # *(e1^e3) must carry the plane span{e2, e4} with matching orientation
        rng = np.random.default_rng(5)
        for _ in range(20):
            A = np.linalg.qr(rng.normal(size=(4, 4)))[0]
            if np.linalg.det(A) < 0:
                A[:, 3] = -A[:, 3]
            xi = wedge2(A[:, 0], A[:, 1])
            comp = wedge2(A[:, 2], A[:, 3])
            assert np.allclose(hodge_star(xi), comp, atol=1e-12)

    def test_eta_bases_orthonormal(self):
        assert np.allclose(ETA @ ETA.T, np.eye(6), atol=1e-15)

    def test_eta_roundtrip_isometry(self):
        rng = np.random.default_rng(1)
        xi = rng.normal(size=6)
        coords = ETA @ xi
        back = ETA.T @ coords
        assert np.allclose(back, xi, atol=1e-15)
        assert np.linalg.norm(coords) == pytest.approx(np.linalg.norm(xi), abs=1e-14)


class TestProjections:
    def test_basis_split(self):
        plus, minus = project_pm([1, 0, 0, 0, 0, 0])
        s = 1.0 / math.sqrt(2.0)
        assert np.allclose(plus, s * ETA[0])
        assert np.allclose(minus, s * ETA[3])

    def test_self_dual_fixed(self):
        plus, minus = project_pm(ETA[0])
        assert np.allclose(plus, ETA[0])
        assert np.allclose(minus, 0.0)

    def test_decomposable_on_product_spheres(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            x = rng.normal(size=4)
            y = rng.normal(size=4)
            xi = wedge2(x, y)
            xi /= np.linalg.norm(xi)
            plus, minus = project_pm(xi)
            assert np.linalg.norm(plus) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
            assert np.linalg.norm(minus) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
            assert np.allclose(plus + minus, xi)


class TestDecomposability:
    def test_wedges_are_decomposable(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            xi = wedge2(rng.normal(size=4), rng.normal(size=4))
            assert is_decomposable(xi)
            assert abs(star_pairing(xi)) <= 1e-12 * max(1e-30, xi @ xi)

    def test_non_decomposable_sum(self):
        xi = np.array([1.0, 0, 0, 0, 0, 1.0])  # e12 + e34
        assert star_pairing(xi) == pytest.approx(2.0)
        assert not is_decomposable(xi)

    def test_equal_projection_characterization(self):
        rng = np.random.default_rng(33)
        for _ in range(200):
            xi = rng.normal(size=6)
            plus, minus = project_pm(xi)
            balanced = abs(plus @ plus - minus @ minus) <= 1e-9 * (xi @ xi)
            assert balanced == is_decomposable(xi)


class TestOrientedPlane:
    def test_from_vectors_orthonormalizes(self):
        p = OrientedPlane.from_vectors([2.0, 0, 0, 0], [1.0, 1.0, 0, 0])
        e1, e2 = p.basis
        assert np.allclose(e1, [1, 0, 0, 0])
        assert np.allclose(e2, [0, 1, 0, 0])
        assert np.allclose(p.plucker, wedge2(e1, e2))

    def test_collinear_rejected(self):
        with pytest.raises(ValueError):
            OrientedPlane.from_vectors([1.0, 0, 0, 0], [2.0, 0, 0, 0])

    def test_plucker_unit_decomposable(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            p = OrientedPlane.from_vectors(rng.normal(size=4), rng.normal(size=4))
            assert np.linalg.norm(p.plucker) == pytest.approx(1.0, abs=1e-12)
            assert abs(star_pairing(p.plucker)) < 1e-12

    def test_factorization_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            p = OrientedPlane.from_vectors(rng.normal(size=4), rng.normal(size=4))
            q = OrientedPlane.from_twovector(p.plucker)
            assert np.allclose(q.plucker, p.plucker, atol=1e-10)
            e1, e2 = q.basis
            assert e1 @ e1 == pytest.approx(1.0, abs=1e-12)
            assert abs(e1 @ e2) < 1e-12

    def test_reversed_flips_plucker(self):
        p = OrientedPlane.from_vectors([1.0, 0, 0, 0], [0, 1.0, 0, 0])
        assert np.allclose(p.reversed().plucker, -p.plucker)


class TestOmegaPowerPairing:
    def test_k1_holomorphic_pair(self):
        J0 = j0_block_matrix(4)
        x = EYE4[0]
        assert omega_power_pairing(J0, [x, J0 @ x]) == pytest.approx(-1.0)

    def test_k1_totally_real_pair(self):
        J0 = j0_block_matrix(4)
        assert omega_power_pairing(J0, [EYE4[0], EYE4[1]]) == pytest.approx(0.0)

    def test_rejects_bad_sizes(self):
        J0 = j0_block_matrix(4)
        with pytest.raises(ValueError):
            omega_power_pairing(J0, [EYE4[0]] * 6)

    def test_k2_against_shuffle_wedge_oracle(self):
        # Independent oracle: coordinate expansion of Omega ^ Omega as a
        # 4-form (2,2)-shuffle sum, rescaled by 2!2!/4! to the multivector
        # pairing convention.
        rng = np.random.default_rng(17)
        omega = rng.normal(size=(8, 8))
        omega = omega - omega.T

        def shuffle_wedge(vectors):
            G = np.array([[vi @ omega @ vj for vj in vectors] for vi in vectors])
            total = (G[0, 1] * G[2, 3] - G[0, 2] * G[1, 3] + G[0, 3] * G[1, 2]
                     + G[2, 3] * G[0, 1] - G[1, 3] * G[0, 2] + G[1, 2] * G[0, 3])
            return total * (math.factorial(2) * math.factorial(2)
                            / math.factorial(4))

        for _ in range(50):
            vs = [rng.normal(size=8) for _ in range(4)]
            assert omega_power_pairing(omega, vs) == pytest.approx(
                shuffle_wedge(vs), rel=1e-10, abs=1e-10)

    def test_ex27_tangent_plane_pairing(self):
        # The printed fixture is pi/4-slant for every k (the source's
        # cos^-1(k) does not match its own chart); Lemma's identity
        # mu_2 cos^2(alpha) still holds with the measured angle.
        vs = ex27_tangent_basis(k=0.5)
        V = MultiVector2k.from_wedge(vs).unit()
        measured = _measured_wirtinger_4plane(vs, j0_block_matrix(8))
        assert measured == pytest.approx(math.pi / 4, abs=1e-12)
        got = abs(zeta_hat_pairing(V))
        assert got == pytest.approx(mu_constant(2) * math.cos(measured) ** 2,
                                    abs=1e-12)
        assert got == pytest.approx(1.0 / 6.0, abs=1e-12)


def _measured_wirtinger_4plane(vectors, J):
    """Wirtinger angle of span(vectors) sampled over many directions."""
    basis = np.linalg.qr(np.array(vectors).T)[0]
    rng = np.random.default_rng(0)
    angles = []
    for _ in range(32):
        x = basis @ rng.normal(size=basis.shape[1])
        x /= np.linalg.norm(x)
        Jx = J @ x
        tang = basis.T @ Jx
        angles.append(math.acos(min(1.0, np.linalg.norm(tang))))
    assert max(angles) - min(angles) < 1e-10
    return float(np.mean(angles))


class TestZetaHatPairing:
    def test_k1_holomorphic_unit(self):
        J0 = j0_block_matrix(4)
        x = EYE4[0]
        V = MultiVector2k.from_wedge([x, J0 @ x]).unit()
        assert zeta_hat_pairing(V) == pytest.approx(mu_constant(1), abs=1e-14)
        assert mu_constant(1) == 1.0

    def test_k1_totally_real(self):
        V = MultiVector2k.from_wedge([EYE4[0], EYE4[1]])
        assert zeta_hat_pairing(V) == pytest.approx(0.0, abs=1e-14)

    def test_ex24_slant_plane(self):
        # tangent plane of the k=1 product fixture at v=0: 45-degree slant
        xu = np.array([1.0, 0.0, 0.0, 0.0])
        xv = np.array([0.0, 0.0, 1.0, 1.0]) / math.sqrt(2.0)
        V = MultiVector2k.from_wedge([xu, xv])
        assert zeta_hat_pairing(V) == pytest.approx(math.cos(math.pi / 4), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 6, math.pi / 4,
                                       math.pi / 3, math.pi / 2])
    def test_lemma_identity_k1(self, alpha):
        vs = slant_plane_basis_4d(alpha)
        V = MultiVector2k.from_wedge(vs).unit()
        assert abs(zeta_hat_pairing(V) - mu_constant(1) * math.cos(alpha)) <= 1e-10

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 6, math.pi / 4,
                                       math.pi / 3, math.pi / 2])
    def test_lemma_identity_k2(self, alpha):
        vs = slant_plane_basis_8d(alpha)
        V = MultiVector2k.from_wedge(vs).unit()
        assert mu_constant(2) == pytest.approx(1.0 / 3.0)
        assert abs(zeta_hat_pairing(V)
                   - mu_constant(2) * math.cos(alpha) ** 2) <= 1e-10

    def test_ex28_c4_holomorphic_pairing(self):
        # curved complex-surface tangent in C^4: alpha = 0, pairing = mu_2
        vs = ex28_tangent_basis()
        V = MultiVector2k.from_wedge(vs).unit()
        assert abs(zeta_hat_pairing(V)) == pytest.approx(mu_constant(2), abs=1e-12)

    def test_ex28_jalpha_pairing_on_compatible_plane(self):
        # The alpha-slant statement for J_alpha on E^8 needs the complex
        # plane to be totally real for the interleaved conjugate structure
        # (automatic in E^4 only); span{e1, e5, e3, e7} satisfies it.
        eye = np.eye(8)
        vs = [eye[0], eye[4], eye[2], eye[6]]
        V = MultiVector2k.from_wedge(vs).unit()
        idx = list(itertools.combinations(range(8), 4))
        for alpha in (math.pi / 6, math.pi / 3):
            omega = jalpha_block_matrix(alpha, 8)
            measured = _measured_wirtinger_4plane(vs, omega)
            assert measured == pytest.approx(alpha, abs=1e-10)
            total = sum(c * omega_power_pairing(omega, [eye[i] for i in I])
                        for c, I in zip(V.coords, idx))
            assert abs(total) == pytest.approx(
                mu_constant(2) * math.cos(alpha) ** 2, abs=1e-10)


class TestMultiVector2k:
    def test_coordinate_count_enforced(self):
        with pytest.raises(ValueError):
            MultiVector2k(dim=8, degree=4, coords=np.zeros(10))

    def test_size_limits(self):
        with pytest.raises(ValueError):
            MultiVector2k(dim=10, degree=4, coords=np.zeros(210))

    def test_wedge_norm_orthonormal_vectors(self):
        V = MultiVector2k.from_wedge(np.eye(8)[:4])
        assert V.norm() == pytest.approx(1.0)
