"""Gauss map, circle fitting, structure detection, Jacobian identities."""

import math

import numpy as np
import pytest

from slantgeo import catalog, cxstruct, exterior, gaussmap, jets
from slantgeo.catalog import build, load_config
from slantgeo.gaussmap import (detect_slant_structures, fit_circle,
                               gauss_field, gauss_jacobians)
from slantgeo.jets import grid_points, wirtinger_field

S = cxstruct.standard_structures()
SQRT2 = math.sqrt(2.0)


class TestGaussField:
    def test_affine_plane_constant(self):
        imm = build("ex2.1", {"alpha": 0.9})
        samples = gauss_field(imm, grid_points(imm.domain, 5, 5))
        nus = np.array([s.nu for s in samples])
        assert np.max(np.abs(nus - nus[0])) < 1e-14

    def test_samples_unit_decomposable_and_split(self):
        imm = build("ex2.3", {"k": 1.0})
        for s in gauss_field(imm, grid_points(imm.domain, 4, 4)):
            assert np.linalg.norm(s.nu) == pytest.approx(1.0, abs=1e-12)
            assert exterior.is_decomposable(s.nu)
            assert np.allclose(s.nu_plus + s.nu_minus, s.nu)
            assert np.linalg.norm(s.nu_plus) == pytest.approx(1 / SQRT2, abs=1e-9)
            assert np.linalg.norm(s.nu_minus) == pytest.approx(1 / SQRT2, abs=1e-9)

    def test_ex24_traces_circles_both_sides(self):
        imm = build("ex2.4", {"k": 1.0})
        samples = gauss_field(imm, grid_points(imm.domain, 11, 11))
        for pts in (np.array([s.plus3() for s in samples]),
                    np.array([s.minus3() for s in samples])):
            fit = fit_circle(pts)
            assert fit.classification == "circle"
            assert fit.residual < 1e-12

    def test_sphere_two_dimensional_spread(self):
        imm = build("sphere")
        samples = gauss_field(imm, grid_points(imm.domain, 11, 11))
        fit = fit_circle(np.array([s.plus3() for s in samples]))
        assert fit.classification == "not_circular"
        assert fit.residual > 0.01


class TestFitCircle:
    def test_singleton(self):
        pts = np.tile([0.5, 0.3, 0.2], (50, 1))
        assert fit_circle(pts).classification == "singleton"

    def test_synthetic_circle(self):
        a = 0.8
        r = 1 / SQRT2
        ts = np.linspace(0, 2 * math.pi, 51)
        pts = np.stack([r * math.sin(a) * np.cos(ts),
                        r * math.sin(a) * np.sin(ts),
                        np.full_like(ts, r * math.cos(a))], axis=1)
        fit = fit_circle(pts)
        assert fit.classification == "circle"
        assert np.allclose(fit.axis, [0, 0, 1], atol=1e-12)
        assert fit.residual < 1e-12
        assert fit.offset == pytest.approx(r * math.cos(a), abs=1e-12)
        assert fit.arc_extent == pytest.approx(2 * math.pi, abs=0.2)

    def test_random_sphere_points(self):
        rng = np.random.default_rng(7)
        pts = rng.normal(size=(50, 3))
        pts /= np.linalg.norm(pts, axis=1)[:, None] * SQRT2
        assert fit_circle(pts).classification == "not_circular"

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            fit_circle(np.zeros((2, 3)))


class TestDetection:
    def test_ex32_exactly_four(self):
        imm = build("ex3.2", {"k": 1.0})
        det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
        structures = det.all_structures()
        assert len(structures) == 4
        assert det.doubly_slant
        targets = {n: S[n].matrix for n in ("J1", "-J1", "J2", "-J2")}
        matched = set()
        for rs in structures:
            for n, M in targets.items():
                if np.max(np.abs(rs.J.matrix - M)) < 1e-6:
                    matched.add(n)
                    break
        assert matched == set(targets)
        a = math.acos(1 / SQRT2)
        angles = sorted(rs.alpha for rs in structures)
        assert angles[0] == pytest.approx(a, abs=1e-6)
        assert angles[1] == pytest.approx(a, abs=1e-6)
        assert angles[2] == pytest.approx(math.pi - a, abs=1e-6)
        assert angles[3] == pytest.approx(math.pi - a, abs=1e-6)

    def test_catenoid_no_structures(self):
        imm = build("catenoid-e3")
        det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
        assert det.plus.classification == "not_circular"
        assert det.minus.classification == "not_circular"
        assert det.all_structures() == []
        assert not det.doubly_slant

    def test_j1_holomorphic_curve_plus_singleton(self):
        imm = load_config({
            "name": "j1holo", "components": ["u", "v", "(u^2 - v^2)/2", "u*v"],
            "domain": [[0.2, 0.9], [0.1, 0.8]]})
        det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
        assert det.plus.classification == "singleton"
        assert det.plus.all_structures_slant
        assert np.max(np.abs(det.plus.structures[0].J.matrix - S["J1"].matrix)) < 1e-9
        assert det.minus.classification == "not_circular"

    def test_helical_cylinder_j1m_recovered(self):
        imm = build("helical-cylinder", {"a": 0.6, "b": -0.8})
        det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
        assert det.minus.classification == "circle"
        angles = sorted(rs.alpha for rs in det.minus.structures)
        assert angles[0] == pytest.approx(math.acos(0.6), abs=1e-6)
        found = any(np.max(np.abs(rs.J.matrix - s.matrix)) < 1e-6
                    for rs in det.minus.structures
                    for s in (S["J1m"], S["-J1m"]))
        assert found

    def test_insufficient_samples_rejected(self):
        imm = build("ex2.4")
        with pytest.raises(ValueError):
            detect_slant_structures(imm, grid_points(imm.domain, 3, 3))

    def test_detection_consistency_with_wirtinger(self):
        # every recovered (J, alpha) is confirmed by an independent
        # Wirtinger run: mean = min(alpha, pi - alpha), spread < 1e-6
        for name, params in (("ex3.2", {"k": 2.0}),
                             ("ex2.4", {"k": 1.0}),
                             ("helical-cylinder", {"a": 0.6, "b": -0.8})):
            imm = build(name, params)
            det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
            assert det.all_structures(), name
            vgrid = grid_points(imm.domain, 6, 6)
            for rs in det.all_structures():
                w = wirtinger_field(imm, vgrid, rs.J)
                assert w.spread < 1e-6, name
                assert w.theta_mean == pytest.approx(
                    min(rs.alpha, math.pi - rs.alpha), abs=1e-6)

    def test_trichotomy_over_catalog(self):
        # exactly one of: none / class singleton (infinitely many) /
        # exactly two / exactly four
        cases = {
            "sphere": "none", "catenoid-e3": "none",
            "ex2.2": "singleton", "ex2.8": "singleton",
            "ex3.1-whitney": "two",
            "ex2.4": "four", "ex3.2": "four", "ex2.3": "four",
        }
        for name, expect in cases.items():
            imm = build(name)
            det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
            n = len(det.all_structures())
            singleton = (det.plus.classification == "singleton"
                         or det.minus.classification == "singleton")
            if expect == "none":
                assert n == 0 and not singleton, name
            elif expect == "singleton":
                assert singleton, name
            elif expect == "two":
                assert n == 2 and not singleton, name
            else:
                assert n == 4 and not singleton, name

    def test_whitney_totally_real_pair(self):
        imm = build("ex3.1-whitney")
        det = detect_slant_structures(imm, grid_points(imm.domain, 12, 12))
        structures = det.all_structures()
        assert len(structures) == 2
        for rs in structures:
            assert rs.alpha == pytest.approx(math.pi / 2, abs=1e-6)


class TestGaussJacobians:
    def test_round_sphere_half(self):
        imm = build("sphere", {"r": 1.0}, domain=((0.4, 0.9), (0.0, 0.4)))
        out = gauss_jacobians(imm, grid_points(imm.domain, 33, 33))
        for s in out:
            assert s.det_plus == pytest.approx(0.5, abs=5e-5)
            assert s.det_minus == pytest.approx(0.5, abs=5e-5)
            assert s.residual_plus < 1e-4 and s.residual_minus < 1e-4

    def test_doubly_slant_all_vanish(self):
        imm = build("ex2.4", {"k": 1.0}, domain=((0.0, 0.5), (0.0, 0.5)))
        out = gauss_jacobians(imm, grid_points(imm.domain, 17, 17))
        for s in out:
            assert abs(s.det_plus) < 1e-10
            assert abs(s.det_minus) < 1e-10
            assert abs(s.G) < 1e-10 and abs(s.GD) < 1e-10

    def test_holomorphic_graph_minus_constant(self):
        imm = build("ex2.2", domain=((0.25, 0.55), (0.15, 0.45)))
        out = gauss_jacobians(imm, grid_points(imm.domain, 65, 65))
        for s in out:
            assert abs(s.det_minus) < 1e-12        # nu_minus is constant
            assert s.residual_minus < 1e-12        # G = GD exactly
            assert s.residual_plus < 1e-4

    def test_lemma_residuals_across_catalog(self):
        # curved fixtures need a step small enough for the finite
        # differences to sit under the 1e-4 tolerance
        cases = [
            ("ex2.3", {"k": 1.0}, ((0.1, 0.4), (0.2, 0.5)), 33),
            ("ex2.5", {"k": 1.0}, ((0.2, 0.5), (0.8, 1.1)), 33),
            ("ex3.1-whitney", {}, ((0.45, 0.7), (0.3, 0.55)), 81),
            ("catenoid-e3", {}, ((-0.2, 0.2), (0.4, 0.8)), 33),
            ("helical-cylinder", {"a": 0.6, "b": -0.8}, ((-0.25, 0.25), (-0.3, 0.3)), 33),
        ]
        for name, params, dom, n in cases:
            imm = build(name, params, domain=dom)
            out = gauss_jacobians(imm, grid_points(imm.domain, n, n))
            worst = max(max(s.residual_plus, s.residual_minus) for s in out)
            assert worst <= 1e-4, (name, worst)

    def test_doubly_slant_forces_flatness(self):
        # Every surface the detector reports doubly slant must be flat.
        for name, params in (("ex2.1", {"alpha": 0.8}), ("ex2.4", {"k": 2.0}),
                             ("ex2.5", {"k": 1.0}), ("ex2.6", {"p": 2.0, "q": 1.0}),
                             ("ex3.2", {"k": 0.5})):
            imm = build(name, params)
            det = detect_slant_structures(imm, grid_points(imm.domain, 11, 11))
            if not det.doubly_slant:
                continue
            us, vs = grid_points(imm.domain, 8, 8)
            J = S["J0"]
            for u in us:
                for v in vs:
                    pg = jets.point_geometry(imm, u, v, J)
                    assert max(abs(pg.G), abs(pg.GD)) <= 1e-6, name
