# -*- encoding: utf-8 -*-
"""
Tests for gricci geometry module.

Tests configurations and geodesic endpoints, the Mobius action, the
propagator forms P0 and P1, the geodesic chart and the cutoff language.
"""

import math

import numpy as np
import pytest

from gricci.exceptions import CutoffError, GeometryError
from gricci.geometry import (
    BoundaryPoint,
    ConfigPoint,
    CutoffSpec,
    HalfspaceCoords,
    Jet,
    MobiusIsometry,
    Model,
    VerticalCoords,
    cutoff_theta,
    eval_p0,
    eval_p0_coordinates,
    eval_p1,
    eval_p1_coordinates,
    from_halfspace_coords,
    geodesic_endpoints,
    is_vertical,
    orthogonality_residual,
    p0_components,
    p1_components,
    parse_cutoff,
    random_isometry,
    sample_configurations,
    to_halfspace_coords,
)
from gricci.geometry.jet import sqrt

SEMICIRCLE_HEIGHT = math.sqrt(0.75)


def random_vectors(count, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(count, 6)), rng.normal(size=(count, 6))


def sphere_integral(model, centre, radius, nodes=32):
    """Integral of P0 over a small outward sphere of q2 around q1."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = (x + 1) * math.pi / 2
    wt = w * math.pi / 2
    phi = np.arange(2 * nodes) * math.pi / nodes
    wp = math.pi / nodes
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    normal = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    d_theta = np.stack([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)], axis=-1)
    d_phi = np.stack([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), np.zeros_like(th)], axis=-1)
    q1 = np.broadcast_to(np.asarray(centre, dtype=float), normal.shape)
    cfg = ConfigPoint(model, q1, q1 + radius * normal)
    zeros = np.zeros_like(normal)
    v1 = np.concatenate([zeros, radius * d_theta], axis=-1)
    v2 = np.concatenate([zeros, radius * d_phi], axis=-1)
    values = eval_p0(cfg, v1, v2)
    return np.sum(values * wt[:, None] * wp)


class TestConfigPoint:
    """Tests for configuration validation and conversions."""

    def test_coincident_points_rejected(self):
        with pytest.raises(GeometryError, match="coincide"):
            ConfigPoint(Model.BALL, [0.1, 0.2, 0.3], [0.1, 0.2, 0.3])

    def test_ball_points_inside(self):
        with pytest.raises(GeometryError, match="unit ball"):
            ConfigPoint(Model.BALL, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0])

    def test_halfspace_points_above_plane(self):
        with pytest.raises(GeometryError, match="boundary plane"):
            ConfigPoint(Model.HALFSPACE, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])

    def test_shape_mismatch(self):
        with pytest.raises(GeometryError):
            ConfigPoint(Model.BALL, [0.0, 0.0, 0.1], [[0.0, 0.0, 0.2]])

    def test_model_round_trip(self):
        cfg = sample_configurations(Model.HALFSPACE, 20, seed=3)
        back = cfg.to_model(Model.BALL).to_model("halfspace")
        np.testing.assert_allclose(back.stacked, cfg.stacked, atol=1e-12)

    def test_to_dict(self):
        cfg = ConfigPoint(Model.BALL, [0.0, 0.0, -0.5], [0.0, 0.0, 0.5])
        assert cfg.to_dict() == {"model": "ball", "q1": [0.0, 0.0, -0.5], "q2": [0.0, 0.0, 0.5]}


class TestGeodesicEndpoints:
    """Tests for the endpoint map."""

    def test_ball_diameter(self):
        cfg = ConfigPoint(Model.BALL, [0.0, 0.0, -0.5], [0.0, 0.0, 0.5])
        z1, z2 = geodesic_endpoints(cfg)
        np.testing.assert_allclose(z1.coords, [0.0, 0.0, -1.0], atol=1e-12)
        np.testing.assert_allclose(z2.coords, [0.0, 0.0, 1.0], atol=1e-12)

    def test_halfspace_semicircle(self):
        cfg = ConfigPoint(Model.HALFSPACE, [-0.5, 0.0, SEMICIRCLE_HEIGHT], [0.5, 0.0, SEMICIRCLE_HEIGHT])
        z1, z2 = geodesic_endpoints(cfg)
        assert z1.to_complex() == pytest.approx(-1.0)
        assert z2.to_complex() == pytest.approx(1.0)

    def test_vertical_pair(self):
        cfg = ConfigPoint(Model.HALFSPACE, [1.0, 2.0, 1.0], [1.0, 2.0, 3.0])
        assert is_vertical(cfg)
        z1, z2 = geodesic_endpoints(cfg)
        assert z1.to_complex() == pytest.approx(1.0 + 2.0j)
        assert z2.is_infinite
        w1, w2 = geodesic_endpoints(cfg.flipped())
        assert w1.is_infinite
        assert w2.to_complex() == pytest.approx(1.0 + 2.0j)

    def test_is_vertical_needs_halfspace(self):
        with pytest.raises(GeometryError):
            is_vertical(ConfigPoint(Model.BALL, [0.0, 0.0, 0.1], [0.0, 0.0, 0.2]))

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_orthogonality(self, model):
        cfg = sample_configurations(model, 200, seed=11)
        assert np.max(orthogonality_residual(cfg)) < 1e-9

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_flip_swaps_endpoints(self, model):
        cfg = sample_configurations(model, 50, seed=5)
        z1, z2 = geodesic_endpoints(cfg)
        w1, w2 = geodesic_endpoints(cfg.flipped())
        np.testing.assert_allclose(w1.to_sphere(), z2.to_sphere(), atol=1e-10)
        np.testing.assert_allclose(w2.to_sphere(), z1.to_sphere(), atol=1e-10)

    def test_models_agree(self):
        cfg = sample_configurations(Model.HALFSPACE, 50, seed=8)
        half = geodesic_endpoints(cfg)
        ball = geodesic_endpoints(cfg.to_model(Model.BALL))
        for a, b in zip(half, ball):
            np.testing.assert_allclose(a.to_sphere(), b.coords, atol=1e-10)

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_mobius_equivariance(self, model):
        cfg = sample_configurations(model, 40, seed=2, radius=0.6 if model is Model.BALL else None)
        iso = random_isometry(seed=4, scale=0.5)
        moved = geodesic_endpoints(iso.act(cfg))
        for before, after in zip(geodesic_endpoints(cfg), moved):
            np.testing.assert_allclose(iso.act_boundary(before).to_sphere(), after.to_sphere(), atol=1e-9)


class TestMobiusIsometry:
    """Tests for the PSL(2, C) action."""

    def test_normalized(self):
        iso = MobiusIsometry(2, 0, 0, 2)
        assert iso.a * iso.d - iso.b * iso.c == pytest.approx(1.0)

    def test_singular_rejected(self):
        with pytest.raises(GeometryError, match="singular"):
            MobiusIsometry(1, 2, 2, 4)

    def test_inverse(self):
        cfg = sample_configurations(Model.HALFSPACE, 10, seed=1)
        iso = random_isometry(seed=9)
        back = iso.inverse().act(iso.act(cfg))
        np.testing.assert_allclose(back.stacked, cfg.stacked, atol=1e-10)

    def test_translation(self):
        iso = MobiusIsometry(1, 1 + 1j, 0, 1)
        cfg = ConfigPoint(Model.HALFSPACE, [0.0, 0.0, 1.0], [1.0, 0.0, 2.0])
        moved = iso.act(cfg)
        np.testing.assert_allclose(moved.q1, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(moved.q2, [2.0, 1.0, 2.0])

    def test_boundary_infinity(self):
        iso = MobiusIsometry(0, -1, 1, 0)
        assert iso.act_boundary(BoundaryPoint.infinity()).to_complex() == pytest.approx(0.0)
        assert iso.act_boundary(BoundaryPoint.on_plane(0.0)).is_infinite


class TestP0:
    """Tests for the P0 propagator."""

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_antisymmetric(self, model):
        components = p0_components(sample_configurations(model, 10, seed=0))
        np.testing.assert_allclose(components, -np.swapaxes(components, -1, -2))

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_square_vanishes(self, model):
        p = p0_components(sample_configurations(model, 10, seed=1))
        wedge = (
            np.einsum("nij,nkl->nijkl", p, p)
            - np.einsum("nik,njl->nijkl", p, p)
            + np.einsum("nil,njk->nijkl", p, p)
        )
        scale = np.max(np.abs(p), axis=(1, 2)) ** 2
        assert np.max(np.abs(wedge) / scale[:, None, None, None, None]) < 1e-10

    @pytest.mark.parametrize("model", [Model.BALL, Model.HALFSPACE])
    def test_isometry_invariance(self, model):
        cfg = sample_configurations(model, 30, seed=6, radius=0.6 if model is Model.BALL else None)
        v1, v2 = random_vectors(30, seed=7)
        iso = random_isometry(seed=12, scale=0.5)
        moved, pushed = iso.push_forward(cfg, np.stack([v1, v2]))
        np.testing.assert_allclose(eval_p0(moved, pushed[0], pushed[1]), eval_p0(cfg, v1, v2), rtol=1e-7, atol=1e-10)

    def test_matches_chart_expression(self):
        cfg = sample_configurations(Model.HALFSPACE, 50, seed=13)
        v1, v2 = random_vectors(50, seed=14)
        np.testing.assert_allclose(eval_p0(cfg, v1, v2), eval_p0_coordinates(cfg, v1, v2), rtol=1e-8, atol=1e-12)

    @pytest.mark.parametrize("centre", [[0.0, 0.0, 0.0], [0.2, -0.1, 0.3]])
    def test_normalization(self, centre):
        total = sphere_integral(Model.BALL, centre, 0.2)
        assert total.real == pytest.approx(1.0, abs=1e-8)
        assert total.imag == pytest.approx(0.0, abs=1e-8)

    def test_normalization_halfspace_magnitude(self):
        total = sphere_integral(Model.HALFSPACE, [0.3, 0.1, 1.0], 0.4)
        assert abs(total.real) == pytest.approx(1.0, abs=1e-8)
        assert total.imag == pytest.approx(0.0, abs=1e-8)

    def test_batch_matches_single_rows(self):
        cfg = sample_configurations(Model.HALFSPACE, 10, seed=1)
        ones = np.ones((10, 6))
        batched = eval_p0(cfg, ones, ones)
        assert batched.shape == (10,)
        assert np.all(np.isfinite(batched))
        v1, v2 = random_vectors(10, seed=2)
        batched = eval_p0(cfg, v1, v2)
        rows = [eval_p0(ConfigPoint(Model.HALFSPACE, cfg.q1[i], cfg.q2[i]), v1[i], v2[i]) for i in range(10)]
        np.testing.assert_allclose(batched, np.array(rows), rtol=1e-10, atol=1e-14)
        assert p0_components(cfg).shape == (10, 6, 6)

    def test_vertical_pair_finite(self):
        cfg = ConfigPoint(Model.HALFSPACE, [0.0, 0.0, 1.0], [0.0, 0.0, 2.0])
        assert np.all(np.isfinite(p0_components(cfg)))


class TestP1:
    """Tests for the P1 propagator."""

    def test_matches_chart_expression(self):
        cfg = sample_configurations(Model.HALFSPACE, 50, seed=21)
        v1, v2 = random_vectors(50, seed=22)
        np.testing.assert_allclose(eval_p1(cfg, v1, v2), eval_p1_coordinates(cfg, v1, v2), rtol=1e-9, atol=1e-12)

    def test_blind_to_motion_along_geodesic(self):
        cfg = sample_configurations(Model.HALFSPACE, 20, seed=23)
        coords = to_halfspace_coords(cfg)
        centre = coords.z + coords.u / 2
        axis = np.stack([np.real(coords.u), np.imag(coords.u)], axis=-1) / np.abs(coords.u)[:, None]
        a = np.sum((cfg.q2[:, :2] - np.stack([np.real(centre), np.imag(centre)], axis=-1)) * axis, axis=-1)
        b = cfg.q2[:, 2]
        tangent = np.concatenate([-b[:, None] * axis, a[:, None]], axis=-1)
        v1 = np.concatenate([np.zeros_like(tangent), tangent], axis=-1)
        v2, _ = random_vectors(20, seed=24)
        np.testing.assert_allclose(eval_p1(cfg, v1, v2), 0.0, atol=1e-10)

    def test_real_antisymmetric(self):
        p = p1_components(sample_configurations(Model.HALFSPACE, 10, seed=25))
        assert p.dtype.kind == "f"
        np.testing.assert_allclose(p, -np.swapaxes(p, -1, -2))

    def test_batch_matches_single_rows(self):
        cfg = sample_configurations(Model.HALFSPACE, 10, seed=1)
        v1, v2 = random_vectors(10, seed=3)
        batched = eval_p1(cfg, v1, v2)
        assert batched.shape == (10,)
        rows = [eval_p1(ConfigPoint(Model.HALFSPACE, cfg.q1[i], cfg.q2[i]), v1[i], v2[i]) for i in range(10)]
        np.testing.assert_allclose(batched, np.array(rows), rtol=1e-10, atol=1e-14)
        assert p1_components(cfg).shape == (10, 6, 6)

    def test_ball_rejected(self):
        with pytest.raises(GeometryError):
            p1_components(sample_configurations(Model.BALL, 3, seed=0))


class TestHalfspaceCoords:
    """Tests for the geodesic chart."""

    def test_semicircle(self):
        cfg = ConfigPoint(Model.HALFSPACE, [-0.5, 0.0, SEMICIRCLE_HEIGHT], [0.5, 0.0, SEMICIRCLE_HEIGHT])
        coords = to_halfspace_coords(cfg)
        assert complex(coords.z) == pytest.approx(-1.0)
        assert complex(coords.u) == pytest.approx(2.0)
        assert float(coords.t1) == pytest.approx(0.25)
        assert float(coords.t2) == pytest.approx(0.75)

    def test_round_trip(self):
        cfg = sample_configurations(Model.HALFSPACE, 100, seed=31)
        coords = to_halfspace_coords(cfg)
        assert np.all(coords.t1 < coords.t2)
        back = from_halfspace_coords(coords)
        np.testing.assert_allclose(back.stacked, cfg.stacked, atol=1e-10)

    def test_vertical(self):
        cfg = ConfigPoint(Model.HALFSPACE, [1.0, -1.0, 2.0], [1.0, -1.0, 0.5])
        coords = to_halfspace_coords(cfg)
        assert isinstance(coords, VerticalCoords)
        assert coords.foot == 1.0 - 1.0j
        assert from_halfspace_coords(coords).q2[2] == 0.5

    def test_vertical_in_batch_rejected(self):
        cfg = ConfigPoint(
            Model.HALFSPACE,
            [[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]],
            [[0.0, 0.0, 2.0], [1.0, 0.0, 1.0]],
        )
        with pytest.raises(GeometryError, match="vertical"):
            to_halfspace_coords(cfg)

    def test_ball_rejected(self):
        with pytest.raises(GeometryError):
            to_halfspace_coords(sample_configurations(Model.BALL, 2, seed=0))

    def test_parameter_order_enforced(self):
        with pytest.raises(GeometryError):
            HalfspaceCoords(0.0, 1.0, 0.6, 0.4)
        with pytest.raises(GeometryError):
            HalfspaceCoords(0.0, 0.0, 0.2, 0.4)


class TestJet:
    """Tests for forward-mode derivatives."""

    def test_rational_and_sqrt(self):
        x = Jet.variable(np.array([0.5, 2.0]), np.array([1.0]))
        f = sqrt(x * x / (1.0 + x))
        step = 1e-6
        plain = lambda t: np.sqrt(t * t / (1.0 + t))
        expected = (plain(x.value + step) - plain(x.value - step)) / (2 * step)
        np.testing.assert_allclose(f.grad[0], expected, rtol=1e-7)

    def test_complex_conjugate(self):
        x = Jet.variable(np.array(1.5), np.array([1.0]))
        f = (x + 2j) * (x + 2j).conj()
        assert f.value == pytest.approx(1.5**2 + 4)
        assert f.grad[0] == pytest.approx(3.0)


    def test_constant_broadcasts_against_batch(self):
        x = Jet.variable(np.array([0.5, 2.0, 3.0]), np.array([[1.0], [0.0]]))
        total = sum([x, x * x])
        assert total.grad.shape == (2, 3)
        np.testing.assert_allclose(total.value, x.value + x.value**2)
        np.testing.assert_allclose(total.grad[0], 1.0 + 2 * x.value)
        np.testing.assert_allclose(total.grad[1], 0.0)

    def test_scalar_jet_against_array(self):
        x = Jet.variable(np.array(2.0), np.array([1.0, 0.5]))
        f = x * np.array([1.0, 3.0]) + np.array([0.0, 1.0])
        assert f.grad.shape == (2, 2)
        np.testing.assert_allclose(f.grad[0], [1.0, 3.0])
        np.testing.assert_allclose(f.grad[1], [0.5, 1.5])


class TestCutoff:
    """Tests for cutoff expressions and Theta."""

    def test_precedence(self):
        tree = parse_cutoff("1 + 2 * x^2")
        assert str(tree) == "(1.0 + (2.0 * (x ^ 2.0)))"
        assert parse_cutoff("2^3^2").evaluate({}) == 512.0
        assert parse_cutoff("-x^2").evaluate({"x": np.array(3.0)}) == -9.0

    def test_functions(self):
        tree = parse_cutoff("1 + 0.5 * exp(-(x^2 + y^2))")
        assert tree.variables() == {"x", "y"}
        assert tree.evaluate({"x": np.array(0.0), "y": np.array(0.0)}) == pytest.approx(1.5)

    def test_parse_error_location(self):
        with pytest.raises(CutoffError) as exc:
            parse_cutoff("1 + * x")
        assert exc.value.line == 1
        assert exc.value.column == 5
        assert exc.value.to_dict()["column"] == 5

    @pytest.mark.parametrize("text", ["(1 + x", "1 + #", "w + 1", ""])
    def test_malformed(self, text):
        with pytest.raises(CutoffError):
            parse_cutoff(text)

    def test_plane_rejects_z(self):
        with pytest.raises(CutoffError, match="cannot use z"):
            CutoffSpec("1 + z^2")

    @pytest.mark.parametrize("text", ["x", "1 - x^2", "log(x^2)", "0"])
    def test_not_positive(self, text):
        with pytest.raises(CutoffError, match="not positive"):
            CutoffSpec(text)

    def test_epsilon_positive(self):
        with pytest.raises(CutoffError):
            CutoffSpec("1", epsilon=0.0)

    def test_sphere_cutoff(self):
        spec = CutoffSpec("2 + z", epsilon=0.5, model=Model.BALL)
        np.testing.assert_allclose(spec.ell(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])), [3.0, 1.0])

    def test_theta_examples(self):
        sphere = CutoffSpec.constant(1.0, epsilon=0.1, model=Model.BALL)
        north, south = BoundaryPoint.on_sphere([0.0, 0.0, 1.0]), BoundaryPoint.on_sphere([0.0, 0.0, -1.0])
        assert int(cutoff_theta(sphere, north, south)) == 1
        plane = CutoffSpec.constant(1.0, epsilon=0.1)
        assert int(cutoff_theta(plane, BoundaryPoint.on_plane(0.0), BoundaryPoint.on_plane(0.05))) == 0
        assert int(cutoff_theta(plane, BoundaryPoint.on_plane(0.0), BoundaryPoint.on_plane(0.5))) == 1
        assert int(cutoff_theta(plane, BoundaryPoint.on_plane(0.0), BoundaryPoint.infinity())) == 1

    def test_theta_uses_local_scale(self):
        spec = CutoffSpec("1 + x^2", epsilon=0.1)
        a = BoundaryPoint.on_plane(np.array([0.0, 3.0]))
        b = BoundaryPoint.on_plane(np.array([0.3, 3.3]))
        np.testing.assert_array_equal(cutoff_theta(spec, a, b), [1, 0])

    def test_to_dict(self):
        spec = CutoffSpec("1", epsilon=0.25)
        assert spec.to_dict() == {"expression": "1", "epsilon": 0.25, "model": "halfspace"}
        assert spec.with_epsilon(0.5).epsilon == 0.5
