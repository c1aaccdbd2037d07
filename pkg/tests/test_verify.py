# -*- encoding: utf-8 -*-
"""
Tests for gricci verify module.

Tests the test forms, the sparse exterior algebra, the batched Monte-Carlo
runner, the divergence integrals and the convergence scan. Acceptance runs
with large sample counts are marked slow.
"""

import math
import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gricci.exceptions import BudgetExceeded, FormError, GeometryError, GridTooShort, NumericError
from gricci.geometry import CutoffSpec, Model
from gricci.verify import (
    BatchStats,
    ExteriorForm,
    MCEstimate,
    McRunner,
    PropagatorKind,
    TestForm,
    area_bump,
    boundary_integral,
    boundary_pairing,
    chart_points,
    convergence_scan,
    courant_lhs,
    courant_rhs,
    default_edges,
    horizontal_bump,
    lemma_lhs,
    lemma_rhs,
    loop_integrand,
    pairwise_reduce,
    prefactor_ratio,
    scalar_bump,
    stderr_scaling,
    tube_radius,
    wedge_all,
)
from gricci.verify.convergence import ShellRegion


def uniform_integrand(rng, size):
    return rng.random(size)



class TestTestForm:
    """Tests for compactly supported test forms."""

    def test_degree_validation(self):
        """Only degrees 0, 1 and 2 are accepted."""
        with pytest.raises(FormError):
            TestForm.bump(3, (0, 0, 0), 1.0, (1.0,))

    def test_coefficient_count(self):
        """A 1-form bump needs three coefficients."""
        with pytest.raises(FormError):
            TestForm.bump(1, (0, 0, 0), 1.0, (1.0, 2.0))

    def test_support(self):
        """Components vanish outside the declared ball."""
        alpha = horizontal_bump(radius=0.5)
        outside = np.array([[0.6, 0.0, 0.1], [0.0, 0.0, 0.51], [1.0, 1.0, 1.0]])
        assert_allclose(alpha.components(outside), 0.0)
        assert np.all(alpha.components(np.array([0.1, 0.1, 0.1]))[:2] != 0.0)

    def test_derivatives_match_finite_differences(self):
        """Closed-form derivatives agree with central differences."""
        alpha = horizontal_bump(center=(0.1, -0.2, 0.0), radius=1.2)
        rng = np.random.default_rng(3)
        points = rng.uniform(-0.4, 0.4, (5, 3)) + np.array([0.1, -0.2, 0.3])
        step = 1e-6
        numeric = np.stack(
            [
                (alpha.components(points + step * e) - alpha.components(points - step * e)) / (2 * step)
                for e in np.eye(3)
            ],
            axis=-1,
        )
        assert_allclose(alpha.derivatives(points), numeric, atol=1e-7)

    def test_two_form_tensor_antisymmetric(self):
        """The degree 2 tensor is antisymmetric with the dx^dy component on top."""
        omega = area_bump()
        points = np.array([[0.1, 0.2, 0.1]])
        tensor = omega.tensor(points)
        assert_allclose(tensor, -np.swapaxes(tensor, -1, -2))
        assert_allclose(tensor[0, 0, 1], omega.components(points)[0, 0])

    def test_boundary_restriction(self):
        """Boundary values of the horizontal bump."""
        alpha = horizontal_bump()
        value = alpha.boundary(0.0, 0.0)
        assert_allclose(value, [1.0, 0.5])
        assert float(area_bump().boundary(0.0, 0.0)) == pytest.approx(1.0)

    def test_boundary_box(self):
        """A bump centred above the plane meets it in a smaller disk."""
        alpha = TestForm.bump(1, (1.0, 0.0, 0.6), 1.0, (1.0, 0.0, 0.0))
        assert alpha.boundary_box() == pytest.approx((0.2, 1.8, -0.8, 0.8))
        high = TestForm.bump(1, (0.0, 0.0, 2.0), 1.0, (1.0, 0.0, 0.0))
        assert high.boundary_box() is None
        assert high.footprint(0.5) is None
        assert high.footprint(1.5) == pytest.approx((-1.0, 1.0, -1.0, 1.0))

    def test_addition(self):
        """Sums evaluate to the sum of their terms; degrees must match."""
        a = horizontal_bump()
        b = TestForm.bump(1, (0.2, 0.0, 0.0), 0.5, (0.0, 1.0, 0.0))
        points = np.array([[0.1, 0.1, 0.1], [0.3, 0.0, 0.2]])
        assert_allclose((a + b).components(points), a.components(points) + b.components(points))
        assert_allclose(a.scaled(2.0).components(points), 2 * a.components(points))
        with pytest.raises(FormError):
            a + area_bump()

    def test_serialization(self):
        """to_dict and from_dict preserve the form."""
        alpha = horizontal_bump(center=(0.5, 0.0, 0.0))
        again = TestForm.from_dict(alpha.to_dict())
        points = np.array([[0.4, 0.1, 0.2]])
        assert_allclose(again.components(points), alpha.components(points))

    def test_malformed_dict(self):
        """Missing keys raise FormError."""
        with pytest.raises(FormError):
            TestForm.from_dict({"degree": 1})


class TestExteriorForm:
    """Tests for sparse batched exterior algebra."""

    def test_wedge_sign(self):
        """dx ^ dy = -dy ^ dx."""
        dx = ExteriorForm.from_tensor(np.array([1.0, 0.0]), 1, 2)
        dy = ExteriorForm.from_tensor(np.array([0.0, 1.0]), 1, 2)
        assert float(dx.wedge(dy).top()) == 1.0
        assert float(dy.wedge(dx).top()) == -1.0
        assert float(dx.wedge(dx).top()) == 0.0

    def test_wedge_of_one_forms_is_determinant(self):
        """Three 1-forms in three dimensions wedge to the determinant."""
        rng = np.random.default_rng(5)
        rows = rng.normal(size=(4, 3, 3))
        factors = [ExteriorForm.from_tensor(rows[:, k, :], 1, 3) for k in range(3)]
        assert_allclose(wedge_all(factors).top(), np.linalg.det(rows))

    def test_index_map_orientation(self):
        """A 2-form placed on reversed indices changes sign."""
        tensor = np.array([[0.0, 1.0], [-1.0, 0.0]])
        forward = ExteriorForm.from_tensor(tensor, 2, 2, indices=[0, 1])
        reverse = ExteriorForm.from_tensor(tensor, 2, 2, indices=[1, 0])
        assert float(forward.top()) == 1.0
        assert float(reverse.top()) == -1.0

    def test_prune(self):
        """Terms whose missing indices are unreachable are dropped."""
        form = ExteriorForm.from_tensor(np.ones(3), 1, 3)
        assert len(form) == 3
        pruned = form.prune({1, 2})
        assert set(pruned.terms) == {(0,)}

    def test_top_absent_is_zero(self):
        """Missing top terms give zeros of the batch shape."""
        form = ExteriorForm.from_tensor(np.ones((5, 3)), 1, 3)
        assert_allclose(form.top(), np.zeros(5))

    def test_bad_index_map(self):
        """Index maps must fit the ambient dimension."""
        with pytest.raises(FormError):
            ExteriorForm.from_tensor(np.ones(3), 1, 2)


class TestSampler:
    """Tests for the batched Monte-Carlo runner."""

    def test_thread_count_independent(self):
        """Estimates are bitwise identical for any worker count."""
        one = McRunner(7, 10_000, batch_size=1000, threads=1).run(uniform_integrand)
        four = McRunner(7, 10_000, batch_size=1000, threads=4).run(uniform_integrand)
        assert one.value == four.value
        assert one.stderr == four.stderr
        assert one.n_samples == 10_000

    def test_uniform_mean(self):
        """The mean of U(0, 1) is recovered within three standard errors."""
        estimate = McRunner(1, 50_000, batch_size=5000, threads=2).run(uniform_integrand)
        assert estimate.agrees_with(0.5)
        assert estimate.stderr == pytest.approx(math.sqrt(1 / 12 / 50_000), rel=0.05)

    def test_streams_differ(self):
        """Different spawn-key prefixes give different samples."""
        a = McRunner(3, 1000, batch_size=500, threads=1, stream=(0,)).run(uniform_integrand)
        b = McRunner(3, 1000, batch_size=500, threads=1, stream=(1,)).run(uniform_integrand)
        assert a.value != b.value

    def test_pairwise_merge_matches_whole(self):
        """Merged batch statistics equal those of the concatenated samples."""
        rng = np.random.default_rng(11)
        chunks = [rng.normal(size=size) for size in (10, 37, 5, 100)]
        merged = pairwise_reduce([BatchStats.of(c) for c in chunks])
        whole = BatchStats.of(np.concatenate(chunks))
        assert merged.count == whole.count
        assert merged.mean == pytest.approx(whole.mean)
        assert merged.m2 == pytest.approx(whole.m2)

    def test_budget_exceeded(self):
        """A tight budget raises with the partial estimate attached."""

        def slow(rng, size):
            time.sleep(0.02)
            return rng.random(size)

        with pytest.raises(BudgetExceeded) as err:
            McRunner(2, 100, batch_size=10, threads=1, budget=0.05).run(slow)
        estimate = err.value.estimate
        assert 0 < estimate.n_samples < 100
        assert "estimate" in err.value.to_dict()

    def test_sample_count_positive(self):
        """Zero samples are rejected."""
        with pytest.raises(NumericError):
            McRunner(0, 0)

    def test_complex_serialization(self):
        """Complex values serialize as [re, im]."""
        assert MCEstimate(1 + 2j, 0.1, 10, 0).to_dict()["value"] == [1.0, 2.0]
        assert MCEstimate(0.5, 0.1, 10, 0).to_dict()["value"] == 0.5

    def test_stderr_scaling(self):
        """The standard error decays like n^(-1/2)."""
        fit = stderr_scaling(
            lambda n: McRunner(5, n, batch_size=2000, threads=1).run(uniform_integrand),
            [2000, 8000, 32000, 128000],
        )
        assert fit.slope == pytest.approx(-0.5, abs=0.05)

    def test_stderr_scaling_needs_three_sizes(self):
        with pytest.raises(FormError):
            stderr_scaling(lambda n: MCEstimate.exact(0.0), [10, 20])


class TestChartPoints:
    """Tests for the geodesic chart used by the divergence integrals."""

    def test_points_on_semicircle(self):
        """Both points lie on the semicircle over z and z + u."""
        chart = np.array([[0.3, -0.2, 0.4, 0.3, 0.25, 0.6]])
        q1, _, q2, _ = chart_points(chart)
        centre = np.array([0.3 + 0.2, -0.2 + 0.15])
        for q in (q1, q2):
            assert np.linalg.norm(q[0, :2] - centre) ** 2 + q[0, 2] ** 2 == pytest.approx(0.25**2)

    def test_jacobian_matches_finite_differences(self):
        """Forward-mode derivatives agree with central differences."""
        chart = np.array([[0.1, 0.2, -0.3, 0.5, 0.3, 0.7]])
        _, j1, _, j2 = chart_points(chart)
        step = 1e-7
        for k in range(6):
            e = np.zeros((1, 6))
            e[0, k] = step
            plus, minus = chart_points(chart + e), chart_points(chart - e)
            assert_allclose((plus[0] - minus[0])[0] / (2 * step), j1[0, :, k], atol=1e-6)
            assert_allclose((plus[2] - minus[2])[0] / (2 * step), j2[0, :, k], atol=1e-6)

    def test_batch_matches_single_rows(self):
        """A batch of charts gives the same points and Jacobians row by row."""
        chart = np.array([[0.1, 0.2, -0.3, 0.5, 0.3, 0.7], [0.3, -0.2, 0.4, 0.3, 0.25, 0.6]])
        batched = chart_points(chart)
        for row in range(2):
            single = chart_points(chart[row : row + 1])
            for b, s in zip(batched, single):
                assert_allclose(b[row], s[0], rtol=1e-12, atol=1e-15)


class TestLemma:
    """Tests for the eye divergence integral and its quadrature reference."""

    def test_equal_cutoffs_exact_zero(self):
        """Identical cutoffs give an exact zero."""
        alpha = horizontal_bump()
        estimate = lemma_lhs(alpha, alpha, CutoffSpec("1"), CutoffSpec("1"), n=100)
        assert estimate.value == 0.0
        assert estimate.stderr == 0.0
        assert lemma_rhs(alpha, alpha, CutoffSpec("1"), CutoffSpec("1")) == 0.0

    def test_degree_pairs(self):
        """Only (1, 1), (0, 2) and (2, 0) are integrated."""
        with pytest.raises(FormError):
            lemma_lhs(horizontal_bump(), area_bump(), CutoffSpec("1"), CutoffSpec("2"), n=100)

    def test_ball_cutoff_rejected(self):
        """The sampler works on the half space only."""
        alpha = horizontal_bump()
        with pytest.raises(GeometryError):
            lemma_lhs(alpha, alpha, CutoffSpec("1", model=Model.BALL), CutoffSpec("2", model=Model.BALL), n=100)

    def test_rhs_symmetric(self):
        """The pairing is symmetric in the two forms."""
        a = horizontal_bump()
        b = TestForm.bump(1, (0.3, 0.1, 0.0), 0.8, (0.2, 1.0, 0.5))
        l1, l2 = CutoffSpec("1 + x^2"), CutoffSpec("2")
        assert lemma_rhs(a, b, l1, l2) == lemma_rhs(b, a, l1, l2)

    def test_rhs_constant_ratio_factorizes(self):
        """With l2 = 2 l1 the reference is log(2) / 2 pi times the plain pairing."""
        alpha = horizontal_bump()
        pairing = boundary_pairing(alpha, alpha)
        assert pairing > 0
        expected = -math.log(1 / 2) / (2 * math.pi) * pairing
        assert lemma_rhs(alpha, alpha, CutoffSpec("1"), CutoffSpec("2")) == pytest.approx(expected, rel=1e-6)

    def test_rhs_vertical_only_vanishes(self):
        """A 1-form along dh has no boundary part."""
        vertical = TestForm.bump(1, (0, 0, 0), 1.0, (0.0, 0.0, 1.0))
        assert lemma_rhs(vertical, vertical, CutoffSpec("1"), CutoffSpec("2")) == 0.0

    def test_rhs_zero_two_pair_vanishes(self):
        """Degree (0, 2) pairs have no 1-form part."""
        f = scalar_bump()
        assert lemma_rhs(f, area_bump(), CutoffSpec("1"), CutoffSpec("2")) == 0.0

    def test_zero_two_pair_estimate_vanishes(self):
        """The (0, 2) integrand has no dt1 component and vanishes pointwise."""
        f = scalar_bump()
        estimate = lemma_lhs(
            f, area_bump(), CutoffSpec("1"), CutoffSpec("2"), epsilon=1e-2, n=4000, seed=2, batch_size=1000
        )
        assert abs(estimate.value) < 1e-6

    def test_batched_estimate_finite(self):
        """Whole batches of configurations go through the eye integrand."""
        alpha = horizontal_bump()
        estimate = lemma_lhs(alpha, alpha, CutoffSpec("1"), CutoffSpec("2"), epsilon=1e-3, n=20_000, seed=1)
        assert math.isfinite(estimate.value.real)
        assert estimate.stderr > 0.0

    def test_deterministic_across_threads(self):
        """Lemma estimates do not depend on the worker count."""
        alpha = horizontal_bump()
        args = (alpha, alpha, CutoffSpec("1"), CutoffSpec("2"), 1e-2, 4000, 9)
        one = lemma_lhs(*args, batch_size=1000, threads=1)
        three = lemma_lhs(*args, batch_size=1000, threads=3)
        assert one.value == three.value
        assert one.stderr == three.stderr

    def test_far_forms_exact_zero(self):
        """Forms supported away from the boundary never meet the cutoff shell."""
        high = TestForm.bump(1, (0.0, 0.0, 2.0), 0.5, (1.0, 0.0, 0.0))
        estimate = lemma_lhs(high, high, CutoffSpec("1"), CutoffSpec("2"), n=100)
        assert estimate.value == 0.0

    def test_courant_rhs_is_imaginary(self):
        """The anchor-loop reference is purely imaginary."""
        omega = area_bump()
        value = courant_rhs(omega, CutoffSpec("1"), CutoffSpec("2"))
        assert value.real == 0.0
        expected = -math.log(1 / 2) * boundary_integral(omega) / (4j * math.pi)
        assert value == pytest.approx(expected, rel=1e-6)

    def test_courant_needs_two_form(self):
        with pytest.raises(FormError):
            courant_lhs(horizontal_bump(), CutoffSpec("1"), CutoffSpec("2"), n=100)

    def test_prefactor_ratio(self):
        """Coefficients 0.2 and 0.1 give a ratio of 2."""
        lemma = MCEstimate(0.2, 0.002, 100, 0)
        courant = MCEstimate(0.1j, 0.001, 100, 0)
        ratio, err = prefactor_ratio(lemma, courant, 1.0, 1.0)
        assert ratio == pytest.approx(2.0)
        assert err == pytest.approx(2.0 * math.hypot(0.01, 0.01))
        with pytest.raises(FormError):
            prefactor_ratio(MCEstimate.exact(0.0), courant, 1.0, 1.0)

    @pytest.mark.slow
    def test_lemma_matches_reference(self):
        """The Monte-Carlo eye integral reproduces -(1/2 pi) int log(l1/l2) a ^ *b."""
        alpha = horizontal_bump()
        l1, l2 = CutoffSpec("1"), CutoffSpec("2")
        estimate = lemma_lhs(alpha, alpha, l1, l2, epsilon=1e-3, n=10_000_000, seed=1)
        reference = lemma_rhs(alpha, alpha, l1, l2)
        assert estimate.agrees_with(reference, sigmas=3.0)
        assert abs(estimate.value - reference) <= 0.05 * abs(reference)

    @pytest.mark.slow
    def test_courant_prefactor_ratio(self):
        """The lemma coefficient is twice the anchor-loop coefficient."""
        alpha, omega = horizontal_bump(), area_bump()
        l1, l2 = CutoffSpec("1"), CutoffSpec("2")
        lemma = lemma_lhs(alpha, alpha, l1, l2, epsilon=1e-3, n=400_000, seed=1)
        courant = courant_lhs(omega, l1, l2, epsilon=1e-3, n=400_000, seed=2)
        assert courant.agrees_with(courant_rhs(omega, l1, l2), sigmas=3.0)
        ratio, err = prefactor_ratio(
            lemma, courant, boundary_pairing(alpha, alpha, l1, l2), boundary_integral(omega, l1, l2)
        )
        assert abs(ratio - 2.0) <= 3 * err + 0.05


class TestTubeRadius:
    """Tests for the exact tube radius."""

    def test_single_point(self):
        assert_allclose(tube_radius(np.array([[[0.3, 0.1, 0.4]]])), [0.4])

    def test_stacked_points(self):
        """Points over one boundary location need the highest height."""
        points = np.array([[[0.0, 0.0, 1.0], [0.0, 0.0, 2.0]]])
        assert_allclose(tube_radius(points), [2.0])

    def test_pair_on_plane(self):
        """Two low points one unit apart from the origin need radius one."""
        points = np.array([[[-1.0, 0.0, 1e-9], [1.0, 0.0, 1e-9]]])
        assert_allclose(tube_radius(points), [1.0], atol=1e-9)

    def test_equilateral_triangle(self):
        """Three low points on the unit circle need radius one."""
        angles = 2 * math.pi * np.arange(3) / 3
        points = np.stack([np.cos(angles), np.sin(angles), np.full(3, 1e-9)], axis=-1)[None]
        assert_allclose(tube_radius(points), [1.0], atol=1e-9)

    def test_matches_grid_search(self):
        """Exact radii bound a fine grid search from below and sit close to it."""
        rng = np.random.default_rng(4)
        points = np.concatenate([rng.uniform(-1, 1, (20, 4, 2)), rng.uniform(0.01, 1, (20, 4, 1))], axis=-1)
        radii = tube_radius(points)
        axis = np.linspace(-1.5, 1.5, 301)
        cx, cy = np.meshgrid(axis, axis)
        centres = np.stack([cx.ravel(), cy.ravel()], axis=-1)
        for config, radius in zip(points, radii):
            dist = np.sum((centres[:, None, :] - config[None, :, :2]) ** 2, axis=-1) + config[:, 2] ** 2
            brute = math.sqrt(np.min(np.max(dist, axis=-1)))
            assert radius <= brute + 1e-12
            assert radius >= brute - 0.02


class TestConvergence:
    """Tests for the convergence scan."""

    def test_default_edges(self):
        assert default_edges(2) == (PropagatorKind.P0, PropagatorKind.P0BAR)
        assert default_edges(3)[-1] is PropagatorKind.P1
        assert default_edges(4) == (PropagatorKind.P0, PropagatorKind.P0BAR) * 2

    def test_grid_too_short(self):
        """Three grid values cannot support a slope fit."""
        forms = [horizontal_bump()] * 3
        with pytest.raises(GridTooShort):
            convergence_scan(3, forms, [0.1, 0.05, 0.025], n=100)

    def test_degrees_must_sum(self):
        forms = [horizontal_bump(), horizontal_bump(), area_bump()]
        with pytest.raises(FormError):
            convergence_scan(3, forms, [0.1, 0.05, 0.025, 0.0125], n=100)

    def test_vertex_range(self):
        with pytest.raises(FormError):
            convergence_scan(6, [horizontal_bump()] * 6, [0.1, 0.05, 0.025, 0.0125], n=100)

    def test_shell_region_covers_tube(self):
        """Draws keep the first point below e_hi and the rest within 2 e_hi of it."""
        region = ShellRegion((-1.0, 1.0, -1.0, 1.0), 0.1, 3)
        points, density = region.draw(np.random.default_rng(0), 500)
        assert points.shape == (500, 3, 3)
        assert np.all(points[..., 2] > 0) and np.all(points[..., 2] <= 0.1)
        spread = np.linalg.norm(points[:, 1:, :2] - points[:, :1, :2], axis=-1)
        assert np.all(spread <= 0.2 + 1e-12)
        assert density == pytest.approx(1.0 / (4.0 * 0.1 * (math.pi * 0.04 * 0.1) ** 2))

    def test_loop_integrand_finite(self):
        """The three-vertex integrand is finite on generic configurations."""
        rng = np.random.default_rng(6)
        points = np.concatenate([rng.uniform(-0.3, 0.3, (8, 3, 2)), rng.uniform(0.05, 0.3, (8, 3, 1))], axis=-1)
        value = loop_integrand([horizontal_bump()] * 3, default_edges(3), points)
        assert value.shape == (8,)
        assert np.all(np.isfinite(value))

    def test_four_vertex_scan_runs(self):
        """A small four-vertex scan returns a finite fitted slope."""
        result = convergence_scan(4, [horizontal_bump()] * 4, [0.2, 0.1, 0.05, 0.025, 0.0125], n=2000, seed=3)
        assert result.expected == 2
        assert math.isfinite(result.slope)

    @pytest.mark.slow
    def test_three_vertex_slope(self):
        """eps dI/deps decays linearly for three vertices."""
        result = convergence_scan(
            3, [horizontal_bump()] * 3, [0.2, 0.1, 0.05, 0.025, 0.0125], n=200_000, seed=1
        )
        assert result.expected == 1
        assert result.within(0.3)

    @pytest.mark.slow
    def test_four_vertex_slope(self):
        """eps dI/deps decays quadratically for four vertices."""
        result = convergence_scan(
            4, [horizontal_bump()] * 4, [0.2, 0.1, 0.05, 0.025, 0.0125], n=200_000, seed=1
        )
        assert result.expected == 2
        assert abs(result.slope - 2.0) <= 0.4

    @pytest.mark.slow
    def test_eye_slope_flat(self):
        """The eye has a logarithmic divergence: flat derivative."""
        result = convergence_scan(
            2, [horizontal_bump()] * 2, [0.2, 0.1, 0.05, 0.025, 0.0125], n=200_000, seed=1
        )
        assert abs(result.slope) <= 0.15
