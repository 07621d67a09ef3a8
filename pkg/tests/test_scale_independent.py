import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamellipsoid.core import form_distance, rank_one_mvee_update, semi_axes
from streamellipsoid.errors import InvalidAspectRatio, ZeroFirstPoint
from streamellipsoid.generators import conditioned_stream
from streamellipsoid.oracles import measured_factor
from streamellipsoid.potential import potential, reference_ball
from streamellipsoid.scale_independent import (
    ScaleIndependentState,
    ghost_point_batch,
    householder_basis,
    si_alpha_bounds,
    si_ingest,
    si_init,
    si_result,
    simulate_ghost_points,
)


def random_stream(d, n, rng):
    return rng.standard_normal((n, d)) * rng.uniform(0.1, 5.0, d)


class TestInit:
    def test_axis_point(self):
        s = si_init([3.0, 0.0], 10)
        np.testing.assert_allclose(s.sigma, [3.0, 0.3])
        np.testing.assert_allclose(np.abs(s.v[:, 0]), [1.0, 0.0], atol=1e-15)

    def test_zero(self):
        with pytest.raises(ZeroFirstPoint):
            si_init([0.0, 0.0], 2)

    @pytest.mark.parametrize("xi", [0.5, math.inf, math.nan])
    def test_bad_xi(self, xi):
        with pytest.raises(InvalidAspectRatio):
            si_init([1.0, 0.0], xi)

    def test_diagonal_point(self):
        x = np.array([1.0, 1.0]) / math.sqrt(2) * 5
        s = si_init(x, 5)
        assert abs(np.linalg.norm(s.a @ x) - 1.0) <= 1e-12
        np.testing.assert_allclose(semi_axes(s.a), [5.0, 1.0], rtol=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=8))
    def test_householder(self, coords):
        x = np.array(coords)
        nrm = np.linalg.norm(x)
        if nrm < 1e-6:
            return
        v = householder_basis(x)
        np.testing.assert_allclose(v.T @ v, np.eye(len(x)), atol=1e-12)
        target = np.zeros(len(x))
        target[0] = nrm
        np.testing.assert_allclose(v.T @ x, target, atol=1e-12 * nrm)


class TestIngest:
    def test_interior(self):
        s = si_init([2.0, 0.0], 4)
        si_ingest(s, [0.0, 0.4])
        np.testing.assert_allclose(s.sigma, [2.0, 0.5])
        assert s.step == 2 and s.accepted_count == 0

    def test_accepted(self):
        s = si_init([2.0, 0.0], 4)
        si_ingest(s, [0.0, 3.0])
        assert s.m == 3.0
        assert s.sigma.min() >= 0.75
        # frozen from the direct SVD: the update stretches the short axis to 3
        np.testing.assert_allclose(s.sigma, [3.0, 2.0], rtol=1e-14)

    def test_ghost_example(self):
        s = si_init([2.0, 0.0], 4)
        a_prev = s.a
        si_ingest(s, [0.0, 3.0])
        sim = simulate_ghost_points(a_prev, np.array([0.0, 3.0]), 3.0, 4)
        assert form_distance(sim, s.a) <= 1e-10

    def test_no_ghost_updates_when_axes_long(self):
        a = np.eye(2)
        x = np.array([2.0, 0.0])
        sim, count = simulate_ghost_points(a, x, 2.0, 100.0, return_count=True)
        plain, _ = rank_one_mvee_update(a, x)
        assert count == 0
        assert form_distance(sim, plain) <= 1e-15

    def test_round_trip(self):
        s = si_init([1.0, 2.0, 3.0], 5)
        si_ingest(s, [4.0, 0.0, -1.0])
        back = ScaleIndependentState.from_dict(s.to_dict())
        np.testing.assert_array_equal(back.a, s.a)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1), st.floats(1.0, 50.0))
    def test_invariants(self, d, seed, xi):
        rng = np.random.default_rng(seed)
        pts = random_stream(d, 40, rng)
        s = si_init(pts[0], xi)
        for k, x in enumerate(pts[1:], start=1):
            prev = s.a
            accepted_before = s.accepted_count
            si_ingest(s, x)
            seen = pts[: k + 1]
            assert np.linalg.norm(seen @ s.a.T, axis=1).max() <= 1 + 1e-8
            assert s.sigma[0] >= s.m * (1 - 1e-10)
            if s.accepted_count > accepted_before:
                assert s.sigma.min() >= s.m / xi * (1 - 1e-10)
                a_prime = rank_one_mvee_update(prev, x)[0]
                ghost = ghost_point_batch(a_prime, s.m, xi)
                # the longest axis already reaches M_t, so its ghost point is a no-op
                assert semi_axes(a_prime)[0] >= s.m * (1 - 1e-12)
                assert ghost.tau[0] == pytest.approx(semi_axes(a_prime)[0], rel=1e-14)
                _, count = simulate_ghost_points(prev, x, s.m, xi, return_count=True)
                assert count <= d - 1

    def test_xi_one_gives_balls(self):
        rng = np.random.default_rng(3)
        pts = random_stream(3, 30, rng)
        s = si_init(pts[0], 1.0)
        for x in pts[1:]:
            si_ingest(s, x)
            np.testing.assert_allclose(s.sigma, s.sigma[0], rtol=1e-12)


class TestResult:
    def test_formulas(self):
        assert si_alpha_bounds(2, 1.0)[0] == pytest.approx(math.sqrt(38))
        assert si_alpha_bounds(4, math.e)[0] == pytest.approx(math.sqrt(182))
        inner, adjusted = si_alpha_bounds(3, 7.0)
        assert adjusted == pytest.approx(math.sqrt(2) * inner)

    def test_result(self):
        s = si_init([1.0, 0.0], 2.0)
        a, alpha = si_result(s)
        assert alpha == si_alpha_bounds(2, 2.0)[0]

    def test_measured_factor_below_bound(self):
        cs = conditioned_stream(5, 200, 8, seed=4)
        assert cs.exact
        xi = cs.aspect_ratio
        s = si_init(cs.points[0], xi)
        for x in cs.points[1:]:
            si_ingest(s, x)
        a, inner = si_result(s)
        assert 1.0 <= measured_factor(a, cs.points, n_dirs=1000, seed=2) <= inner

    def test_potential_bounds(self):
        cs = conditioned_stream(4, 100, 6, seed=9)
        xi = cs.aspect_ratio
        j = reference_ball(cs.big_r, 4)
        s = si_init(cs.points[0], xi)
        assert potential(j, s.a)[0] <= 4 + 1e-9
        for x in cs.points[1:]:
            si_ingest(s, x)
        assert potential(j, s.a)[0] <= 6 + 28 * 4 * math.log(xi) + 16 * 4
