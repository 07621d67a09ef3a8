import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_matrix, random_orthogonal
from streamellipsoid.errors import Singular, TraceMismatch
from streamellipsoid.generators import conditioned_stream
from streamellipsoid.potential import (
    PotentialTrace,
    TraceRow,
    is_covering,
    potential,
    reference_ball,
    sigma_max_bound,
    trace_scale_dependent,
    trace_scale_independent,
    verify_trace,
)


class TestPotential:
    def test_identity(self):
        assert potential(np.eye(3), np.eye(3)) == (3.0, 0.0, 3.0)

    def test_half_ball(self):
        s, p, phi = potential(np.eye(2) / 2, np.eye(2))
        assert s == pytest.approx(0.5)
        assert p == pytest.approx(2 * math.log(0.25))
        assert phi == pytest.approx(0.5 + 2 * math.log(4))

    def test_singular_values(self):
        rng = np.random.default_rng(4)
        j, a = random_matrix(4, rng), random_matrix(4, rng)
        sv = np.linalg.svd(j @ np.linalg.inv(a), compute_uv=False)
        assert abs(potential(j, a)[2] - np.sum(sv**2 - np.log(sv**2))) <= 1e-10

    def test_singular(self):
        with pytest.raises(Singular):
            potential(np.eye(2), np.diag([1.0, 0.0]))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_left_orthogonal_invariance(self, d, seed):
        rng = np.random.default_rng(seed)
        j, a = random_matrix(d, rng), random_matrix(d, rng)
        q = random_orthogonal(d, rng)
        np.testing.assert_allclose(potential(j, q @ a), potential(j, a), rtol=1e-9, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_lower_bound(self, d, seed):
        rng = np.random.default_rng(seed)
        assert potential(random_matrix(d, rng), random_matrix(d, rng))[2] >= d - 1e-9


class TestSigmaMaxBound:
    def test_inversion(self):
        assert sigma_max_bound((math.e - 1) / math.e) == pytest.approx(1.0)

    def test_identity(self):
        assert sigma_max_bound(3) >= 1.0

    def test_along_a_run(self):
        cs = conditioned_stream(4, 120, 10, seed=3)
        j = reference_ball(cs.big_r, 4)
        _, tr = trace_scale_dependent(cs.points, cs.r_true, j)
        from streamellipsoid.scale_dependent import sd_init, sd_ingest

        s = sd_init(4, cs.r_true)
        for x, row in zip(cs.points, tr.rows[1:]):
            sd_ingest(s, x)
            smax = np.linalg.svd(j @ np.linalg.inv(s.a), compute_uv=False)[0]
            assert smax <= sigma_max_bound(row.phi)


class TestVerify:
    def test_empty(self):
        rep = verify_trace(PotentialTrace(d=2, algorithm="scale-dependent"), covering=True)
        assert rep.passed and not rep.checks

    def test_alg1_covering(self):
        rng = np.random.default_rng(8)
        pts = rng.standard_normal((100, 4)) * [3.0, 1.0, 0.5, 2.0]
        j = reference_ball(np.linalg.norm(pts, axis=1).max(), 4)
        assert is_covering(j, pts)
        _, tr = trace_scale_dependent(pts, 0.1, j)
        rep = verify_trace(tr, covering=True, deep=True)
        assert rep.passed
        assert rep.min_slack("phi_monotone") >= -1e-9

    def test_corrupted_row_fails(self):
        rng = np.random.default_rng(8)
        pts = rng.standard_normal((30, 3))
        j = reference_ball(np.linalg.norm(pts, axis=1).max(), 3)
        _, tr = trace_scale_dependent(pts, 0.1, j)
        tr.rows[10].s += 1.0
        tr.rows[10].phi += 1.0
        rep = verify_trace(tr, covering=True)
        assert not rep.passed
        assert {c.t for c in rep.failures()} == {10}

    def test_alg2_covering(self):
        cs = conditioned_stream(3, 80, 5, seed=1)
        j = reference_ball(cs.big_r, 3)
        _, tr = trace_scale_independent(cs.points, cs.aspect_ratio, j)
        rep = verify_trace(tr, covering=True, deep=True)
        assert rep.passed, rep.failures()[:3]

    def test_gap_in_steps(self):
        tr = PotentialTrace(d=1, algorithm="scale-dependent")
        tr.rows = [TraceRow(0, 1, 0, 1, 0), TraceRow(2, 1, 0, 1, 0)]
        with pytest.raises(TraceMismatch):
            verify_trace(tr, covering=True)

    def test_jsonl_keys(self):
        rng = np.random.default_rng(0)
        pts = rng.standard_normal((5, 2))
        _, tr = trace_scale_dependent(pts, 0.5, np.eye(2))
        buf = io.StringIO()
        tr.to_jsonl(buf)
        lines = buf.getvalue().splitlines()
        import json

        assert all(set(json.loads(x)) == {"t", "s", "p", "phi", "q"} for x in lines)
        back = PotentialTrace.from_jsonl(io.StringIO(buf.getvalue()), d=2, algorithm="scale-dependent")
        assert [r.to_dict() for r in back.rows] == [r.to_dict() for r in tr.rows]
