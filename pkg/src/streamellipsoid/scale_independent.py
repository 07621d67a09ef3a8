"""Streaming ellipsoid that needs only an aspect-ratio bound ``xi``.

Each accepted point triggers the minimum-volume rank-one update, carried out
on the factored form, followed by a correction that raises every semi-axis
to at least ``M_t / xi`` (``M_t`` being the longest accepted point so far).
The left singular factor never affects the ellipsoid, so the state keeps
only the semi-axes and their directions: ``A_t = diag(1/sigma) V^T``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import INTERIOR_TOL, EllipsoidSVD, as_matrix, as_point, rank_one_mvee_update, svd_recompose_update
from .errors import InteriorPoint, InvalidAspectRatio, InvalidRadius, ZeroFirstPoint


@dataclass
class ScaleIndependentState:
    sigma: np.ndarray
    v: np.ndarray
    xi: float
    m: float
    step: int = 1
    accepted_count: int = 0
    # 1/||A_{t-1} x_t|| of the most recent accepted update, before correction
    last_det_ratio: float = 1.0

    @property
    def dim(self):
        return self.sigma.shape[0]

    @property
    def a(self):
        return (self.v / self.sigma).T

    def svd(self):
        return EllipsoidSVD(u=np.eye(self.dim), sigma=self.sigma.copy(), v=self.v.copy())

    def to_dict(self):
        return {
            "sigma": self.sigma.tolist(),
            "v": self.v.tolist(),
            "xi": self.xi,
            "m": self.m,
            "step": self.step,
            "accepted_count": self.accepted_count,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            sigma=np.asarray(data["sigma"], dtype=float),
            v=as_matrix(data["v"]),
            xi=float(data["xi"]),
            m=float(data["m"]),
            step=int(data["step"]),
            accepted_count=int(data["accepted_count"]),
        )


def _check_xi(xi):
    xi = float(xi)
    if not (math.isfinite(xi) and xi >= 1.0):
        raise InvalidAspectRatio(f"aspect ratio estimate must be finite and >= 1, got {xi}")
    return xi


def householder_basis(x):
    """Orthogonal ``V`` with ``V^T x = ||x|| e_1``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    nrm = np.linalg.norm(x)
    sign = 1.0 if x[0] >= 0 else -1.0
    w = x.copy()
    w[0] += sign * nrm  # sign choice avoids cancellation
    h = np.eye(d) - 2.0 * np.outer(w, w) / (w @ w)
    # h x = -sign ||x|| e_1; flip the first column to make it +||x|| e_1
    h[:, 0] *= -sign
    return h


def si_init(x1, xi):
    xi = _check_xi(xi)
    x1 = as_point(x1)
    nrm = float(np.linalg.norm(x1))
    if nrm == 0.0:
        raise ZeroFirstPoint("the first point must be nonzero")
    d = x1.shape[0]
    sigma = np.full(d, nrm / xi)
    sigma[0] = nrm
    return ScaleIndependentState(sigma=sigma, v=householder_basis(x1), xi=xi, m=nrm)


def si_from_ball(d, radius, xi):
    """State whose ellipsoid is the ball of the given radius, no points seen."""
    xi = _check_xi(xi)
    radius = float(radius)
    if not (math.isfinite(radius) and radius > 0):
        raise InvalidRadius(f"radius must be positive and finite, got {radius}")
    return ScaleIndependentState(sigma=np.full(int(d), radius), v=np.eye(int(d)), xi=xi, m=0.0, step=0)


def si_ingest(s, x):
    """Absorb one point; mutates and returns ``s``.

    ``m`` advances only on accepted points, as in the reference algorithm;
    an interior point can never be longer than the longest semi-axis.
    """
    x = as_point(x, s.dim)
    s.step += 1
    a = s.a
    ax = a @ x
    nrm = float(np.linalg.norm(ax))
    if nrm <= 1.0 + INTERIOR_TOL:
        return s
    unit = ax / nrm
    b = a.T @ unit
    upd = svd_recompose_update(s.svd(), -(1.0 - 1.0 / nrm) * unit, b)
    s.m = max(s.m, float(np.linalg.norm(x)))
    # max with a constant keeps the descending order
    s.sigma = np.maximum(upd.sigma, s.m / s.xi)
    s.v = upd.v
    s.accepted_count += 1
    s.last_det_ratio = 1.0 / nrm
    return s


def si_alpha_bounds(d, xi):
    """``(inner, adjusted)``: sqrt(6 + 28 d ln xi + 16 d) and sqrt(2) times it.

    The first is the factor stated against covering ellipsoids of bounded
    aspect ratio; the second adds the intersection-of-ellipsoids step and is
    the one checked against the hull itself.
    """
    inner = math.sqrt(6.0 + 28.0 * d * math.log(xi) + 16.0 * d)
    return inner, math.sqrt(2.0) * inner


def si_result(s):
    return s.a, si_alpha_bounds(s.dim, s.xi)[0]


@dataclass(frozen=True)
class GhostPointBatch:
    points: np.ndarray       # row i is z_i = tau_i w_i
    directions: np.ndarray   # row i is the unit axis direction w_i
    tau: np.ndarray


def ghost_point_batch(a_prime, m_t, xi):
    """Ghost points for the correction step of the ellipsoid ``a_prime``."""
    e = EllipsoidSVD.from_matrix(a_prime)
    tau = np.maximum(e.sigma, m_t / xi)
    w = e.v.T
    return GhostPointBatch(points=tau[:, None] * w, directions=w, tau=tau)


def simulate_ghost_points(a_prev, x, m_t, xi, return_count=False):
    """Replay the correction step as plain rank-one updates.

    Applies the basic update for ``x`` and then, in sequence, for each ghost
    point along the resulting semi-axes.  Ghost points already inside are
    skipped.  The quadratic form of the result matches the corrected state.
    """
    a, _ = rank_one_mvee_update(a_prev, x)
    batch = ghost_point_batch(a, m_t, xi)
    count = 0
    for z in batch.points:
        try:
            a, _ = rank_one_mvee_update(a, z, tol=1e-9)
        except InteriorPoint:
            continue
        count += 1
    return (a, count) if return_count else a
