"""Ground truth used to certify streaming outputs at desk scale.

* :func:`mvee` is the minimum-volume centered ellipsoid of ``+-points`` by a
  Khachiyan-type coordinate ascent with away steps.
* :class:`GaugeOracle` evaluates the Minkowski functional of
  ``X = conv{+-x_i}`` by linear programming.
* :func:`measured_factor` samples the boundary of an outer ellipsoid and
  reports the largest gauge found, a lower bound on the true factor.
* :func:`hull_inradius` gives the largest centered ball inside ``X`` from
  the facets of the hull.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial import ConvexHull

from .core import EllipsoidSVD, as_matrix
from .errors import DegenerateSpan, LPFailure, NonConvergence, NotCovering
from .lp import OPTIMAL, dual_simplex, primal_simplex


def _as_points(points):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2:
        raise ValueError(f"expected an (n, d) array, got shape {pts.shape}")
    return pts


def _check_span(pts):
    d = pts.shape[1]
    if pts.shape[0] < d or np.linalg.matrix_rank(pts) < d:
        raise DegenerateSpan(f"points do not span R^{d}")


@dataclass
class MveeSolution:
    form: np.ndarray     # H, with E = {x : x^T H x <= 1}
    weights: np.ndarray
    gap: float
    iterations: int

    def matrix(self):
        """A matrix ``a`` with ``a^T a = H``."""
        return np.linalg.cholesky(self.form).T


def mvee(points, tol=1e-8, max_iter=None):
    """Minimum-volume ellipsoid centered at 0 containing ``+-points``.

    Weights ``u`` on the points give ``M(u) = sum u_i x_i x_i^T``; the
    optimal ellipsoid is ``{x : x^T M^{-1} x <= d}`` at the weights where
    every ``g_i = x_i^T M^{-1} x_i <= d``.  Iterates until
    ``max g / d - 1 <= tol`` and every supported point has
    ``1 - g_i / d <= tol``, then scales to cover all points exactly.
    """
    pts = _as_points(points)
    n, d = pts.shape
    _check_span(pts)
    if not 0 < tol <= 1e-2:
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol}")
    max_iter = max_iter or 1_000_000 * d
    u = np.full(n, 1.0 / n)
    for it in range(max_iter):
        m = (pts.T * u) @ pts
        g = np.einsum("ij,ij->i", pts @ np.linalg.inv(m), pts)
        j = int(np.argmax(g))
        supp = np.flatnonzero(u > 0)
        k = int(supp[np.argmin(g[supp])])
        up = g[j] / d - 1.0
        down = 1.0 - g[k] / d
        if up <= tol and down <= tol:
            break
        if up >= down:
            tau = (g[j] - d) / (d * (g[j] - 1.0))
            u *= 1.0 - tau
            u[j] += tau
        else:
            # away step: shrink the weight of the least active support point
            drop = -u[k] / (1.0 - u[k])
            tau = max((g[k] - d) / (d * (g[k] - 1.0)), drop) if g[k] > 1.0 else drop
            u *= 1.0 - tau
            u[k] += tau
            if tau == drop:
                u[k] = 0.0
    else:
        raise NonConvergence(f"mvee did not converge in {max_iter} iterations")
    m = (pts.T * u) @ pts
    minv = np.linalg.inv(m)
    g = np.einsum("ij,ij->i", pts @ minv, pts)
    h = minv / g.max()
    h = 0.5 * (h + h.T)
    return MveeSolution(form=h, weights=u, gap=max(g.max() / d - 1.0, 0.0), iterations=it)


class GaugeOracle:
    """Gauge of ``X = conv{+-x_i}`` by the LP ``min sum(l)``, ``[X, -X] l = y``, ``l >= 0``.

    The first query starts from a basis of ``d`` independent vertices with
    signs chosen to make it feasible; later queries re-optimize the previous
    optimal basis with the dual simplex, since only the right-hand side
    changes.
    """

    def __init__(self, vertices, tol=1e-10):
        pts = _as_points(vertices)
        _check_span(pts)
        self.vertices = pts
        self.n, self.d = pts.shape
        self.cols = np.hstack([pts.T, -pts.T])
        self.cost = np.ones(2 * self.n)
        self.tol = tol
        # d independent vertices by column-pivoted QR
        _, _, piv = scipy.linalg.qr(pts.T, pivoting=True, mode="economic")
        self._seed = np.sort(piv[: self.d])
        self._basis = None
        self.lp_count = 0

    def _cold_basis(self, y):
        lam = np.linalg.solve(self.vertices[self._seed].T, y)
        return np.where(lam >= 0, self._seed, self._seed + self.n)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.d,):
            raise ValueError(f"query must have shape ({self.d},), got {y.shape}")
        if not np.any(y):
            return 0.0
        self.lp_count += 1
        basis = None
        if self._basis is not None:
            try:
                basis, status, _ = dual_simplex(self.cost, self.cols, y, self._basis, tol=self.tol)
            except LPFailure:
                status = None
            if status != OPTIMAL:
                basis = None
        if basis is None:
            basis, status, _ = primal_simplex(self.cost, self.cols, y, self._cold_basis(y), tol=self.tol)
            if status != OPTIMAL:
                raise LPFailure(f"gauge LP ended with status {status}")
        lam = np.linalg.solve(self.cols[:, basis], y)
        self._basis = basis
        return float(np.maximum(lam, 0.0).sum())


def gauge(vertices, y):
    """One-off gauge query; see :class:`GaugeOracle`."""
    return GaugeOracle(vertices)(y)


def boundary_samples(a, n_dirs, seed):
    """Points on the boundary of ``E_a``: ``n_dirs`` random ones plus the ``2d`` axis endpoints."""
    a = as_matrix(a)
    d = a.shape[0]
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((n_dirs, d))
    u /= np.linalg.norm(u @ a.T, axis=1)[:, None]
    e = EllipsoidSVD.from_matrix(a)
    axes = (e.v * e.sigma).T
    return np.vstack([u, axes, -axes])


def _greedy_tour(points):
    """Visit order in which each point is followed by its most aligned unvisited one.

    Consecutive gauge queries along the tour share most of their optimal
    basis, so warm-started re-optimization needs few pivots.
    """
    unit = points / np.linalg.norm(points, axis=1)[:, None]
    n = len(unit)
    free = np.ones(n, dtype=bool)
    order = np.empty(n, dtype=int)
    cur = 0
    for k in range(n):
        order[k] = cur
        free[cur] = False
        if k + 1 < n:
            sim = unit @ unit[cur]
            sim[~free] = -np.inf
            cur = int(np.argmax(sim))
    return order


def measured_factor(a, points, n_dirs=1000, seed=0, return_witness=False):
    """Largest gauge over sampled boundary points of ``E_a``; a lower bound on the factor.

    ``E_a`` must contain every point (to 1e-8), else :class:`NotCovering`.
    """
    a = as_matrix(a)
    pts = _as_points(points)
    worst = float(np.linalg.norm(pts @ a.T, axis=1).max())
    if worst > 1.0 + 1e-8:
        raise NotCovering(f"a point has ||a x|| = {worst!r} > 1")
    oracle = GaugeOracle(pts)
    best, witness = 0.0, None
    samples = boundary_samples(a, n_dirs, seed)
    for b in samples[_greedy_tour(samples)]:
        val = oracle(b)
        if val > best:
            best, witness = val, b
    return (best, witness) if return_witness else best


def hull_inradius(points):
    """Radius of the largest centered ball inside ``conv{+-points}``.

    Exact from the facets of the hull; for a subset of the points it is a
    lower bound for the full set.
    """
    pts = _as_points(points)
    _check_span(pts)
    d = pts.shape[1]
    if d == 1:
        return float(np.abs(pts).max())
    hull = ConvexHull(np.vstack([pts, -pts]))
    # facets satisfy normal . x + offset <= 0 with unit normals
    return float(-hull.equations[:, -1].max())


def hull_aspect_ratio(points):
    """``R / r`` of ``conv{+-points}`` for centered balls."""
    pts = _as_points(points)
    return float(np.linalg.norm(pts, axis=1).max() / hull_inradius(pts))
