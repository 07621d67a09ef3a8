"""Centered ellipsoids and the operations the streaming algorithms are built from.

An ellipsoid is stored as a nonsingular matrix ``a`` with
``E_a = {x : ||a x|| <= 1}``.  The factored form :class:`EllipsoidSVD` keeps
``a = U diag(1/sigma) V^T`` so that ``sigma`` holds the semi-axis lengths
directly (sorted descending) and the columns of ``V`` their directions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InteriorPoint,
    NonFinite,
    ResultSingular,
    Singular,
)

# Points with ||a x|| <= 1 + INTERIOR_TOL are treated as already covered.
INTERIOR_TOL = 1e-12

_EPS = np.finfo(float).eps


def as_point(x, d=None):
    """Validate ``x`` as a finite 1-D float vector of length ``d``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {x.shape}")
    if d is not None and x.shape[0] != d:
        raise DimensionMismatch(f"expected dimension {d}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise NonFinite("point has non-finite entries")
    return x


def as_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    return a


def check_nonsingular(a):
    """Raise :class:`Singular` when the condition number exceeds 1/eps."""
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > 1.0 / _EPS:
        raise Singular(f"matrix is numerically singular (smallest singular value {s[-1]:.3e})")
    return s


def quadratic_form(a):
    """``a^T a``; two matrices describe the same ellipsoid iff their forms agree."""
    a = np.asarray(a, dtype=float)
    return a.T @ a


def form_distance(a, b):
    """Relative Frobenius distance between the quadratic forms of ``a`` and ``b``."""
    fa, fb = quadratic_form(a), quadratic_form(b)
    return float(np.linalg.norm(fa - fb) / np.linalg.norm(fb))


def semi_axes(a):
    """Semi-axis lengths ``1/sigma_i(a)``, descending."""
    s = np.linalg.svd(as_matrix(a), compute_uv=False)
    return np.sort(1.0 / s)[::-1]


def log_volume(a):
    """Log-volume of ``E_a`` relative to the unit ball, i.e. ``-log|det a|``."""
    sign, logdet = np.linalg.slogdet(np.asarray(a, dtype=float))
    if sign == 0:
        raise Singular("zero determinant")
    return -float(logdet)


def mvee_update_factor(ax):
    """The symmetric factor ``Ahat`` mapping ``A_{t-1}`` to ``A_t = Ahat A_{t-1}``.

    ``ax`` is the already-transformed point ``A_{t-1} x`` with norm > 1.
    """
    nrm = np.linalg.norm(ax)
    u = ax / nrm
    return np.eye(ax.shape[0]) - (1.0 - 1.0 / nrm) * np.outer(u, u)


def rank_one_mvee_update(a, x, tol=INTERIOR_TOL):
    """Minimum-volume centered ellipsoid containing ``E_a`` and ``+-x``.

    Returns ``(a_new, det_ratio)`` where ``a_new = Ahat a`` and
    ``det_ratio = det(a_new)/det(a) = 1/||a x||``.  Costs O(d^2).
    """
    a = as_matrix(a)
    x = as_point(x, a.shape[0])
    ax = a @ x
    nrm = float(np.linalg.norm(ax))
    if not nrm > 1.0 + tol:
        raise InteriorPoint(f"||a x|| = {nrm!r} does not exceed 1 + {tol:g}")
    u = ax / nrm
    # Ahat a = a - (1 - 1/||ax||) u (u^T a)
    a_new = a - (1.0 - 1.0 / nrm) * np.outer(u, u @ a)
    return a_new, 1.0 / nrm


def contains(a, x, rel_tol=1e-9):
    a = as_matrix(a)
    x = as_point(x, a.shape[0])
    return bool(np.linalg.norm(a @ x) <= 1.0 + rel_tol)


def polar(a):
    """Matrix of the polar ellipsoid: ``{y : ||a^{-T} y|| <= 1}``."""
    a = as_matrix(a)
    check_nonsingular(a)
    return np.linalg.inv(a).T


def aspect_ratio(a):
    """Condition number ``sigma_max/sigma_min``; equals the ellipsoid's axis ratio."""
    s = check_nonsingular(as_matrix(a))
    return float(s[0] / s[-1])


@dataclass(frozen=True)
class EllipsoidSVD:
    """``a = u @ diag(1/sigma) @ v.T`` with ``sigma`` the semi-axes, descending."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.sigma)) and np.all(self.sigma > 0)):
            raise NonFinite("semi-axes must be positive and finite")

    @property
    def dim(self):
        return self.sigma.shape[0]

    def matrix(self):
        return (self.u / self.sigma) @ self.v.T

    @classmethod
    def from_matrix(cls, a):
        a = as_matrix(a)
        p, s, qt = np.linalg.svd(a)
        if s[-1] <= 0 or s[0] / s[-1] > 1.0 / _EPS:
            raise Singular("matrix is numerically singular")
        # ascending singular values of a = descending semi-axes
        return cls(u=p[:, ::-1].copy(), sigma=(1.0 / s)[::-1].copy(), v=qt.T[:, ::-1].copy())

    def to_dict(self):
        return {"u": self.u.tolist(), "sigma": self.sigma.tolist(), "v": self.v.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(
            u=np.asarray(data["u"], dtype=float),
            sigma=np.asarray(data["sigma"], dtype=float),
            v=np.asarray(data["v"], dtype=float),
        )


def svd_recompose_update(e, y, z):
    """Factor ``U diag(1/sigma) V^T + y z^T`` back into semi-axis form.

    Full SVD of the perturbed matrix, O(d^3); a true rank-one updater can
    replace this without changing the contract.
    """
    y = as_point(y, e.dim)
    z = as_point(z, e.dim)
    m = e.matrix() + np.outer(y, z)
    if not np.all(np.isfinite(m)):
        raise NonFinite("updated matrix has non-finite entries")
    p, s, qt = np.linalg.svd(m)
    if s[-1] <= s[0] * e.dim * _EPS:
        raise ResultSingular(f"updated matrix is rank-deficient (sigma_min = {s[-1]:.3e})")
    return EllipsoidSVD(u=p[:, ::-1].copy(), sigma=(1.0 / s)[::-1].copy(), v=qt.T[:, ::-1].copy())
