"""Test instances: the Hadamard two-phase adversary and conditioned streams."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NotPowerOfTwo
from .oracles import hull_inradius
from .scale_dependent import sd_ingest_many, sd_init
from .scale_independent import si_ingest, si_init


def hadamard_matrix(d):
    """Sylvester Hadamard matrix scaled to orthonormal columns (entries +-1/sqrt(d))."""
    d = int(d)
    if d < 1 or d & (d - 1):
        raise NotPowerOfTwo(f"Hadamard order must be a power of two, got {d}")
    h = np.ones((1, 1))
    while h.shape[0] < d:
        h = np.block([[h, h], [h, -h]])
    return h / math.sqrt(d)


@dataclass(frozen=True)
class AdversaryInstance:
    d: int
    eps: float
    i: int              # outcome, 1-based
    phase1: np.ndarray  # rows are the Hadamard columns
    phase2: np.ndarray  # rows are w_1..w_d

    @property
    def points(self):
        return np.vstack([self.phase1, self.phase2])

    def opt_semi_axes(self):
        ax = np.full(self.d, math.sqrt((self.d - 1) / self.eps))
        ax[self.i - 1] = 1.0 / math.sqrt(self.d - self.eps)
        return ax

    def opt_form(self):
        """Diagonal ``J`` of the outcome's minimum-volume ellipsoid ``{x : ||J x|| <= 1}``."""
        return np.diag(1.0 / self.opt_semi_axes())


def adversary_instance(d, eps, i):
    d = int(d)
    h = hadamard_matrix(d)
    if d < 2:
        raise ConfigError("the adversary needs d >= 2")
    if not 0 < eps < d - 1:
        raise ConfigError(f"eps must lie in (0, {d - 1}), got {eps}")
    if not 1 <= i <= d:
        raise ConfigError(f"outcome index must lie in [1, {d}], got {i}")
    w = np.eye(d) * math.sqrt((d - 1) / eps)
    w[i - 1, i - 1] = 1.0 / math.sqrt(d - eps)
    return AdversaryInstance(d=d, eps=float(eps), i=int(i), phase1=h.T.copy(), phase2=w)


def adversary_stream(d, eps, i):
    """Phase one (Hadamard columns) followed by phase two for outcome ``i``."""
    return adversary_instance(d, eps, i).points


def adversary_outcome_factors(d, eps, algorithm):
    """``sigma_max(J_OPT(i) A_n^{-1})`` for every outcome ``i``.

    Each algorithm is given the most favorable single parameter valid for
    all outcomes: the smallest exact inradius for the scale-dependent one
    and the largest exact aspect ratio for the scale-independent one.  An
    algorithm cannot tell the outcomes apart during phase one, so the
    parameter must not depend on ``i``.
    """
    insts = [adversary_instance(d, eps, i) for i in range(1, d + 1)]
    radii = [hull_inradius(ins.points) for ins in insts]
    big_r = [float(np.linalg.norm(ins.points, axis=1).max()) for ins in insts]
    factors = []
    for ins in insts:
        if algorithm == "scale-dependent":
            state = sd_ingest_many(sd_init(d, min(radii)), ins.points)
            a = state.a
        elif algorithm == "scale-independent":
            xi = max(rb / r for rb, r in zip(big_r, radii))
            state = si_init(ins.points[0], xi)
            for x in ins.points[1:]:
                si_ingest(state, x)
            a = state.a
        else:
            raise ConfigError(f"unknown algorithm {algorithm!r}")
        m = ins.opt_form() @ np.linalg.inv(a)
        factors.append(float(np.linalg.svd(m, compute_uv=False)[0]))
    return factors


def random_orthogonal(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


# Largest subset whose hull is computed exactly, by dimension.  Beyond this
# the inradius is certified from the axis endpoints plus the shortest points.
_HULL_CAP = {1: 10**9, 2: 2000, 3: 2000, 4: 500, 5: 200, 6: 60, 7: 40, 8: 24}


@dataclass(frozen=True)
class ConditionedStream:
    points: np.ndarray
    r_true: float       # certified: r_true * B lies inside conv{+-points}
    big_r: float        # max norm; conv{+-points} lies inside big_r * B
    form: np.ndarray    # generating ellipsoid {x : ||form x|| <= 1}
    semi_axes: np.ndarray
    kappa: float        # requested condition number of the generating ellipsoid
    seed: int
    exact: bool         # r_true is the exact inradius, not just a lower bound

    @property
    def d(self):
        return self.points.shape[1]

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def aspect_ratio(self):
        """``big_r / r_true``; equals the hull's aspect ratio when ``exact``."""
        return self.big_r / self.r_true


def conditioned_stream(d, n, kappa, seed, scale=1.0):
    """Points on a random ellipsoid with semi-axes from ``scale`` down to ``scale/kappa``.

    The ``2d`` axis endpoints are always included, so ``big_r`` equals
    ``scale`` and ``r_true * B`` is certified to lie inside the hull.  The
    hull's aspect ratio is at least ``kappa`` (the hull sits inside the
    ellipsoid) and approaches it as ``n`` grows.
    """
    d, n = int(d), int(n)
    if d < 1:
        raise ConfigError(f"dimension must be positive, got {d}")
    if n < 2 * d:
        raise ConfigError(f"need n >= 2d = {2 * d}, got {n}")
    if not (math.isfinite(kappa) and kappa >= 1):
        raise ConfigError(f"kappa must be finite and >= 1, got {kappa}")
    rng = np.random.default_rng(seed)
    axes = scale * np.geomspace(1.0, 1.0 / kappa, d)
    q = random_orthogonal(d, rng)
    u = rng.standard_normal((n - 2 * d, d))
    u /= np.linalg.norm(u, axis=1)[:, None]
    ends = (q * axes).T
    body = (u * axes) @ q.T
    pts = np.vstack([ends, -ends, body])
    perm = rng.permutation(n)
    pts = pts[perm]

    r_true, exact = _certified_inradius(np.vstack([ends, -ends, body]), 2 * d, axes)
    return ConditionedStream(
        points=pts,
        r_true=r_true,
        big_r=float(axes[0]),
        form=(q / axes).T,
        semi_axes=axes,
        kappa=float(kappa),
        seed=seed,
        exact=exact,
    )


def _certified_inradius(pts, n_ends, axes):
    """Inradius lower bound computed from an order-independent subset of ``pts``.

    The first ``n_ends`` rows are the axis endpoints, always kept.
    """
    n, d = pts.shape
    cap = _HULL_CAP.get(d)
    if cap is None:
        # hull of the axis endpoints alone: a cross-polytope
        return float(np.sum(axes ** -2.0) ** -0.5), False
    if n <= cap:
        return hull_inradius(pts), True
    rest = pts[n_ends:]
    # shortest points first; ties broken by coordinates so the order is canonical
    order = np.lexsort(tuple(rest.T[::-1]) + (np.linalg.norm(rest, axis=1),))
    subset = np.vstack([pts[:n_ends], rest[order[: cap - n_ends]]])
    return hull_inradius(subset), False
