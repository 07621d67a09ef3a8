"""Streaming ellipsoid seeded with a known inner radius ``r``.

The state starts as the ball ``r B`` and absorbs each point lying outside
the current ellipsoid through the minimum-volume rank-one update.  Only the
d x d matrix and a few counters are kept between points.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import INTERIOR_TOL, as_matrix, as_point, rank_one_mvee_update
from .errors import DimensionMismatch, EmptyStream, InteriorPoint, InvalidRadius, NonFinite

E_FACTOR = math.e / (math.e - 1.0)


@dataclass
class ScaleDependentState:
    a: np.ndarray
    r: float
    max_norm_seen: float = 0.0
    step: int = 0
    accepted_count: int = 0

    @property
    def dim(self):
        return self.a.shape[0]

    def to_dict(self):
        return {
            "a": self.a.tolist(),
            "r": self.r,
            "max_norm_seen": self.max_norm_seen,
            "step": self.step,
            "accepted_count": self.accepted_count,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            a=as_matrix(data["a"]),
            r=float(data["r"]),
            max_norm_seen=float(data["max_norm_seen"]),
            step=int(data["step"]),
            accepted_count=int(data["accepted_count"]),
        )


def sd_init(d, r):
    if int(d) < 1:
        raise DimensionMismatch(f"dimension must be positive, got {d}")
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise InvalidRadius(f"inner radius must be positive and finite, got {r}")
    return ScaleDependentState(a=np.eye(int(d)) / r, r=r)


def sd_ingest(s, x):
    """Absorb one point; mutates and returns ``s``."""
    x = as_point(x, s.dim)
    s.step += 1
    s.max_norm_seen = max(s.max_norm_seen, float(np.linalg.norm(x)))
    try:
        s.a, _ = rank_one_mvee_update(s.a, x)
    except InteriorPoint:
        return s
    s.accepted_count += 1
    return s


def sd_ingest_many(s, points, max_block=1024):
    """Absorb a block of points; same result as repeated :func:`sd_ingest`.

    Interior points are screened in batches with one matrix product, so the
    per-point Python overhead is paid only for accepted updates.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != s.dim:
        raise DimensionMismatch(f"expected an (n, {s.dim}) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise NonFinite("stream has non-finite entries")
    n = pts.shape[0]
    if n == 0:
        return s
    norms = np.linalg.norm(pts, axis=1)
    i = 0
    block = 4
    while i < n:
        blk = pts[i:i + block]
        outside = np.flatnonzero(np.linalg.norm(blk @ s.a.T, axis=1) > 1.0 + INTERIOR_TOL)
        if outside.size == 0:
            s.step += blk.shape[0]
            s.max_norm_seen = max(s.max_norm_seen, float(norms[i:i + blk.shape[0]].max()))
            i += blk.shape[0]
            block = min(2 * block, max_block)
            continue
        j = int(outside[0])
        s.step += j
        if j:
            s.max_norm_seen = max(s.max_norm_seen, float(norms[i:i + j].max()))
        sd_ingest(s, blk[j])
        i += j + 1
        block = max(4, min(max_block, 2 * (j + 1)))
    return s


def sd_alpha_bound(d, big_r, r):
    """Certified factor sqrt(2) * sqrt(e/(e-1) * d * (1 + 4 ln max(R/r, 1)))."""
    ratio = max(big_r / r, 1.0)
    return math.sqrt(2.0) * math.sqrt(E_FACTOR * d * (1.0 + 4.0 * math.log(ratio)))


def sd_precondition_ok(s):
    """False when the given ``r`` exceeds the largest norm seen (R < r)."""
    return s.max_norm_seen >= s.r


def sd_result(s):
    """Final matrix and its certified approximation factor."""
    if s.step < 1 or s.max_norm_seen <= 0:
        raise EmptyStream("no nonzero point was ingested")
    return s.a, sd_alpha_bound(s.dim, s.max_norm_seen, s.r)
