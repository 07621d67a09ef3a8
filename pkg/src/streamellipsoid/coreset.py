"""Online coreset for the l-infinity subspace sketch.

A point is kept when it is longer than ``r`` and falls outside the current
ellipsoid; the ellipsoid then absorbs the point scaled by ``e`` through the
scale-independent update.  Every kept point grows the ellipsoid's volume by
a factor of at least ``e``, which bounds the coreset size by the log of the
total volume growth.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import INTERIOR_TOL, as_point, log_volume
from .errors import ConfigError, EmptyCoreset, InvalidRadius
from .scale_dependent import E_FACTOR
from .scale_independent import si_from_ball, si_ingest


@dataclass
class CoresetState:
    inner: object      # ScaleIndependentState
    r: float
    selected: list = field(default_factory=list)
    kept_points: list = field(default_factory=list)
    det_ratios: list = field(default_factory=list)
    initial_log_volume: float = 0.0
    last_index: int = None

    @property
    def dim(self):
        return self.inner.dim

    def log_volume_growth(self):
        """``ln(vol(E_now) / vol(E_init))``."""
        return log_volume(self.inner.a) - self.initial_log_volume

    def to_dict(self):
        return {
            "indices": list(self.selected),
            "points": [p.tolist() for p in self.kept_points],
            "alpha": sketch_alpha(self) if self.selected else None,
        }


def coreset_init(d, r, xi):
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise InvalidRadius(f"radius must be positive and finite, got {r}")
    inner = si_from_ball(d, r / math.sqrt(d), xi)
    return CoresetState(inner=inner, r=r, initial_log_volume=log_volume(inner.a))


def coreset_ingest(s, t, x):
    """Offer point ``x`` with stream index ``t``; returns ``(s, accepted)``."""
    x = as_point(x, s.dim)
    if s.last_index is not None and t <= s.last_index:
        raise ConfigError(f"stream indices must increase, got {t} after {s.last_index}")
    s.last_index = t
    if np.linalg.norm(x) <= s.r:
        return s, False
    if np.linalg.norm(s.inner.a @ x) <= 1.0 + INTERIOR_TOL:
        return s, False
    si_ingest(s.inner, math.e * x)
    s.selected.append(t)
    s.kept_points.append(x.copy())
    s.det_ratios.append(s.inner.last_det_ratio)
    return s, True


def sketch_alpha(s):
    """Certified factor, recomputed from the current largest kept norm."""
    if not s.selected:
        raise EmptyCoreset("no point has been selected")
    d = s.dim
    big_r = max(float(np.linalg.norm(p)) for p in s.kept_points)
    ratio = max(math.sqrt(d) * big_r / s.r, 1.0)
    return math.e * math.sqrt(2.0) * math.sqrt(E_FACTOR * d * (1.0 + 4.0 * math.log(ratio)))


@dataclass(frozen=True)
class SketchAnswer:
    value: float
    alpha: float


def sketch_query(s, y):
    """``max_{i in S} |<x_i, y>|`` with the certified factor ``alpha``."""
    if not s.selected:
        raise EmptyCoreset("no point has been selected")
    y = as_point(y, s.dim)
    value = float(np.abs(np.asarray(s.kept_points) @ y).max())
    return SketchAnswer(value=value, alpha=sketch_alpha(s))
