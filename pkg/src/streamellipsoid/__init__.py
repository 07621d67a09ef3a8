"""One-pass outer ellipsoids for the symmetric convex hull of a point stream."""

from .core import (
    EllipsoidSVD,
    aspect_ratio,
    contains,
    polar,
    rank_one_mvee_update,
    semi_axes,
    svd_recompose_update,
)
from .coreset import CoresetState, SketchAnswer, coreset_ingest, coreset_init, sketch_query
from .errors import EllipsoidError
from .generators import adversary_stream, conditioned_stream, hadamard_matrix
from .oracles import GaugeOracle, gauge, measured_factor, mvee
from .potential import PotentialTrace, potential, sigma_max_bound, verify_trace
from .scale_dependent import ScaleDependentState, sd_ingest, sd_init, sd_result
from .scale_independent import ScaleIndependentState, si_ingest, si_init, si_result, simulate_ghost_points

__version__ = "0.1.0"
