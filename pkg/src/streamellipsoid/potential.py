"""Potential functions against a reference ellipsoid and checks of their laws.

For a reference matrix ``J`` (ellipsoid ``{x : ||J x|| <= 1}``) and state
``A_t`` the tracked quantities are

    S_t   = ||J A_t^{-1}||_F^2
    P_t   = 2 log|det(J A_t^{-1})|
    Phi_t = S_t - P_t
    Q_t   = max_{i <= t} ||J x_i||^2
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, check_nonsingular
from .errors import DimensionMismatch, TraceMismatch
from .scale_dependent import E_FACTOR, sd_ingest, sd_init
from .scale_independent import si_ingest, si_init

TRACE_KEYS = ("t", "s", "p", "phi", "q")


def reference_ball(radius, d):
    """Reference matrix of the ball of the given radius."""
    return np.eye(d) / float(radius)


def is_covering(j, points, tol=1e-9):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return bool(np.all(np.linalg.norm(pts @ np.asarray(j).T, axis=1) <= 1.0 + tol))


def potential(j, a):
    """``(S, P, Phi)`` of state ``a`` against reference ``j``."""
    j = as_matrix(j)
    a = as_matrix(a)
    if j.shape != a.shape:
        raise DimensionMismatch(f"reference is {j.shape}, state is {a.shape}")
    check_nonsingular(a)
    check_nonsingular(j)
    # J A^{-1} = (A^{-T} J^T)^T
    m = np.linalg.solve(a.T, j.T).T
    s = float(np.sum(m * m))
    _, logdet = np.linalg.slogdet(m)
    p = 2.0 * float(logdet)
    return s, p, s - p


def sigma_max_bound(phi):
    """Upper bound sqrt(e/(e-1) Phi) on sigma_max(J A^{-1})."""
    return math.sqrt(E_FACTOR * phi)


@dataclass
class TraceRow:
    t: int
    s: float
    p: float
    phi: float
    q: float
    # ||J x_t||^2 of the point read at step t; unknown after a JSONL round trip
    jx2: float = None

    def to_dict(self):
        return {k: getattr(self, k) for k in TRACE_KEYS}


@dataclass
class PotentialTrace:
    d: int
    algorithm: str  # "scale-dependent" or "scale-independent"
    rows: list = field(default_factory=list)

    def append(self, t, a, j, q, jx2=None):
        s, p, phi = potential(j, a)
        self.rows.append(TraceRow(t=t, s=s, p=p, phi=phi, q=q, jx2=jx2))

    def to_jsonl(self, fh):
        for row in self.rows:
            fh.write(json.dumps(row.to_dict()) + "\n")

    @classmethod
    def from_jsonl(cls, fh, d, algorithm):
        rows = []
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                rows.append(TraceRow(**{k: rec[k] for k in TRACE_KEYS}))
        return cls(d=d, algorithm=algorithm, rows=rows)


def trace_scale_dependent(points, r, j):
    """Run the scale-dependent algorithm, recording the potentials from step 0."""
    pts = np.asarray(points, dtype=float)
    d = pts.shape[1]
    j = as_matrix(j)
    state = sd_init(d, r)
    tr = PotentialTrace(d=d, algorithm="scale-dependent")
    tr.append(0, state.a, j, q=0.0)
    q = 0.0
    for x in pts:
        jx2 = float(np.sum((j @ x) ** 2))
        q = max(q, jx2)
        sd_ingest(state, x)
        tr.append(state.step, state.a, j, q=q, jx2=jx2)
    return state, tr


def trace_scale_independent(points, xi, j):
    """Run the scale-independent algorithm, recording the potentials from step 1."""
    pts = np.asarray(points, dtype=float)
    d = pts.shape[1]
    j = as_matrix(j)
    state = si_init(pts[0], xi)
    q = float(np.sum((j @ pts[0]) ** 2))
    tr = PotentialTrace(d=d, algorithm="scale-independent")
    tr.append(1, state.a, j, q=q, jx2=q)
    for x in pts[1:]:
        jx2 = float(np.sum((j @ x) ** 2))
        q = max(q, jx2)
        si_ingest(state, x)
        tr.append(state.step, state.a, j, q=q, jx2=jx2)
    return state, tr


@dataclass
class CheckResult:
    name: str
    t: int
    slack: float  # rhs - lhs; negative beyond tolerance means a violation
    passed: bool
    u: int = None


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def min_slack(self, name):
        vals = [c.slack for c in self.checks if c.name == name]
        return min(vals) if vals else None

    def summary(self):
        names = sorted({c.name for c in self.checks})
        return {
            "passed": self.passed,
            "checks": {
                n: {
                    "count": sum(c.name == n for c in self.checks),
                    "failures": sum(c.name == n and not c.passed for c in self.checks),
                    "min_slack": self.min_slack(n),
                }
                for n in names
            },
        }


def verify_trace(tr, covering, deep=False, tol=None):
    """Check the potential evolution laws row by row.

    ``covering`` states that the reference contains every stream point (and,
    for the scale-independent algorithm, has aspect ratio at most ``xi``).
    Checks performed:

    * ``phi_monotone``: Phi_t <= Phi_{t-1} (scale-dependent, covering only);
    * ``s_vs_p``: S_t - S_{t-1} <= (P_t - P_{t-1}) w_t, with w_t = ||J x_t||^2
      for the scale-dependent algorithm and Q_t for the scale-independent one;
    * ``s_step``: S_t <= S_{t-1} + d Q_t;
    * ``multi_step`` (``deep`` only, O(n^2)): S_t <= S_u + Q_t (P_t - P_u).

    Laws of the scale-independent algorithm are only checked with a covering
    reference; they need not hold otherwise.
    """
    rows = tr.rows
    if tol is None:
        tol = 1e-9 * max(1.0, tr.d / 64.0)
    report = VerificationReport()
    if len(rows) < 2:
        return report
    ts = [r.t for r in rows]
    if any(b != a + 1 for a, b in zip(ts, ts[1:])):
        raise TraceMismatch("trace steps must be consecutive")
    qs = [r.q for r in rows]
    if any(b < a for a, b in zip(qs, qs[1:])):
        raise TraceMismatch("Q_t must be nondecreasing")

    alg1 = tr.algorithm == "scale-dependent"
    laws = alg1 or covering

    def add(name, t, lhs, rhs, u=None):
        slack = rhs - lhs
        report.checks.append(CheckResult(name=name, t=t, slack=slack, passed=slack >= -tol, u=u))

    for prev, cur in zip(rows, rows[1:]):
        if alg1 and covering:
            add("phi_monotone", cur.t, cur.phi, prev.phi)
        if laws:
            w = cur.jx2 if (alg1 and cur.jx2 is not None) else cur.q
            add("s_vs_p", cur.t, cur.s - prev.s, (cur.p - prev.p) * w)
            add("s_step", cur.t, cur.s, prev.s + tr.d * cur.q)
    if deep and laws:
        for k, cur in enumerate(rows):
            for prev in rows[:k]:
                add("multi_step", cur.t, cur.s, prev.s + cur.q * (cur.p - prev.p), u=prev.t)
    return report
