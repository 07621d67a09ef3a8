"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 numerical failure, 4 bad
configuration.
"""

import argparse
import itertools
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import EllipsoidSVD, aspect_ratio, as_matrix, polar
from .coreset import coreset_ingest, coreset_init, sketch_alpha
from .errors import ConfigError, EllipsoidError, EmptyStream
from .io import FORMATS, iter_stream
from .oracles import measured_factor
from .potential import PotentialTrace, reference_ball, verify_trace
from .scale_dependent import sd_ingest, sd_init, sd_precondition_ok, sd_result
from .scale_independent import si_alpha_bounds, si_ingest, si_init

MODES = ("scale-dependent", "scale-independent", "coreset")
EXIT_CODES = {"parse": 2, "numeric": 3, "config": 4}


@dataclass
class RunConfig:
    mode: str
    input: str
    format: str = None
    d: int = None
    r: float = None
    xi: float = None
    dual: bool = False
    trace: str = None
    reference: str = None
    seed: int = 0
    deep_verify: bool = False
    check_factor: bool = False
    n_dirs: int = 1000
    figures_dir: str = None

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.mode in ("scale-dependent", "coreset") and self.r is None:
            raise ConfigError(f"--r is required in {self.mode} mode")
        if self.mode in ("scale-independent", "coreset") and self.xi is None:
            raise ConfigError(f"--xi is required in {self.mode} mode")
        if self.trace and self.mode == "coreset":
            raise ConfigError("potential traces are available for the two algorithm modes only")
        if self.trace and not self.reference:
            raise ConfigError("--trace needs a reference ellipsoid (--reference)")
        if self.check_factor and self.mode == "coreset":
            raise ConfigError("--check-factor applies to the two algorithm modes only")
        if self.deep_verify and not self.trace:
            raise ConfigError("--deep-verify needs --trace")
        if self.n_dirs < 1:
            raise ConfigError("the number of sampled directions must be positive")


@dataclass
class RunReport:
    mode: str
    d: int
    n: int
    accepted_count: int
    matrix: list
    svd: dict
    alpha_bound: float
    alpha_bounds: dict
    dual: bool
    precondition: str = "verified"
    measured_factor: float = None
    trace_path: str = None
    trace_check: dict = None
    coreset: dict = None
    figures: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def load_reference(text, d):
    """``ball:R`` or the path of a JSON file holding a d x d matrix."""
    if text.startswith("ball:"):
        try:
            radius = float(text[5:])
        except ValueError:
            raise ConfigError(f"bad reference radius in {text!r}") from None
        if not (math.isfinite(radius) and radius > 0):
            raise ConfigError(f"reference radius must be positive, got {radius}")
        return reference_ball(radius, d)
    try:
        with open(text, encoding="utf-8") as fh:
            j = as_matrix(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read reference matrix {text!r}: {exc}") from None
    if j.shape != (d, d):
        raise ConfigError(f"reference matrix is {j.shape}, stream dimension is {d}")
    return j


def run(config):
    """Process the input stream once and assemble the report."""
    config.validate()
    t0 = time.perf_counter()
    stream = iter_stream(config.input, config.format, config.d)
    try:
        first = next(stream)
    except StopIteration:
        raise EmptyStream(f"{config.input} contains no points") from None
    d = first.shape[0]
    keep = config.check_factor or config.figures_dir is not None
    kept = []
    j = load_reference(config.reference, d) if config.reference else None
    trace = None
    q = 0.0

    if config.mode == "scale-dependent":
        state = sd_init(d, config.r)
        if j is not None:
            trace = PotentialTrace(d=d, algorithm=config.mode)
            trace.append(0, state.a, j, q=0.0)
        rest = itertools.chain([first], stream)
        n = 0
    elif config.mode == "scale-independent":
        state = si_init(first, config.xi)
        if j is not None:
            q = float(np.sum((j @ first) ** 2))
            trace = PotentialTrace(d=d, algorithm=config.mode)
            trace.append(1, state.a, j, q=q, jx2=q)
        if keep:
            kept.append(first)
        rest = stream
        n = 1
    else:
        state = coreset_init(d, config.r, config.xi)
        rest = itertools.chain([first], stream)
        n = 0

    for x in rest:
        if keep:
            kept.append(x)
        if config.mode == "coreset":
            coreset_ingest(state, n, x)
        else:
            if config.mode == "scale-dependent":
                sd_ingest(state, x)
            else:
                si_ingest(state, x)
            if trace is not None:
                jx2 = float(np.sum((j @ x) ** 2))
                q = max(q, jx2)
                trace.append(state.step, state.a, j, q=q, jx2=jx2)
        n += 1

    precondition = "verified"
    if config.mode == "scale-dependent":
        a, alpha = sd_result(state)
        bounds = {"certified": alpha}
        if not sd_precondition_ok(state):
            precondition = "unverified precondition"
        accepted = state.accepted_count
    elif config.mode == "scale-independent":
        a = state.a
        inner, adjusted = si_alpha_bounds(d, state.xi)
        alpha = adjusted
        bounds = {"inner": inner, "adjusted": adjusted}
        accepted = state.accepted_count
    else:
        if not state.selected:
            raise EmptyStream("no point was selected for the coreset")
        a = state.inner.a
        alpha = sketch_alpha(state)
        bounds = {"sketch": alpha}
        accepted = len(state.selected)

    report = RunReport(
        mode=config.mode,
        d=d,
        n=n,
        accepted_count=accepted,
        matrix=None,
        svd=None,
        alpha_bound=alpha,
        alpha_bounds=bounds,
        dual=config.dual,
        precondition=precondition,
    )
    if config.mode == "coreset":
        report.coreset = state.to_dict()
        report.coreset["log_volume_growth"] = state.log_volume_growth()

    if config.check_factor:
        report.measured_factor = measured_factor(a, np.vstack(kept), config.n_dirs, config.seed)

    if trace is not None:
        covering = q <= (1.0 + 1e-9) ** 2
        if config.mode == "scale-independent":
            covering = covering and aspect_ratio(j) <= state.xi * (1 + 1e-12)
        rep = verify_trace(trace, covering, deep=config.deep_verify)
        report.trace_check = dict(rep.summary(), covering=covering)
        with open(config.trace, "w", encoding="utf-8") as fh:
            trace.to_jsonl(fh)
        report.trace_path = config.trace

    # dual reading: rows were slab normals, the answer is the polar ellipsoid
    final = polar(a) if config.dual else a
    report.matrix = final.tolist()
    report.svd = EllipsoidSVD.from_matrix(final).to_dict()

    if config.figures_dir is not None:
        report.figures = _render_figures(config, a, np.vstack(kept), alpha, trace)
    report.timing = {"wall_seconds": time.perf_counter() - t0}
    return report


def _render_figures(config, a, points, alpha, trace):
    from .plotting import plot_projection, plot_trace

    os.makedirs(config.figures_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(config.input))[0]
    paths = []
    if not config.dual:
        p = os.path.join(config.figures_dir, f"{stem}_ellipse.png")
        paths.append(plot_projection(a, points, alpha, p, title=config.mode))
    if trace is not None:
        p = os.path.join(config.figures_dir, f"{stem}_trace.png")
        paths.append(plot_trace(trace, p))
    return paths


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="streamellipsoid", description="One-pass ellipsoidal approximation of a point stream.")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--input", required=True, help="CSV or JSON-lines file, one point per line")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--d", type=int, help="expected dimension (default: from the first row)")
    p.add_argument("--r", type=float, help="inner radius (scale-dependent, coreset)")
    p.add_argument("--xi", type=float, help="aspect-ratio bound (scale-independent, coreset)")
    p.add_argument("--dual", action="store_true", help="rows are slab normals; report the polar ellipsoid")
    p.add_argument("--trace", help="write the potential trace as JSON lines to this path")
    p.add_argument("--reference", help="reference ellipsoid for the trace: ball:R or a JSON matrix file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deep-verify", action="store_true", help="check all step pairs of the trace")
    p.add_argument("--check-factor", action="store_true", help="measure the factor with the gauge oracle")
    p.add_argument("--n-dirs", type=int, default=1000, help="boundary samples for --check-factor")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--figures", help="directory for figures (default: next to --out)")
    p.add_argument("--no-figures", action="store_true")
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        figures = None
        if not args.no_figures:
            figures = args.figures or (os.path.dirname(os.path.abspath(args.out)) if args.out else None)
        config = RunConfig(
            mode=args.mode,
            input=args.input,
            format=args.format,
            d=args.d,
            r=args.r,
            xi=args.xi,
            dual=args.dual,
            trace=args.trace,
            reference=args.reference,
            seed=args.seed,
            deep_verify=args.deep_verify,
            check_factor=args.check_factor,
            n_dirs=args.n_dirs,
            figures_dir=figures,
        )
        report = run(config)
    except EllipsoidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 3)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
