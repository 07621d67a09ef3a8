"""Figures for run reports.  Uses the Agg backend; every function writes a file."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def projected_ellipse(a, dims=(0, 1), n=400):
    """Boundary of the shadow of ``E_a`` on two coordinates, as an ``(n, 2)`` array.

    The shadow of ``{x : x^T H x <= 1}`` on coordinates ``P`` is the
    ellipse with shape matrix ``P H^{-1} P^T``.
    """
    ainv = np.linalg.inv(np.asarray(a, dtype=float))
    cov = ainv @ ainv.T
    sub = cov[np.ix_(dims, dims)]
    ell = np.linalg.cholesky(sub)
    th = np.linspace(0.0, 2.0 * np.pi, n)
    return np.column_stack([np.cos(th), np.sin(th)]) @ ell.T


def plot_projection(a, points, alpha, path, dims=(0, 1), title=None):
    """Outer ellipse, the ellipse shrunk by ``alpha`` and the points ``+-x_i``."""
    a = np.asarray(a, dtype=float)
    pts = np.asarray(points, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    if a.shape[0] == 1:
        half = 1.0 / abs(a[0, 0])
        ax.plot([-half, half], [0, 0], "C0-", lw=3, label="E")
        ax.plot([-half / alpha, half / alpha], [0, 0], "C1-", lw=6, label="E / alpha")
        ax.plot(np.r_[pts[:, 0], -pts[:, 0]], np.zeros(2 * len(pts)), "k.", ms=3)
    else:
        b = projected_ellipse(a, dims)
        ax.plot(b[:, 0], b[:, 1], "C0-", label="E")
        ax.plot(b[:, 0] / alpha, b[:, 1] / alpha, "C1--", label=f"E / {alpha:.3g}")
        p = pts[:, list(dims)]
        ax.plot(np.r_[p[:, 0], -p[:, 0]], np.r_[p[:, 1], -p[:, 1]], "k.", ms=3, label="+-x")
        ax.set_aspect("equal")
        ax.set_xlabel(f"x{dims[0]}")
        ax.set_ylabel(f"x{dims[1]}")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trace(trace, path):
    """S, P, Phi and Q against the step."""
    t = np.array([r.t for r in trace.rows])
    fig, (top, bot) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    top.plot(t, [r.s for r in trace.rows], label="S")
    top.plot(t, [r.p for r in trace.rows], label="P")
    top.plot(t, [r.phi for r in trace.rows], label="Phi")
    top.legend(fontsize=8)
    bot.plot(t, [r.q for r in trace.rows], "C3")
    bot.set_ylabel("Q")
    bot.set_xlabel("step")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
