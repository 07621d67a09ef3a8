import numpy as np


def random_orthogonal(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_matrix(d, rng, cond=10.0):
    """Random nonsingular matrix with the given condition number."""
    s = np.geomspace(1.0, 1.0 / cond, d) if d > 1 else np.ones(1)
    return random_orthogonal(d, rng) @ np.diag(s) @ random_orthogonal(d, rng)


def point_outside(a, rng, lo=1.05, hi=5.0):
    """Random x with ||a x|| uniform in [lo, hi]."""
    d = a.shape[0]
    w = rng.standard_normal(d)
    w *= rng.uniform(lo, hi) / np.linalg.norm(w)
    return np.linalg.solve(a, w)


def sample_in(a, rng, n):
    """Uniform-ish points inside E_a."""
    d = a.shape[0]
    w = rng.standard_normal((n, d))
    w /= np.linalg.norm(w, axis=1)[:, None]
    w *= rng.uniform(0, 1, n)[:, None] ** (1.0 / d)
    return np.linalg.solve(a, w.T).T
