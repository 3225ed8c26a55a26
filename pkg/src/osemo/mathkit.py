"""Scalar and matrix numerics shared by every other module.

Normal density/CDF helpers, jittered SPD solves, composite Simpson
quadrature and the seeded random-stream contract.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
from scipy import special

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
GAUSS_ENTROPY_CONST = 0.5 * (1.0 + math.log(2.0 * math.pi))

JITTER_START = 1e-10
JITTER_MAX = 1e-4


class FactorizationError(np.linalg.LinAlgError):
    """Raised when a kernel matrix stays non-PD after the maximum jitter."""


def _check_finite(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite input")
    return arr


def std_normal_pdf(x):
    """Standard normal density, elementwise."""
    arr = _check_finite(x)
    out = np.exp(-0.5 * arr * arr - LOG_SQRT_2PI)
    return float(out) if out.ndim == 0 else out


def std_normal_cdf(x):
    """Standard normal CDF, elementwise, accurate to ~1e-16 absolute."""
    arr = _check_finite(x)
    out = special.ndtr(arr)
    return float(out) if out.ndim == 0 else out


def log_std_normal_cdf(x):
    """log Phi(x), finite for very negative x.

    ``scipy.special.log_ndtr`` switches to an asymptotic series in the
    far left tail, so the result never hits log(0).
    """
    out = special.log_ndtr(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def inverse_mills(x):
    """phi(x) / Phi(x), evaluated in log space so it stays finite for x << 0."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x - LOG_SQRT_2PI - special.log_ndtr(x))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# SPD linear algebra
# ---------------------------------------------------------------------------


def cholesky_jittered(m: np.ndarray) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of ``m``, adding diagonal jitter on failure.

    Jitter starts at 1e-10 * mean(diag) and grows x10 up to 1e-4 * mean(diag).

    Returns:
        (L, jitter) with ``L @ L.T == m + jitter * I``.

    Raises:
        FactorizationError: if the matrix is not PD even at maximum jitter.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n == 0:
        return np.zeros((0, 0)), 0.0
    scale = float(np.mean(np.diag(m)))
    if not np.isfinite(scale) or scale <= 0.0:
        scale = 1.0
    try:
        return scipy.linalg.cholesky(m, lower=True, check_finite=False), 0.0
    except np.linalg.LinAlgError:
        pass
    rel = JITTER_START
    while rel <= JITTER_MAX * (1 + 1e-12):
        jitter = rel * scale
        try:
            chol = scipy.linalg.cholesky(m + jitter * np.eye(n), lower=True, check_finite=False)
            return chol, jitter
        except np.linalg.LinAlgError:
            rel *= 10.0
    raise FactorizationError(f"matrix of size {n} not positive definite after jitter {JITTER_MAX:g}")


def cho_solve(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    return scipy.linalg.cho_solve((chol, True), b, check_finite=False)


def spd_solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``m v = b`` for symmetric positive definite ``m``."""
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {m.shape}, rhs {b.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if not np.allclose(m, m.T, rtol=1e-10, atol=1e-10 * scale):
        raise ValueError("matrix is not symmetric")
    chol, _ = cholesky_jittered(m)
    return cho_solve(chol, b)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def simpson_weights(panels: int) -> np.ndarray:
    """Composite Simpson weights for ``panels + 1`` equispaced nodes (unit step)."""
    if panels <= 0 or panels % 2:
        raise ValueError(f"Simpson's rule needs an even positive panel count, got {panels}")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def simpson_integrate(f, lo: float, hi: float, panels: int) -> float:
    """Composite Simpson estimate of the integral of ``f`` over ``[lo, hi]``.

    ``f`` is called once on the full node array, so vectorised callables are
    cheap; scalar-only callables are handled through ``np.vectorize``.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    w = simpson_weights(panels)
    nodes = np.linspace(lo, hi, panels + 1)
    try:
        vals = np.asarray(f(nodes), dtype=float)
        if vals.shape != nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.asarray([f(t) for t in nodes], dtype=float)
    h = (hi - lo) / panels
    return float(h * np.dot(w, vals))


def simpson_grid(lo: np.ndarray, hi: np.ndarray, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched Simpson nodes and weights.

    For arrays of bounds of shape ``S`` returns nodes of shape ``S + (panels+1,)``
    and weights (including the step size) of the same shape, so that
    ``(weights * f(nodes)).sum(-1)`` integrates each batch element.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    w = simpson_weights(panels)
    t = np.linspace(0.0, 1.0, panels + 1)
    span = (hi - lo)[..., None]
    nodes = lo[..., None] + span * t
    weights = w * span / panels
    return nodes, weights


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


def make_rng(seed) -> np.random.Generator:
    """Seeded PCG64 stream. Passing a Generator returns it unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a 63-bit seed for a child stream owned by a separate task."""
    return int(rng.integers(0, 2**63 - 1))
