"""Gaussian-process surrogates: single-fidelity, discrete multi-fidelity and
continuous-fidelity, with marginal-likelihood hyperparameter fitting.

All three flavours share one exact-GP implementation; they differ only in
the kernel over (input, fidelity) pairs:

* ``single``: ARD squared exponential on the input.
* ``mf``: recursive autoregressive kernel, ``k1(x, x') + (min(m, m') - 1) ke(x, x')``
  for integer fidelity levels ``1..M``.
* ``cf``: product ``kX(x, x') * kZ(z, z')`` of SE kernels, fidelity ``z`` in [0, 1].

Outputs are standardised (shift by the sample mean, scale by the sample std)
before fitting; the GP prior on the standardised values is zero-mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.linalg

from .mathkit import FactorizationError, cho_solve, cholesky_jittered, make_rng

KINDS = ("single", "mf", "cf")
NOISE_FLOOR = 1e-8

# log-space search boxes for hyperparameter fitting (standardised outputs,
# inputs on the unit cube)
LENGTHSCALE_BOUNDS = (1e-2, 1e1)
VARIANCE_BOUNDS = (1e-2, 1e1)
ERROR_VARIANCE_BOUNDS = (1e-4, 1e1)
FIDELITY_BANDWIDTH_BOUNDS = (1e-2, 1e1)
NOISE_BOUNDS = (NOISE_FLOOR, 1e-1)

N_STARTS = 8
N_REFINE = 50


# ---------------------------------------------------------------------------
# Domain and data containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxDomain:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower/upper must be 1-D arrays of equal length")
        if not np.all(lo < hi):
            raise ValueError("need lower < upper in every dimension")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def unit(cls, d: int) -> "BoxDomain":
        return cls(np.zeros(d), np.ones(d))

    @property
    def d(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x, tol: float = 1e-9) -> np.ndarray:
        x = np.atleast_2d(x)
        slack = tol * self.span
        return np.all((x >= self.lower - slack) & (x <= self.upper + slack), axis=-1)

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.lower + self.span * rng.random((n, self.d))


@dataclass
class Dataset:
    """Accumulated evaluations.

    ``y`` holds K objective columns followed by L constraint columns. ``fid``
    is ``None`` in single-fidelity mode, otherwise an ``(n, K)`` array of
    integer levels (discrete) or values in [0, 1] (continuous).
    """

    x: np.ndarray
    y: np.ndarray
    cost: np.ndarray
    K: int
    L: int = 0
    mode: str = "none"
    fid: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in ("none", "discrete", "continuous"):
            raise ValueError(f"unknown fidelity mode {self.mode!r}")
        self.x = np.atleast_2d(np.asarray(self.x, dtype=float))
        n = self.x.shape[0]
        self.y = np.asarray(self.y, dtype=float).reshape(n, self.K + self.L)
        self.cost = np.asarray(self.cost, dtype=float).reshape(n)
        if self.mode == "none":
            if self.fid is not None:
                raise ValueError("single-fidelity dataset cannot carry fidelities")
        else:
            if self.fid is None:
                raise ValueError(f"{self.mode} dataset needs fidelity columns")
            self.fid = np.asarray(self.fid, dtype=float).reshape(n, self.K)
        if np.any(self.cost < 0):
            raise ValueError("costs must be nonnegative")

    @classmethod
    def empty(cls, d: int, K: int, L: int = 0, mode: str = "none") -> "Dataset":
        fid = None if mode == "none" else np.zeros((0, K))
        return cls(np.zeros((0, d)), np.zeros((0, K + L)), np.zeros(0), K, L, mode, fid)

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def append(self, x, y, cost, fid=None) -> "Dataset":
        x = np.atleast_2d(x)
        y = np.atleast_2d(y)
        cost = np.atleast_1d(cost)
        new_fid = None
        if self.mode != "none":
            new_fid = np.vstack([self.fid, np.atleast_2d(fid)])
        return Dataset(
            np.vstack([self.x, x]),
            np.vstack([self.y, y]),
            np.concatenate([self.cost, cost]),
            self.K,
            self.L,
            self.mode,
            new_fid,
        )

    def header(self) -> list[str]:
        cols = [f"x_{i}" for i in range(self.d)]
        if self.mode != "none":
            cols += [f"fid_{j}" for j in range(self.K)]
        cols += [f"y_{k}" for k in range(self.K + self.L)] + ["cost"]
        return cols

    def rows(self):
        for i in range(len(self)):
            row = list(self.x[i])
            if self.mode != "none":
                row += list(self.fid[i])
            row += list(self.y[i]) + [self.cost[i]]
            yield row

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header())
            for row in self.rows():
                w.writerow([repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path, K: int, L: int = 0, mode: str = "none") -> "Dataset":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            data = np.array([[float(v) for v in row] for row in reader], dtype=float)
        d = sum(h.startswith("x_") for h in header)
        n_fid = sum(h.startswith("fid_") for h in header)
        if (mode == "none") != (n_fid == 0):
            raise ValueError(f"fidelity columns inconsistent with mode {mode!r}")
        if data.size == 0:
            return cls.empty(d, K, L, mode)
        x = data[:, :d]
        fid = data[:, d : d + n_fid] if n_fid else None
        y = data[:, d + n_fid : d + n_fid + K + L]
        cost = data[:, -1]
        return cls(x, y, cost, K, L, mode, fid)


# ---------------------------------------------------------------------------
# Hyperparameters and kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GpHyperParams:
    """Kernel hyperparameters for one output.

    ``single``: ``lengthscales``, ``variance``, ``noise``.
    ``mf``: base kernel (``lengthscales``, ``variance``) plus error kernel
    (``err_lengthscales``, ``err_variance``).
    ``cf``: input kernel (``lengthscales``, ``variance``) times fidelity kernel
    with bandwidth ``fid_lengthscale``.
    """

    kind: str
    lengthscales: np.ndarray
    variance: float
    noise: float = 1e-6
    err_lengthscales: np.ndarray | None = None
    err_variance: float | None = None
    fid_lengthscale: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown surrogate kind {self.kind!r}")
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        object.__setattr__(self, "lengthscales", ls)
        if np.any(ls <= 0) or self.variance <= 0:
            raise ValueError("lengthscales and variance must be positive")
        if self.noise < 1e-10:
            raise ValueError("noise variance must be >= 1e-10")
        if self.kind == "mf":
            if self.err_lengthscales is None or self.err_variance is None:
                raise ValueError("mf params need an error kernel")
            els = np.atleast_1d(np.asarray(self.err_lengthscales, dtype=float))
            object.__setattr__(self, "err_lengthscales", els)
            if np.any(els <= 0) or self.err_variance < 0:
                raise ValueError("error-kernel lengthscales must be positive")
        if self.kind == "cf":
            if self.fid_lengthscale is None or self.fid_lengthscale <= 0:
                raise ValueError("cf params need a positive fidelity bandwidth")

    @property
    def d(self) -> int:
        return self.lengthscales.size

    def to_vector(self) -> np.ndarray:
        """Log-space parameter vector used by the fitter."""
        parts = [np.log(self.lengthscales), [math.log(self.variance)]]
        if self.kind == "mf":
            parts += [np.log(self.err_lengthscales), [math.log(max(self.err_variance, 1e-300))]]
        if self.kind == "cf":
            parts += [[math.log(self.fid_lengthscale)]]
        parts += [[math.log(self.noise)]]
        return np.concatenate(parts)

    @classmethod
    def from_vector(cls, kind: str, d: int, v: np.ndarray) -> "GpHyperParams":
        v = np.exp(np.asarray(v, dtype=float))
        ls, var = v[:d], v[d]
        noise = v[-1]
        if kind == "single":
            return cls(kind, ls, var, noise)
        if kind == "mf":
            return cls(kind, ls, var, noise, err_lengthscales=v[d + 1 : 2 * d + 1], err_variance=v[2 * d + 1])
        return cls(kind, ls, var, noise, fid_lengthscale=v[d + 1])


def default_params(kind: str, d: int, variance: float = 1.0) -> GpHyperParams:
    ls = np.full(d, 0.3)
    if kind == "single":
        return GpHyperParams(kind, ls, variance, 1e-6)
    if kind == "mf":
        return GpHyperParams(kind, ls, variance, 1e-6, err_lengthscales=ls, err_variance=0.1 * variance)
    return GpHyperParams(kind, ls, variance, 1e-6, fid_lengthscale=1.0)


def _log_bounds(kind: str, d: int) -> np.ndarray:
    rows = [LENGTHSCALE_BOUNDS] * d + [VARIANCE_BOUNDS]
    if kind == "mf":
        rows += [LENGTHSCALE_BOUNDS] * d + [ERROR_VARIANCE_BOUNDS]
    if kind == "cf":
        rows += [FIDELITY_BANDWIDTH_BOUNDS]
    rows += [NOISE_BOUNDS]
    return np.log(np.asarray(rows, dtype=float))


def _sqdist(a: np.ndarray, b: np.ndarray, ls: np.ndarray) -> np.ndarray:
    a = a / ls
    b = b / ls
    d2 = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * a @ b.T
    return np.maximum(d2, 0.0)


def se_matrix(a: np.ndarray, b: np.ndarray, lengthscales, variance: float) -> np.ndarray:
    """Cross-covariance matrix of the ARD squared-exponential kernel."""
    return variance * np.exp(-0.5 * _sqdist(np.atleast_2d(a), np.atleast_2d(b), np.asarray(lengthscales)))


def se_kernel(x, x2, lengthscales, variance: float = 1.0) -> float:
    """variance * exp(-1/2 sum_i ((x_i - x2_i) / l_i)^2)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    ls = np.broadcast_to(np.asarray(lengthscales, dtype=float), x.shape)
    if x.shape != x2.shape:
        raise ValueError("dimension mismatch")
    if np.any(ls <= 0):
        raise ValueError("lengthscales must be positive")
    return float(variance * np.exp(-0.5 * np.sum(((x - x2) / ls) ** 2)))


def mf_kernel(x, m: int, x2, m2: int, params: GpHyperParams, n_levels: int | None = None) -> float:
    """Recursive multi-fidelity kernel for a single pair of (input, level)."""
    for level in (m, m2):
        if int(level) != level or level < 1 or (n_levels is not None and level > n_levels):
            raise ValueError(f"invalid fidelity level {level}")
    k1 = se_kernel(x, x2, params.lengthscales, params.variance)
    ke = se_kernel(x, x2, params.err_lengthscales, params.err_variance)
    return k1 + (min(m, m2) - 1) * ke


def cf_kernel(x, z: float, x2, z2: float, params: GpHyperParams) -> float:
    """Product kernel over input and continuous fidelity."""
    for zz in (z, z2):
        if not 0.0 <= zz <= 1.0:
            raise ValueError(f"fidelity {zz} outside [0, 1]")
    kx = se_kernel(x, x2, params.lengthscales, params.variance)
    return kx * math.exp(-0.5 * ((z - z2) / params.fid_lengthscale) ** 2)


def kernel_matrix(params: GpHyperParams, xa, fa, xb, fb) -> np.ndarray:
    """Kernel matrix between two batches of (input, fidelity) pairs."""
    if params.kind == "single":
        return se_matrix(xa, xb, params.lengthscales, params.variance)
    if params.kind == "mf":
        k1 = se_matrix(xa, xb, params.lengthscales, params.variance)
        ke = se_matrix(xa, xb, params.err_lengthscales, params.err_variance)
        lvl = np.minimum(np.asarray(fa, dtype=float)[:, None], np.asarray(fb, dtype=float)[None, :])
        return k1 + (lvl - 1.0) * ke
    kx = se_matrix(xa, xb, params.lengthscales, params.variance)
    dz = (np.asarray(fa, dtype=float)[:, None] - np.asarray(fb, dtype=float)[None, :]) / params.fid_lengthscale
    return kx * np.exp(-0.5 * dz * dz)


def kernel_diag(params: GpHyperParams, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if params.kind == "mf":
        return params.variance + (f - 1.0) * params.err_variance
    return np.full(f.shape, params.variance)


# ---------------------------------------------------------------------------
# Fitted model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FittedSurrogate:
    """An exact GP conditioned on one output column. Immutable."""

    params: GpHyperParams
    x: np.ndarray
    fid: np.ndarray
    y_std: np.ndarray
    y_mean: float
    y_scale: float
    chol: np.ndarray
    alpha: np.ndarray
    domain: BoxDomain
    n_levels: int = 1
    jitter: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def kind(self) -> str:
        return self.params.kind

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def highest_fidelity(self) -> float:
        if self.kind == "mf":
            return float(self.n_levels)
        return 1.0

    @property
    def y(self) -> np.ndarray:
        return self.y_std * self.y_scale + self.y_mean

    def _prep(self, x, fid, check: bool = True):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.domain.d:
            raise ValueError(f"expected inputs of dimension {self.domain.d}, got {x.shape[1]}")
        if check and not np.all(self.domain.contains(x)):
            raise ValueError("query point outside the domain")
        if fid is None:
            fid = self.highest_fidelity
        f = np.broadcast_to(np.asarray(fid, dtype=float), (x.shape[0],)).astype(float)
        if check:
            if self.kind == "mf" and (np.any(f < 1) or np.any(f > self.n_levels) or np.any(f != np.round(f))):
                raise ValueError("invalid fidelity level")
            if self.kind == "cf" and (np.any(f < 0) or np.any(f > 1)):
                raise ValueError("fidelity outside [0, 1]")
        return x, f

    def _same_x_prior(self, fa, fb):
        """Prior covariance between (x, fa) and (x, fb) for identical x."""
        p = self.params
        if self.kind == "mf":
            return p.variance + (np.minimum(fa, fb) - 1.0) * p.err_variance
        if self.kind == "cf":
            return p.variance * np.exp(-0.5 * ((fa - fb) / p.fid_lengthscale) ** 2)
        return np.full(np.shape(fa), p.variance)

    def _kq(self, x, f):
        return kernel_matrix(self.params, x, f, self.x, self.fid)

    def predict_std(self, x, fid=None, check: bool = True):
        """Posterior mean and variance in standardised output units."""
        x, f = self._prep(x, fid, check)
        prior = kernel_diag(self.params, f)
        if self.n == 0:
            return np.zeros(x.shape[0]), prior.copy()
        kq = self._kq(x, f)
        mean = kq @ self.alpha
        v = scipy.linalg.solve_triangular(self.chol, kq.T, lower=True, check_finite=False)
        var = prior - np.einsum("ij,ij->j", v, v)
        return mean, var

    def predict(self, x, fid=None, check: bool = True, clamp: bool = True):
        """Posterior mean and variance in the original output units."""
        mean, var = self.predict_std(x, fid, check)
        if clamp:
            var = np.maximum(var, 0.0)
        return mean * self.y_scale + self.y_mean, var * self.y_scale**2

    def cross_covariance(self, x, fid_a, fid_b, check: bool = True) -> np.ndarray:
        """Posterior covariance between (x, fid_a) and (x, fid_b), original units."""
        x, fa = self._prep(x, fid_a, check)
        _, fb = self._prep(x, fid_b, check)
        prior = self._same_x_prior(fa, fb)
        prior = np.broadcast_to(prior, (x.shape[0],))
        if self.n == 0:
            return prior * self.y_scale**2
        va = scipy.linalg.solve_triangular(self.chol, self._kq(x, fa).T, lower=True, check_finite=False)
        vb = scipy.linalg.solve_triangular(self.chol, self._kq(x, fb).T, lower=True, check_finite=False)
        return (prior - np.einsum("ij,ij->j", va, vb)) * self.y_scale**2

    def joint_predict(self, x, fid_low, check: bool = True):
        """Mean/variance at ``fid_low`` and at the highest fidelity plus their
        cross-covariance, sharing one triangular solve per side."""
        x, fl = self._prep(x, fid_low, check)
        fh = np.full(x.shape[0], self.highest_fidelity)
        pl = kernel_diag(self.params, fl)
        ph = kernel_diag(self.params, fh)
        pc = self._same_x_prior(fl, fh)
        if self.n == 0:
            ml = mh = np.zeros(x.shape[0])
            vl, vh, cov = pl, ph, pc
        else:
            kl = self._kq(x, fl)
            kh = self._kq(x, fh)
            ml = kl @ self.alpha
            mh = kh @ self.alpha
            al = scipy.linalg.solve_triangular(self.chol, kl.T, lower=True, check_finite=False)
            ah = scipy.linalg.solve_triangular(self.chol, kh.T, lower=True, check_finite=False)
            vl = pl - np.einsum("ij,ij->j", al, al)
            vh = ph - np.einsum("ij,ij->j", ah, ah)
            cov = pc - np.einsum("ij,ij->j", al, ah)
        s2 = self.y_scale**2
        return (
            ml * self.y_scale + self.y_mean,
            np.maximum(vl, 0.0) * s2,
            mh * self.y_scale + self.y_mean,
            np.maximum(vh, 0.0) * s2,
            cov * s2,
        )


def _standardise(y: np.ndarray) -> tuple[np.ndarray, float, float]:
    if y.size == 0:
        return y.copy(), 0.0, 1.0
    mean = float(np.mean(y))
    scale = float(np.std(y))
    if not scale > 1e-12:
        scale = 1.0
    return (y - mean) / scale, mean, scale


def _fid_column(kind: str, fid, n: int) -> np.ndarray:
    if kind == "single":
        return np.ones(n)
    if fid is None:
        raise ValueError(f"{kind} surrogate needs fidelities")
    return np.asarray(fid, dtype=float).reshape(n)


def build_surrogate(
    x,
    y,
    params: GpHyperParams,
    fid=None,
    domain: BoxDomain | None = None,
    n_levels: int = 1,
) -> FittedSurrogate:
    """Condition a GP with fixed hyperparameters on data."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.size == 0:
        x = np.zeros((0, params.d))
    y = np.asarray(y, dtype=float).reshape(x.shape[0])
    if domain is None:
        domain = BoxDomain.unit(params.d)
    f = _fid_column(params.kind, fid, x.shape[0])
    if params.kind == "mf":
        n_levels = max(int(n_levels), int(f.max()) if f.size else 1)
    ys, mean, scale = _standardise(y)
    kmat = kernel_matrix(params, x, f, x, f) + params.noise * np.eye(x.shape[0])
    chol, jitter = cholesky_jittered(kmat)
    alpha = cho_solve(chol, ys) if x.shape[0] else np.zeros(0)
    return FittedSurrogate(params, x, f, ys, mean, scale, chol, alpha, domain, n_levels, jitter)


def log_marginal_likelihood(params: GpHyperParams, x, ys, f) -> float:
    n = x.shape[0]
    kmat = kernel_matrix(params, x, f, x, f) + params.noise * np.eye(n)
    try:
        chol, _ = cholesky_jittered(kmat)
    except FactorizationError:
        return -np.inf
    alpha = cho_solve(chol, ys)
    return float(-0.5 * ys @ alpha - np.log(np.diag(chol)).sum() - 0.5 * n * math.log(2 * math.pi))


def fit_hyperparameters(
    x,
    y,
    kind: str,
    rng,
    fid=None,
    n_starts: int = N_STARTS,
    n_refine: int = N_REFINE,
) -> GpHyperParams:
    """Maximise the log marginal likelihood by multi-start random search in
    log space followed by coordinate-wise refinement of the best start.

    Each refinement step sweeps all coordinates once, trying +/- the current
    step size; the step halves after a sweep without improvement.
    Deterministic for a given ``rng`` seed.
    """
    rng = make_rng(rng)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).reshape(x.shape[0])
    d = x.shape[1]
    if x.shape[0] < 2:
        raise ValueError("need at least 2 observations to fit hyperparameters")
    ys, _, scale = _standardise(y)
    f = _fid_column(kind, fid, x.shape[0])
    if np.ptp(y) <= 1e-12 * max(1.0, abs(float(y[0]))):
        # constant data: fall back to default priors
        var = float(np.var(y)) / scale**2 + 1e-6
        base = GpHyperParams(kind, np.ones(d), var, NOISE_FLOOR)
        if kind == "mf":
            return replace(base, err_lengthscales=np.ones(d), err_variance=1e-4)
        if kind == "cf":
            return replace(base, fid_lengthscale=1.0)
        return base

    bounds = _log_bounds(kind, d)
    lo, hi = bounds[:, 0], bounds[:, 1]

    def score(v):
        return log_marginal_likelihood(GpHyperParams.from_vector(kind, d, v), x, ys, f)

    starts = [np.clip(default_params(kind, d).to_vector(), lo, hi)]
    starts += [lo + (hi - lo) * rng.random(lo.size) for _ in range(n_starts - 1)]
    scores = [score(s) for s in starts]
    best_i = int(np.argmax(scores))
    best, best_score = starts[best_i].copy(), scores[best_i]

    step = 0.5
    for _ in range(n_refine):
        improved = False
        for i in range(lo.size):
            for sign in (1.0, -1.0):
                cand = best.copy()
                cand[i] = np.clip(cand[i] + sign * step, lo[i], hi[i])
                if cand[i] == best[i]:
                    continue
                s = score(cand)
                if s > best_score:
                    best, best_score, improved = cand, s, True
                    break
        if not improved:
            step *= 0.5
            if step < 1e-3:
                break
    return GpHyperParams.from_vector(kind, d, best)


def fit_surrogate(
    x,
    y,
    kind: str,
    rng,
    fid=None,
    domain: BoxDomain | None = None,
    n_levels: int = 1,
    params: GpHyperParams | None = None,
) -> FittedSurrogate:
    """Fit hyperparameters (unless ``params`` is given) and condition on data."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if params is None:
        if x.shape[0] >= 2:
            params = fit_hyperparameters(x, y, kind, rng, fid=fid)
        else:
            params = default_params(kind, x.shape[1])
    return build_surrogate(x, y, params, fid=fid, domain=domain, n_levels=n_levels)


# ---------------------------------------------------------------------------
# Named posterior queries
# ---------------------------------------------------------------------------


def _scalar_pair(mean, var):
    return float(mean[0]), float(var[0])


def gp_posterior(model: FittedSurrogate, x) -> tuple[float, float]:
    """Posterior mean and variance of a single-fidelity model at one point."""
    return _scalar_pair(*model.predict(np.atleast_2d(x)))


def mf_posterior(model: FittedSurrogate, x, m: int) -> tuple[float, float]:
    if model.kind != "mf":
        raise ValueError("mf_posterior needs a multi-fidelity model")
    return _scalar_pair(*model.predict(np.atleast_2d(x), m))


def mf_cross_covariance(model: FittedSurrogate, x, m: int, m2: int) -> float:
    if model.kind != "mf":
        raise ValueError("mf_cross_covariance needs a multi-fidelity model")
    return float(model.cross_covariance(np.atleast_2d(x), m, m2)[0])


def cf_posterior(model: FittedSurrogate, x, z: float) -> tuple[float, float]:
    if model.kind != "cf":
        raise ValueError("cf_posterior needs a continuous-fidelity model")
    return _scalar_pair(*model.predict(np.atleast_2d(x), z))


def cf_cross_covariance(model: FittedSurrogate, x, z: float) -> float:
    """Posterior covariance between g(x, z) and g(x, 1)."""
    if model.kind != "cf":
        raise ValueError("cf_cross_covariance needs a continuous-fidelity model")
    return float(model.cross_covariance(np.atleast_2d(x), z, 1.0)[0])


def fit_output_models(
    data: Dataset,
    kind: str,
    rng,
    domain: BoxDomain,
    n_levels: Sequence[int] | None = None,
    previous: Sequence[FittedSurrogate] | None = None,
    refit: bool = True,
) -> list[FittedSurrogate]:
    """One independent surrogate per objective and constraint column.

    Constraint columns (index >= K) are modelled at the evaluated input only;
    in fidelity modes they use the first objective's fidelity column.
    With ``refit=False`` the previous hyperparameters are reused.
    """
    rng = make_rng(rng)
    models = []
    for k in range(data.K + data.L):
        fid = None
        if kind != "single":
            fid = data.fid[:, min(k, data.K - 1)]
        levels = 1 if n_levels is None else int(n_levels[min(k, len(n_levels) - 1)])
        params = None
        if not refit and previous is not None:
            params = previous[k].params
        models.append(fit_surrogate(data.x, data.y[:, k], kind, rng, fid=fid, domain=domain, n_levels=levels, params=params))
    return models
