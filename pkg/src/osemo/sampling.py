"""Random-Fourier-feature draws of highest-fidelity posterior functions.

A draw is ``f(x) = phi(x)^T theta`` with ``theta | D ~ N(A^-1 Phi^T y, s2 A^-1)``,
``A = Phi^T Phi + s2 I``. The weights are sampled through the equivalent
dual update ``theta = theta0 + Phi^T (Phi Phi^T + s2 I)^-1 (y - Phi theta0 - eps)``,
which needs only an n x n factorisation.

Fidelity-aware models get features that reproduce their kernel exactly:

* ``cf``: the product of SE kernels on x and z is one ARD SE kernel on the
  concatenation [x, z], so features live on the joint space and the draw is
  evaluated at z = 1.
* ``mf``: the recursive model ``f^(m) = f^(1) + sum_{l<m} e_l`` gets one weight
  block for the base function and one per error level; an observation at
  level m switches on the first m-1 error blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mathkit import cho_solve, cholesky_jittered, make_rng
from .surrogates import FittedSurrogate, GpHyperParams

DEFAULT_FEATURES = 500


@dataclass(frozen=True)
class _Block:
    freqs: np.ndarray  # (n_features, p)
    offsets: np.ndarray  # (n_features,)
    amplitude: float

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.amplitude * np.cos(u @ self.freqs.T + self.offsets)


def _block(lengthscales, variance: float, n_features: int, rng) -> _Block:
    ls = np.asarray(lengthscales, dtype=float)
    freqs = rng.standard_normal((n_features, ls.size)) / ls
    offsets = rng.uniform(0.0, 2.0 * math.pi, n_features)
    return _Block(freqs, offsets, math.sqrt(2.0 * variance / n_features))


@dataclass(frozen=True)
class FeatureMap:
    kind: str
    blocks: tuple
    n_levels: int = 1

    @property
    def n_features(self) -> int:
        return self.blocks[0].freqs.shape[0]

    @property
    def n_weights(self) -> int:
        if self.kind == "mf":
            return self.blocks[0].freqs.shape[0] + (self.n_levels - 1) * self.blocks[1].freqs.shape[0]
        return self.blocks[0].freqs.shape[0]

    def features(self, x, fid=None) -> np.ndarray:
        """Feature matrix for inputs at the given fidelity (default: highest)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = x.shape[0]
        if self.kind == "single":
            return self.blocks[0](x)
        if self.kind == "cf":
            z = np.ones(n) if fid is None else np.broadcast_to(np.asarray(fid, dtype=float), (n,))
            return self.blocks[0](np.column_stack([x, z]))
        level = np.full(n, self.n_levels) if fid is None else np.broadcast_to(np.asarray(fid), (n,))
        base = self.blocks[0](x)
        if self.n_levels == 1:
            return base
        err = self.blocks[1](x)
        parts = [base] + [err * (level > l)[:, None] for l in range(1, self.n_levels)]
        return np.hstack(parts)


def build_feature_map(params: GpHyperParams, n_features: int, rng, n_levels: int = 1) -> FeatureMap:
    """Frequencies from the SE spectral density N(0, diag(1/l^2)), offsets U[0, 2pi)."""
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    rng = make_rng(rng)
    if params.kind == "single":
        return FeatureMap("single", (_block(params.lengthscales, params.variance, n_features, rng),))
    if params.kind == "cf":
        ls = np.append(params.lengthscales, params.fid_lengthscale)
        return FeatureMap("cf", (_block(ls, params.variance, n_features, rng),))
    blocks = (
        _block(params.lengthscales, params.variance, n_features, rng),
        _block(params.err_lengthscales, params.err_variance, n_features, rng),
    )
    return FeatureMap("mf", blocks, int(n_levels))


@dataclass(frozen=True)
class SampledFunction:
    """A finite-weight draw of the highest-fidelity function, in output units."""

    fmap: FeatureMap
    theta: np.ndarray
    index: int = 0
    y_mean: float = 0.0
    y_scale: float = 1.0

    def __call__(self, x) -> np.ndarray:
        return self.fmap.features(x) @ self.theta * self.y_scale + self.y_mean


def evaluate_sample(f: SampledFunction, x) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    out = f(np.atleast_2d(x))
    return float(out[0]) if x.ndim == 1 else out


def sample_posterior_function(
    model: FittedSurrogate,
    fmap: FeatureMap,
    rng,
    index: int = 0,
) -> SampledFunction:
    """Draw weights from their Gaussian posterior given the model's data."""
    rng = make_rng(rng)
    p = fmap.n_weights
    theta0 = rng.standard_normal(p)
    if model.n == 0:
        return SampledFunction(fmap, theta0, index, model.y_mean, model.y_scale)
    noise = model.params.noise
    phi = fmap.features(model.x, model.fid)
    gram = phi @ phi.T + noise * np.eye(model.n)
    chol, _ = cholesky_jittered(gram)
    eps = math.sqrt(noise) * rng.standard_normal(model.n)
    resid = model.y_std - phi @ theta0 - eps
    theta = theta0 + phi.T @ cho_solve(chol, resid)
    return SampledFunction(fmap, theta, index, model.y_mean, model.y_scale)


def draw_function(model: FittedSurrogate, rng, n_features: int = DEFAULT_FEATURES, index: int = 0) -> SampledFunction:
    """Fresh feature map plus posterior weights, in one call."""
    rng = make_rng(rng)
    fmap = build_feature_map(model.params, n_features, rng, n_levels=model.n_levels)
    return sample_posterior_function(model, fmap, rng, index)
