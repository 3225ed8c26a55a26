"""Output-space entropy acquisition functions.

Every acquisition here is a sum over outputs of a per-output information gain,
averaged over S sampled Pareto fronts, optionally divided by a normalised
evaluation cost. The per-output gains are exposed as vectorised helpers
(``*_gain``) so the optimizer can score many (input, fidelity) pairs at once;
the named ``*_alpha`` functions are thin wrappers that accept one point or a
batch of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .mathkit import GAUSS_ENTROPY_CONST, LOG_SQRT_2PI, child_seed, inverse_mills, make_rng, simpson_weights
from .nsga2 import EvolutionConfig, nsga2
from .pareto import ParetoFrontSample
from .sampling import DEFAULT_FEATURES, draw_function
from .surrogates import FittedSurrogate

GAMMA_CLIP = (-50.0, 40.0)
FRONT_RETRIES = 5
FIDELITY_GRID = np.append(np.arange(20) / 20.0, 1.0)


@dataclass(frozen=True)
class AcquisitionConfig:
    """Knobs shared by all acquisition functions.

    ``fidelity_filter`` selects the second fidelity-reduction test:
    ``"inverse"`` keeps z with xi(z) > ||xi||_inf / beta_t, ``"printed"``
    keeps z with xi(z) > beta_t * ||xi||_inf.
    """

    S: int = 10
    panels: int = 256
    half_width: float = 5.0
    tau_eps: float = 1e-6
    n_features: int = DEFAULT_FEATURES
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    fidelity_filter: str = "inverse"
    fidelity_grid: tuple = tuple(FIDELITY_GRID)

    def __post_init__(self):
        if self.S < 1:
            raise ValueError("S must be >= 1")
        if self.panels <= 0 or self.panels % 2:
            raise ValueError("panels must be even and positive")
        if self.fidelity_filter not in ("inverse", "printed"):
            raise ValueError(f"unknown fidelity_filter {self.fidelity_filter!r}")


# ---------------------------------------------------------------------------
# Cost model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostModel:
    """Per-objective evaluation costs, normalised by the highest-fidelity cost.

    ``mode="discrete"``: ``level_costs[j][m-1]`` is the cost of level m.
    ``mode="continuous"``: ``functions[j](x, z)`` is vectorised over rows.
    ``mode="none"``: every objective costs 1, so one evaluation costs K.
    ``scale`` multiplies every normalised cost.
    """

    K: int
    mode: str = "none"
    level_costs: tuple = ()
    functions: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.mode == "discrete":
            costs = tuple(tuple(float(c) for c in row) for row in self.level_costs)
            if len(costs) != self.K or any(min(r) <= 0 for r in costs):
                raise ValueError("need K positive cost rows")
            object.__setattr__(self, "level_costs", costs)
        elif self.mode == "continuous":
            if len(self.functions) != self.K:
                raise ValueError("need K cost functions")
        elif self.mode != "none":
            raise ValueError(f"unknown cost mode {self.mode!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def n_levels(self) -> tuple:
        return tuple(len(r) for r in self.level_costs)

    def scaled(self, c: float) -> "CostModel":
        return replace(self, scale=self.scale * c)

    def objective_cost(self, j: int, x, fid) -> np.ndarray:
        """Normalised cost of objective j at fidelity ``fid`` for each row of x."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = x.shape[0]
        if self.mode == "none":
            return np.full(n, self.scale)
        f = np.broadcast_to(np.asarray(fid, dtype=float), (n,))
        if self.mode == "discrete":
            row = np.asarray(self.level_costs[j])
            return self.scale * row[f.astype(int) - 1] / row[-1]
        fn = self.functions[j]
        raw = np.asarray(fn(x, f), dtype=float).reshape(n)
        top = np.asarray(fn(x, np.ones(n)), dtype=float).reshape(n)
        return self.scale * raw / top

    def total(self, x, fid=None) -> np.ndarray:
        """Normalised total cost; ``fid`` is ``(K,)`` or ``(n, K)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = x.shape[0]
        if self.mode == "none":
            return np.full(n, self.scale * self.K)
        f = np.broadcast_to(np.asarray(fid, dtype=float), (n, self.K))
        return sum(self.objective_cost(j, x, f[:, j]) for j in range(self.K))


# ---------------------------------------------------------------------------
# Scalar primitives
# ---------------------------------------------------------------------------


def tg_term(gamma) -> np.ndarray:
    """gamma * phi(gamma) / (2 Phi(gamma)) - ln Phi(gamma), the entropy drop
    from upper truncation at ``gamma`` standard deviations."""
    g = np.clip(np.asarray(gamma, dtype=float), *GAMMA_CLIP)
    return 0.5 * g * inverse_mills(g) - special.log_ndtr(g)


def truncated_gaussian_entropy(mu, sigma, upper):
    """Differential entropy of N(mu, sigma^2) truncated above at ``upper``."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("sigma must be positive")
    gamma = (np.asarray(upper, dtype=float) - np.asarray(mu, dtype=float)) / sigma
    out = GAUSS_ENTROPY_CONST + np.log(sigma) - tg_term(gamma)
    return float(out) if np.ndim(out) == 0 else out


def _mean_tg(mu: np.ndarray, var: np.ndarray, ystar: np.ndarray) -> np.ndarray:
    """Mean over samples of tg_term; zero where the variance vanishes.

    mu, var: (n,); ystar: (S,). Returns (n,).
    """
    sd = np.sqrt(np.maximum(var, 0.0))
    ok = sd > 0
    safe = np.where(ok, sd, 1.0)
    gamma = (ystar[None, :] - mu[:, None]) / safe[:, None]
    return np.where(ok, tg_term(gamma).mean(axis=1), 0.0)


def esg_moments(gamma_f, tau):
    """Mean and variance of u ~ phi(u) Phi((g - tau u)/sqrt(1 - tau^2)) / Phi(g).

    This is the standardised lower-fidelity output conditioned on the
    highest-fidelity output lying below its bound, so the mean is
    ``-tau * phi(g)/Phi(g)`` and the variance ``1 - tau^2 lam (g + lam)``
    with ``lam = phi(g)/Phi(g)``.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(tau) > 1.0 + 1e-12):
        raise ValueError("|tau| must be <= 1")
    g = np.clip(np.asarray(gamma_f, dtype=float), *GAMMA_CLIP)
    lam = inverse_mills(g)
    mean = -tau * lam + 0.0
    var = 1.0 - tau**2 * lam * (g + lam)
    if np.ndim(mean) == 0:
        return float(mean), float(var)
    return mean, var


def esg_term(gamma_f, tau, config: AcquisitionConfig = AcquisitionConfig()) -> np.ndarray:
    """Per-output iMOCA-E information term, elementwise over broadcast inputs.

    tau^2 g phi/(2 Phi) - ln Phi(g) + E_u[ln Phi((g - tau u)/sqrt(1 - tau^2))],
    the expectation by Simpson on mean +/- half_width * sd of the ESG,
    normalised by the quadrature mass. Falls back to the truncated-Gaussian
    term when 1 - tau^2 < tau_eps.
    """
    g, tau = np.broadcast_arrays(
        np.clip(np.asarray(gamma_f, dtype=float), *GAMMA_CLIP), np.clip(np.asarray(tau, dtype=float), -1.0, 1.0)
    )
    one_m = 1.0 - tau**2
    flat = one_m < config.tau_eps
    out = np.array(tg_term(g), dtype=float)
    live = ~flat
    if np.any(live):
        gl, tl, s = g[live], tau[live], np.sqrt(one_m[live])
        lam = inverse_mills(gl)
        mean = -tl * lam
        sd = np.sqrt(np.maximum(1.0 - tl**2 * lam * (gl + lam), 1e-12))
        t = np.linspace(-config.half_width, config.half_width, config.panels + 1)
        w = simpson_weights(config.panels) * (t[1] - t[0])
        u = mean[:, None] + sd[:, None] * t[None, :]
        inner = special.log_ndtr((gl[:, None] - tl[:, None] * u) / s[:, None])
        logp = -0.5 * u * u - LOG_SQRT_2PI + inner - special.log_ndtr(gl)[:, None]
        dens = np.exp(logp) * sd[:, None]
        mass = dens @ w
        expect = (dens * inner) @ w / mass
        val = tl**2 * 0.5 * gl * lam - special.log_ndtr(gl) + expect
        out[live] = val
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# NI entropy
# ---------------------------------------------------------------------------


def _ni_entropy_std(ml, sl, mh, sh, cov, ystar, config: AcquisitionConfig):
    """Entropy of the lower-fidelity output conditioned on the highest-fidelity
    output lying below ``ystar``, minus ln(sl). All inputs broadcast together.

    The conditional density in standardised units t = (y - ml)/sl is
    q(t) = phi(t) Phi((ystar - mbar(t))/sbar) / Phi(gM) with
    mbar(t) = mh + cov t / sl and sbar^2 = sh^2 - cov^2 / sl^2.
    """
    ml, sl, mh, sh, cov, ystar = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (ml, sl, mh, sh, cov, ystar)))
    rho2 = cov**2 / (sl**2 * sh**2)
    gm = np.clip((ystar - mh) / sh, *GAMMA_CLIP)
    out = np.empty(ml.shape)
    flat = rho2 >= 1.0 - config.tau_eps
    # perfectly correlated: a truncation of y^(m) at the image of the bound
    out[flat] = GAUSS_ENTROPY_CONST - tg_term(gm[flat])
    live = ~flat
    if np.any(live):
        t = np.linspace(-config.half_width, config.half_width, config.panels + 1)
        w = simpson_weights(config.panels) * (t[1] - t[0])
        sbar = np.sqrt(sh[live] ** 2 - cov[live] ** 2 / sl[live] ** 2)
        slope = cov[live] / sl[live]
        a = (ystar[live, None] - mh[live, None] - slope[:, None] * t[None, :]) / sbar[:, None]
        logq = -0.5 * t * t - LOG_SQRT_2PI + special.log_ndtr(a) - special.log_ndtr(gm[live])[:, None]
        q = np.exp(logq)
        out[live] = -(q * logq) @ w
    return out


def mfosemo_ni_entropy(model: FittedSurrogate, x, m: int, y_star, config: AcquisitionConfig = AcquisitionConfig()):
    """NI entropy of ``y^(m)`` given ``y^(M) <= y_star``; m must be below the top level."""
    if m >= model.highest_fidelity:
        raise ValueError("NI entropy needs a fidelity below the highest")
    x2 = np.atleast_2d(np.asarray(x, dtype=float))
    ml, vl, mh, vh, cov = model.joint_predict(x2, m)
    sl, sh = np.sqrt(vl), np.sqrt(vh)
    if np.any(sl <= 0) or np.any(sh <= 0):
        raise ValueError("degenerate predictive variance")
    h = _ni_entropy_std(ml, sl, mh, sh, cov, np.asarray(y_star, dtype=float), config) + np.log(sl)
    return float(h[0]) if np.asarray(x).ndim == 1 and np.ndim(y_star) == 0 else h


# ---------------------------------------------------------------------------
# Per-output gains, vectorised over inputs
# ---------------------------------------------------------------------------


def tg_gain(model: FittedSurrogate, x: np.ndarray, fid, ystar: np.ndarray) -> np.ndarray:
    """Mean over samples of the truncated-Gaussian gain at fidelity ``fid``
    (None = highest). Used by MESMO, MESMOC, MF-OSEMO-TG and iMOCA-T."""
    mu, var = model.predict(x, fid, check=False)
    return _mean_tg(mu, var, np.asarray(ystar, dtype=float))


def ni_gain(model: FittedSurrogate, x: np.ndarray, fid, ystar: np.ndarray, config: AcquisitionConfig) -> np.ndarray:
    """H1 - mean_s H2 for one output of MF-OSEMO-NI at a fixed level."""
    if fid is None or float(fid) >= model.highest_fidelity:
        return tg_gain(model, x, None, ystar)
    ml, vl, mh, vh, cov = model.joint_predict(x, fid, check=False)
    ok = (vl > 0) & (vh > 0)
    sl = np.sqrt(np.where(ok, vl, 1.0))
    sh = np.sqrt(np.where(ok, vh, 1.0))
    ys = np.asarray(ystar, dtype=float)
    h = _ni_entropy_std(ml[:, None], sl[:, None], mh[:, None], sh[:, None], np.where(ok, cov, 0.0)[:, None], ys[None, :], config)
    return np.where(ok, GAUSS_ENTROPY_CONST - h.mean(axis=1), 0.0)


def esg_gain(model: FittedSurrogate, x: np.ndarray, fid, ystar: np.ndarray, config: AcquisitionConfig) -> np.ndarray:
    """Mean over samples of the iMOCA-E term for one output at fidelity z."""
    z = 1.0 if fid is None else fid
    mg, vg, mf, vf, cov = model.joint_predict(x, z, check=False)
    ok = (vg > 0) & (vf > 0)
    sg = np.sqrt(np.where(ok, vg, 1.0))
    sf = np.sqrt(np.where(ok, vf, 1.0))
    tau = np.clip(np.where(ok, cov, 0.0) / (sg * sf), -1.0, 1.0)
    gamma = (np.asarray(ystar, dtype=float)[None, :] - mf[:, None]) / sf[:, None]
    vals = esg_term(gamma, tau[:, None], config)
    return np.where(ok, vals.mean(axis=1), 0.0)


GAINS = {"tg": tg_gain, "ni": ni_gain, "t": tg_gain, "e": esg_gain}


def output_gain(kind: str, model, x, fid, ystar, config: AcquisitionConfig) -> np.ndarray:
    fn = GAINS[kind]
    if fn is tg_gain:
        return fn(model, x, fid, ystar)
    return fn(model, x, fid, ystar, config)


def _maxima(samples: Sequence[ParetoFrontSample]) -> np.ndarray:
    if len(samples) == 0:
        raise ValueError("need at least one Pareto-front sample")
    return np.vstack([s.maxima for s in samples])  # (S, K[+L])


def _batch(x):
    arr = np.asarray(x, dtype=float)
    return np.atleast_2d(arr), arr.ndim == 1


def _out(v, single):
    return float(v[0]) if single else v


# ---------------------------------------------------------------------------
# Named acquisition functions
# ---------------------------------------------------------------------------


def mesmo_alpha(models: Sequence[FittedSurrogate], samples, x):
    """MESMO: sum over objectives of the mean truncated-Gaussian gain."""
    xb, single = _batch(x)
    ystar = _maxima(samples)
    total = sum(tg_gain(m, xb, None, ystar[:, j]) for j, m in enumerate(models))
    return _out(total, single)


def mesmoc_alpha(objective_models, constraint_models, samples, x):
    """MESMOC: the MESMO sum extended over constraint outputs."""
    xb, single = _batch(x)
    ystar = _maxima(samples)
    allm = list(objective_models) + list(constraint_models or [])
    total = sum(tg_gain(m, xb, None, ystar[:, j]) for j, m in enumerate(allm))
    return _out(total, single)


def _fidelity_alpha(kind, models, samples, x, fid, cost: CostModel, config):
    xb, single = _batch(x)
    ystar = _maxima(samples)
    f = np.broadcast_to(np.asarray(fid, dtype=float), (xb.shape[0], len(models)))
    num = np.zeros(xb.shape[0])
    for j, m in enumerate(models):
        for val in np.unique(f[:, j]):
            rows = f[:, j] == val
            num[rows] += output_gain(kind, m, xb[rows], val, ystar[:, j], config)
    return _out(num / cost.total(xb, f), single)


def mfosemo_tg_alpha(models, samples, x, m, cost: CostModel, config: AcquisitionConfig = AcquisitionConfig()):
    return _fidelity_alpha("tg", models, samples, x, m, cost, config)


def mfosemo_ni_alpha(models, samples, x, m, cost: CostModel, config: AcquisitionConfig = AcquisitionConfig()):
    return _fidelity_alpha("ni", models, samples, x, m, cost, config)


def imoca_t_alpha(models, samples, x, z, cost: CostModel, config: AcquisitionConfig = AcquisitionConfig()):
    return _fidelity_alpha("t", models, samples, x, z, cost, config)


def imoca_e_alpha(models, samples, x, z, cost: CostModel, config: AcquisitionConfig = AcquisitionConfig()):
    return _fidelity_alpha("e", models, samples, x, z, cost, config)


# ---------------------------------------------------------------------------
# Fidelity selection
# ---------------------------------------------------------------------------


def beta_t(d: int, t: int, l: float) -> float:
    return math.sqrt(0.5 * d * math.log(2.0 * t * l + 1.0))


def reduce_fidelity_space(
    model: FittedSurrogate,
    x,
    t: int,
    cost: CostModel,
    j: int,
    config: AcquisitionConfig = AcquisitionConfig(),
):
    """Admissible fidelities for objective j at each input.

    Returns ``(grid, mask)`` with ``mask[i, g]`` true when ``grid[g]`` is
    admissible at ``x[i]``. z = 1 is always admissible. The posterior std is
    taken in standardised output units.
    """
    xb, single = _batch(x)
    grid = np.asarray(config.fidelity_grid, dtype=float)
    n, d = xb.shape
    h = float(model.params.fid_lengthscale)
    xi = np.abs(grid - 1.0) / h
    xi_inf = float(xi.max())
    beta = beta_t(d, max(int(t), 1), float(np.sum(1.0 / model.params.lengthscales)))
    if config.fidelity_filter == "printed":
        far = xi > beta * xi_inf
    else:
        far = xi > xi_inf / beta
    q = 1.0 / (d + 3.0)
    mask = np.zeros((n, grid.size), dtype=bool)
    for g, z in enumerate(grid):
        if z == 1.0:
            mask[:, g] = True
            continue
        if not far[g]:
            continue
        _, var = model.predict_std(xb, z, check=False)
        ratio = cost.objective_cost(j, xb, z) / cost.objective_cost(j, xb, 1.0)
        mask[:, g] = np.sqrt(np.maximum(var, 0.0)) > xi[g] * ratio**q
    return (grid, mask[0]) if single else (grid, mask)


def best_fidelity_vector(gains: np.ndarray, costs: np.ndarray, mask: np.ndarray, max_iter: int = 50):
    """Maximise sum_j a_j / sum_j c_j over one admissible choice per objective.

    gains, costs, mask: (n, K, G). Dinkelbach iteration: for a ratio lam the
    best choice maximises a_j - lam c_j separately per objective; updating lam
    to the achieved ratio converges in finitely many steps.
    Returns (choice (n, K) grid indices, ratio (n,)).
    """
    n, K, G = gains.shape
    if not np.all(mask.any(axis=2)):
        raise ValueError("every objective needs an admissible fidelity")
    lam = np.zeros(n)
    idx = np.zeros((n, K), dtype=int)
    rows = np.arange(n)[:, None]
    cols = np.arange(K)[None, :]
    for _ in range(max_iter):
        score = np.where(mask, gains - lam[:, None, None] * costs, -np.inf)
        idx = np.argmax(score, axis=2)
        new = gains[rows, cols, idx].sum(1) / costs[rows, cols, idx].sum(1)
        if np.all(np.abs(new - lam) <= 1e-14 * np.maximum(1.0, np.abs(new))):
            lam = new
            break
        lam = new
    return idx, lam


# ---------------------------------------------------------------------------
# Pareto-front sampling
# ---------------------------------------------------------------------------


def sample_pareto_fronts(
    models: Sequence[FittedSurrogate],
    config: AcquisitionConfig,
    rng,
    constraint_models: Sequence[FittedSurrogate] | None = None,
) -> list[ParetoFrontSample]:
    """S fronts, each from RFF draws of every highest-fidelity output followed
    by NSGA-II on the drawn functions.

    A constrained draw whose NSGA-II archive has no feasible point is redrawn
    up to 5 times; after that the unconstrained front of the last draw is
    used and the sample is flagged degenerate.
    """
    rng = make_rng(rng)
    cons = list(constraint_models or [])
    domain = models[0].domain
    out = []
    for _ in range(config.S):
        for attempt in range(FRONT_RETRIES + 1):
            fs = [draw_function(m, rng, config.n_features, index=j) for j, m in enumerate(models)]
            cs = [draw_function(m, rng, config.n_features, index=len(models) + i) for i, m in enumerate(cons)]
            obj = _stacked(fs)
            con = _stacked(cs) if cs else None
            res = nsga2(obj, con, domain, config.evolution, rng=make_rng(child_seed(rng)))
            if res.feasible:
                extra = con(res.front.inputs) if cs else None
                out.append(ParetoFrontSample.from_front(res.front, extra))
                break
            if attempt == FRONT_RETRIES:
                free = nsga2(obj, None, domain, config.evolution, rng=make_rng(child_seed(rng)))
                out.append(ParetoFrontSample.from_front(free.front, con(free.front.inputs), degenerate=True))
    return out


def _stacked(funcs) -> Callable:
    def f(x):
        return np.column_stack([g(x) for g in funcs])

    return f
