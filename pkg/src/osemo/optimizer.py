"""Bayesian-optimisation driver loops.

One loop serves every algorithm; algorithms differ in the surrogate kind and
in how the next (input, fidelity) pair is chosen:

=============  =========  ==================================================
tag            surrogate  selection
=============  =========  ==================================================
mesmo          single     argmax MESMO at the highest fidelity
mesmoc         single     argmax MESMOC over posterior-feasible candidates
mf-osemo-tg    mf         joint argmax of TG gain per unit cost over levels
mf-osemo-ni    mf         as above with NI entropies
imoca-t        cf         joint argmax over the reduced fidelity grid
imoca-e        cf         as above with ESG entropies
naive-cfmo     cf         MESMO input, then cheapest admissible fidelity
random         single     uniform input at the highest fidelity
=============  =========  ==================================================
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .acquisition import (
    AcquisitionConfig,
    CostModel,
    best_fidelity_vector,
    mesmo_alpha,
    mesmoc_alpha,
    output_gain,
    reduce_fidelity_space,
    sample_pareto_fronts,
)
from .mathkit import child_seed, make_rng
from .nsga2 import EvolutionConfig, nsga2
from .pareto import ParetoFront, hypervolume, pareto_front, r2_distance
from .surrogates import BoxDomain, Dataset, FittedSurrogate, fit_output_models

ALGORITHMS = ("mesmo", "mesmoc", "mf-osemo-tg", "mf-osemo-ni", "imoca-t", "imoca-e", "naive-cfmo", "random")
MODEL_KIND = {
    "mesmo": "single",
    "mesmoc": "single",
    "random": "single",
    "mf-osemo-tg": "mf",
    "mf-osemo-ni": "mf",
    "imoca-t": "cf",
    "imoca-e": "cf",
    "naive-cfmo": "cf",
}
REQUIRED_MODE = {"mf": "discrete", "cf": "continuous"}
DEFAULT_REFIT = {"single": 5, "mf": 20, "cf": 20}


# ---------------------------------------------------------------------------
# Problem, configuration, records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    """A black-box MO problem on ``domain``.

    ``evaluate(x, fid)`` maps ``(n, d)`` inputs and ``(n, K)`` fidelities
    (``None`` in single-fidelity mode) to ``(n, K + L)`` outputs.
    """

    domain: BoxDomain
    K: int
    evaluate: Callable
    cost: CostModel
    L: int = 0
    mode: str = "none"
    n_levels: tuple = ()
    reference_front: ParetoFront | None = None
    phv_reference: np.ndarray | None = None
    flags: Callable | None = None
    name: str = "problem"

    def top_fidelity(self, n: int) -> np.ndarray | None:
        if self.mode == "none":
            return None
        if self.mode == "continuous":
            return np.ones((n, self.K))
        return np.tile(np.asarray(self.n_levels, dtype=float), (n, 1))


def problem_from_benchmark(spec, reference_front=None, phv_reference=None) -> Problem:
    from .benchmarks import phv_reference_point

    if phv_reference is None:
        phv_reference = phv_reference_point(spec)
    return Problem(
        domain=spec.domain,
        K=spec.K,
        evaluate=spec.evaluate,
        cost=spec.cost,
        L=spec.L,
        mode=spec.mode,
        n_levels=tuple(spec.n_levels),
        reference_front=reference_front,
        phv_reference=np.asarray(phv_reference, dtype=float),
        flags=spec.flags,
        name=spec.name,
    )


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "mesmo"
    iterations: int | None = None
    budget: float | None = None
    n_init: int | None = None
    acquisition: AcquisitionConfig = field(default_factory=AcquisitionConfig)
    hyperfit_interval: int | None = None
    seed: int = 0
    n_candidates: int = 1000
    n_local: int = 10
    local_steps: int = 20
    recover_every: int = 5
    recover_evals: int = 1500
    record_timing: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.iterations is None and self.budget is None:
            raise ValueError("need an iteration cap or a budget")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.n_init is not None and self.n_init < 2:
            raise ValueError("n_init must be >= 2")

    @property
    def kind(self) -> str:
        return MODEL_KIND[self.algorithm]

    @property
    def refit_interval(self) -> int:
        return self.hyperfit_interval or DEFAULT_REFIT[self.kind]


@dataclass(frozen=True)
class RunRecord:
    iter: int
    cum_cost: float
    phv_observed: float
    phv_recovered: float | None
    r2: float | None
    x: tuple
    fid: tuple
    y: tuple
    elapsed_s: float | None = None
    flags: tuple = ()

    def row(self) -> list[str]:
        return (
            [str(self.iter), _fmt(self.cum_cost), _fmt(self.phv_observed), _fmt(self.phv_recovered), _fmt(self.r2)]
            + [_fmt(v) for v in self.x]
            + [_fmt(v) for v in self.fid]
            + [_fmt(v) for v in self.y]
            + [_fmt(self.elapsed_s), ";".join(self.flags)]
        )


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


def record_header(d: int, n_fid: int, n_y: int) -> list[str]:
    return (
        ["iter", "cum_cost", "phv_observed", "phv_recovered", "r2"]
        + [f"x_{i}" for i in range(d)]
        + [f"fid_{j}" for j in range(n_fid)]
        + [f"y_{k}" for k in range(n_y)]
        + ["elapsed_s", "flags"]
    )


def write_records(path, records: list[RunRecord], d: int, n_fid: int, n_y: int) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(record_header(d, n_fid, n_y))
        for r in records:
            w.writerow(r.row())


def read_records(path) -> list[RunRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        xs = [i for i, h in enumerate(header) if h.startswith("x_")]
        fs = [i for i, h in enumerate(header) if h.startswith("fid_")]
        ys = [i for i, h in enumerate(header) if h.startswith("y_")]
        out = []
        for row in reader:
            opt = lambda s: None if s == "" else float(s)  # noqa: E731
            out.append(
                RunRecord(
                    int(row[0]),
                    float(row[1]),
                    float(row[2]),
                    opt(row[3]),
                    opt(row[4]),
                    tuple(float(row[i]) for i in xs),
                    tuple(float(row[i]) for i in fs),
                    tuple(float(row[i]) for i in ys),
                    opt(row[-2]),
                    tuple(t for t in row[-1].split(";") if t),
                )
            )
    return out


@dataclass
class RunResult:
    data: Dataset
    front: ParetoFront | None
    records: list
    diagnostics: list = field(default_factory=list)
    error: str | None = None
    fid_data: np.ndarray | None = None
    initial_cost: float = 0.0

    def write_csv(self, path, problem: Problem) -> None:
        n_fid = problem.K if problem.mode != "none" else 0
        write_records(path, self.records, problem.domain.d, n_fid, problem.K + problem.L)


# ---------------------------------------------------------------------------
# Initial design
# ---------------------------------------------------------------------------


def default_n_init(d: int) -> int:
    return max(5, 2 * d)


def design_fidelities(problem: Problem, n: int, fidelity_aware: bool) -> np.ndarray | None:
    """Round-robin fidelity assignment starting from the highest level.

    Continuous problems alternate z = 1 and z = 0; discrete problems cycle
    through each objective's levels, so per-objective counts differ by <= 1.
    """
    if problem.mode == "none":
        return None
    if not fidelity_aware:
        return problem.top_fidelity(n)
    i = np.arange(n)[:, None]
    if problem.mode == "continuous":
        return np.broadcast_to((i % 2 == 0).astype(float), (n, problem.K)).copy()
    levels = np.asarray(problem.n_levels, dtype=int)[None, :]
    return (levels - i % levels).astype(float)


def initial_design(problem: Problem, n0: int, rng, fidelity_aware: bool = True) -> Dataset:
    """Uniform random inputs evaluated at round-robin fidelities.

    With ``fidelity_aware=False`` every point is evaluated at the highest
    fidelity and the dataset is single-fidelity.
    """
    if n0 < 2:
        raise ValueError("n0 must be >= 2")
    rng = make_rng(rng)
    x = problem.domain.sample(rng, n0)
    fid = design_fidelities(problem, n0, fidelity_aware)
    y = np.asarray(problem.evaluate(x, fid), dtype=float).reshape(n0, problem.K + problem.L)
    cost = problem.cost.total(x, fid)
    mode = problem.mode if fidelity_aware else "none"
    return Dataset(x, y, cost, problem.K, problem.L, mode, fid if mode != "none" else None)


# ---------------------------------------------------------------------------
# Acquisition maximisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptResult:
    x: np.ndarray
    payload: np.ndarray | None
    score: float
    fallback: bool = False
    pool_feasible: bool = True


def optimize_acquisition(
    score_fn: Callable,
    domain: BoxDomain,
    rng,
    n_candidates: int = 1000,
    n_local: int = 10,
    steps: int = 20,
    feasible_fn: Callable | None = None,
) -> OptResult:
    """Random pool plus coordinate refinement of the best ``n_local`` points.

    ``score_fn(X)`` returns ``(scores, payload)`` where payload is ``None`` or
    an array with one row per input (e.g. the chosen fidelity vector).
    ``feasible_fn(X)`` returns ``(mask, violation)``; infeasible points score
    -inf. If the pool has no feasible point the least-violating one is
    returned and flagged. Step sizes shrink geometrically from 0.1 to 0.01 of
    the domain range.
    """
    rng = make_rng(rng)
    pool = domain.sample(rng, n_candidates)

    def evaluate(X):
        s, p = score_fn(X)
        s = np.where(np.isfinite(s), s, -np.inf)
        if feasible_fn is not None:
            ok, _ = feasible_fn(X)
            s = np.where(ok, s, -np.inf)
        return s, p

    if feasible_fn is not None:
        ok, viol = feasible_fn(pool)
        if not np.any(ok):
            i = int(np.argmin(viol))
            s, p = score_fn(pool[i : i + 1])
            return OptResult(pool[i], None if p is None else p[0], float(s[0]), True, False)

    scores, payload = evaluate(pool)
    best_i = int(np.argmax(scores))
    if feasible_fn is not None and not np.isfinite(scores[best_i]):
        best_i = int(np.flatnonzero(ok)[0])  # every score non-finite: stay feasible
    best =(pool[best_i], None if payload is None else payload[best_i], float(scores[best_i]))

    order = np.argsort(-scores, kind="stable")[:n_local]
    order = order[np.isfinite(scores[order])]
    if order.size and steps > 0:
        cur = pool[order].copy()
        cur_s = scores[order].copy()
        cur_p = None if payload is None else payload[order].copy()
        d = domain.d
        eye = np.eye(d)
        for k in range(steps):
            frac = 0.1 * (0.1 ** (k / max(steps - 1, 1)))
            delta = frac * domain.span
            moves = np.vstack([eye * delta, -eye * delta])  # (2d, d)
            cand = domain.clip(cur[:, None, :] + moves[None, :, :]).reshape(-1, d)
            cs, cp = evaluate(cand)
            cs = cs.reshape(cur.shape[0], 2 * d)
            j = np.argmax(cs, axis=1)
            rows = np.arange(cur.shape[0])
            better = cs[rows, j] > cur_s
            if np.any(better):
                flat = rows * 2 * d + j
                cur[better] = cand[flat[better]]
                cur_s[better] = cs[rows, j][better]
                if cur_p is not None:
                    cur_p[better] = cp[flat[better]]
        i = int(np.argmax(cur_s))
        if cur_s[i] > best[2]:
            best = (cur[i], None if cur_p is None else cur_p[i], float(cur_s[i]))
    return OptResult(best[0].copy(), None if best[1] is None else np.array(best[1]), best[2])


# ---------------------------------------------------------------------------
# Recovered front
# ---------------------------------------------------------------------------


def _mean_fn(models):
    def f(X):
        return np.column_stack([m.predict(X, None, check=False)[0] for m in models])

    return f


def recover_pareto_front(
    models,
    domain: BoxDomain,
    rng=0,
    constraint_models=None,
    evals: int = 1500,
):
    """NSGA-II over posterior means at the highest fidelity.

    Returns ``(front, feasible)``; with constraint models the posterior
    constraint means must be >= 0, and if no such point is found the
    unconstrained front is returned with ``feasible=False``.
    """
    rng = make_rng(rng)
    cfg = EvolutionConfig(max_evals=evals)
    cons = _mean_fn(constraint_models) if constraint_models else None
    res = nsga2(_mean_fn(models), cons, domain, cfg, rng=make_rng(child_seed(rng)))
    if res.feasible:
        return res.front, True
    res = nsga2(_mean_fn(models), None, domain, cfg, rng=make_rng(child_seed(rng)))
    return res.front, False


# ---------------------------------------------------------------------------
# Selection strategies
# ---------------------------------------------------------------------------


@dataclass
class _Ctx:
    problem: Problem
    config: RunConfig
    t: int
    models: list
    con_models: list
    samples: list
    rng: np.random.Generator


def _opt(ctx: _Ctx, score_fn, feasible_fn=None) -> OptResult:
    c = ctx.config
    return optimize_acquisition(
        score_fn, ctx.problem.domain, ctx.rng, c.n_candidates, c.n_local, c.local_steps, feasible_fn
    )


def _select_mesmo(ctx: _Ctx):
    res = _opt(ctx, lambda X: (mesmo_alpha(ctx.models, ctx.samples, X), None))
    return res.x, ctx.problem.top_fidelity(1), [], {}


def _select_mesmoc(ctx: _Ctx):
    def feasible(X):
        means = np.column_stack([m.predict(X, None, check=False)[0] for m in ctx.con_models])
        return np.all(means >= 0, axis=1), np.maximum(0.0, -means).sum(1)

    res = _opt(ctx, lambda X: (mesmoc_alpha(ctx.models, ctx.con_models, ctx.samples, X), None), feasible)
    means = np.array([m.predict(res.x[None, :], None, check=False)[0][0] for m in ctx.con_models])
    flags = ["feasibility_fallback"] if res.fallback else []
    diag = {"pool_feasible": res.pool_feasible, "min_constraint_mean": float(means.min())}
    return res.x, ctx.problem.top_fidelity(1), flags, diag


def _ystar(ctx: _Ctx) -> np.ndarray:
    return np.vstack([s.maxima for s in ctx.samples])


def _fidelity_scores(ctx: _Ctx, X, gain_kind: str, grid: np.ndarray, mask: np.ndarray):
    """Gains and normalised costs for each objective and fidelity option,
    combined by Dinkelbach's ratio maximisation."""
    n, K, G = mask.shape
    ystar = _ystar(ctx)
    gains = np.zeros((n, K, G))
    costs = np.ones((n, K, G))
    acq = ctx.config.acquisition
    for j, model in enumerate(ctx.models):
        for g in range(G):
            rows = mask[:, j, g]
            if not np.any(rows):
                continue
            fid = grid[j][g]
            gains[rows, j, g] = output_gain(gain_kind, model, X[rows], fid, ystar[:, j], acq)
            costs[rows, j, g] = ctx.problem.cost.objective_cost(j, X[rows], fid)
    idx, ratio = best_fidelity_vector(gains, costs, mask)
    fids = np.take_along_axis(np.asarray(grid)[None, :, :].repeat(n, 0), idx[:, :, None], axis=2)[:, :, 0]
    return ratio, fids


def _select_mfosemo(ctx: _Ctx, gain_kind: str):
    levels = np.asarray(ctx.problem.n_levels, dtype=int)
    G = int(levels.max())
    grid = np.array([[min(g + 1, m) for g in range(G)] for m in levels], dtype=float)
    base = np.array([[g < m for g in range(G)] for m in levels])

    def score(X):
        mask = np.broadcast_to(base, (X.shape[0],) + base.shape)
        return _fidelity_scores(ctx, X, gain_kind, grid, mask)

    res = _opt(ctx, score)
    return res.x, res.payload[None, :], [], {}


def _reduced_mask(ctx: _Ctx, X) -> tuple[np.ndarray, np.ndarray]:
    masks = []
    grid = None
    for j, model in enumerate(ctx.models):
        grid, m = reduce_fidelity_space(model, X, ctx.t, ctx.problem.cost, j, ctx.config.acquisition)
        masks.append(m)
    return grid, np.stack(masks, axis=1)


def _select_imoca(ctx: _Ctx, gain_kind: str):
    def score(X):
        grid, mask = _reduced_mask(ctx, X)
        grids = np.tile(grid, (ctx.problem.K, 1))
        return _fidelity_scores(ctx, X, gain_kind, grids, mask)

    res = _opt(ctx, score)
    return res.x, res.payload[None, :], [], {}


def _select_naive(ctx: _Ctx):
    res = _opt(ctx, lambda X: (mesmo_alpha(ctx.models, ctx.samples, X), None))
    x = res.x[None, :]
    grid, mask = _reduced_mask(ctx, x)
    fid = np.empty((1, ctx.problem.K))
    for j in range(ctx.problem.K):
        ok = np.flatnonzero(mask[0, j])
        costs = np.array([ctx.problem.cost.objective_cost(j, x, grid[g])[0] for g in ok])
        fid[0, j] = grid[ok[int(np.argmin(costs))]]
    return res.x, fid, [], {}


def _select_random(ctx: _Ctx):
    return ctx.problem.domain.sample(ctx.rng, 1)[0], ctx.problem.top_fidelity(1), [], {}


SELECTORS = {
    "mesmo": _select_mesmo,
    "mesmoc": _select_mesmoc,
    "mf-osemo-tg": lambda c: _select_mfosemo(c, "tg"),
    "mf-osemo-ni": lambda c: _select_mfosemo(c, "ni"),
    "imoca-t": lambda c: _select_imoca(c, "t"),
    "imoca-e": lambda c: _select_imoca(c, "e"),
    "naive-cfmo": _select_naive,
    "random": _select_random,
}


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def _feasible_rows(problem: Problem, y: np.ndarray) -> np.ndarray:
    if problem.L == 0:
        return np.ones(y.shape[0], dtype=bool)
    return np.all(y[:, problem.K :] >= 0, axis=1)


def observed_phv(problem: Problem, y: np.ndarray, fid: np.ndarray | None) -> float:
    """PHV of feasible observations made at the highest fidelity for every objective."""
    keep = _feasible_rows(problem, y)
    if fid is not None:
        keep &= np.all(fid == problem.top_fidelity(fid.shape[0]), axis=1)
    if not np.any(keep) or problem.phv_reference is None:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return hypervolume(y[keep, : problem.K], problem.phv_reference)


def recovered_metrics(problem: Problem, front: ParetoFront) -> tuple[float, float | None]:
    """PHV and R2 of the recovered Pareto set evaluated by the true top-fidelity functions."""
    xs = front.inputs
    y = np.asarray(problem.evaluate(xs, problem.top_fidelity(xs.shape[0])), dtype=float)
    keep = _feasible_rows(problem, y)
    if not np.any(keep):
        return 0.0, None
    pts = y[keep, : problem.K]
    phv = 0.0
    if problem.phv_reference is not None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            phv = hypervolume(pts, problem.phv_reference)
    r2 = None
    if problem.reference_front is not None:
        r2 = r2_distance(problem.reference_front, pareto_front(pts))
    return phv, r2


# ---------------------------------------------------------------------------
# Main loop
# ---------------------------------------------------------------------------


def _check_compatible(problem: Problem, config: RunConfig) -> None:
    need = REQUIRED_MODE.get(config.kind)
    if need is not None and problem.mode != need:
        raise ValueError(f"algorithm {config.algorithm} needs a {need}-fidelity problem, got {problem.mode}")
    if config.algorithm == "mesmoc" and problem.L < 1:
        raise ValueError("mesmoc needs a problem with L >= 1 constraints")


def run(problem: Problem, config: RunConfig) -> RunResult:
    """Run one seeded BO experiment."""
    _check_compatible(problem, config)
    rng = make_rng(config.seed)
    fidelity_aware = config.kind != "single"
    kind = config.kind
    K, L = problem.K, problem.L
    n0 = config.n_init or default_n_init(problem.domain.d)

    data = initial_design(problem, n0, rng, fidelity_aware)
    data_mode = data.mode
    fid_log = problem.top_fidelity(n0) if data.fid is None else data.fid  # as evaluated
    init_cost = float(data.cost.sum())
    cum_cost = init_cost
    n_levels = problem.n_levels if kind == "mf" else None
    use_constraints = config.algorithm == "mesmoc"
    out_models = K + (L if use_constraints else 0)

    def fit(refit: bool, previous):
        d = data
        if not use_constraints and L:
            d = Dataset(data.x, data.y[:, :K], data.cost, K, 0, data.mode, data.fid)
        return fit_output_models(d, kind, rng, problem.domain, n_levels, previous, refit)

    def recover(models):
        front, ok = recover_pareto_front(
            models[:K], problem.domain, rng, models[K:out_models] if use_constraints else None, config.recover_evals
        )
        try:
            phv, r2 = recovered_metrics(problem, front)
        except Exception:  # metrics need the callback; the front itself stands
            phv = r2 = None
        return front, phv, r2, ok

    records: list[RunRecord] = []
    diagnostics: list[dict] = []
    models = None
    error = None
    t = 0
    t_start = time.perf_counter()
    while True:
        if config.iterations is not None and t >= config.iterations:
            break
        t += 1
        refit = (t - 1) % config.refit_interval == 0 or models is None
        models = fit(refit, models)
        samples = []
        if config.algorithm != "random":
            samples = sample_pareto_fronts(
                models[:K], config.acquisition, rng, models[K:out_models] if use_constraints else None
            )
        ctx = _Ctx(problem, config, t, models[:K], models[K:out_models], samples, rng)
        xn, fn, flags, diag = SELECTORS[config.algorithm](ctx)
        xn = problem.domain.clip(np.asarray(xn, dtype=float))[None, :]
        c = float(problem.cost.total(xn, fn)[0])
        if config.budget is not None and cum_cost + c > config.budget + 1e-12:
            t -= 1
            break
        try:
            yn = np.asarray(problem.evaluate(xn, fn), dtype=float).reshape(1, K + L)
        except Exception as exc:  # callback failure: keep the partial run
            error = f"{type(exc).__name__}: {exc}"
            t -= 1
            break
        if any(s.degenerate for s in samples):
            flags = flags + ["degenerate_front"]
        if problem.flags is not None:
            flags = flags + list(problem.flags(xn, fn)[0])
        cum_cost += c
        data = data.append(xn, yn, c, fn if data_mode != "none" else None)
        fid_log = None if fid_log is None else np.vstack([fid_log, fn])
        phv_obs = observed_phv(problem, data.y, fid_log)
        phv_rec = r2 = None
        if t == 1 or t % config.recover_every == 0:
            models = fit(False, models)
            _, phv_rec, r2, ok = recover(models)
            if not ok:
                flags = flags + ["recovery_infeasible"]
        elapsed = time.perf_counter() - t_start if config.record_timing else None
        records.append(
            RunRecord(
                t,
                cum_cost,
                phv_obs,
                phv_rec,
                r2,
                tuple(xn[0]),
                tuple(fn[0]) if fn is not None else (),
                tuple(yn[0]),
                elapsed,
                tuple(flags),
            )
        )
        diagnostics.append(diag)

    models = fit(models is None, models)
    front, phv_rec, r2, ok = recover(models)
    if records and records[-1].phv_recovered is None:
        last = records[-1]
        extra = () if ok else ("recovery_infeasible",)
        records[-1] = replace(last, phv_recovered=phv_rec, r2=r2, flags=last.flags + extra)
    return RunResult(data, front, records, diagnostics, error, fid_log, init_cost)


def run_mesmo(problem: Problem, config: RunConfig) -> RunResult:
    return run(problem, replace(config, algorithm="mesmo"))


def run_mesmoc(problem: Problem, config: RunConfig) -> RunResult:
    return run(problem, replace(config, algorithm="mesmoc"))


def run_mfosemo(problem: Problem, config: RunConfig, variant: str = "TG") -> RunResult:
    return run(problem, replace(config, algorithm=f"mf-osemo-{variant.lower()}"))


def run_imoca(problem: Problem, config: RunConfig, variant: str = "T") -> RunResult:
    return run(problem, replace(config, algorithm=f"imoca-{variant.lower()}"))


def run_naive_cfmo(problem: Problem, config: RunConfig) -> RunResult:
    return run(problem, replace(config, algorithm="naive-cfmo"))
