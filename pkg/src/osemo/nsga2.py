"""NSGA-II for cheap multi-objective problems, with Deb's constrained dominance.

Objectives and constraints are vectorised callables: an ``(n, d)`` array of
inputs goes in, an ``(n,)`` array (one function) or ``(n, K)`` array (stacked)
comes out. Constraint values are feasible when ``>= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .mathkit import make_rng
from .pareto import ParetoFront, dominance_tables, nondominated_mask
from .surrogates import BoxDomain


@dataclass(frozen=True)
class EvolutionConfig:
    pop_size: int = 100
    max_evals: int = 1500
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # per variable; None means 1/d
    eta_c: float = 15.0
    eta_m: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 4 or self.pop_size % 2:
            raise ValueError("population must be even and >= 4")
        if self.max_evals < self.pop_size:
            raise ValueError("evaluation budget must cover one population")


@dataclass(frozen=True)
class NsgaResult:
    """Final archive. ``front`` is None when no feasible point was ever found."""

    front: ParetoFront | None
    n_evals: int
    feasible: bool
    best_violation: float = 0.0
    history: tuple = ()


def _stack(funcs, x: np.ndarray) -> np.ndarray:
    if funcs is None:
        return np.zeros((x.shape[0], 0))
    if callable(funcs):
        out = np.asarray(funcs(x), dtype=float)
        return out.reshape(x.shape[0], -1)
    return np.column_stack([np.asarray(f(x), dtype=float).reshape(x.shape[0]) for f in funcs])


def total_violation(cons: np.ndarray) -> np.ndarray:
    """Sum of max(0, -c_i) over constraints."""
    if cons.shape[1] == 0:
        return np.zeros(cons.shape[0])
    return np.maximum(0.0, -cons).sum(axis=1)


def constrained_dominance(objs: np.ndarray, viol: np.ndarray | None = None) -> np.ndarray:
    """``D[i, j]`` is True when i constraint-dominates j (Deb's rule)."""
    ge, gt = dominance_tables(objs, objs)
    dom = ge & gt
    if viol is None:
        return dom
    feas = viol <= 0.0
    both_feas = feas[:, None] & feas[None, :]
    both_infeas = ~feas[:, None] & ~feas[None, :]
    return (both_feas & dom) | (feas[:, None] & ~feas[None, :]) | (both_infeas & (viol[:, None] < viol[None, :]))


def non_dominated_sort(objs, viol=None) -> list[np.ndarray]:
    """Partition indices into successive fronts (rank 1 first)."""
    objs = np.atleast_2d(np.asarray(objs, dtype=float))
    n = objs.shape[0]
    if n == 0:
        return []
    dom = constrained_dominance(objs, None if viol is None else np.asarray(viol, dtype=float))
    count = dom.sum(axis=0)
    fronts = []
    remaining = np.ones(n, dtype=bool)
    current = np.flatnonzero(count == 0)
    while current.size:
        fronts.append(current)
        remaining[current] = False
        count = count - dom[current].sum(axis=0)
        current = np.flatnonzero(remaining & (count == 0))
    return fronts


def crowding_distance(objs) -> np.ndarray:
    """Boundary points get inf; interior points sum range-normalised gaps."""
    objs = np.atleast_2d(np.asarray(objs, dtype=float))
    n, K = objs.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for k in range(K):
        order = np.argsort(objs[:, k], kind="stable")
        vals = objs[order, k]
        dist[order[0]] = dist[order[-1]] = np.inf
        rng_k = vals[-1] - vals[0]
        if rng_k <= 0.0:
            continue
        dist[order[1:-1]] += (vals[2:] - vals[:-2]) / rng_k
    return dist


def _rank_and_crowd(objs: np.ndarray, viol: np.ndarray | None):
    n = objs.shape[0]
    rank = np.empty(n, dtype=int)
    crowd = np.empty(n)
    for r, front in enumerate(non_dominated_sort(objs, viol)):
        rank[front] = r
        crowd[front] = crowding_distance(objs[front])
    return rank, crowd


def _tournament(rank, crowd, rng, n: int) -> np.ndarray:
    a = rng.integers(0, rank.size, n)
    b = rng.integers(0, rank.size, n)
    a_wins = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowd[a] >= crowd[b]))
    return np.where(a_wins, a, b)


def _sbx(p1, p2, lo, hi, eta, prob, rng):
    n, d = p1.shape
    c1, c2 = p1.copy(), p2.copy()
    do_pair = rng.random(n) < prob
    do_var = (rng.random((n, d)) < 0.5) & do_pair[:, None] & (np.abs(p1 - p2) > 1e-14)
    u = rng.random((n, d))
    beta = np.where(u <= 0.5, (2.0 * u) ** (1.0 / (eta + 1.0)), (0.5 / (1.0 - u)) ** (1.0 / (eta + 1.0)))
    mid = 0.5 * (p1 + p2)
    half = 0.5 * beta * np.abs(p1 - p2)
    swap = rng.random((n, d)) < 0.5
    low, high = mid - half, mid + half
    c1 = np.where(do_var, np.where(swap, high, low), c1)
    c2 = np.where(do_var, np.where(swap, low, high), c2)
    return np.clip(c1, lo, hi), np.clip(c2, lo, hi)


def _poly_mutation(x, lo, hi, eta, prob, rng):
    n, d = x.shape
    span = hi - lo
    mask = rng.random((n, d)) < prob
    u = rng.random((n, d))
    d1 = (x - lo) / span
    d2 = (hi - x) / span
    p = 1.0 / (eta + 1.0)
    left = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)) ** p - 1.0
    right = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)) ** p
    delta = np.where(u < 0.5, left, right)
    return np.clip(np.where(mask, x + delta * span, x), lo, hi)


class _Archive:
    """All non-dominated feasible points evaluated so far."""

    def __init__(self, d: int, K: int):
        self.x = np.zeros((0, d))
        self.f = np.zeros((0, K))

    def update(self, x, f, viol):
        ok = viol <= 0.0
        if not np.any(ok):
            return
        x, f = x[ok], f[ok]
        keep = nondominated_mask(f)
        x, f = x[keep], f[keep]
        _, first = np.unique(f, axis=0, return_index=True)
        first = np.sort(first)
        x, f = x[first], f[first]
        if self.f.shape[0]:
            # new points that some archive member dominates or duplicates
            ge, _ = dominance_tables(self.f, f)
            beaten = np.any(ge, axis=0)
            x, f = x[~beaten], f[~beaten]
            if f.shape[0] == 0:
                return
            ge, gt = dominance_tables(f, self.f)
            alive = ~np.any(ge & gt, axis=0)
            self.x = self.x[alive]
            self.f = self.f[alive]
        self.x = np.vstack([self.x, x])
        self.f = np.vstack([self.f, f])


def nsga2(
    objectives: Callable | Sequence[Callable],
    constraints: Callable | Sequence[Callable] | None,
    domain: BoxDomain,
    config: EvolutionConfig = EvolutionConfig(),
    rng=None,
    track_history: bool = False,
) -> NsgaResult:
    """Run NSGA-II and return the external archive of non-dominated points.

    With constraints, selection uses Deb's rule and the archive only admits
    feasible points. ``rng`` defaults to ``config.seed``.
    """
    rng = make_rng(config.seed if rng is None else rng)
    lo, hi = domain.lower, domain.upper
    d = domain.d
    pm = config.mutation_prob if config.mutation_prob is not None else 1.0 / d
    n = config.pop_size

    pop = domain.sample(rng, n)
    objs = _stack(objectives, pop)
    cons = _stack(constraints, pop)
    viol = total_violation(cons)
    use_viol = cons.shape[1] > 0
    evals = n
    archive = _Archive(d, objs.shape[1])
    archive.update(pop, objs, viol)
    best_viol = float(viol.min())
    history = [archive.f.copy()] if track_history else []

    while evals + n <= config.max_evals:
        rank, crowd = _rank_and_crowd(objs, viol if use_viol else None)
        parents = _tournament(rank, crowd, rng, n)
        p1, p2 = pop[parents[0::2]], pop[parents[1::2]]
        c1, c2 = _sbx(p1, p2, lo, hi, config.eta_c, config.crossover_prob, rng)
        kids = _poly_mutation(np.vstack([c1, c2]), lo, hi, config.eta_m, pm, rng)
        k_objs = _stack(objectives, kids)
        k_cons = _stack(constraints, kids)
        k_viol = total_violation(k_cons)
        evals += n
        archive.update(kids, k_objs, k_viol)
        best_viol = min(best_viol, float(k_viol.min()))
        if track_history:
            history.append(archive.f.copy())

        all_x = np.vstack([pop, kids])
        all_f = np.vstack([objs, k_objs])
        all_c = np.vstack([cons, k_cons])
        all_v = np.concatenate([viol, k_viol])
        chosen = []
        for front in non_dominated_sort(all_f, all_v if use_viol else None):
            if len(chosen) + front.size <= n:
                chosen.extend(front.tolist())
                continue
            cd = crowding_distance(all_f[front])
            order = np.argsort(-cd, kind="stable")
            chosen.extend(front[order[: n - len(chosen)]].tolist())
            break
        idx = np.asarray(chosen)
        pop, objs, cons, viol = all_x[idx], all_f[idx], all_c[idx], all_v[idx]

    if archive.f.shape[0] == 0:
        return NsgaResult(None, evals, False, best_viol, tuple(history))
    return NsgaResult(ParetoFront(archive.f, archive.x), evals, True, 0.0, tuple(history))
