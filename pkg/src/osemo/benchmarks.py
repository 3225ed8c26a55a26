"""Synthetic multi-fidelity benchmarks in maximisation form.

Every benchmark is exposed to the optimizer on the unit cube; the documented
input box (``raw_lower``/``raw_upper``) is applied internally. Fidelities are
per objective: continuous values in [0, 1] or discrete levels 1..M.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .acquisition import CostModel
from .nsga2 import EvolutionConfig, nsga2
from .pareto import ParetoFront, read_front_csv, write_front_csv
from .surrogates import BoxDomain

QV_FLOOR = 1e-12
QV_ALPHA = np.array([0.9, 1.1, 0.9, 1.1, 0.9, 1.1, 0.9, 1.1])
DTLZ1_LEVELS = (0.2, 0.6, 1.0)
DTLZ1_COSTS = (0.01, 0.1, 1.0)
QV_COSTS = (0.1, 1.0)
REFERENCE_EVALS = 100_000
PHV_SAMPLE = 100_000
PHV_SEED = 7


# ---------------------------------------------------------------------------
# Raw formulas
# ---------------------------------------------------------------------------


def branin(x, z=1.0) -> np.ndarray:
    """Negated multi-fidelity Branin on its canonical box [-5, 10] x [0, 15]."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    z = np.asarray(z, dtype=float)
    b = 5.1 / (4 * math.pi**2) - 0.01 * (1 - z)
    c = 5 / math.pi - 0.1 * (1 - z)
    t = 1 / (8 * math.pi) + 0.05 * (1 - z)
    x1, x2 = x[:, 0], x[:, 1]
    return -((x2 - b * x1**2 + c * x1 - 6.0) ** 2 + 10.0 * (1 - t) * np.cos(x1) + 10.0)


def currin(x, z=1.0) -> np.ndarray:
    """Negated multi-fidelity Currin exponential on [0, 1]^2.

    exp(-1/(2 x2)) is taken as its limit 0 at x2 = 0.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    z = np.asarray(z, dtype=float)
    x1, x2 = x[:, 0], x[:, 1]
    with np.errstate(divide="ignore"):
        e = np.where(x2 > 0, np.exp(-1.0 / (2.0 * np.where(x2 > 0, x2, 1.0))), 0.0)
    ratio = (2300 * x1**3 + 1900 * x1**2 + 2092 * x1 + 60) / (100 * x1**3 + 500 * x1**2 + 4 * x1 + 20)
    return -(1 - 0.1 * (1 - z) * e) * ratio


def ackley(x, z=1.0) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    d = x.shape[1]
    a = -20 * np.exp(-0.2 * np.sqrt((x**2).sum(1) / d))
    b = -np.exp(np.cos(2 * math.pi * x).sum(1) / d)
    return -(a + b + math.e + 20) - 0.01 * (1 - np.asarray(z, dtype=float))


def rosenbrock(x, z=1.0) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    z = np.asarray(z, dtype=float)[..., None]
    lead, tail = x[:, :-1], x[:, 1:]
    return -(100 * (tail - lead**2 + 0.01 * (1 - z)) ** 2 + (1 - lead) ** 2).sum(1)


def sphere(x, z=1.0) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return -(x**2).sum(1) - 0.01 * (1 - np.asarray(z, dtype=float))


def dtlz1_objectives(x) -> np.ndarray:
    """The six highest-fidelity DTLZ1 objectives (maximisation form), d = 5."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    d = x.shape[1]
    r = 100 * (d + ((x - 0.5) ** 2 - np.cos(10 * math.pi * (x - 0.5))).sum(1))
    scale = -(1 + r) * 0.5
    cols = [scale * np.prod(x[:, :5], axis=1)]
    for j in range(2, 6):
        cols.append(scale * (1 - x[:, 6 - j]) * np.prod(x[:, : 6 - j], axis=1))
    cols.append(scale * (1 - x[:, 0]))
    return np.column_stack(cols)


def dtlz1_error(x, z) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    a = 1.0 - np.asarray(z, dtype=float)[..., None]
    return (a * np.cos(10 * math.pi * a * x + 0.5 * math.pi * a + math.pi)).sum(1)


def dtlz1_mf(x, level) -> np.ndarray:
    """All six objectives at level index(es) into {0.2, 0.6, 1.0} (1-based).

    ``level`` is a scalar or ``(n, 6)`` array of levels, one per objective.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    lv = np.broadcast_to(np.asarray(level, dtype=int), (x.shape[0], 6))
    zs = np.asarray(DTLZ1_LEVELS)[lv - 1]
    f = dtlz1_objectives(x)
    return np.column_stack([f[:, j] - dtlz1_error(x, zs[:, j]) for j in range(6)])


def _qv(x, shift: float, weights) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    u = x - shift
    mean = (weights * u**2 - 20 * math.pi * u + 10).mean(1)
    clamped = mean < QV_FLOOR
    return -np.maximum(mean, QV_FLOOR) ** 0.25, clamped


def qv_mf(x, f2_level, return_flags: bool = False):
    """QV pair on [-5, 5]^8. ``f2_level`` is 1 (low) or 2 (high).

    The mean inside the fourth root is clamped at 1e-12; with
    ``return_flags`` a per-row boolean marks rows where that happened.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    lv = np.broadcast_to(np.asarray(f2_level, dtype=int), (x.shape[0],))
    f1, c1 = _qv(x, 0.0, 1.0)
    hi, ch = _qv(x, 1.5, 1.0)
    lo, cl = _qv(x, 1.5, QV_ALPHA)
    f2 = np.where(lv == 2, hi, lo)
    out = np.column_stack([f1, f2])
    if return_flags:
        return out, c1 | np.where(lv == 2, ch, cl)
    return out


def constrained_toy(x) -> np.ndarray:
    """Branin-Currin at the top fidelity plus a disk and a half-plane
    constraint, on the unit square. Columns: f1, f2, c1, c2."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    f = branin_currin(x, np.ones((x.shape[0], 2)))
    c1 = 0.75 - ((x - 0.5) ** 2).sum(1)
    c2 = x[:, 0] + x[:, 1] - 0.4
    return np.column_stack([f, c1, c2])


BRANIN_LOWER = np.array([-5.0, 0.0])
BRANIN_UPPER = np.array([10.0, 15.0])


def branin_currin(x, z) -> np.ndarray:
    """(Branin, Currin) for unit-square inputs and a fidelity pair per row."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    zz = np.broadcast_to(np.asarray(z, dtype=float), (x.shape[0], 2))
    raw = BRANIN_LOWER + x * (BRANIN_UPPER - BRANIN_LOWER)
    return np.column_stack([branin(raw, zz[:, 0]), currin(x, zz[:, 1])])


def ackley_rosen_sphere(x, z) -> np.ndarray:
    """(Ackley, Rosenbrock, Sphere) for raw inputs in [-2, 2]^5."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    zz = np.broadcast_to(np.asarray(z, dtype=float), (x.shape[0], 3))
    return np.column_stack([ackley(x, zz[:, 0]), rosenbrock(x, zz[:, 1]), sphere(x, zz[:, 2])])


def _steep_cost(x, z):
    return 0.05 + np.asarray(z, dtype=float) ** 6.5


def _quadratic_cost(x, z):
    return 0.1 + np.asarray(z, dtype=float) ** 2


# ---------------------------------------------------------------------------
# Benchmark registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchmarkSpec:
    """A benchmark as the optimizer sees it: unit-cube inputs, fidelity per
    objective, outputs ``(n, K + L)``."""

    name: str
    d: int
    K: int
    L: int
    mode: str
    raw_lower: np.ndarray
    raw_upper: np.ndarray
    raw_evaluate: Callable
    cost: CostModel
    n_levels: tuple = ()
    flag_fn: Callable | None = None

    @property
    def domain(self) -> BoxDomain:
        return BoxDomain.unit(self.d)

    def to_raw(self, x) -> np.ndarray:
        return self.raw_lower + np.atleast_2d(x) * (self.raw_upper - self.raw_lower)

    def highest_fidelity(self, n: int) -> np.ndarray | None:
        if self.mode == "none":
            return None
        if self.mode == "continuous":
            return np.ones((n, self.K))
        return np.tile(np.asarray(self.n_levels, dtype=float), (n, 1))

    def evaluate(self, x, fid=None) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if fid is None:
            fid = self.highest_fidelity(x.shape[0])
        return self.raw_evaluate(x, fid)

    def flags(self, x, fid=None) -> list[list[str]]:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.flag_fn is None:
            return [[] for _ in range(x.shape[0])]
        if fid is None:
            fid = self.highest_fidelity(x.shape[0])
        return self.flag_fn(x, fid)


def _bc_eval(x, fid):
    return branin_currin(x, fid)


def _ars_eval(x, fid):
    raw = -2.0 + 4.0 * np.atleast_2d(x)
    return ackley_rosen_sphere(raw, fid)


def _dtlz_eval(x, fid):
    return dtlz1_mf(x, np.asarray(fid, dtype=int))


def _qv_raw(x):
    return -5.0 + 10.0 * np.atleast_2d(x)


def _qv_eval(x, fid):
    return qv_mf(_qv_raw(x), np.asarray(fid)[:, 1].astype(int))


def _qv_flags(x, fid):
    _, flag = qv_mf(_qv_raw(x), np.asarray(fid)[:, 1].astype(int), return_flags=True)
    return [["qv_clamped"] if f else [] for f in flag]


def _toy_eval(x, fid):
    return constrained_toy(x)


def get_benchmark(name: str) -> BenchmarkSpec:
    if name == "branin_currin":
        return BenchmarkSpec(
            name, 2, 2, 0, "continuous", BRANIN_LOWER, BRANIN_UPPER, _bc_eval,
            CostModel(2, "continuous", functions=(_steep_cost, _quadratic_cost)),
        )
    if name == "ackley_rosen_sphere":
        return BenchmarkSpec(
            name, 5, 3, 0, "continuous", np.full(5, -2.0), np.full(5, 2.0), _ars_eval,
            CostModel(3, "continuous", functions=(_steep_cost,) * 3),
        )
    if name == "dtlz1":
        return BenchmarkSpec(
            name, 5, 6, 0, "discrete", np.zeros(5), np.ones(5), _dtlz_eval,
            CostModel(6, "discrete", level_costs=(DTLZ1_COSTS,) * 6), n_levels=(3,) * 6,
        )
    if name == "qv":
        return BenchmarkSpec(
            name, 8, 2, 0, "discrete", np.full(8, -5.0), np.full(8, 5.0), _qv_eval,
            CostModel(2, "discrete", level_costs=((1.0,), QV_COSTS)), n_levels=(1, 2), flag_fn=_qv_flags,
        )
    if name == "constrained_toy":
        return BenchmarkSpec(name, 2, 2, 2, "none", np.zeros(2), np.ones(2), _toy_eval, CostModel(2, "none"))
    raise KeyError(f"unknown benchmark {name!r}")


BENCHMARKS = ("branin_currin", "ackley_rosen_sphere", "dtlz1", "qv", "constrained_toy")


def top_fidelity_objectives(spec: BenchmarkSpec) -> Callable:
    def f(x):
        return spec.evaluate(x)[:, : spec.K]

    return f


def top_fidelity_constraints(spec: BenchmarkSpec) -> Callable | None:
    if spec.L == 0:
        return None

    def c(x):
        return spec.evaluate(x)[:, spec.K :]

    return c


def reference_front(
    spec: BenchmarkSpec,
    seed: int = 0,
    evals: int = REFERENCE_EVALS,
    cache_dir: str | os.PathLike | None = None,
) -> ParetoFront:
    """Long NSGA-II run on the true top-fidelity functions, cached as
    ``<benchmark>_ref_<seed>.csv`` when ``cache_dir`` is given."""
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{spec.name}_ref_{seed}.csv"
        if path.exists():
            return read_front_csv(path)
    cfg = EvolutionConfig(pop_size=100, max_evals=evals, seed=seed)
    res = nsga2(top_fidelity_objectives(spec), top_fidelity_constraints(spec), spec.domain, cfg)
    front = res.front
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_front_csv(path, front.points)
    return front


def phv_reference_point(spec: BenchmarkSpec, n: int = PHV_SAMPLE, seed: int = PHV_SEED) -> np.ndarray:
    """Componentwise minimum of top-fidelity objectives over a fixed random
    sample of the domain, less 1% of each range."""
    rng = np.random.Generator(np.random.PCG64(seed))
    y = spec.evaluate(spec.domain.sample(rng, n))[:, : spec.K]
    lo, hi = y.min(0), y.max(0)
    return lo - 0.01 * (hi - lo)
