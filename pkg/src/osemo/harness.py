"""Experiment runner: algorithm x benchmark x seeds, per-seed and aggregate CSVs."""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .acquisition import AcquisitionConfig
from .benchmarks import BENCHMARKS, get_benchmark, phv_reference_point, reference_front
from .nsga2 import EvolutionConfig
from .pareto import ParetoFront
from .optimizer import ALGORITHMS, MODEL_KIND, REQUIRED_MODE, RunConfig, problem_from_benchmark, read_records, run


class ConfigError(ValueError):
    """Invalid or incompatible experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    benchmark: str
    algorithm: str
    seeds: tuple = tuple(range(10))
    samples: int = 10
    budget: float | None = None
    iterations: int | None = None
    n_init: int | None = None
    hyperfit_interval: int | None = None
    nsga_evals: int = 1500
    recover_every: int = 5
    fidelity_filter: str = "inverse"
    timing: bool = False
    out: str = "results"

    def __post_init__(self):
        if self.benchmark not in BENCHMARKS:
            raise ConfigError(f"benchmark={self.benchmark!r} is not one of {', '.join(BENCHMARKS)}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm={self.algorithm!r} is not one of {', '.join(ALGORITHMS)}")
        if self.budget is None and self.iterations is None:
            raise ConfigError("one of budget or iterations is required")
        if not self.seeds:
            raise ConfigError("seeds must be nonempty")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.fidelity_filter not in ("inverse", "printed"):
            raise ConfigError(f"fidelity_filter={self.fidelity_filter!r} must be inverse or printed")
        spec = get_benchmark(self.benchmark)
        need = REQUIRED_MODE.get(MODEL_KIND[self.algorithm])
        if need is not None and spec.mode != need:
            raise ConfigError(
                f"algorithm={self.algorithm} needs {need} fidelities but benchmark={self.benchmark} has mode={spec.mode}"
            )
        if self.algorithm == "mesmoc" and spec.L < 1:
            raise ConfigError(f"algorithm=mesmoc needs constraints but benchmark={self.benchmark} has L=0")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if f.name == "seeds":
                v = ",".join(str(s) for s in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    def run_config(self, seed: int) -> RunConfig:
        evo = EvolutionConfig(max_evals=self.nsga_evals)
        acq = AcquisitionConfig(S=self.samples, evolution=evo, fidelity_filter=self.fidelity_filter)
        return RunConfig(
            algorithm=self.algorithm,
            iterations=self.iterations,
            budget=self.budget,
            n_init=self.n_init,
            acquisition=acq,
            hyperfit_interval=self.hyperfit_interval,
            seed=seed,
            recover_every=self.recover_every,
            recover_evals=self.nsga_evals,
            record_timing=self.timing,
        )


_CONVERT = {
    "seeds": lambda s: tuple(int(t) for t in s.split(",") if t.strip()),
    "samples": int,
    "budget": float,
    "iterations": int,
    "n_init": int,
    "hyperfit_interval": int,
    "nsga_evals": int,
    "recover_every": int,
    "timing": lambda s: {"true": True, "false": False, "1": True, "0": False}[s.lower()],
}
KEYS = tuple(f.name for f in fields(ExperimentConfig))


def parse_text(text: str) -> dict:
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


def parse_config(path: str | os.PathLike | None = None, **flags) -> ExperimentConfig:
    """Build a config from an optional key=value file overridden by flags.

    Flag values may be strings (converted like file values) or typed values.
    Unknown keys are rejected by name.
    """
    raw: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        raw.update(parse_text(p.read_text(encoding="utf-8")))
    raw.update({k: v for k, v in flags.items() if v is not None})
    values = {}
    for k, v in raw.items():
        if k not in KEYS:
            raise ConfigError(f"unknown config key {k!r}")
        if isinstance(v, str) and k in _CONVERT:
            try:
                v = _CONVERT[k](v)
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"bad value for {k}: {v!r}") from exc
        elif k == "seeds":
            v = tuple(int(s) for s in v)
        values[k] = v
    for k in ("benchmark", "algorithm"):
        if k not in values:
            raise ConfigError(f"missing required key {k!r}")
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def run_file_name(cfg: ExperimentConfig, seed: int) -> str:
    return f"{cfg.benchmark}_{cfg.algorithm}_seed{seed}.csv"


def _run_seed(args):
    cfg, seed, ref_points, out_dir = args
    spec = get_benchmark(cfg.benchmark)
    front = ParetoFront(ref_points) if ref_points is not None else None
    problem = problem_from_benchmark(spec, front, phv_reference_point(spec))
    try:
        result = run(problem, cfg.run_config(seed))
    except Exception as exc:  # recorded, other seeds continue
        return seed, None, f"{type(exc).__name__}: {exc}"
    result.write_csv(Path(out_dir) / run_file_name(cfg, seed), problem)
    return seed, result.records, result.error


def run_experiment(cfg: ExperimentConfig, reference: bool = True):
    """Run every seed, write one CSV per seed plus ``aggregate.csv``.

    Returns ``{seed: records or None}`` and a dict of per-seed errors.
    ``OSEMO_THREADS`` caps the number of seeds run concurrently.
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.to_text(), encoding="utf-8")
    ref_points = None
    if reference:
        ref_points = reference_front(get_benchmark(cfg.benchmark), cache_dir=out).points
    jobs = [(cfg, s, ref_points, str(out)) for s in cfg.seeds]
    threads = max(1, int(os.environ.get("OSEMO_THREADS", "1")))
    if threads == 1 or len(jobs) == 1:
        results = [_run_seed(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as ex:
            results = list(ex.map(_run_seed, jobs))
    runs = {seed: recs for seed, recs, _ in results}
    errors = {seed: err for seed, _, err in results if err}
    good = [r for r in runs.values() if r]
    if good:
        write_aggregate(out / "aggregate.csv", aggregate_runs(good))
    if errors:
        with open(out / "errors.txt", "w", encoding="utf-8", newline="\n") as fh:
            for seed in sorted(errors):
                fh.write(f"seed {seed}: {errors[seed]}\n")
    return runs, errors


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AggregateCurve:
    cost: np.ndarray
    phv_mean: np.ndarray
    phv_var: np.ndarray
    r2_mean: np.ndarray
    r2_var: np.ndarray
    count: np.ndarray

    def __len__(self) -> int:
        return self.cost.size


def _step(costs: np.ndarray, values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    # value of the last breakpoint at or before each grid cost; nan before the first
    i = np.searchsorted(costs, grid, side="right") - 1
    out = np.full(grid.size, np.nan)
    ok = i >= 0
    out[ok] = values[i[ok]]
    return out


def _carry_forward(values: list) -> np.ndarray:
    out = np.empty(len(values))
    last = np.nan
    for i, v in enumerate(values):
        if v is not None:
            last = v
        out[i] = last
    return out


def _nan_stats(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = np.sum(~np.isnan(m), axis=0)
    mean = np.full(m.shape[1], np.nan)
    var = np.full(m.shape[1], np.nan)
    ok = n > 0
    mean[ok] = np.nansum(m[:, ok], axis=0) / n[ok]
    var[ok] = np.nansum((m[:, ok] - mean[ok]) ** 2, axis=0) / n[ok]
    return mean, var


def aggregate_runs(runs) -> AggregateCurve:
    """Step-interpolate each run's curve onto the union of cost breakpoints.

    PHV is the observed-data PHV; R2 comes from recovery iterations and is
    carried forward between them. Statistics at a grid cost use the runs
    that have started by then; ``count`` says how many. Variance is the
    population variance (0 for a single run).
    """
    runs = [list(r) for r in runs]
    if not runs or any(len(r) == 0 for r in runs):
        raise ValueError("need at least one nonempty run")
    grid = np.unique(np.concatenate([[rec.cum_cost for rec in r] for r in runs]))
    phv = np.empty((len(runs), grid.size))
    r2 = np.empty((len(runs), grid.size))
    for i, r in enumerate(runs):
        c = np.array([rec.cum_cost for rec in r])
        phv[i] = _step(c, np.array([rec.phv_observed for rec in r]), grid)
        r2[i] = _step(c, _carry_forward([rec.r2 for rec in r]), grid)
    pm, pv = _nan_stats(phv)
    rm, rv = _nan_stats(r2)
    return AggregateCurve(grid, pm, pv, rm, rv, np.sum(~np.isnan(phv), axis=0))


AGG_HEADER = ["cost", "phv_mean", "phv_var", "r2_mean", "r2_var", "count"]


def _fmt(v) -> str:
    return "" if v is None or (isinstance(v, float) and math.isnan(v)) else repr(float(v))


def write_aggregate(path, curve: AggregateCurve) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGG_HEADER)
        for i in range(len(curve)):
            w.writerow(
                [
                    _fmt(curve.cost[i]),
                    _fmt(curve.phv_mean[i]),
                    _fmt(curve.phv_var[i]),
                    _fmt(curve.r2_mean[i]),
                    _fmt(curve.r2_var[i]),
                    str(int(curve.count[i])),
                ]
            )


def read_aggregate(path) -> AggregateCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if next(reader) != AGG_HEADER:
            raise ValueError(f"{path}: not an aggregate CSV")
        rows = list(reader)
    col = lambda j: np.array([float(r[j]) if r[j] else np.nan for r in rows])  # noqa: E731
    return AggregateCurve(col(0), col(1), col(2), col(3), col(4), np.array([int(r[5]) for r in rows]))


def aggregate_directory(in_dir) -> AggregateCurve:
    """Aggregate every per-seed RunRecord CSV found in ``in_dir``."""
    paths = sorted(p for p in Path(in_dir).glob("*_seed*.csv"))
    if not paths:
        raise FileNotFoundError(f"no run CSVs in {in_dir}")
    runs = [read_records(p) for p in paths]
    return aggregate_runs([r for r in runs if r])


@dataclass(frozen=True)
class NotReached:
    """The PHV level is above the given curves' maxima."""

    curves: tuple


def cost_to_reach(curve: AggregateCurve, level: float) -> float | None:
    hit = np.flatnonzero(curve.phv_mean >= level)
    return float(curve.cost[hit[0]]) if hit.size else None


def cost_reduction_factor(curve_a: AggregateCurve, curve_b: AggregateCurve, level: float):
    """Percentage cost saved by curve a over curve b to reach a PHV level."""
    ca, cb = cost_to_reach(curve_a, level), cost_to_reach(curve_b, level)
    missing = tuple(name for name, c in (("a", ca), ("b", cb)) if c is None)
    if missing:
        return NotReached(missing)
    return 100.0 * (1.0 - ca / cb)
