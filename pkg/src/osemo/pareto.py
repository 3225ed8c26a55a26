"""Pareto dominance, front extraction, hypervolume and the R2 distance.

Maximisation convention throughout: larger is better in every objective.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

MC_SAMPLES = 200_000
MC_SEED = 20_200_101


def dominates(a, b) -> bool:
    """True iff ``a >= b`` componentwise with at least one strict inequality."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a >= b) and np.any(a > b))


def dominance_tables(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(ge, gt)`` with ``ge[i, j] = all(a_i >= b_j)`` and ``gt[i, j] = any(a_i > b_j)``."""
    ge = np.ones((a.shape[0], b.shape[0]), dtype=bool)
    gt = np.zeros((a.shape[0], b.shape[0]), dtype=bool)
    for k in range(a.shape[1]):
        col_a = a[:, k, None]
        col_b = b[None, :, k]
        ge &= col_a >= col_b
        gt |= col_a > col_b
    return ge, gt


def nondominated_mask(points: np.ndarray) -> np.ndarray:
    """Boolean mask of points not dominated by any other point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[0]
    mask = np.ones(n, dtype=bool)
    chunk = max(1, 4_000_000 // max(1, n))
    for start in range(0, n, chunk):
        ge, gt = dominance_tables(pts, pts[start : start + chunk])
        mask[start : start + chunk] = ~np.any(ge & gt, axis=0)
    return mask


@dataclass(frozen=True)
class ParetoFront:
    points: np.ndarray
    inputs: np.ndarray | None = None

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def K(self) -> int:
        return self.points.shape[1]

    def to_csv(self, path) -> None:
        write_front_csv(path, self.points)


def pareto_front(points, inputs=None) -> ParetoFront:
    """Exactly the non-dominated subset, exact duplicates removed."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("cannot take the Pareto front of an empty set")
    xs = None if inputs is None else np.atleast_2d(np.asarray(inputs, dtype=float))
    keep = nondominated_mask(pts)
    pts = pts[keep]
    if xs is not None:
        xs = xs[keep]
    _, first = np.unique(pts, axis=0, return_index=True)
    first = np.sort(first)
    return ParetoFront(pts[first], None if xs is None else xs[first])


def per_objective_maxima(front) -> np.ndarray:
    pts = front.points if isinstance(front, ParetoFront) else np.atleast_2d(np.asarray(front, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("empty front")
    return pts.max(axis=0)


@dataclass(frozen=True)
class ParetoFrontSample:
    """A sampled front plus its per-output maxima (objectives, then constraints)."""

    front: ParetoFront
    maxima: np.ndarray
    degenerate: bool = False

    @classmethod
    def from_front(cls, front: ParetoFront, extra: np.ndarray | None = None, degenerate: bool = False):
        maxima = per_objective_maxima(front)
        if extra is not None:
            maxima = np.concatenate([maxima, np.atleast_2d(extra).max(axis=0)])
        return cls(front, maxima, degenerate)


# ---------------------------------------------------------------------------
# Hypervolume
# ---------------------------------------------------------------------------


def _hv2(pts: np.ndarray, ref: np.ndarray) -> float:
    # sweep by decreasing first objective; each point adds the strip its
    # second objective lifts above the running maximum
    order = np.lexsort((-pts[:, 1], -pts[:, 0]))
    xs, ys = pts[order, 0], pts[order, 1]
    prev = np.concatenate([[ref[1]], np.maximum.accumulate(ys)[:-1]])
    return float(np.sum((xs - ref[0]) * np.maximum(ys - prev, 0.0)))


def _hv3(pts: np.ndarray, ref: np.ndarray) -> float:
    # sweep down the third objective; each slab has the 2-D volume of the
    # points whose third coordinate reaches it
    order = np.argsort(-pts[:, 2], kind="stable")
    pts = pts[order]
    levels = np.append(pts[:, 2], ref[2])
    hv = 0.0
    for i in range(pts.shape[0]):
        depth = levels[i] - levels[i + 1]
        if depth > 0:
            hv += depth * _hv2(pts[: i + 1, :2], ref[:2])
    return hv


def _clean(front, reference) -> tuple[np.ndarray, np.ndarray]:
    pts = front.points if isinstance(front, ParetoFront) else np.atleast_2d(np.asarray(front, dtype=float))
    ref = np.asarray(reference, dtype=float)
    if not np.all(np.isfinite(ref)):
        raise ValueError("reference point must be finite")
    if pts.size == 0:
        return pts.reshape(0, ref.size), ref
    if pts.shape[1] != ref.size:
        raise ValueError("reference dimension mismatch")
    below = np.any(pts < ref, axis=1)
    if np.any(below):
        warnings.warn(f"dropping {int(below.sum())} point(s) that do not dominate the reference", stacklevel=3)
    pts = pts[~below]
    pts = pts[np.all(pts > ref, axis=1)]
    if pts.shape[0]:
        pts = pts[nondominated_mask(pts)]
    return pts, ref


def hypervolume(front, reference, return_se: bool = False):
    """Volume dominated by ``front`` and bounded below by ``reference``.

    Exact for K <= 3. For K >= 4 a fixed-seed Monte-Carlo estimate over the
    bounding box with 2e5 samples; ``return_se=True`` also returns its
    standard error (0 in exact mode).
    """
    pts, ref = _clean(front, reference)
    K = ref.size
    if pts.shape[0] == 0:
        return (0.0, 0.0) if return_se else 0.0
    if K == 1:
        hv, se = float(pts.max() - ref[0]), 0.0
    elif K == 2:
        hv, se = _hv2(pts, ref), 0.0
    elif K == 3:
        hv, se = _hv3(pts, ref), 0.0
    else:
        hv, se = _hv_mc(pts, ref)
    return (float(hv), float(se)) if return_se else float(hv)


def _hv_mc(pts: np.ndarray, ref: np.ndarray, n: int = MC_SAMPLES, seed: int = MC_SEED):
    top = pts.max(axis=0)
    box = float(np.prod(top - ref))
    rng = np.random.Generator(np.random.PCG64(seed))
    # big boxes first so most samples are settled early
    pts = pts[np.argsort(-np.prod(pts - ref, axis=1), kind="stable")]
    hits = 0
    batch = 20_000
    for start in range(0, n, batch):
        m = min(batch, n - start)
        u = ref + (top - ref) * rng.random((m, ref.size))
        for p in pts:
            hit = np.all(u <= p, axis=1)
            if hit.any():
                hits += int(hit.sum())
                u = u[~hit]
                if u.shape[0] == 0:
                    break
    frac = hits / n
    return box * frac, box * np.sqrt(frac * (1.0 - frac) / n)


def hypervolume_inclusion_exclusion(front, reference) -> float:
    """Brute-force hypervolume by inclusion-exclusion over all point subsets.

    Exponential in the front size; an independent oracle for small fronts.
    """
    pts = front.points if isinstance(front, ParetoFront) else np.atleast_2d(np.asarray(front, dtype=float))
    ref = np.asarray(reference, dtype=float)
    pts = pts[np.all(pts > ref, axis=1)]
    n = pts.shape[0]
    total = 0.0
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        corner = pts[idx].min(axis=0)
        vol = float(np.prod(corner - ref))
        total += vol if len(idx) % 2 else -vol
    return total


def r2_distance(reference_front, candidate_front) -> float:
    """Mean over reference points of the Euclidean distance to the nearest
    candidate point."""
    a = reference_front.points if isinstance(reference_front, ParetoFront) else np.atleast_2d(reference_front)
    b = candidate_front.points if isinstance(candidate_front, ParetoFront) else np.atleast_2d(candidate_front)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("fronts must be nonempty")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"objective count mismatch: {a.shape[1]} vs {b.shape[1]}")
    dist, _ = cKDTree(b).query(a, k=1)
    return float(np.mean(dist))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def write_front_csv(path, points) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"y_{k}" for k in range(pts.shape[1])])
        for row in pts:
            w.writerow([repr(float(v)) for v in row])


def read_front_csv(path) -> ParetoFront:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in r] for r in reader]
    return ParetoFront(np.asarray(rows, dtype=float).reshape(-1, len(header)))
