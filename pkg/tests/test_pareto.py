import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osemo.pareto import (
    ParetoFront,
    dominates,
    hypervolume,
    hypervolume_inclusion_exclusion,
    nondominated_mask,
    pareto_front,
    per_objective_maxima,
    r2_distance,
    read_front_csv,
    write_front_csv,
)

points = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=12)


def as_set(front):
    return {tuple(p) for p in front.points}


def test_dominates_examples():
    assert dominates((2, 3), (1, 3))
    assert not dominates((1, 2), (2, 1))
    assert not dominates((1, 1), (1, 1))
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))


def test_pareto_front_examples():
    assert as_set(pareto_front([(1, 1)])) == {(1, 1)}
    assert as_set(pareto_front([(3, 1), (1, 3), (2, 2), (1, 1)])) == {(3, 1), (1, 3), (2, 2)}
    with pytest.raises(ValueError):
        pareto_front(np.zeros((0, 2)))


@given(points)
def test_front_matches_pairwise_oracle(pts):
    pts = np.array(pts, dtype=float)
    oracle = {tuple(p) for p in pts if not any(dominates(q, p) for q in pts)}
    assert as_set(pareto_front(pts)) == oracle
    perm = np.random.default_rng(0).permutation(len(pts))
    assert as_set(pareto_front(pts[perm])) == oracle


@given(points)
def test_front_members_mutually_nondominated(pts):
    f = pareto_front(pts).points
    for a, b in itertools.permutations(f, 2):
        assert not dominates(a, b)


def test_maxima():
    np.testing.assert_array_equal(per_objective_maxima(ParetoFront(np.array([[3.0, 1.0], [1.0, 3.0]]))), [3, 3])
    np.testing.assert_array_equal(per_objective_maxima(np.array([[2.0, 5.0]])), [2, 5])


def test_hypervolume_examples():
    assert hypervolume([(1, 1)], (0, 0)) == 1.0
    assert hypervolume([(1, 2), (2, 1)], (0, 0)) == 3.0
    assert hypervolume([(1, 2), (2, 1), (0.5, 0.5)], (0, 0)) == 3.0
    assert hypervolume(np.zeros((0, 2)), (0, 0)) == 0.0


def test_hypervolume_drops_points_below_reference():
    with pytest.warns(UserWarning):
        assert hypervolume([(1, 1), (-1, 5)], (0, 0)) == 1.0


@settings(max_examples=60)
@given(st.lists(st.tuples(st.floats(0.01, 1), st.floats(0.01, 1), st.floats(0.01, 1)), min_size=1, max_size=6))
def test_hypervolume_3d_matches_inclusion_exclusion(pts):
    assert hypervolume(pts, (0, 0, 0)) == pytest.approx(hypervolume_inclusion_exclusion(pts, (0, 0, 0)), abs=1e-9)


@given(points)
def test_hypervolume_monotone_under_insertion(pts):
    pts = np.array(pts, dtype=float) + 1.0
    base = hypervolume(pts[:-1], np.zeros(3)) if len(pts) > 1 else 0.0
    assert hypervolume(pts, np.zeros(3)) >= base - 1e-12


def test_hypervolume_mc_standard_error():
    pts = np.array([[1.0, 0.5, 0.5, 0.5], [0.5, 1.0, 0.5, 0.5]])
    hv, se = hypervolume(pts, np.zeros(4), return_se=True)
    exact = hypervolume_inclusion_exclusion(pts, np.zeros(4))
    assert se > 0
    assert abs(hv - exact) < 3 * se


def test_r2_examples():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert r2_distance(a, a) == 0.0
    assert r2_distance(np.array([[1.0, 2.0]]), np.array([[1.25, 2.0]])) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        r2_distance(a, np.zeros((1, 3)))
    with pytest.raises(ValueError):
        r2_distance(a, np.zeros((0, 2)))


def test_r2_matches_double_loop():
    rng = np.random.default_rng(0)
    a, b = rng.random((30, 3)), rng.random((17, 3))
    oracle = np.mean([min(np.linalg.norm(p - q) for q in b) for p in a])
    assert r2_distance(a, b) == pytest.approx(oracle, abs=1e-12)


def test_nondominated_mask_chunks():
    rng = np.random.default_rng(1)
    pts = rng.random((500, 2))
    mask = nondominated_mask(pts)
    oracle = np.array([not any(dominates(q, p) for q in pts) for p in pts])
    np.testing.assert_array_equal(mask, oracle)


def test_front_csv_roundtrip(tmp_path):
    pts = np.array([[0.1, 1 / 3], [2.5e-17, -4.0]])
    write_front_csv(tmp_path / "f.csv", pts)
    np.testing.assert_array_equal(read_front_csv(tmp_path / "f.csv").points, pts)
    assert b"\r" not in (tmp_path / "f.csv").read_bytes()
