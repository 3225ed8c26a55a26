import math

import numpy as np
import pytest

from osemo.benchmarks import (
    BENCHMARKS,
    ackley,
    branin,
    branin_currin,
    constrained_toy,
    currin,
    dtlz1_error,
    dtlz1_mf,
    dtlz1_objectives,
    get_benchmark,
    phv_reference_point,
    qv_mf,
    reference_front,
    rosenbrock,
    sphere,
)
from osemo.mathkit import make_rng
from osemo.pareto import dominates, hypervolume


def test_branin_minimum():
    assert branin([[math.pi, 2.275]])[0] == pytest.approx(-0.397887, abs=1e-6)


def test_branin_fidelity_gap_vanishes_continuously():
    x = np.array([[1.3, 7.2]])
    gaps = [abs(branin(x, z)[0] - branin(x, 1.0)[0]) for z in (0.0, 0.9, 0.99, 0.999)]
    assert gaps[0] > 0
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2


def test_currin_edge_is_finite():
    for z in (0.0, 1.0):
        v = currin([[0.4, 0.0]], z)[0]
        assert np.isfinite(v)
    assert currin([[0.4, 1e-300]], 0.0)[0] == pytest.approx(currin([[0.4, 0.0]], 0.0)[0])


def test_ars_optima():
    assert ackley(np.zeros((1, 5)))[0] == pytest.approx(0.0, abs=1e-12)
    assert sphere(np.zeros((1, 5)))[0] == 0.0
    assert rosenbrock(np.ones((1, 5)))[0] == 0.0


def test_dtlz1_top_fidelity_has_no_error():
    x = make_rng(0).random((10, 5))
    np.testing.assert_array_equal(dtlz1_error(x, np.ones(10)), 0.0)
    np.testing.assert_array_equal(dtlz1_mf(x, 3), dtlz1_objectives(x))
    assert np.any(dtlz1_mf(x, 1) != dtlz1_objectives(x))


def test_dtlz1_structure():
    x = make_rng(1).random((20, 5))
    f = dtlz1_objectives(x)
    r = 100 * (5 + ((x - 0.5) ** 2 - np.cos(10 * math.pi * (x - 0.5))).sum(1))
    # the objectives telescope: their sum is -(1 + r) / 2
    np.testing.assert_allclose(f.sum(1), -(1 + r) / 2, rtol=1e-12)
    half = dtlz1_objectives(np.full((1, 5), 0.5))
    assert half.sum() == pytest.approx(-0.5)


def test_qv_examples():
    x = np.full((1, 8), 1.5)
    assert qv_mf(x, 2)[0, 1] == pytest.approx(-(10 ** 0.25), abs=1e-5)
    assert qv_mf(x, 1)[0, 1] == qv_mf(x, 2)[0, 1]
    y = make_rng(2).uniform(-5, 5, (1, 8))
    lo, hi = qv_mf(y, 1)[0, 1], qv_mf(y, 2)[0, 1]
    u = y[0] - 1.5
    w = np.array([0.9, 1.1] * 4)
    expect_lo = -max(np.mean(w * u**2 - 20 * math.pi * u + 10), 1e-12) ** 0.25
    expect_hi = -max(np.mean(u**2 - 20 * math.pi * u + 10), 1e-12) ** 0.25
    assert lo == pytest.approx(expect_lo) and hi == pytest.approx(expect_hi)


def test_qv_clamp_is_flagged():
    spec = get_benchmark("qv")
    x = np.full((1, 8), 0.9)  # raw 4: mean inside the root is negative
    assert spec.flags(x) == [["qv_clamped"]]


def test_constrained_toy_examples():
    assert np.all(constrained_toy([[0.5, 0.5]])[0, 2:] > 0)
    assert constrained_toy([[0.0, 0.0]])[0, 3] == pytest.approx(-0.4)


def test_constrained_toy_feasible_area():
    # the disk of radius sqrt(0.75) covers the whole square, so only the
    # half-plane x1 + x2 >= 0.4 binds: area 1 - 0.4^2 / 2 = 0.92
    x = make_rng(0).random((200_000, 2))
    c = constrained_toy(x)[:, 2:]
    area = np.mean(np.all(c >= 0, axis=1))
    assert area == pytest.approx(0.92, abs=0.005)


@pytest.mark.parametrize("name", BENCHMARKS)
def test_registry_shapes(name):
    spec = get_benchmark(name)
    x = make_rng(3).random((4, spec.d))
    y = spec.evaluate(x)
    assert y.shape == (4, spec.K + spec.L)
    assert np.all(np.isfinite(y))
    assert spec.cost.total(x, spec.highest_fidelity(4)).tolist() == [float(spec.K)] * 4


def test_unknown_benchmark():
    with pytest.raises(KeyError):
        get_benchmark("nope")


def test_bc_composite_uses_unit_inputs():
    x = np.array([[(math.pi + 5) / 15, 2.275 / 15]])
    assert branin_currin(x, np.ones((1, 2)))[0, 0] == pytest.approx(-0.397887, abs=1e-6)


def test_reference_front_properties(tmp_path):
    spec = get_benchmark("branin_currin")
    a = reference_front(spec, seed=0, evals=5000, cache_dir=tmp_path)
    b = reference_front(spec, seed=0, evals=5000)
    np.testing.assert_array_equal(a.points, b.points)
    assert (tmp_path / "branin_currin_ref_0.csv").exists()
    pts = a.points[:200]
    for i in range(len(pts)):
        assert not any(dominates(pts[j], pts[i]) for j in range(len(pts)) if j != i)


@pytest.mark.slow
def test_reference_front_phv_stable_across_seeds():
    spec = get_benchmark("branin_currin")
    ref = phv_reference_point(spec)
    hv = [hypervolume(reference_front(spec, seed=s), ref) for s in (0, 1)]
    assert abs(hv[0] - hv[1]) / hv[0] < 0.005
