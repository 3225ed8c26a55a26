import math

import numpy as np
import pytest
from scipy import integrate, stats

from osemo.acquisition import (
    AcquisitionConfig,
    CostModel,
    _ni_entropy_std,
    best_fidelity_vector,
    beta_t,
    esg_moments,
    esg_term,
    imoca_e_alpha,
    imoca_t_alpha,
    mesmo_alpha,
    mesmoc_alpha,
    mfosemo_ni_alpha,
    mfosemo_ni_entropy,
    mfosemo_tg_alpha,
    reduce_fidelity_space,
    sample_pareto_fronts,
    tg_term,
    truncated_gaussian_entropy,
)
from osemo.mathkit import GAUSS_ENTROPY_CONST, make_rng
from osemo.nsga2 import EvolutionConfig
from osemo.pareto import ParetoFront, ParetoFrontSample, dominates
from osemo.surrogates import GpHyperParams, build_surrogate

LN2 = math.log(2.0)


def sample_at(maxima):
    m = np.asarray(maxima, dtype=float)
    return ParetoFrontSample(ParetoFront(m[None, :]), m)


def flat_model(mean=0.0, var=1.0, d=1):
    # no data: posterior = prior with mean 0 and variance ``var``
    p = GpHyperParams("single", np.full(d, 0.3), var, 1e-6)
    return build_surrogate(np.zeros((0, d)), np.zeros(0), p)


def random_model(kind, rng, d=2, n=8, levels=3):
    ls = rng.uniform(0.2, 0.6, d)
    x = rng.random((n, d))
    y = np.sin(3 * x).sum(1) + 0.1 * rng.standard_normal(n)
    if kind == "mf":
        p = GpHyperParams("mf", ls, 1.0, 1e-4, err_lengthscales=ls * 1.5, err_variance=0.2)
        fid = rng.integers(1, levels + 1, n).astype(float)
        return build_surrogate(x, y, p, fid=fid, n_levels=levels)
    if kind == "cf":
        p = GpHyperParams("cf", ls, 1.0, 1e-4, fid_lengthscale=rng.uniform(0.3, 2.0))
        return build_surrogate(x, y, p, fid=rng.random(n))
    return build_surrogate(x, y, GpHyperParams("single", ls, 1.0, 1e-4))


# --- truncated Gaussian -------------------------------------------------------


def test_tg_entropy_examples():
    assert truncated_gaussian_entropy(0.0, 1.0, np.inf) == pytest.approx(1.4189385, abs=1e-7)
    assert truncated_gaussian_entropy(0.0, 1.0, 0.0) == pytest.approx(0.7257914, abs=1e-7)
    assert truncated_gaussian_entropy(0.0, 2.0, 0.0) - truncated_gaussian_entropy(0.0, 1.0, 0.0) == pytest.approx(LN2)


def test_tg_entropy_matches_quadrature():
    mu, sigma, upper = 0.4, 1.3, 1.1
    a = (upper - mu) / sigma
    logd = lambda y: stats.norm.logpdf(y, mu, sigma) - stats.norm.logcdf(a)  # noqa: E731
    oracle, _ = integrate.quad(lambda y: -np.exp(logd(y)) * logd(y), mu - 12 * sigma, upper, limit=200)
    assert truncated_gaussian_entropy(mu, sigma, upper) == pytest.approx(oracle, abs=1e-8)


def test_mesmo_alpha_examples():
    one = [flat_model()]
    assert mesmo_alpha(one, [sample_at([0.0])], [0.5]) == pytest.approx(LN2, abs=1e-7)
    two = [flat_model(), flat_model()]
    assert mesmo_alpha(two, [sample_at([0.0, 0.0])], [0.5]) == pytest.approx(2 * LN2, abs=1e-7)
    assert mesmo_alpha(two, [sample_at([1e6, 1e6])], [0.5]) == pytest.approx(0.0, abs=1e-12)


def test_mesmoc_alpha_examples():
    s = [sample_at([0.0, 0.0])]
    assert mesmoc_alpha([flat_model()], [flat_model()], s, [0.5]) == pytest.approx(2 * LN2, abs=1e-7)
    two = [sample_at([0.3, -0.2])]
    ms = [flat_model(), flat_model()]
    assert mesmoc_alpha(ms, [], two, [0.5]) == mesmo_alpha(ms, two, [0.5])
    assert mesmoc_alpha([flat_model()], [flat_model()], [sample_at([1e6, 1e6])], [0.5]) == pytest.approx(0.0, abs=1e-12)


def test_tg_term_extreme_gamma_is_finite():
    vals = tg_term(np.array([-1e6, -60.0, 0.0, 60.0, np.inf]))
    assert np.all(np.isfinite(vals))
    assert vals[-1] == pytest.approx(0.0, abs=1e-12)


# --- ESG ----------------------------------------------------------------------


def test_esg_moments_examples():
    assert esg_moments(0.7, 0.0) == pytest.approx((0.0, 1.0))
    mean, var = esg_moments(0.0, 1.0)
    # the lower-fidelity output is pulled below its mean by the bound
    assert mean == pytest.approx(-0.7978846, abs=1e-7)
    assert var == pytest.approx(0.3633802, abs=1e-7)


def test_esg_moments_monte_carlo():
    rng = make_rng(0)
    g, tau = 0.5, 0.6
    u = rng.standard_normal(400_000)
    f = tau * u + math.sqrt(1 - tau**2) * rng.standard_normal(u.size)
    keep = u[f <= g]
    mean, var = esg_moments(g, tau)
    assert abs(keep.mean() - mean) < 3 * keep.std() / math.sqrt(keep.size)
    assert abs(keep.var() - var) < 3 * var * math.sqrt(2.0 / keep.size) * 1.5


def test_esg_variance_in_unit_interval():
    g, tau = np.meshgrid(np.linspace(-4, 4, 41), np.linspace(-1, 1, 41))
    _, var = esg_moments(g, tau)
    assert np.all(var > 0) and np.all(var <= 1 + 1e-12)


def test_esg_term_limits():
    assert esg_term(0.3, 0.0) == pytest.approx(0.0, abs=1e-9)
    assert esg_term(0.3, 1.0) == pytest.approx(float(tg_term(0.3)), abs=1e-12)
    assert esg_term(0.3, 0.999999) == pytest.approx(float(tg_term(0.3)), abs=1e-6)


@pytest.mark.parametrize("g,tau", [(-2.0, 0.3), (0.0, 0.7), (1.5, -0.5), (3.0, 0.95), (-0.5, 0.99)])
def test_esg_term_refinement_oracle(g, tau):
    fine = AcquisitionConfig(panels=10_000)
    assert esg_term(g, tau) == pytest.approx(esg_term(g, tau, fine), abs=1e-4)


def test_esg_term_wide_quadrature_oracle():
    g, tau = 0.4, 0.8
    s = math.sqrt(1 - tau**2)
    pdf = lambda u: stats.norm.pdf(u) * stats.norm.cdf((g - tau * u) / s) / stats.norm.cdf(g)  # noqa: E731
    expect, _ = integrate.quad(lambda u: pdf(u) * stats.norm.logcdf((g - tau * u) / s), -12, 12, limit=200)
    lam = stats.norm.pdf(g) / stats.norm.cdf(g)
    oracle = tau**2 * g * lam / 2 - stats.norm.logcdf(g) + expect
    assert esg_term(g, tau) == pytest.approx(oracle, abs=1e-4)


# --- NI entropy ---------------------------------------------------------------


def test_ni_zero_covariance_is_gaussian():
    h = _ni_entropy_std(0.0, 2.0, 0.3, 1.0, 0.0, 0.5, AcquisitionConfig()) + math.log(2.0)
    assert h == pytest.approx(GAUSS_ENTROPY_CONST + math.log(2.0), abs=2e-5)


def test_ni_full_correlation_is_truncated_gaussian():
    cfg = AcquisitionConfig()
    sl, sh, ystar, mh = 1.5, 1.0, 0.4, 0.1
    h = _ni_entropy_std(0.0, sl, mh, sh, sl * sh, ystar, cfg) + math.log(sl)
    assert h == pytest.approx(truncated_gaussian_entropy(0.0, sl, sl * (ystar - mh) / sh), abs=1e-10)
    near = _ni_entropy_std(0.0, sl, mh, sh, 0.9999 * sl * sh, ystar, cfg) + math.log(sl)
    assert near == pytest.approx(float(h), abs=0.02)


def test_ni_entropy_refinement_oracle():
    rng = make_rng(3)
    m = random_model("mf", rng)
    fine = AcquisitionConfig(panels=10_000)
    for lvl in (1, 2):
        x = rng.random(2)
        assert mfosemo_ni_entropy(m, x, lvl, 0.5) == pytest.approx(mfosemo_ni_entropy(m, x, lvl, 0.5, fine), abs=1e-5)
    with pytest.raises(ValueError):
        mfosemo_ni_entropy(m, x, 3, 0.5)


def test_ni_uninformative_level_has_no_gain():
    # error kernel dominates and no data: lower level barely informs the top
    p = GpHyperParams("mf", [0.3], 1e-3, 1e-6, err_lengthscales=[0.3], err_variance=10.0)
    m = build_surrogate(np.zeros((0, 1)), np.zeros(0), p, fid=np.zeros(0), n_levels=2)
    s = [sample_at([0.0])]
    cost = CostModel(1, "discrete", ((1.0, 1.0),))
    low = mfosemo_ni_alpha([m], s, [0.5], [1], cost)
    top = mfosemo_ni_alpha([m], s, [0.5], [2], cost)
    assert 0.0 <= low < 1e-3 * top


# --- fidelity-aware alphas ----------------------------------------------------


def test_degeneracy_at_highest_fidelity():
    rng = make_rng(11)
    cf = [random_model("cf", rng), random_model("cf", rng)]
    mf = [random_model("mf", rng), random_model("mf", rng)]
    s = [sample_at(rng.normal(1.0, 0.5, 2)) for _ in range(3)]
    x = rng.random(2)
    ccost = CostModel(2, "continuous", functions=(lambda x, z: 0.05 + z**6.5, lambda x, z: 0.1 + z**2))
    dcost = CostModel(2, "discrete", ((0.01, 0.1, 1.0), (0.01, 0.1, 1.0)))
    ref_cf = mesmo_alpha(cf, s, x)
    assert 2 * imoca_t_alpha(cf, s, x, [1.0, 1.0], ccost) == pytest.approx(ref_cf, abs=1e-9)
    assert 2 * imoca_e_alpha(cf, s, x, [1.0, 1.0], ccost) == pytest.approx(ref_cf, abs=1e-9)
    ref_mf = mesmo_alpha(mf, s, x)
    assert 2 * mfosemo_tg_alpha(mf, s, x, [3, 3], dcost) == pytest.approx(ref_mf, abs=1e-9)
    assert mfosemo_ni_alpha(mf, s, x, [3, 3], dcost) == mfosemo_tg_alpha(mf, s, x, [3, 3], dcost)


def test_cost_linearity():
    rng = make_rng(2)
    cf = [random_model("cf", rng)]
    s = [sample_at([1.0])]
    cost = CostModel(1, "continuous", functions=(lambda x, z: 0.1 + z**2,))
    a = imoca_t_alpha(cf, s, [0.3, 0.3], [0.4], cost)
    assert imoca_t_alpha(cf, s, [0.3, 0.3], [0.4], cost.scaled(2.0)) == pytest.approx(a / 2)
    mf = [random_model("mf", rng)]
    dcost = CostModel(1, "discrete", ((0.01, 0.1, 1.0),))
    b = mfosemo_tg_alpha(mf, s, [0.3, 0.3], [2], dcost)
    assert mfosemo_tg_alpha(mf, s, [0.3, 0.3], [2], dcost.scaled(0.5)) == pytest.approx(2 * b)


def test_dtlz_middle_fidelity_cost():
    cost = CostModel(6, "discrete", tuple((0.01, 0.1, 1.0) for _ in range(6)))
    assert cost.total(np.zeros((1, 6)), [2] * 6)[0] == pytest.approx(0.6)


def test_cost_model_validation():
    with pytest.raises(ValueError):
        CostModel(2, "discrete", ((1.0,),))
    with pytest.raises(ValueError):
        CostModel(1, "weird")


# --- fidelity reduction and choice -------------------------------------------


def test_beta_example():
    assert beta_t(2, 1, 2.0) == pytest.approx(math.sqrt(math.log(5.0)), abs=1e-12)
    assert beta_t(2, 1, 2.0) == pytest.approx(1.2686, abs=1e-4)


def _cf_with_bandwidth(h, noise=1e-6):
    p = GpHyperParams("cf", [0.3, 0.3], 1.0, noise, fid_lengthscale=h)
    return build_surrogate(np.array([[0.5, 0.5]]), np.array([1.0]), p, fid=np.array([1.0]))


def test_reduction_always_keeps_top_fidelity():
    cost = CostModel(1, "continuous", functions=(lambda x, z: 0.1 + z**2,))
    grid, mask = reduce_fidelity_space(_cf_with_bandwidth(0.5), np.array([0.5, 0.5]), 3, cost, 0)
    assert grid[-1] == 1.0 and mask[-1]


def test_reduction_huge_bandwidth_printed_filter():
    cost = CostModel(1, "continuous", functions=(lambda x, z: 0.1 + z**2,))
    cfg = AcquisitionConfig(fidelity_filter="printed")
    _, mask = reduce_fidelity_space(_cf_with_bandwidth(1e4), np.array([0.1, 0.9]), 1, cost, 0, cfg)
    assert mask.tolist() == [False] * 20 + [True]


def test_reduction_rejects_low_variance_points():
    cost = CostModel(1, "continuous", functions=(lambda x, z: 0.1 + z**2,))
    # at the training input the posterior std is ~0, below every threshold
    _, mask = reduce_fidelity_space(_cf_with_bandwidth(0.2), np.array([0.5, 0.5]), 1, cost, 0)
    assert mask.tolist() == [False] * 20 + [True]


def test_best_fidelity_vector_matches_enumeration():
    rng = make_rng(5)
    n, K, G = 30, 3, 4
    gains = rng.random((n, K, G))
    costs = rng.uniform(0.1, 1.0, (n, K, G))
    mask = rng.random((n, K, G)) < 0.7
    mask[:, :, -1] = True
    idx, ratio = best_fidelity_vector(gains, costs, mask)
    import itertools

    for i in range(n):
        best = max(
            sum(gains[i, j, c[j]] for j in range(K)) / sum(costs[i, j, c[j]] for j in range(K))
            for c in itertools.product(range(G), repeat=K)
            if all(mask[i, j, c[j]] for j in range(K))
        )
        assert ratio[i] == pytest.approx(best, rel=1e-12)
        assert all(mask[i, j, idx[i, j]] for j in range(K))


# --- front sampling -----------------------------------------------------------


def test_sample_pareto_fronts_structure_and_determinism():
    rng = make_rng(0)
    ms = [random_model("single", rng), random_model("single", rng)]
    cfg = AcquisitionConfig(S=1, evolution=EvolutionConfig(max_evals=500))
    a = sample_pareto_fronts(ms, cfg, 4)
    b = sample_pareto_fronts(ms, cfg, 4)
    assert len(a) == 1
    np.testing.assert_array_equal(a[0].front.points, b[0].front.points)
    pts = a[0].front.points
    for i in range(len(pts)):
        assert not any(dominates(pts[j], pts[i]) for j in range(len(pts)) if j != i)
    np.testing.assert_array_equal(a[0].maxima, pts.max(0))


def test_sample_fronts_with_unsatisfiable_constraint_flag_degenerate():
    rng = make_rng(1)
    obj = [random_model("single", rng)]
    p = GpHyperParams("single", [0.3, 0.3], 1e-4, 1e-6)
    con = [build_surrogate(np.array([[0.5, 0.5]]), np.array([-100.0]), p)]
    cfg = AcquisitionConfig(S=1, evolution=EvolutionConfig(max_evals=200))
    s = sample_pareto_fronts(obj, cfg, 0, con)
    assert s[0].degenerate and s[0].maxima.size == 2
