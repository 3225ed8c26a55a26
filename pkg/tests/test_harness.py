import numpy as np
import pytest

from osemo.cli import main
from osemo.harness import (
    AggregateCurve,
    ConfigError,
    NotReached,
    aggregate_runs,
    cost_reduction_factor,
    parse_config,
    read_aggregate,
    run_experiment,
    write_aggregate,
)
from osemo.optimizer import RunRecord, read_records


def rec(i, cost, phv, r2=None):
    return RunRecord(i, cost, phv, None, r2, (0.0,), (), (0.0,))


def curve(costs, phv):
    c = np.asarray(costs, dtype=float)
    z = np.zeros_like(c)
    return AggregateCurve(c, np.asarray(phv, dtype=float), z, z, z, np.ones(c.size, int))


# --- config -------------------------------------------------------------------


def test_minimal_flags_fill_defaults():
    cfg = parse_config(benchmark="branin_currin", algorithm="imoca-t", budget="50")
    assert cfg.seeds == tuple(range(10)) and cfg.samples == 10 and cfg.budget == 50.0
    assert "budget=50.0" in cfg.to_text()


def test_config_round_trip(tmp_path):
    cfg = parse_config(benchmark="dtlz1", algorithm="mf-osemo-ni", iterations="7", seeds="3,1", timing="true")
    path = tmp_path / "c.txt"
    path.write_text(cfg.to_text())
    assert parse_config(path) == cfg


def test_flags_override_file(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("benchmark=branin_currin\nalgorithm=mesmo\niterations=4  # short\n")
    assert parse_config(path, iterations="9").iterations == 9


def test_unknown_key_named(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("benchmark=branin_currin\nalgorithm=mesmo\niterations=4\nbogus_key=1\n")
    with pytest.raises(ConfigError, match="bogus_key"):
        parse_config(path)


def test_incompatibility_names_both_fields():
    with pytest.raises(ConfigError) as err:
        parse_config(benchmark="branin_currin", algorithm="mesmoc", iterations="3")
    assert "mesmoc" in str(err.value) and "L=0" in str(err.value)
    with pytest.raises(ConfigError, match="mode=continuous"):
        parse_config(benchmark="branin_currin", algorithm="mf-osemo-tg", iterations="3")


def test_missing_budget_rejected():
    with pytest.raises(ConfigError):
        parse_config(benchmark="branin_currin", algorithm="mesmo")


# --- aggregation --------------------------------------------------------------


def test_identical_runs_zero_variance():
    r = [rec(1, 2.0, 1.0, 0.5), rec(2, 4.0, 3.0)]
    agg = aggregate_runs([r, r])
    np.testing.assert_array_equal(agg.phv_var, 0.0)
    np.testing.assert_array_equal(agg.r2_mean, [0.5, 0.5])


def test_disjoint_breakpoints_union():
    a = [rec(1, 1.0, 1.0), rec(2, 3.0, 2.0)]
    b = [rec(1, 2.0, 5.0), rec(2, 4.0, 7.0)]
    agg = aggregate_runs([a, b])
    assert agg.cost.tolist() == [1.0, 2.0, 3.0, 4.0]
    # before run b starts only run a contributes
    assert agg.count.tolist() == [1, 2, 2, 2]
    assert agg.phv_mean.tolist() == [1.0, 3.0, 3.5, 4.5]
    assert agg.phv_var.tolist() == [0.0, 4.0, 2.25, 6.25]


def test_single_run_aggregate():
    r = [rec(1, 2.0, 1.0, 0.3), rec(2, 4.0, 3.0), rec(3, 5.0, 3.5, 0.1)]
    agg = aggregate_runs([r])
    assert agg.phv_mean.tolist() == [1.0, 3.0, 3.5]
    assert agg.r2_mean.tolist() == [0.3, 0.3, 0.1]
    assert agg.phv_var.tolist() == [0.0, 0.0, 0.0]


def test_aggregate_needs_runs():
    with pytest.raises(ValueError):
        aggregate_runs([])


def test_aggregate_csv_round_trip(tmp_path):
    agg = aggregate_runs([[rec(1, 1.0, 1.0 / 3, 0.2)], [rec(1, 2.5, 2.0)]])
    write_aggregate(tmp_path / "a.csv", agg)
    back = read_aggregate(tmp_path / "a.csv")
    for name in ("cost", "phv_mean", "phv_var", "r2_mean", "r2_var", "count"):
        np.testing.assert_array_equal(getattr(back, name), getattr(agg, name))


def test_cost_reduction_examples():
    a = curve([10, 30, 50], [1.0, 2.0, 3.0])
    assert cost_reduction_factor(a, a, 2.0) == 0.0
    b = curve([100, 200], [1.5, 2.0])
    assert cost_reduction_factor(a, b, 2.0) == pytest.approx(85.0)
    assert cost_reduction_factor(a, b, 9.0) == NotReached(("a", "b"))
    assert cost_reduction_factor(a, b, 2.5) == NotReached(("b",))


# --- experiments and CLI -------------------------------------------------------


def small(out, seeds="0"):
    return parse_config(
        benchmark="branin_currin", algorithm="mesmo", iterations="2", seeds=seeds, samples="1", nsga_evals="300", out=str(out)
    )


def test_single_seed_experiment(tmp_path):
    runs, errors = run_experiment(small(tmp_path), reference=False)
    assert not errors
    agg = read_aggregate(tmp_path / "aggregate.csv")
    recs = read_records(tmp_path / "branin_currin_mesmo_seed0.csv")
    assert agg.phv_mean.tolist() == [r.phv_observed for r in recs]
    assert np.all(agg.phv_var == 0)
    assert (tmp_path / "config.txt").read_text() == small(tmp_path).to_text()


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    run_experiment(small(tmp_path / "one", "0,1"), reference=False)
    monkeypatch.setenv("OSEMO_THREADS", "2")
    run_experiment(small(tmp_path / "two", "0,1"), reference=False)
    for name in ("branin_currin_mesmo_seed0.csv", "branin_currin_mesmo_seed1.csv", "aggregate.csv"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_cli_run_and_aggregate(tmp_path, capsys):
    out = tmp_path / "r"
    code = main(["run", "--benchmark", "branin_currin", "--algorithm", "random", "--iterations", "2",
                 "--seeds", "0,1", "--samples", "1", "--out", str(out), "--no-reference"])
    assert code == 0
    assert "algorithm=random" in capsys.readouterr().out
    assert main(["aggregate", "--in", str(out), "--out", str(tmp_path / "agg.csv")]) == 0
    assert (tmp_path / "agg.csv").read_bytes() == (out / "aggregate.csv").read_bytes()


def test_cli_errors(tmp_path, capsys):
    code = main(["run", "--benchmark", "branin_currin", "--algorithm", "mesmoc", "--iterations", "2"])
    err = capsys.readouterr().err.strip().splitlines()
    assert code != 0 and len(err) == 1 and err[0].startswith("error: config:")
    code = main(["aggregate", "--in", str(tmp_path / "missing"), "--out", str(tmp_path / "x.csv")])
    assert code != 0 and capsys.readouterr().err.startswith("error: io:")
    bad = tmp_path / "bad.txt"
    bad.write_text("benchmark=branin_currin\nalgorithm=mesmo\nwat=1\n")
    assert main(["run", "--config", str(bad), "--iterations", "1"]) != 0
    assert "wat" in capsys.readouterr().err


def test_cli_reference(tmp_path, monkeypatch):
    import osemo.cli as cli

    monkeypatch.setattr(cli, "reference_front", lambda spec, seed=0: __import__("osemo.benchmarks").benchmarks.reference_front(spec, seed, evals=1000))
    assert main(["reference", "--benchmark", "branin_currin", "--out", str(tmp_path / "ref.csv")]) == 0
    assert (tmp_path / "ref.csv").read_text().startswith("y_0,y_1\n")
