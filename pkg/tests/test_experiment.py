from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from randgroups import Presentation
from randgroups.errors import InfeasibleConfigError, PreconditionError
from randgroups.experiment import (
    ExperimentConfig,
    Measurement,
    config_from_dict,
    coverage_experiment,
    evaluate,
    load_config,
    measure,
    omission_frequency,
    rows_from_csv,
    rows_from_json,
    run_experiment,
    wilson_interval,
)

FEW = ExperimentConfig(
    "few_relator",
    2,
    (12, 30),
    6,
    77,
    ("lambda_star", "c_prime_at(1/6)", "c_prime_at(11*log(l)/(l*log(3)))", "m_star", "covers_length(2)", "bounds"),
    n=3,
)


def test_evaluate():
    assert evaluate("0.12", {}) == Fraction(3, 25)
    assert evaluate("2*d + 0.02", {"d": 0.05}) == Fraction(3, 25)
    assert evaluate("l/4 - 1", {"l": 10}) == Fraction(3, 2)
    assert evaluate("ceil(log(l))", {"l": 100}) == 5
    assert evaluate("11*log(l)/(l*log(3))", {"l": 100}) == pytest.approx(11 * math.log(100) / (100 * math.log(3)))
    assert evaluate("2**3", {}) == 8
    for bad in ("l +", "__import__('os')", "x", "[1]", "log(1, 2)"):
        with pytest.raises(PreconditionError):
            evaluate(bad, {"l": 1})


def test_measurement_parsing():
    assert Measurement.parse("c_prime_at( 1/6 )") == Measurement("c_prime_at", "1/6")
    assert Measurement.parse("m_star").name == "m_star"
    for bad in ("nonsense", "lambda_star(2)", "c_prime_at", "c_prime_at()"):
        with pytest.raises(PreconditionError):
            Measurement.parse(bad)


def test_determinism_and_parallelism():
    serial = run_experiment(FEW, workers=1)
    parallel = run_experiment(FEW, workers=2)
    assert serial.to_json() == parallel.to_json()
    assert serial.to_csv() == parallel.to_csv()
    assert run_experiment(FEW, workers=1).to_json() == serial.to_json()


def test_rows_are_ordered_and_complete():
    res = run_experiment(FEW, workers=1)
    keys = [(r.l, r.trial) for r in res.rows]
    assert keys == sorted(keys)
    names = {r.measurement for r in res.rows}
    assert {"bounds.upper", "bounds.kappa", "bounds.lower_exact", "lambda_star"} <= names
    assert len(res.rows) == 2 * 6 * (5 + 3)


def test_fractions_equal_row_means():
    res = run_experiment(FEW, workers=1)
    for agg in res.aggregates:
        values = [r.value for r in res.rows if r.l == agg["l"] and r.measurement == agg["measurement"]]
        if "fraction" in agg:
            assert agg["fraction"] == Fraction(sum(values), len(values))
            lo, hi = agg["ci95"]
            assert 0 <= lo <= agg["fraction"] <= hi <= 1
        if agg["measurement"] == "lambda_star":
            assert agg["mean"] == sum(values, Fraction(0)) / len(values)


def test_csv_and_json_decode_to_same_rows():
    res = run_experiment(FEW, workers=1)
    from_csv = rows_from_csv(res.to_csv())
    from_json = rows_from_json(res.to_json())
    assert from_csv == from_json
    assert from_csv == [(r.l, r.trial, r.measurement, r.value) for r in res.rows]
    assert res.to_csv().splitlines()[0] == "l,trial,measurement,value"


def test_measure_matches_direct_computation():
    p = Presentation.from_strings(2, ["abAB"])
    names = ("lambda_star", "omits(aa)", "omits(Ba)", "omits(ba)", "covers_length(1)")
    cfg = ExperimentConfig("few_relator", 2, (4,), 1, 0, names, n=1)
    out = dict(measure(p, cfg, 4))
    assert out["lambda_star"] == Fraction(1, 4)
    assert out["omits(aa)"] is True
    assert out["omits(Ba)"] is False  # read across the end of the relator
    assert out["omits(ba)"] is True  # only the relator itself is searched, not its inverse
    assert out["covers_length(1)"] is True


def test_wilson_interval():
    lo, hi = wilson_interval(20, 20)
    assert hi == 1 and 0.8 < lo < 0.85
    assert wilson_interval(0, 0) == (0.0, 1.0)


@given(st.integers(1, 200), st.data())
def test_wilson_contains_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson_interval(k, n)
    assert lo <= k / n <= hi


def test_config_guards():
    with pytest.raises(InfeasibleConfigError):
        ExperimentConfig("density", 2, (100,), 1, 0, ("lambda_star",), d=0.5)
    with pytest.raises(InfeasibleConfigError):
        ExperimentConfig("few_relator", 2, (10**6,), 1, 0, ("lambda_star",), n=11)
    with pytest.raises(PreconditionError):
        ExperimentConfig("few_relator", 2, (10,), 0, 0, ("lambda_star",), n=1)
    with pytest.raises(PreconditionError):
        ExperimentConfig("other", 2, (10,), 1, 0, ("lambda_star",))
    with pytest.raises(PreconditionError):
        ExperimentConfig("few_relator", 2, (10,), 1, 0, ("frobnicate",), n=1)
    with pytest.raises(PreconditionError):
        config_from_dict({"model": "density", "m": 2})


def test_non_integer_coverage_length_is_rejected():
    cfg = ExperimentConfig("few_relator", 2, (10,), 1, 0, ("covers_length(l/4)",), n=1)
    with pytest.raises(PreconditionError):
        run_experiment(cfg, workers=1)


def test_load_config(tmp_path):
    path = tmp_path / "sweep.toml"
    path.write_text(
        'model = "density"\nm = 2\nd = 0.05\nlengths = [40, 60]\ntrials = 2\nseed = 1\n'
        'measurements = ["lambda_star", "c_prime_at(2*d + 0.02)"]\n'
    )
    cfg = load_config(path, seed=9)
    assert cfg.seed == 9 and cfg.lengths == (40, 60) and cfg.d == 0.05
    res = run_experiment(cfg, workers=1)
    assert res.metadata["relator_counts"] == {"40": 9, "60": 27}
    assert res.metadata["seed"] == 9


def test_coverage_experiment_reports_analytic_bound():
    cfg = ExperimentConfig("few_relator", 2, (400,), 10, 3, ("m_star",), n=1)
    res = coverage_experiment(cfg, "5", omit_word="aaaaa")
    entry = res.metadata["analytic"]["400"]
    assert entry["k"] == 5
    assert 0 < entry["omission_bound"] <= 1 and entry["union_bound"] <= 1
    assert entry["word_omission_check"] is True
    assert "covers_length(5)" in {r.measurement for r in res.rows}


def test_omission_frequency_against_bound():
    check = omission_frequency(2, 1000, "aaaaa", 400, 1)
    assert check.bound == pytest.approx(0.9126, abs=1e-4)
    assert check.holds and 0 <= check.empirical <= 1
