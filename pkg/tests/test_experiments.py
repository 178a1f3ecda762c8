import json

import pytest

from orthofq.constructions import construct_2d
from orthofq.counting import full_space_pair_count
from orthofq.experiments import (
    ConfigError,
    ExperimentConfig,
    SplitMix64,
    census_check,
    load_suite_config,
    parse_suite_config,
    run_suite,
    sample_set,
    sample_vencs,
    theorem_check,
)


def test_splitmix64_reference_stream():
    # published outputs for seed 1234567
    g = SplitMix64(1234567)
    assert [g.next() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def dense_fisher_yates(universe, m, seed, offset):
    g = SplitMix64(seed)
    a = list(range(offset, offset + universe))
    for i in range(m):
        j = i + ((g.next() * (universe - i)) >> 64)
        a[i], a[j] = a[j], a[i]
    return a[:m]


@pytest.mark.parametrize("universe,m,seed", [(8, 4, 1), (100, 37, 99), (2186, 729, 7), (5, 5, 0)])
def test_sparse_shuffle_matches_dense(universe, m, seed):
    assert sample_vencs(universe, m, SplitMix64(seed), 1) == dense_fisher_yates(universe, m, seed, 1)


def test_golden_sample():
    E = sample_set(ExperimentConfig(3, 2, 2, 4, seed=1))
    assert E.vencs == (5, 6, 7, 8)


def test_sample_edge_cases():
    full = sample_set(ExperimentConfig(3, 2, 2, 8, seed=42))
    assert full.vencs == tuple(range(1, 9))
    assert len(sample_set(ExperimentConfig(3, 2, 2, 0, seed=42))) == 0
    with_zero = sample_set(ExperimentConfig(3, 2, 2, 9, seed=3, include_zero=True))
    assert with_zero.contains_zero()
    with pytest.raises(ValueError):
        ExperimentConfig(3, 2, 2, 9)


def test_sampling_is_deterministic():
    c = ExperimentConfig(5, 3, 2, 40, seed=2024)
    assert sample_set(c, 3) == sample_set(c, 3)
    assert sample_set(c, 3) != sample_set(c, 4)


def test_theorem_check_in_regime():
    tc = theorem_check(ExperimentConfig(7, 3, 2, 130, trials=20, seed=5))
    s = tc.summary()
    assert s["regime"] == "in-regime"
    assert 0.8 <= s["ratio_mean"] <= 1.25
    assert len(tc.records) == 20


def test_theorem_check_hypothesis():
    with pytest.raises(ValueError, match="C\\(k,2\\)"):
        theorem_check(ExperimentConfig(3, 3, 3, 10, trials=1))


def test_full_punctured_space_exact():
    q, d = 3, 3
    tc = theorem_check(ExperimentConfig(q, d, 2, q**d - 1, trials=2, seed=9))
    # removing 0 removes the 2 q^d - 1 pairs that involve it
    want = full_space_pair_count(q, d) - (2 * q**d - 1)
    assert all(r.count == want for r in tc.records)


def test_construction_ratio_zero_out_of_regime():
    E, _ = construct_2d(7)
    tc = census_check(E, 2)
    assert tc.records[0].count == 0 and tc.records[0].ratio == 0
    assert tc.summary()["regime"] == "out-of-regime"


def test_csv_identical_across_jobs():
    base = dict(q=3, d=7, k=3, m=300, trials=4, seed=11)
    a = theorem_check(ExperimentConfig(**base, n_jobs=1)).csv_text()
    b = theorem_check(ExperimentConfig(**base, n_jobs=2)).csv_text()
    assert a == b
    assert a.splitlines()[0] == "trial,size,digest,lambda,expected_num,expected_den,ratio"


def test_suite_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "seed": 1,\n  "checks": [\n}')
    with pytest.raises(ConfigError, match=":4:"):
        load_suite_config(bad)
    with pytest.raises(ConfigError, match="unknown field 'sed'"):
        parse_suite_config({"sed": 1})
    with pytest.raises(ConfigError, match="'seed' must be an integer"):
        parse_suite_config({"seed": "x"})
    with pytest.raises(ConfigError, match="unknown entries"):
        parse_suite_config({"checks": "oracle,nope"})
    assert parse_suite_config({"checks": "oracle, full_space"})["checks"] == ["oracle", "full_space"]


def test_run_suite_identities(tmp_path):
    cfg = parse_suite_config({"checks": ["oracle", "full_space", "embedding"], "oracle_instances": 30})
    status, results = run_suite(cfg, tmp_path)
    assert status == 0 and all(r.passed for r in results)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["status"] == 0


def test_run_suite_reports_construction_failure(tmp_path):
    cfg = parse_suite_config({"checks": ["constructions"], "product_primes": [3]})
    status, results = run_suite(cfg, tmp_path)
    assert status == 1
    assert any("construct_product(3, 4)" in f for f in results[0].failures)
