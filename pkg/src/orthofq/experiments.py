"""Seeded sampling, Monte Carlo checks of the tuple-count estimate, and the check suite."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from .counting import (
    TupleCensus,
    bridge_sum,
    count_tuples_bruteforce,
    count_tuples_graph,
    decompose_main_terms,
    expected_count,
    full_space_pair_count,
    threshold_size,
)
from .ffield import field_for_order
from .geometry import PointSet
from .constructions import construct_2d, construct_E1, construct_product, embed_zero_coordinate
from .discrepancy import l2_report

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: 64-bit state, golden-ratio increment, two xor-shift-multiply rounds."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Integer in [0, n) from the high word of a 128-bit product (no rejection)."""
        return (self.next() * n) >> 64


def trial_rng(seed: int, trial: int) -> SplitMix64:
    return SplitMix64((seed ^ trial) & MASK64)


def sample_vencs(universe_size: int, m: int, rng: SplitMix64, offset: int = 0) -> list[int]:
    """First m entries of a partial Fisher-Yates shuffle of [offset, offset + universe_size)."""
    if m > universe_size:
        raise ValueError(f"cannot sample {m} points from a universe of {universe_size}")
    swapped: dict[int, int] = {}
    out = []
    for i in range(m):
        j = i + rng.below(universe_size - i)
        vi, vj = swapped.get(i, i), swapped.get(j, j)
        swapped[j] = vi
        out.append(vj + offset)
    return out


@dataclass
class ExperimentConfig:
    q: int
    d: int
    k: int
    m: int
    trials: int = 1
    seed: int = 0
    include_zero: bool = False
    method: str = "graph"
    budget: int = 10**9
    n_jobs: int = 1

    def __post_init__(self):
        if self.method not in ("graph", "bruteforce"):
            raise ValueError(f"unknown counting method {self.method!r}")
        if self.m < 0 or self.m > self.universe_size:
            raise ValueError(f"m = {self.m} outside [0, {self.universe_size}]")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")

    @property
    def field(self):
        return field_for_order(self.q)

    @property
    def universe_size(self) -> int:
        return self.q**self.d - (0 if self.include_zero else 1)

    def check_hypothesis(self) -> None:
        c = self.k * (self.k - 1) // 2
        if not 0 < c < self.d:
            raise ValueError(f"theorem hypothesis 0 < C(k,2) < d fails: C({self.k},2) = {c}, d = {self.d}")


def sample_set(config: ExperimentConfig, trial: int = 0) -> PointSet:
    """Uniform m-subset of F_q^d; the zero vector (venc 0) is excluded unless requested."""
    rng = trial_rng(config.seed, trial)
    offset = 0 if config.include_zero else 1
    vencs = sample_vencs(config.universe_size, config.m, rng, offset)
    return PointSet(config.field, config.d, vencs)


@dataclass
class TrialRecord:
    trial: int
    size: int
    digest: list[int]
    count: int
    expected: Fraction

    @property
    def ratio(self) -> Fraction | None:
        return None if self.expected == 0 else self.count / self.expected

    def csv_row(self) -> list:
        r = self.ratio
        return [
            self.trial,
            self.size,
            ";".join(map(str, self.digest)),
            self.count,
            self.expected.numerator,
            self.expected.denominator,
            "" if r is None else f"{float(r):.12g}",
        ]


CSV_HEADER = ["trial", "size", "digest", "lambda", "expected_num", "expected_den", "ratio"]


def _census(E: PointSet, k: int, method: str, budget: int) -> TupleCensus:
    if method == "bruteforce":
        return count_tuples_bruteforce(E, k, budget=budget)
    return count_tuples_graph(E, k)


def _run_trial(args: tuple[ExperimentConfig, int]) -> TrialRecord:
    config, t = args
    E = sample_set(config, t)
    census = _census(E, config.k, config.method, config.budget)
    return TrialRecord(t, len(E), list(E.vencs[:8]), census.count, census.expected)


@dataclass
class TheoremCheck:
    config: ExperimentConfig
    records: list[TrialRecord]
    threshold: float
    threshold_exponent: Fraction

    @property
    def in_regime(self) -> bool:
        return self.config.m >= self.threshold

    def ratios(self) -> list[Fraction]:
        return [r.ratio for r in self.records if r.ratio is not None]

    def summary(self) -> dict[str, Any]:
        ratios = self.ratios()
        mean = sum(ratios, Fraction(0)) / len(ratios) if ratios else None
        return {
            "config": asdict(self.config),
            "threshold": self.threshold,
            "threshold_exponent": [self.threshold_exponent.numerator, self.threshold_exponent.denominator],
            "threshold_constant": 1,
            "caveat": "the theorem's constant C is unspecified; the regime boundary uses C = 1",
            "regime": "in-regime" if self.in_regime else "out-of-regime",
            "trials": len(self.records),
            "ratio_min": float(min(ratios)) if ratios else None,
            "ratio_mean": float(mean) if mean is not None else None,
            "ratio_max": float(max(ratios)) if ratios else None,
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow(r.csv_row())
        return buf.getvalue()


def theorem_check(config: ExperimentConfig) -> TheoremCheck:
    """Count lambda_k on ``config.trials`` random sets and compare with |E|^k q^-C(k,2)."""
    config.check_hypothesis()
    threshold, exponent = threshold_size(config.q, config.d, config.k)
    jobs = [(config, t) for t in range(config.trials)]
    if config.n_jobs > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.n_jobs) as pool:
            records = list(pool.map(_run_trial, jobs))
    else:
        records = [_run_trial(j) for j in jobs]
    records.sort(key=lambda r: r.trial)
    return TheoremCheck(config, records, threshold, exponent)


def census_check(E: PointSet, k: int) -> TheoremCheck:
    """Ratio report for a given set, e.g. a construction, with the same summary shape."""
    config = ExperimentConfig(E.q, E.d, k, len(E), trials=0, include_zero=E.contains_zero())
    config.check_hypothesis()
    threshold, exponent = threshold_size(E.q, E.d, k)
    census = count_tuples_graph(E, k)
    rec = TrialRecord(0, len(E), list(E.vencs[:8]), census.count, census.expected)
    return TheoremCheck(config, [rec], threshold, exponent)


# -- suite ---------------------------------------------------------------------

SUITE_DEFAULTS: dict[str, Any] = {
    "seed": 20240601,
    "n_jobs": 1,
    "checks": [
        "oracle",
        "full_space",
        "l2",
        "constructions",
        "embedding",
        "theorem",
    ],
    "oracle_instances": 200,
    "oracle_max_size": 50,
    "sweep_sets": 20,
    "sweep_max_size": 50,
    "theorem_pairs_trials": 20,
    "theorem_triples_trials": 5,
    "product_primes": [3, 11],
}

KNOWN_CHECKS = ("oracle", "full_space", "l2", "constructions", "embedding", "theorem")


class ConfigError(ValueError):
    pass


def load_suite_config(path: str | os.PathLike) -> dict[str, Any]:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_suite_config(raw, source=str(path))


def parse_suite_config(raw: Any, source: str = "<config>") -> dict[str, Any]:
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    config = dict(SUITE_DEFAULTS)
    for key, value in raw.items():
        if key not in SUITE_DEFAULTS:
            raise ConfigError(f"{source}: unknown field {key!r}")
        default = SUITE_DEFAULTS[key]
        if key == "checks":
            if isinstance(value, str):
                value = [c.strip() for c in value.split(",") if c.strip()]
            if not isinstance(value, list) or not all(isinstance(c, str) for c in value):
                raise ConfigError(f"{source}: field 'checks' must be a list of names or a comma string")
            bad = [c for c in value if c not in KNOWN_CHECKS]
            if bad:
                raise ConfigError(f"{source}: field 'checks' has unknown entries {bad}")
        elif key == "product_primes":
            if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
                raise ConfigError(f"{source}: field 'product_primes' must be a list of integers")
        elif not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"{source}: field {key!r} must be an integer, got {value!r}")
        config[key] = value
    return config


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def _sweep_sets(seed: int, count: int, max_size: int, q: int, d: int, include_zero: bool):
    """Random sets for the discrepancy sweep; sizes uniform in [1, min(max_size, universe)]."""
    f = field_for_order(q)
    rng = SplitMix64(seed)
    for _ in range(count):
        universe = q**d - 1
        size = 1 + rng.below(min(max_size, universe))
        if include_zero:
            vencs = [0] + sample_vencs(universe, size - 1, rng, offset=1)
        else:
            vencs = sample_vencs(universe, size, rng, offset=1)
        yield PointSet(f, d, vencs)


def check_oracle(cfg: dict[str, Any]) -> CheckResult:
    res = CheckResult("oracle", True)
    rng = SplitMix64(cfg["seed"] ^ 0x0AC1E)
    grid = [(q, d) for q in (2, 3, 5) for d in (2, 3)]
    for n in range(cfg["oracle_instances"]):
        q, d = grid[n % len(grid)]
        k = 2 + rng.below(3)
        f = field_for_order(q)
        size = rng.below(min(cfg["oracle_max_size"], q**d) + 1)
        E = PointSet(f, d, sample_vencs(q**d, size, rng))
        g = count_tuples_graph(E, k).count
        b = count_tuples_bruteforce(E, k).count
        if g != b:
            res.passed = False
            res.failures.append(f"q={q} d={d} k={k} |E|={size}: graph {g} != brute {b}")
    res.details["instances"] = cfg["oracle_instances"]
    return res


def check_full_space(cfg: dict[str, Any]) -> CheckResult:
    res = CheckResult("full_space", True)
    for q in (2, 3, 5, 7):
        for d in (2, 3):
            E = PointSet.full_space(field_for_order(q), d)
            got = count_tuples_graph(E, 2).count
            want = full_space_pair_count(q, d)
            res.details[f"q={q},d={d}"] = got
            if got != want:
                res.passed = False
                res.failures.append(f"q={q} d={d}: {got} != {want}")
    return res


def check_l2_sweep(cfg: dict[str, Any]) -> CheckResult:
    """L2 identity, lemma bound, main-term decomposition and bridge identity on one sweep."""
    res = CheckResult("l2", True)
    bound_reports = []
    for q in (3, 5):
        for d in (2, 3):
            for k in (2, 3):
                for include_zero in (False, True):
                    seed = cfg["seed"] ^ (q << 16) ^ (d << 8) ^ (k << 4) ^ int(include_zero)
                    for E in _sweep_sets(seed, cfg["sweep_sets"], cfg["sweep_max_size"], q, d, include_zero):
                        tag = f"q={q} d={d} k={k} zero={include_zero} |E|={len(E)}"
                        rep = l2_report(E, k)
                        if not rep.agree:
                            res.passed = False
                            res.failures.append(f"{tag}: L2 brute {rep.bruteforce} != closed {rep.closed_form}")
                        if not rep.bound_satisfied:
                            entry = {"set": tag, "l2": str(rep.value), "bound": rep.bound}
                            bound_reports.append(entry)
                            if not E.contains_zero():
                                res.passed = False
                                res.failures.append(f"{tag}: lemma bound violated, {rep.value} > {rep.bound}")
                        terms = decompose_main_terms(E, k)
                        if not terms.holds or (k == 2 and terms.mixed != 0):
                            res.passed = False
                            res.failures.append(f"{tag}: decomposition {terms.to_json()}")
                        lam_prev = count_tuples_graph(E, k - 1).count
                        if terms.main != Fraction(len(E) * lam_prev, q ** (k - 1)):
                            res.passed = False
                            res.failures.append(f"{tag}: main term mismatch")
                        if bridge_sum(E, k) != terms.count:
                            res.passed = False
                            res.failures.append(f"{tag}: bridge identity fails")
    res.details["bound_violations"] = bound_reports
    return res


def check_constructions(cfg: dict[str, Any]) -> CheckResult:
    res = CheckResult("constructions", True)
    for q in (3, 5, 7, 11, 13):
        E, rep = construct_2d(q)
        want = (q * q - 1) // 2 if q % 4 == 3 else (q - 1) ** 2 // 2
        res.details[f"2d q={q}"] = rep.to_json()
        if not rep.verified or len(E) != want:
            res.passed = False
            res.failures.append(f"construct_2d({q}): size {len(E)} (want {want}), verified={rep.verified}")
    for p in cfg["product_primes"]:
        _, rep = construct_E1(p)
        res.details[f"E1 p={p}"] = rep.to_json()
        if not rep.verified:
            res.passed = False
            res.failures.append(f"construct_E1({p}) has orthogonal pairs")
        _, rep = construct_product(p, 4)
        res.details[f"product p={p} d=4"] = rep.to_json()
        if not rep.verified or rep.measurements.get("methods_agree") is False:
            res.passed = False
            res.failures.append(f"construct_product({p}, 4): verified={rep.verified} ({rep.method})")
    return res


def check_embedding(cfg: dict[str, Any]) -> CheckResult:
    res = CheckResult("embedding", True)
    sets = list(_sweep_sets(cfg["seed"] ^ 0xE3B, 20, 20, 3, 2, False))
    sets.append(construct_2d(7)[0])
    for E in sets:
        F = embed_zero_coordinate(E)
        for k in (2, 3):
            a, b = count_tuples_graph(E, k).count, count_tuples_graph(F, k).count
            if a != b:
                res.passed = False
                res.failures.append(f"{E!r} k={k}: {a} != {b}")
    res.details["sets"] = len(sets)
    return res


def check_theorem(cfg: dict[str, Any], out_dir: Path | None) -> CheckResult:
    res = CheckResult("theorem", True)
    runs = [
        ("pairs", ExperimentConfig(7, 3, 2, 130, cfg["theorem_pairs_trials"], cfg["seed"], n_jobs=cfg["n_jobs"]),
         (0.80, 1.25), (0.5, 2.0)),
        ("triples", ExperimentConfig(3, 7, 3, 729, cfg["theorem_triples_trials"], cfg["seed"], n_jobs=cfg["n_jobs"]),
         (0.5, 2.0), None),
    ]
    for name, config, mean_band, trial_band in runs:
        tc = theorem_check(config)
        summary = tc.summary()
        res.details[name] = summary
        if out_dir is not None:
            (out_dir / f"theorem_{name}.csv").write_text(tc.csv_text())
            (out_dir / f"theorem_{name}.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        lo, hi = mean_band
        if not lo <= summary["ratio_mean"] <= hi:
            res.passed = False
            res.failures.append(f"{name}: mean ratio {summary['ratio_mean']} outside [{lo}, {hi}]")
        if trial_band is not None:
            lo, hi = trial_band
            bad = [float(r) for r in tc.ratios() if not lo <= r <= hi]
            if bad:
                res.passed = False
                res.failures.append(f"{name}: trial ratios {bad} outside [{lo}, {hi}]")
    return res


CHECKS: dict[str, Callable] = {
    "oracle": check_oracle,
    "full_space": check_full_space,
    "l2": check_l2_sweep,
    "constructions": check_constructions,
    "embedding": check_embedding,
}


def run_suite(config: dict[str, Any], out_dir: str | os.PathLike | None = None) -> tuple[int, list[CheckResult]]:
    """Run the declared checks; exit status 0 if all pass, 1 otherwise."""
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    results = []
    for name in config["checks"]:
        log.info("running check %s", name)
        if name == "theorem":
            result = check_theorem(config, out)
        else:
            result = CHECKS[name](config)
        results.append(result)
        if out is not None:
            (out / f"{name}.json").write_text(json.dumps(asdict(result), indent=2, sort_keys=True, default=str) + "\n")
    status = 0 if all(r.passed for r in results) else 1
    if out is not None:
        summary = {r.name: {"passed": r.passed, "failures": r.failures} for r in results}
        (out / "summary.json").write_text(json.dumps({"status": status, "checks": summary}, indent=2, sort_keys=True) + "\n")
    return status, results
