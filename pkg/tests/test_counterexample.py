import json
import math

import numpy as np
import pytest

from erdos_check import DomainError, OutOfRangeError, crossover, sieve_primes, tail_estimate, term, verify
from erdos_check.counterexample import (
    CLARK_BOUND,
    ERDOS_BOUND,
    _scan_result,
    is_certified,
)
from erdos_check.erdos_sum import SumResult

from .oracles import hp_prefix_sums, hp_sum


def test_verify_threshold_3():
    r = verify(3)
    assert r.semiprime_sum.value == pytest.approx(0.3239242, abs=1e-7)
    assert r.prime_sum.value == pytest.approx(1.0247606, abs=1e-7)
    assert r.margin < 0 and not r.certified
    assert abs(r.semiprime_sum.value - hp_sum([4, 6, 9])) <= r.semiprime_sum.error_bound
    assert abs(r.prime_sum.value - hp_sum([2, 3])) <= r.prime_sum.error_bound


def test_verify_threshold_2():
    r = verify(2)
    assert r.semiprime_sum.value == term(4)
    assert r.prime_sum.value == term(2)
    assert not r.certified
    assert r.prime_tail_heuristic is None


def test_verify_domain():
    with pytest.raises(DomainError):
        verify(1)
    with pytest.raises(OutOfRangeError):
        verify(1000, table=sieve_primes(100))


def test_verify_matches_oracle_up_to_1000(table_1e4):
    thresholds = [2, 3, 5, 10, 31, 100, 128, 257, 500, 997, 1000]
    oracle = hp_prefix_sums(1000, thresholds)
    for x in thresholds:
        r = verify(x, table=table_1e4, chunk_size=313)
        hp_prime, hp_semi = oracle[x]
        assert abs(r.prime_sum.value - hp_prime) <= r.prime_sum.error_bound
        assert abs(r.semiprime_sum.value - hp_semi) <= r.semiprime_sum.error_bound
        assert r.semiprime_sum.value < CLARK_BOUND and r.prime_sum.value < CLARK_BOUND
        assert r.certified == (r.margin > r.semiprime_sum.error_bound + r.prime_sum.error_bound)


def test_variants_are_consistent(table_1e4):
    r = verify(500, table=table_1e4)
    v = r.variants
    with_sq = v["unordered_with_squares"]["value"]
    without = v["unordered_without_squares"]["value"]
    squares = v["prime_squares_only"]["value"]
    ordered = v["ordered_pairs_multiset"]["value"]
    assert with_sq == r.semiprime_sum.value
    assert abs(with_sq - without - squares) < 1e-14
    assert abs(ordered - (2 * without + squares)) < 1e-14
    assert not v["ordered_pairs_multiset"]["counts_each_element_once"]
    # the alternative is computed directly too
    r2 = verify(500, table=table_1e4, include_prime_squares=False)
    assert abs(r2.semiprime_sum.value - without) <= (
        r2.semiprime_sum.error_bound + v["unordered_without_squares"]["error_bound"]
    )
    assert not r2.includes_prime_squares


def test_report_bit_identical_across_threads(table_1e4):
    docs = set()
    for threads in (1, 2, 8):
        r = verify(5000, table=table_1e4, threads=threads, chunk_size=10007)
        docs.add(r.to_json())
    assert len(docs) == 1


def test_report_json_fields():
    doc = json.loads(verify(10).to_json({"total": 0.5}))
    for key in (
        "threshold", "semiprime_sum.value", "semiprime_sum.error_bound", "semiprime_sum.term_count",
        "prime_sum.value", "margin", "certified", "includes_prime_squares", "erdos_bound", "clark_bound",
        "version", "elapsed_seconds.total",
    ):
        assert key in doc
    assert doc["erdos_bound"] == ERDOS_BOUND == 1.84
    assert doc["clark_bound"] == CLARK_BOUND == 1.7811
    assert "non-rigorous" in doc["prime_tail_heuristic.label"]


def test_certification_rule():
    a = SumResult(1.0, 1e-10, 1)
    b = SumResult(0.9, 1e-10, 1)
    assert is_certified(0.1, a, b)
    assert not is_certified(1.5e-10, a, b)
    assert not is_certified(-0.1, a, b)


def test_tail_estimate():
    assert tail_estimate(3) == pytest.approx(0.9102392, abs=1e-7)
    assert tail_estimate(1_400_000) == pytest.approx(0.0706615, abs=1e-7)
    assert tail_estimate(1_400_000) == 1 / math.log(1_400_000)
    with pytest.raises(DomainError):
        tail_estimate(2)


def test_crossover_small_scan_not_found():
    r = crossover(100, 10)
    assert not r.found and r.first_exceeding_prime is None
    assert r.final_margin < 0
    assert r.history[0][0] == 2 and r.history[-1][0] == 97
    assert r.final_margin == pytest.approx(verify(97).margin, abs=1e-14)


def test_crossover_running_margins_match_verify(table_1e4):
    r = crossover(3000, 1, table=table_1e4)
    for prime, margin, _ in r.history[:: 37]:
        rep = verify(prime, table=table_1e4)
        assert margin == pytest.approx(rep.margin, abs=1e-14)


def test_crossover_arguments():
    with pytest.raises(DomainError):
        crossover(100, 0)
    with pytest.raises(DomainError):
        crossover(1, 1)


def test_crossover_deterministic_across_threads(table_1e4):
    runs = {tuple(crossover(10**4, 97, threads=t, table=table_1e4).history) for t in (1, 2, 8)}
    assert len(runs) == 1


def test_scan_result_found_and_stability():
    primes = np.array([2, 3, 5, 7, 11, 13])
    margin = np.array([-1.0, -0.5, 0.1, -0.01, 0.2, 0.3])
    certified = margin > 0.05
    r = _scan_result(primes, margin, certified, 2, 13, True)
    assert r.first_exceeding_prime == 5
    assert not r.stable_above
    assert [h[0] for h in r.history] == [2, 5, 11, 13]
    margin[3] = 0.01
    r = _scan_result(primes, margin, margin > 0.05, 2, 13, True)
    assert r.first_exceeding_prime == 5 and r.stable_above


def test_history_csv():
    text = crossover(30, 3).history_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "prime,margin,certified"
    prime, margin, cert = lines[1].split(",")
    assert prime == "2" and cert == "false" and float(margin) < 0
