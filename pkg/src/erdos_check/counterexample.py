"""Compare the semiprime and prime Erdos sums at a threshold and certify the result.

Let A1 be the products pq of primes p, q <= x and A2 the primes above x. The
union of A1 and A2 is primitive. If F(A1) > F(primes <= x) holds as a strict
certified inequality, adding the common tail F(A2) to both sides gives
F(A1 u A2) > F(all primes), a counterexample. No infinite sum is evaluated
anywhere. Only the finite comparison at x is needed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__, _kernels
from .erdos_sum import (
    DEFAULT_CHUNK,
    TERM_REL_ERROR,
    UNIT_ROUNDOFF,
    SumResult,
    _run_chunks,
    sum_prime_squares,
    sum_primes,
    sum_semiprimes,
)
from .errors import DomainError, OutOfRangeError
from .primitive import certify_construction
from .sieve import PrimeTable, sieve_primes

DEFAULT_THRESHOLD = 1_400_000
ERDOS_BOUND = 1.84
CLARK_BOUND = 1.7811

# Four-decimal values published for the two sums at DEFAULT_THRESHOLD,
# kept to check which way of counting A1 reproduces them.
PUBLISHED_DIGITS = {"semiprime_sum": "1.5748", "prime_sum": "1.5659"}

TRANSFER_ARGUMENT = (
    "A1 = {pq : p, q prime <= x} and A2 = {primes r > x} form a primitive union. "
    "F(A2) is the same convergent tail on both sides of F(A1) + F(A2) vs "
    "F(primes <= x) + F(A2), so a certified F(A1) > F(primes <= x) at x alone "
    "decides the comparison of F(A1 u A2) with F(all primes)."
)
TAIL_LABEL = "heuristic, non-rigorous: 1/ln x from the prime number theorem"


def tail_estimate(x: int) -> float:
    """Heuristic size of the sum of 1/(p ln p) over primes p > x.

    Returns 1/ln x, the integral of dt/(t ln^2 t) from x to infinity. This is
    not a bound.
    """
    if int(x) < 3:
        raise DomainError(f"tail_estimate needs x >= 3, got {x}")
    return 1.0 / math.log(int(x))


def _combine(value: float, *parts: SumResult, count: int) -> SumResult:
    bound = sum(p.error_bound for p in parts) + 2 * UNIT_ROUNDOFF * abs(value)
    return SumResult(value, math.nextafter(bound, math.inf), count)


def is_certified(margin: float, a: SumResult, b: SumResult) -> bool:
    # the extra u*|margin| covers rounding in the subtraction itself
    return margin > a.error_bound + b.error_bound + UNIT_ROUNDOFF * abs(margin)


def _truncate4(value: float) -> str:
    return f"{math.floor(value * 10**4) / 10**4:.4f}"


@dataclass(frozen=True)
class CounterexampleReport:
    threshold: int
    semiprime_sum: SumResult
    prime_sum: SumResult
    margin: float
    certified: bool
    includes_prime_squares: bool
    erdos_bound: float = ERDOS_BOUND
    clark_bound: float = CLARK_BOUND
    variants: dict = field(default_factory=dict)
    prime_tail_heuristic: Optional[float] = None
    primitivity: tuple = ()

    def as_dict(self) -> dict:
        """Flat key-value form; nested values use dotted keys."""
        out = {
            "threshold": self.threshold,
            "certified": self.certified,
            "margin": self.margin,
            "includes_prime_squares": self.includes_prime_squares,
        }
        for name in ("semiprime_sum", "prime_sum"):
            for key, val in getattr(self, name).as_dict().items():
                out[f"{name}.{key}"] = val
        out["erdos_bound"] = self.erdos_bound
        out["clark_bound"] = self.clark_bound
        for vname, v in self.variants.items():
            for key, val in v.items():
                out[f"variant.{vname}.{key}"] = val
        if self.prime_tail_heuristic is not None:
            out["prime_tail_heuristic.value"] = self.prime_tail_heuristic
            out["prime_tail_heuristic.label"] = TAIL_LABEL
        out["argument"] = TRANSFER_ARGUMENT
        for i, line in enumerate(self.primitivity):
            out[f"primitivity.{i}"] = line
        return out

    def to_json(self, elapsed: Optional[dict] = None) -> str:
        doc = {"tool": "erdos_check", "version": __version__}
        doc.update(self.as_dict())
        for key, val in (elapsed or {}).items():
            doc[f"elapsed_seconds.{key}"] = val
        return json.dumps(doc, indent=2)


def _variant_entry(s: SumResult, prime: SumResult, threshold: int, set_sum: bool = True) -> dict:
    margin = s.value - prime.value
    entry = {
        "counts_each_element_once": set_sum,
        "value": s.value,
        "error_bound": s.error_bound,
        "term_count": s.term_count,
        "margin": margin,
        "certified": is_certified(margin, s, prime),
    }
    if threshold == DEFAULT_THRESHOLD:
        entry["matches_published_digits"] = _truncate4(s.value) == PUBLISHED_DIGITS["semiprime_sum"]
    return entry


def verify(
    threshold: int = DEFAULT_THRESHOLD,
    *,
    include_prime_squares: bool = True,
    threads=None,
    chunk_size: int = DEFAULT_CHUNK,
    table: Optional[PrimeTable] = None,
    timings: Optional[dict] = None,
) -> CounterexampleReport:
    """Compare F(A1) and F(primes <= threshold) and certify the sign of the gap.

    ``certified`` is True only when the semiprime sum exceeds the prime sum
    by more than both error bounds combined. The report also lists the other
    ways of counting A1 (with and without the squares p*p, and ordered pairs
    counted twice), each compared against the prime sum. Pass a dict as
    ``timings`` to collect elapsed seconds per stage.
    """
    import time

    threshold = int(threshold)
    if threshold < 2:
        raise DomainError(f"threshold must be >= 2, got {threshold}")
    clock = time.perf_counter()
    if table is None:
        table = sieve_primes(threshold)
    elif table.limit < threshold:
        raise OutOfRangeError(f"table limit {table.limit} is below threshold {threshold}")
    stamps = {"sieve": time.perf_counter() - clock}

    opts = dict(threads=threads, chunk_size=chunk_size)
    clock = time.perf_counter()
    prime = sum_primes(table, threshold, **opts)
    stamps["prime_sum"] = time.perf_counter() - clock
    clock = time.perf_counter()
    semi = sum_semiprimes(table, threshold, include_prime_squares=include_prime_squares, **opts)
    stamps["semiprime_sum"] = time.perf_counter() - clock
    squares = sum_prime_squares(table, threshold, **opts)

    k = prime.term_count
    if include_prime_squares:
        with_sq = semi
        without_sq = _combine(semi.value - squares.value, semi, squares, count=k * (k - 1) // 2)
    else:
        without_sq = semi
        with_sq = _combine(semi.value + squares.value, semi, squares, count=k * (k + 1) // 2)
    # every pq with p != q counted twice, squares once
    ordered = _combine(
        2.0 * with_sq.value - squares.value,
        with_sq, with_sq, squares,
        count=k * k,
    )
    variants = {
        "unordered_with_squares": _variant_entry(with_sq, prime, threshold),
        "unordered_without_squares": _variant_entry(without_sq, prime, threshold),
        "ordered_pairs_multiset": _variant_entry(ordered, prime, threshold, set_sum=False),
        "prime_squares_only": {
            "value": squares.value,
            "error_bound": squares.error_bound,
            "term_count": squares.term_count,
        },
    }
    if threshold == DEFAULT_THRESHOLD:
        variants["prime_sum_published"] = {
            "matches_published_digits": _truncate4(prime.value) == PUBLISHED_DIGITS["prime_sum"],
        }

    margin = semi.value - prime.value
    if timings is not None:
        timings.update(stamps)
    return CounterexampleReport(
        threshold=threshold,
        semiprime_sum=semi,
        prime_sum=prime,
        margin=margin,
        certified=is_certified(margin, semi, prime),
        includes_prime_squares=include_prime_squares,
        variants=variants,
        prime_tail_heuristic=tail_estimate(threshold) if threshold >= 3 else None,
        primitivity=certify_construction(threshold, explicit_check=False).details,
    )


@dataclass(frozen=True)
class CrossoverResult:
    """Outcome of the incremental scan over prime thresholds.

    ``first_exceeding_prime`` is None when no prime up to ``scan_limit``
    gives a certified positive margin; ``final_margin`` is the margin at the
    last prime scanned.
    """

    first_exceeding_prime: Optional[int]
    history: list
    stable_above: bool
    scan_limit: int
    final_margin: float
    includes_prime_squares: bool = True

    @property
    def found(self) -> bool:
        return self.first_exceeding_prime is not None

    def history_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["prime", "margin", "certified"])
        for prime, margin, certified in self.history:
            writer.writerow([prime, repr(margin), "true" if certified else "false"])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "scan_limit": self.scan_limit,
            "found": self.found,
            "first_exceeding_prime": self.first_exceeding_prime,
            "stable_above": self.stable_above,
            "final_margin": self.final_margin,
            "includes_prime_squares": self.includes_prime_squares,
            "history_samples": len(self.history),
        }


def crossover(
    scan_limit: int,
    stride: int = 1000,
    *,
    include_prime_squares: bool = True,
    threads=None,
    table: Optional[PrimeTable] = None,
) -> CrossoverResult:
    """Find the first prime P with F(A1 at P) certifiably above F(primes <= P).

    Admitting the k-th prime adds term(p_k) to the prime sum and the sum of
    term(p_j * p_k) over j <= k to the semiprime sum. Those per-prime column
    sums are independent, so they are computed in parallel and then
    accumulated in prime order. ``history`` samples every ``stride``-th prime
    and always includes the last one.
    """
    scan_limit = int(scan_limit)
    stride = int(stride)
    if scan_limit < 2:
        raise DomainError(f"scan_limit must be >= 2, got {scan_limit}")
    if stride < 1:
        raise DomainError(f"stride must be >= 1, got {stride}")
    if table is None:
        table = sieve_primes(scan_limit)
    k = int(np.searchsorted(table.primes, scan_limit, side="right"))
    primes, logs = table.primes[:k], table.logs[:k]

    prime_terms = 1.0 / (primes.astype(np.float64) * logs)
    columns = _run_chunks(_kernels.column_sums, (primes, logs, include_prime_squares), k, threads)
    prime_run = np.empty(k)
    semi_run = np.empty(k)
    _kernels.running_sums(prime_terms, columns, prime_run, semi_run)

    u = UNIT_ROUNDOFF
    neumaier = 2 * u + 4 * k * u * u
    scale = (1 + 1e-9) * (1 + 1e-6)
    prime_err = prime_run * scale * (TERM_REL_ERROR + neumaier)
    semi_err = semi_run * scale * (TERM_REL_ERROR + 2 * neumaier)
    margin = semi_run - prime_run
    certified = margin > prime_err + semi_err + u * np.abs(margin)

    return _scan_result(primes, margin, certified, stride, scan_limit, include_prime_squares)


def _scan_result(primes, margin, certified, stride, scan_limit, include_prime_squares) -> CrossoverResult:
    k = len(primes)
    samples = sorted(set(range(0, k, stride)) | {k - 1})
    history = [(int(primes[i]), float(margin[i]), bool(certified[i])) for i in samples]
    hits = np.flatnonzero(certified)
    if len(hits) == 0:
        return CrossoverResult(None, history, False, scan_limit, float(margin[-1]), include_prime_squares)
    first = int(hits[0])
    stable = bool(np.all(margin[first:] > 0))
    return CrossoverResult(
        int(primes[first]), history, stable, scan_limit, float(margin[-1]), include_prime_squares
    )
