"""Erdos sums F(S) = sum over a in S of 1/(a log a), with certified error bounds.

Summation runs over fixed chunks of the index space. Each chunk is summed with
Neumaier compensation, chunk results are stored by chunk index, and the chunk
array is reduced pairwise in a fixed order. The thread count only changes who
computes a chunk, never the arithmetic, so results are bit-identical for any
number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError, OutOfRangeError
from .sieve import PrimeTable, prime_count

UNIT_ROUNDOFF = 2.0**-53
# Per-term error: 2 ulp(term) for the float ops plus a 2-eps relative error
# carried in by the logarithms; ulp(t) <= 2u*t and eps = 2u.
TERM_REL_ERROR = 8 * UNIT_ROUNDOFF
# One extra rounding when an integer term exceeds 2**53 before it is logged.
TERM_REL_ERROR_INEXACT = 10 * UNIT_ROUNDOFF

DEFAULT_CHUNK = 1 << 20
THREADS_ENV = "ERDOS_THREADS"

# Products p*q must convert to float64 exactly.
MAX_PAIR_BOUND = math.isqrt(2**53)


@dataclass(frozen=True)
class SumResult:
    """A partial sum and a rigorous bound on |value - exact sum|."""

    value: float
    error_bound: float
    term_count: int

    def as_dict(self):
        return {"value": self.value, "error_bound": self.error_bound, "term_count": self.term_count}


def resolve_threads(threads=None) -> int:
    """Worker count: explicit value, else $ERDOS_THREADS, else the CPU count."""
    if threads is None or threads == 0:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 0
    if threads < 0:
        raise DomainError(f"threads must be >= 0, got {threads}")
    return threads or os.cpu_count() or 1


def term(a: int) -> float:
    """1/(a ln a) for an integer a >= 2."""
    a = int(a)
    if a < 2:
        raise DomainError(f"term(a) needs a >= 2, got {a}")
    return 1.0 / (float(a) * math.log(a))


def _pairwise_total(parts: np.ndarray) -> float:
    parts = np.asarray(parts, dtype=np.float64)
    if len(parts) == 0:
        return 0.0
    while len(parts) > 1:
        if len(parts) % 2:
            parts = np.append(parts, 0.0)
        parts = parts[0::2] + parts[1::2]
    return float(parts[0])


def _certify(value: float, term_count: int, chunk_size: int, n_chunks: int, term_rel: float) -> float:
    """Error radius for a positive sum computed by the chunked scheme."""
    if term_count == 0:
        return 0.0
    u = UNIT_ROUNDOFF
    n = min(chunk_size, term_count)
    depth = math.ceil(math.log2(n_chunks)) if n_chunks > 1 else 0
    rel = term_rel + (2 * u + 4 * n * u * u) + depth * u / (1 - depth * u)
    # value is itself within a tiny relative distance of the exact total
    bound = value * (1 + 1e-9) * rel * (1 + 1e-6)
    return math.nextafter(bound, math.inf)


def _run_chunks(kernel, args, n_chunks: int, threads) -> np.ndarray:
    out = np.zeros(n_chunks, dtype=np.float64)
    workers = min(resolve_threads(threads), max(n_chunks, 1))
    if workers <= 1:
        kernel(*args, 0, n_chunks, out)
        return out
    block = max(1, math.ceil(n_chunks / (workers * 4)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(kernel, *args, lo, min(lo + block, n_chunks), out)
            for lo in range(0, n_chunks, block)
        ]
        for f in futures:
            f.result()
    return out


def _check_chunk(chunk_size: int) -> int:
    chunk_size = int(chunk_size)
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be >= 1, got {chunk_size}")
    return chunk_size


def _vector_sum(values: np.ndarray, logs: np.ndarray, chunk_size, threads, term_rel) -> SumResult:
    chunk_size = _check_chunk(chunk_size)
    n = len(values)
    n_chunks = -(-n // chunk_size)
    parts = _run_chunks(_kernels.vector_chunks, (values, logs, chunk_size), n_chunks, threads)
    value = _pairwise_total(parts)
    return SumResult(value, _certify(value, n, chunk_size, n_chunks, term_rel), n)


def _prefix(table: PrimeTable, bound: int) -> int:
    bound = int(bound)
    if bound < 2:
        raise DomainError(f"bound must be >= 2, got {bound}")
    if bound > table.limit:
        raise OutOfRangeError(f"bound {bound} is beyond the table limit {table.limit}")
    return prime_count(table, bound)


def sum_primes(table: PrimeTable, bound: int, *, threads=None, chunk_size=DEFAULT_CHUNK) -> SumResult:
    """Sum of 1/(p ln p) over primes p <= bound."""
    k = _prefix(table, bound)
    values = table.primes[:k].astype(np.float64)
    return _vector_sum(values, table.logs[:k], chunk_size, threads, TERM_REL_ERROR)


def sum_prime_squares(table: PrimeTable, bound: int, *, threads=None, chunk_size=DEFAULT_CHUNK) -> SumResult:
    """Sum of 1/(p^2 ln p^2) over primes p <= bound."""
    k = _prefix(table, bound)
    if bound > MAX_PAIR_BOUND:
        raise CapacityError(f"bound {bound} exceeds {MAX_PAIR_BOUND}; p*p would not be exact in float64")
    p = table.primes[:k].astype(np.float64)
    return _vector_sum(p * p, 2.0 * table.logs[:k], chunk_size, threads, TERM_REL_ERROR)


def semiprime_term_count(k: int, include_prime_squares=True, ordered=False) -> int:
    if ordered:
        return k * k if include_prime_squares else k * (k - 1)
    return k * (k + 1) // 2 if include_prime_squares else k * (k - 1) // 2


def sum_semiprimes(
    table: PrimeTable,
    bound: int,
    *,
    include_prime_squares: bool = True,
    ordered: bool = False,
    threads=None,
    chunk_size=DEFAULT_CHUNK,
) -> SumResult:
    """Sum of 1/(pq ln pq) over prime pairs p <= q <= bound.

    With ``include_prime_squares`` the diagonal p = q is part of the set.
    ``ordered=True`` counts (p, q) and (q, p) separately, i.e. every pq with
    p != q twice; that is a multiset sum, not the Erdos sum of a set, and is
    only offered as a diagnostic. ln(pq) is taken as ln p + ln q.
    """
    if int(bound) > MAX_PAIR_BOUND:
        raise CapacityError(f"bound {bound} exceeds {MAX_PAIR_BOUND}; p*q would not be exact in float64")
    chunk_size = _check_chunk(chunk_size)
    k = _prefix(table, bound)
    skip = 0 if include_prime_squares else 1
    pairs = semiprime_term_count(k, include_prime_squares)
    n_chunks = -(-pairs // chunk_size)
    weight = 2.0 if ordered else 1.0
    args = (table.primes[:k], table.logs[:k], skip, weight, chunk_size, pairs)
    parts = _run_chunks(_kernels.pair_chunks, args, n_chunks, threads)
    value = _pairwise_total(parts)
    count = semiprime_term_count(k, include_prime_squares, ordered)
    # doubling is exact, so the ordered sum has the same relative bound
    return SumResult(value, _certify(value, pairs, chunk_size, n_chunks, TERM_REL_ERROR), count)


def sum_values(values: Iterable[int], *, threads=None, chunk_size=DEFAULT_CHUNK) -> SumResult:
    """Sum of term(a) over an explicit collection of integers >= 2."""
    ints = [int(a) for a in values]
    if not ints:
        return SumResult(0.0, 0.0, 0)
    if min(ints) < 2:
        raise DomainError(f"all terms need a >= 2, got {min(ints)}")
    try:
        as_float = np.array([float(a) for a in ints], dtype=np.float64)
    except OverflowError:
        raise CapacityError("term exceeds the float64 range") from None
    if not np.all(np.isfinite(as_float * np.log(as_float))):
        raise CapacityError("a*ln(a) exceeds the float64 range")
    logs = np.array([math.log(a) for a in ints], dtype=np.float64)
    exact = max(ints) <= 2**53
    rel = TERM_REL_ERROR if exact else TERM_REL_ERROR_INEXACT
    return _vector_sum(as_float, logs, chunk_size, threads, rel)


def sum_sequence(seq, *, threads=None, chunk_size=DEFAULT_CHUNK) -> SumResult:
    """Erdos sum of a PrimitiveSequence (or any iterable of integers >= 2)."""
    elements = getattr(seq, "elements", seq)
    return sum_values(elements, threads=threads, chunk_size=chunk_size)
