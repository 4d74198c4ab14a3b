"""Prime tables: segmented odd-only sieve, prime counting, binary cache."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import CacheFormatError, CapacityError, DomainError, OutOfRangeError

# Largest limit accepted by sieve_primes. The table holds 16 bytes per prime,
# so this is about 3 GB of output at the ceiling.
MAX_LIMIT = 4 * 10**9

# Odd numbers per sieve segment.
DEFAULT_SEGMENT = 1 << 18

CACHE_MAGIC = b"PTAB1"
_VALIDATE_EDGE = 100


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes ``<= limit`` in increasing order, with their natural logs.

    Arrays are marked read-only, so a table can be shared between threads.
    """

    limit: int
    primes: np.ndarray
    logs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.primes) != len(self.logs):
            raise ValueError("primes and logs differ in length")
        self.primes.flags.writeable = False
        self.logs.flags.writeable = False

    def __len__(self):
        return len(self.primes)

    def __repr__(self):
        return f"PrimeTable(limit={self.limit}, count={len(self)})"


def _simple_sieve(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _segmented_odd_primes(limit: int, segment: int) -> np.ndarray:
    """Odd primes in [3, limit], sieving ``segment`` odd numbers at a time."""
    base = _simple_sieve(math.isqrt(limit))[1:]  # odd base primes only
    squares = base * base
    next_multiple = squares.copy()
    pieces = []
    lo = 3
    while lo <= limit:
        n_odd = min(segment, (limit - lo) // 2 + 1)
        mask = np.ones(n_odd, dtype=bool)
        hi = lo + 2 * n_odd  # exclusive
        active = int(np.searchsorted(squares, hi))
        if active:
            _kernels.mark_segment(mask, lo, base[:active], next_multiple[:active])
        # base primes themselves are never struck: their first multiple is p*p
        pieces.append(lo + 2 * np.flatnonzero(mask).astype(np.int64))
        lo = hi
    if not pieces:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(pieces)


def sieve_primes(limit: int, segment: int = DEFAULT_SEGMENT) -> PrimeTable:
    """Return the table of all primes ``<= limit``.

    The sieve works on ``segment`` odd numbers at a time, so its working set
    does not grow with ``limit`` (the returned table of course does).
    """
    limit = int(limit)
    if limit < 0:
        raise DomainError(f"limit must be >= 0, got {limit}")
    if limit > MAX_LIMIT:
        raise CapacityError(f"limit {limit} exceeds the sieve ceiling {MAX_LIMIT}")
    if segment < 1:
        raise DomainError("segment must be positive")
    if limit < 2:
        primes = np.empty(0, dtype=np.int64)
    else:
        primes = np.concatenate(([2], _segmented_odd_primes(limit, segment))).astype(np.int64)
    return PrimeTable(limit, primes, _kernels.natural_logs(primes))


def prime_count(table: PrimeTable, x: int) -> int:
    """pi(x), the number of primes <= x, read off ``table``."""
    x = int(x)
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    if x > table.limit:
        raise OutOfRangeError(f"x={x} is beyond the table limit {table.limit}")
    return int(np.searchsorted(table.primes, x, side="right"))


def restrict(table: PrimeTable, bound: int) -> PrimeTable:
    """View of ``table`` holding only the primes ``<= bound``."""
    k = prime_count(table, bound)
    return PrimeTable(int(bound), table.primes[:k], table.logs[:k])


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# --- binary cache -----------------------------------------------------------
# Layout: b"PTAB1", limit as little-endian u64, then the gaps between
# consecutive primes (the first gap measured from 0) as LEB128 varints.


def _encode_varints(values: np.ndarray) -> bytes:
    values = values.astype(np.uint64)
    nbytes = np.ones(len(values), dtype=np.int64)
    rest = values >> np.uint64(7)
    while rest.any():
        nbytes += rest > 0
        rest >>= np.uint64(7)
    out = np.empty(int(nbytes.sum()), dtype=np.uint8)
    starts = np.concatenate(([0], np.cumsum(nbytes)[:-1]))
    for b in range(int(nbytes.max(initial=0))):
        sel = nbytes > b
        chunk = (values[sel] >> np.uint64(7 * b)) & np.uint64(0x7F)
        more = (nbytes[sel] > b + 1).astype(np.uint64) << np.uint64(7)
        out[starts[sel] + b] = (chunk | more).astype(np.uint8)
    return out.tobytes()


def _decode_varints(data: bytes) -> np.ndarray:
    raw = np.frombuffer(data, dtype=np.uint8)
    if len(raw) == 0:
        return np.empty(0, dtype=np.int64)
    last = (raw & 0x80) == 0
    if not last[-1]:
        raise CacheFormatError("truncated varint at end of file")
    group = np.concatenate(([0], np.cumsum(last)[:-1]))
    group_start = np.concatenate(([0], np.flatnonzero(last)[:-1] + 1))
    position = np.arange(len(raw)) - group_start[group]
    if position.max() > 8:
        raise CacheFormatError("varint too long")
    parts = (raw & 0x7F).astype(np.int64) << (7 * position)
    return np.add.reduceat(parts, group_start)


def save_table(table: PrimeTable, path) -> None:
    gaps = np.diff(table.primes, prepend=0)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.limit))
        fh.write(_encode_varints(gaps))


def load_table(path) -> PrimeTable:
    """Read a cached table, recompute logs, and spot-check primality."""
    data = Path(path).read_bytes()
    header = len(CACHE_MAGIC) + 8
    if len(data) < header or data[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: missing PTAB1 header")
    (limit,) = struct.unpack("<Q", data[len(CACHE_MAGIC) : header])
    primes = np.cumsum(_decode_varints(data[header:]))
    if len(primes) and (primes[-1] > limit or np.any(np.diff(primes) <= 0)):
        raise CacheFormatError(f"{path}: primes not increasing or beyond limit")
    edge = np.concatenate((primes[:_VALIDATE_EDGE], primes[-_VALIDATE_EDGE:]))
    bad = [int(p) for p in edge if not is_prime(int(p))]
    if bad:
        raise CacheFormatError(f"{path}: composite entries {bad[:5]}")
    return PrimeTable(int(limit), primes.astype(np.int64), _kernels.natural_logs(primes))
