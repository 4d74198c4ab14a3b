"""Primitive sequences: explicit validation and the structural certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .errors import DomainError, PrimitivityViolation
from .sieve import sieve_primes

# Membership tables above this many entries are not allocated.
_MAX_TABLE = 1 << 30
EXPLICIT_CHECK_MAX_THRESHOLD = 100


@dataclass(frozen=True)
class PrimitiveSequence:
    """Strictly increasing integers >= 2, none dividing another.

    Build through :func:`check_primitive`; the constructor trusts its input.
    """

    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class PrimitivityCertificate:
    kind: str  # "explicit-checked" or "structural-semiprime-union"
    threshold: Optional[int]
    details: tuple = field(default_factory=tuple)
    explicit_size: Optional[int] = None  # elements checked by brute force, if any

    def __post_init__(self):
        if self.kind == "structural-semiprime-union" and (self.threshold is None or self.threshold < 2):
            raise ValueError("structural certificate needs a threshold >= 2")


def _witness(values: np.ndarray):
    n = len(values)
    top = int(values[-1])
    # rough operation counts of the three strategies
    costs = {
        "pairwise": n * (n - 1) / 2,
        "trial": float(np.sum(np.sqrt(values.astype(np.float64)))),
    }
    if top + 1 <= _MAX_TABLE:
        costs["multiples"] = top * float(np.sum(1.0 / values)) + top
    method = min(costs, key=costs.get)
    if method == "multiples":
        present = np.zeros(top + 1, dtype=np.bool_)
        present[values] = True
        a, b = _kernels.first_multiple_witness(values, present)
    elif method == "trial":
        a, b = _kernels.trial_division_witness(values)
    else:
        a, b = _kernels.pairwise_witness(values)
    return (int(a), int(b)) if a else None


def check_primitive(elements: Iterable[int]) -> PrimitiveSequence:
    """Validate that no element divides another.

    The divisibility scan is whichever is cheapest for the input: divisor
    enumeration up to sqrt(e), a scan of multiples against a membership
    table, or a direct pairwise test. Duplicates are dropped and the result is sorted. Raises
    :class:`PrimitivityViolation` with a witness pair on failure.
    """
    values = sorted({int(e) for e in elements})
    if values and values[0] < 2:
        raise DomainError(f"elements must be >= 2, got {values[0]}")
    if not values:
        return PrimitiveSequence(())
    if values[-1] < 2**63:
        w = _witness(np.array(values, dtype=np.int64))
    else:
        w = _big_witness(values)
    if w is not None:
        raise PrimitivityViolation(w)
    return PrimitiveSequence(tuple(values))


def _big_witness(values):
    # Python ints beyond int64: direct pairwise test
    for j, b in enumerate(values):
        for a in values[:j]:
            if b % a == 0:
                return a, b
    return None


def is_primitive(elements: Iterable[int]) -> bool:
    try:
        check_primitive(elements)
    except PrimitivityViolation:
        return False
    return True


def certify_explicit(elements: Iterable[int]) -> PrimitivityCertificate:
    seq = check_primitive(elements)
    return PrimitivityCertificate(
        "explicit-checked",
        None,
        (f"{len(seq)} elements checked pairwise by divisor enumeration",),
        len(seq),
    )


def semiprimes_upto(threshold: int) -> list:
    """All pq with primes p <= q <= threshold."""
    p = sieve_primes(threshold).primes.tolist()
    return sorted(a * b for i, a in enumerate(p) for b in p[i:])


def truncated_construction(threshold: int) -> list:
    """Semiprimes over primes <= threshold plus primes in (threshold, threshold**4]."""
    big = sieve_primes(threshold**4).primes
    tail = big[np.searchsorted(big, threshold, side="right") :]
    return semiprimes_upto(threshold) + tail.tolist()


def certify_construction(threshold: int, explicit_check: bool = True) -> PrimitivityCertificate:
    """Certify that {pq : p, q prime <= threshold} together with all primes
    above the threshold is primitive.

    The argument is structural. For thresholds up to 100 (unless
    ``explicit_check`` is off) the union truncated at threshold**4 is also
    checked element by element.
    """
    threshold = int(threshold)
    if threshold < 2:
        raise DomainError(f"threshold must be >= 2, got {threshold}")
    details = (
        f"semiprime part: every element pq (p, q prime <= {threshold}) has exactly two prime "
        "factors with multiplicity, and a proper divisor of such a number has at most one, "
        "so no element divides another",
        f"prime part: the primes r > {threshold} are distinct primes, and a prime only has "
        "1 and itself as divisors",
        f"across parts: a prime r > {threshold} divides pq only if r is p or q, impossible since "
        f"p, q <= {threshold} < r; and pq, having two prime factors, cannot divide a prime",
        "hence the union is primitive",
    )
    explicit_size = None
    if explicit_check and threshold <= EXPLICIT_CHECK_MAX_THRESHOLD:
        elements = truncated_construction(threshold)
        check_primitive(elements)
        explicit_size = len(elements)
        details += (
            f"explicit check: {explicit_size} elements (all semiprimes plus primes in "
            f"({threshold}, {threshold**4}]) contain no divisible pair",
        )
    return PrimitivityCertificate("structural-semiprime-union", threshold, details, explicit_size)


def read_integers(path) -> list:
    """Parse newline-delimited decimal integers; blank lines and # comments are skipped."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                out.append(int(text))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: not an integer: {text!r}") from None
    return out
