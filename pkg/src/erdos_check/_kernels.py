"""Compiled inner loops.

Every kernel here is ``nogil`` so the Python side can drive it from a thread
pool. Summation kernels use Neumaier (Kahan-Babuska) compensation and write
one value per fixed chunk, which keeps results independent of how chunks are
distributed over threads.
"""

import math

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def natural_logs(values):
    out = np.empty(values.shape[0], dtype=np.float64)
    for i in range(values.shape[0]):
        out[i] = math.log(values[i])
    return out


@njit(nogil=True, cache=True)
def mark_segment(mask, lo, base, first_multiple):
    # mask[t] <-> odd number lo + 2t; first_multiple[b] is the first odd
    # multiple of base[b] that is >= lo (and >= base[b]**2).
    n = mask.shape[0]
    for b in range(base.shape[0]):
        p = base[b]
        t = (first_multiple[b] - lo) // 2
        while t < n:
            mask[t] = False
            t += p
        first_multiple[b] = lo + 2 * t


@njit(nogil=True, cache=True)
def vector_chunks(values, logs, chunk_size, first, last, out):
    """Compensated sums of 1/(v*log v) over index chunks [first, last)."""
    n = values.shape[0]
    for c in range(first, last):
        lo = c * chunk_size
        hi = min(lo + chunk_size, n)
        s = 0.0
        comp = 0.0
        for i in range(lo, hi):
            x = 1.0 / (values[i] * logs[i])
            t = s + x
            if abs(s) >= abs(x):
                comp += (s - t) + x
            else:
                comp += (x - t) + s
            s = t
        out[c] = s + comp


@njit(nogil=True, cache=True)
def row_of_pair(idx, m):
    # Row r of the pair triangle starts at r*m - r*(r-1)/2; find the last
    # row whose start is <= idx.
    fm = float(m)
    r = int((2.0 * fm + 1.0 - math.sqrt((2.0 * fm + 1.0) ** 2 - 8.0 * float(idx))) / 2.0)
    if r < 0:
        r = 0
    while r > 0 and r * m - r * (r - 1) // 2 > idx:
        r -= 1
    while (r + 1) * m - (r + 1) * r // 2 <= idx:
        r += 1
    return r


@njit(nogil=True, cache=True)
def pair_chunks(primes, logs, skip_diagonal, offdiag_weight, chunk_size, total, first, last, out):
    """Compensated sums of w/(pq*(log p + log q)) over pair-index chunks.

    Pairs (i, j) with j >= i (j > i when ``skip_diagonal``) are linearised
    row by row; chunk c covers pair indices [c*chunk_size, (c+1)*chunk_size).
    Off-diagonal terms are multiplied by ``offdiag_weight`` (1.0 or 2.0).
    """
    k = primes.shape[0]
    m = k - skip_diagonal
    for c in range(first, last):
        lo = c * chunk_size
        hi = min(lo + chunk_size, total)
        i = row_of_pair(lo, m)
        j = i + skip_diagonal + (lo - (i * m - i * (i - 1) // 2))
        pi = float(primes[i])
        li = logs[i]
        s = 0.0
        comp = 0.0
        for _ in range(hi - lo):
            x = 1.0 / ((pi * float(primes[j])) * (li + logs[j]))
            if j != i:
                x *= offdiag_weight
            t = s + x
            if abs(s) >= abs(x):
                comp += (s - t) + x
            else:
                comp += (x - t) + s
            s = t
            j += 1
            if j == k:
                i += 1
                j = i + skip_diagonal
                if i < k:
                    pi = float(primes[i])
                    li = logs[i]
        out[c] = s + comp


@njit(nogil=True, cache=True)
def column_sums(primes, logs, include_diagonal, first, last, out):
    """out[q] = compensated sum over p_j <= p_q of 1/(p_j p_q log(p_j p_q))."""
    for q in range(first, last):
        pq = float(primes[q])
        lq = logs[q]
        stop = q + 1 if include_diagonal else q
        s = 0.0
        comp = 0.0
        for j in range(stop):
            x = 1.0 / ((float(primes[j]) * pq) * (logs[j] + lq))
            t = s + x
            if abs(s) >= abs(x):
                comp += (s - t) + x
            else:
                comp += (x - t) + s
            s = t
        out[q] = s + comp


@njit(nogil=True, cache=True)
def running_sums(prime_terms, semiprime_columns, prime_out, semiprime_out):
    """Compensated prefix sums of both series, in index order."""
    s1 = 0.0
    c1 = 0.0
    s2 = 0.0
    c2 = 0.0
    for k in range(prime_terms.shape[0]):
        x = prime_terms[k]
        t = s1 + x
        if abs(s1) >= abs(x):
            c1 += (s1 - t) + x
        else:
            c1 += (x - t) + s1
        s1 = t
        y = semiprime_columns[k]
        t = s2 + y
        if abs(s2) >= abs(y):
            c2 += (s2 - t) + y
        else:
            c2 += (y - t) + s2
        s2 = t
        prime_out[k] = s1 + c1
        semiprime_out[k] = s2 + c2


@njit(nogil=True, cache=True)
def first_multiple_witness(sorted_values, present):
    """Scan multiples of each element against a membership table.

    Returns (a, b) with a | b, or (0, 0) when the set is primitive.
    """
    top = present.shape[0] - 1
    for idx in range(sorted_values.shape[0]):
        a = sorted_values[idx]
        m = 2 * a
        while m <= top:
            if present[m]:
                return a, m
            m += a
    return 0, 0


@njit(nogil=True, cache=True)
def _member(sorted_values, x):
    pos = np.searchsorted(sorted_values, x)
    return pos < sorted_values.shape[0] and sorted_values[pos] == x


@njit(nogil=True, cache=True)
def trial_division_witness(sorted_values):
    """Enumerate divisors of each element up to its square root.

    Returns the witness (d, e) with the smallest e, ties broken by smallest d,
    or (0, 0) when the set is primitive.
    """
    for idx in range(sorted_values.shape[0]):
        e = sorted_values[idx]
        best = 0
        d = 2
        while d * d <= e:
            if e % d == 0:
                if _member(sorted_values, d):
                    return d, e
                co = e // d
                if co != e and _member(sorted_values, co) and (best == 0 or co < best):
                    best = co
            d += 1
        if best != 0:
            return best, e
    return 0, 0


@njit(nogil=True, cache=True)
def pairwise_witness(sorted_values):
    """Test every pair directly; cheapest when there are few large elements."""
    for j in range(sorted_values.shape[0]):
        b = sorted_values[j]
        for i in range(j):
            if b % sorted_values[i] == 0:
                return sorted_values[i], b
    return 0, 0
