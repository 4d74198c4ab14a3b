"""
Prime tables
============

Sieve the primes, count them, and store a table on disk.
"""

import tempfile
from pathlib import Path

from erdos_check import load_table, prime_count, save_table, sieve_primes

table = sieve_primes(1_400_000)
print(table)
print("first primes:", table.primes[:10].tolist())
print("pi(10**6) =", prime_count(table, 10**6))

##############################################################################
# Each prime carries its natural log, computed once. Pair sums later use
# ln(pq) = ln p + ln q, so no logarithm is evaluated inside the pair loop.

print("ln 2 =", table.logs[0])

##############################################################################
# PTAB1 cache files store the gaps between primes as varints. The logs are
# recomputed when the file is loaded.

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "primes.ptab"
    save_table(table, path)
    print(f"{path.stat().st_size} bytes for {len(table)} primes")
    assert (load_table(path).primes == table.primes).all()
