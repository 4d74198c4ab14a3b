"""
Certified Erdos sums
====================

Sums of 1/(a ln a) over primes and over products of two primes, each
returned with a rigorous error radius.
"""

from mpmath import mp, mpf, log

from erdos_check import sieve_primes, sum_primes, sum_semiprimes, term

table = sieve_primes(10_000)

for bound in (3, 100, 10_000):
    p = sum_primes(table, bound)
    s = sum_semiprimes(table, bound)
    print(f"x={bound:>6}  primes {p.value:.15f} +- {p.error_bound:.1e}  "
          f"pairs {s.value:.15f} +- {s.error_bound:.1e} ({s.term_count} terms)")

##############################################################################
# Compare against a 50-digit brute force on a small case.

mp.dps = 50
primes = table.primes[table.primes <= 100].tolist()
exact = sum(1 / (mpf(p * q) * log(p * q)) for i, p in enumerate(primes) for q in primes[i:])
s = sum_semiprimes(table, 100)
print("pairs up to 100:", s.value, " |error| =", float(abs(s.value - exact)), "<=", s.error_bound)

##############################################################################
# Results do not depend on the number of worker threads.

assert sum_semiprimes(table, 10_000, threads=1) == sum_semiprimes(table, 10_000, threads=4)
print("term(2) =", term(2))
