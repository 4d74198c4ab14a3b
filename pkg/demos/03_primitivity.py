"""
Primitive sequences
===================

Explicit checks with a divisibility witness, and the structural certificate
for semiprimes up to x together with all primes above x.
"""

from erdos_check import PrimitivityViolation, certify_construction, check_primitive

print(check_primitive([6, 10, 15]))
try:
    check_primitive([6, 10, 15, 30])
except PrimitivityViolation as exc:
    print("witness:", exc.witness)

##############################################################################
# The union is infinite, so its certificate is an argument. Small thresholds
# also get a brute-force check of the union truncated at x**4.

cert = certify_construction(10)
for line in cert.details:
    print("-", line)
