"""Certified Erdos sums over primes and prime pairs, and primitivity checks."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CacheFormatError,
    CapacityError,
    DomainError,
    OutOfRangeError,
    PrimitivityViolation,
)
from .sieve import PrimeTable, load_table, prime_count, save_table, sieve_primes  # noqa: E402
from .erdos_sum import (  # noqa: E402
    SumResult,
    sum_prime_squares,
    sum_primes,
    sum_semiprimes,
    sum_sequence,
    term,
)
from .primitive import (  # noqa: E402
    PrimitiveSequence,
    PrimitivityCertificate,
    certify_construction,
    check_primitive,
)
from .counterexample import (  # noqa: E402
    CounterexampleReport,
    CrossoverResult,
    crossover,
    tail_estimate,
    verify,
)
