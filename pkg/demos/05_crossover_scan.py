"""
Scanning for a crossing
=======================

Admit primes one at a time and track semiprime sum minus prime sum. The
history is written as CSV for plotting.
"""

from erdos_check import crossover

result = crossover(200_000, stride=2000)
print(result.as_dict())
with open("crossover_history.csv", "w") as fh:
    fh.write(result.history_csv())

for prime, margin, certified in result.history[::2]:
    print(f"{prime:>8}  {margin:+.6f}  {certified}")
