"""
The comparison at x = 1.4e6
===========================

Compute both sums at 1.4e6 and look at every way of counting the products
pq. This takes about half a minute on one core.
"""

from erdos_check import verify

report = verify(1_400_000)
print(f"prime sum      {report.prime_sum.value:.10f}")
print(f"semiprime sum  {report.semiprime_sum.value:.10f}  (p <= q, squares included)")
print(f"margin         {report.margin:+.10f}   certified: {report.certified}")

##############################################################################
# The variants. Only the ordered-pair count, where every pq with p != q is
# counted twice, reaches 1.5748. That is a multiset, not the set of products.

for name, v in report.variants.items():
    if "value" in v:
        print(f"{name:28s} {v['value']:.10f}  margin {v.get('margin', float('nan')):+.6f}  "
              f"each element once: {v.get('counts_each_element_once', '-')}")
