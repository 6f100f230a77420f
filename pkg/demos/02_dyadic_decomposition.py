#!/usr/bin/env python3
# Dyadic decomposition: bucket j holds the coordinates with |v_k| in
# (2^(-j-1), 2^(-j)].  The buckets partition the nonzero support and the
# round trip is exact (parts copy entries bit for bit).

from fractions import Fraction

from cubeslicer import binary_decompose, recompose

for vec in ([1, 0, 0], [0.5, 0.3], [0.6, -0.2, 0], [3.0, 0.01], [Fraction(1, 3), Fraction(5, 7)]):
    d = binary_decompose(vec)
    print(f"v = {vec}")
    for j in d.scales:
        idx, vals = d.parts[j]
        print(f"  j={j:+d}  range (2^{-j-1}, 2^{-j}]  coords {list(idx)} -> {list(vals)}")
    assert recompose(d) == list(vec)
print("\nround trips exact on all examples")
