#!/usr/bin/env python3
# The random bias P and the evasive-edge distribution.
#
# P sums per-scale uniform multipliers over the dyadic parts of the
# (unit-normalized) plane normals, damped by 1/(10 sqrt(m ln n)); the edge
# sampler conditions on max|P_i| <= 1/2, draws a vertex from the product
# distribution with means P, and picks a uniform axis.

import numpy as np

from cubeslicer import (
    Configuration,
    RngSpec,
    edge_crosses,
    make_hyperplane,
    sample_bias,
    sample_bias_conditioned,
    sample_evasive_edge,
)
from cubeslicer.lab import random_unit_configuration

c = random_unit_configuration(16, 4, RngSpec(1, 0))
bv = sample_bias(c, RngSpec(2))
print(f"n=16, m=4 random unit planes; one bias draw:")
print(f"  max|P_i| = {np.abs(bv.p).max():.4f}, {len(bv.draws)} scale terms")
print(f"  draw keys (plane, scale): {sorted(bv.draws)[:6]} ...")

bv = sample_bias_conditioned(c, RngSpec(2))
print(f"  conditioned: max|P_i| = {np.abs(bv.p).max():.4f} <= 1/2, flag={bv.conditioned}")

# Single axis plane x_1 = 0 in dimension 8: the evasive edge crosses it
# exactly when the uniform axis equals 1, so the crossing rate is 1/8.
coeffs = [1.0] + [0.0] * 7
single = Configuration(8, (make_hyperplane(coeffs, 0.0, "float"),))
gen = RngSpec(3).generator()
draws = 50000
hits = sum(edge_crosses(single.planes[0], sample_evasive_edge(single, gen)) for _ in range(draws))
print(f"\nsingle plane x_1=0, n=8: crossing rate {hits/draws:.4f} (exact 1/8 = 0.125)")
