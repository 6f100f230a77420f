#!/usr/bin/env python3
# Monte Carlo estimators with explicit target-bound shapes, plus a sweep
# over the m ~ n^(2/3) diagonal.

import math

from cubeslicer import (
    RngSpec,
    SweepCell,
    estimate_evasion,
    estimate_glue_sum,
    estimate_linf_tail,
    sweep,
)
from cubeslicer.lab import random_unit_configuration

# Tail of the unconditioned bias: Pr[max|P_i| > 1/2] stays under 2/n.
c = random_unit_configuration(64, 16, RngSpec(1, 0))
rep = estimate_linf_tail(c, 100000, RngSpec(1))
print(f"max-norm tail (n=64, m=16): {rep.point_estimate:.5f}  target 2/n = {rep.target_bound:.5f}")

# Per-plane and union evasion frequencies for a random configuration.
c = random_unit_configuration(32, 8, RngSpec(2, 0))
per, union = estimate_evasion(c, 100000, RngSpec(2))
print(f"\nevasion (n=32, m=8 random planes, 1e5 samples):")
print(f"  max per-plane {max(r.point_estimate for r in per):.5f}, union {union.point_estimate:.5f}")
print(f"  union bound check: union <= sum of planes: {union.point_estimate <= sum(r.point_estimate for r in per)}")

# Glue sum for one plane: per sample, the number of axes k with
# |<v,x> - t| < 2|v_k|.
rep = estimate_glue_sum(c, 0, None, 50000, RngSpec(3))
print(f"\nglue sum (plane 0): {rep.point_estimate:.3f} +- {1.96*rep.std_error:.3f}"
      f"  shape sqrt(m)*ln(n)^2 = {rep.target_bound:.2f}")

# Sweep the diagonal m = round(n^(2/3)): per-plane crossing frequencies
# against the sqrt(m)*ln(n)^2/n shape, with the implied constant fitted.
cells = [SweepCell(n, round(n ** (2 / 3))) for n in (32, 64, 128)]
rows = sweep(cells, 20000, RngSpec(4))
print("\nevasion sweep on the m = round(n^(2/3)) diagonal:")
print(f"  {'n':>4} {'m':>3} {'union':>8} {'max plane':>10} {'plane shape':>12} {'fitted c':>9}")
for row in rows:
    shape = math.sqrt(row["m"]) * math.log(row["n"]) ** 2 / row["n"]
    print(
        f"  {row['n']:>4} {row['m']:>3} {row['point_estimate']:>8.5f} "
        f"{row['max_plane_estimate']:>10.5f} {shape:>12.5f} {row['max_plane_estimate']/shape:>9.4f}"
    )

# At fixed m the union crossing frequency trends downward in n (reported,
# not asserted: the trend is empirical).
rows = sweep([SweepCell(n, 8) for n in (32, 64, 128)], 20000, RngSpec(5))
trend = [row["point_estimate"] for row in rows]
print("\nunion frequency at fixed m=8 over n=32,64,128:", [f"{x:.4f}" for x in trend])
print("  non-increasing union trend:", all(b <= a for a, b in zip(trend, trend[1:])))
