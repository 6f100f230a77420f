#!/usr/bin/env python3
# The exact concentration oracle for biased linear forms and the
# anti-concentration bounds it certifies.

from fractions import Fraction as F

from cubeslicer import (
    LinearFormSpec,
    group_bound_check,
    levy_q,
    levy_scaling_check,
    linear_form_atoms,
    littlewood_check,
    sperner_bound,
)

# The full law of <v, x> as atoms, then Q(a) = sup_t Pr[|X - t| < a].
d = linear_form_atoms(LinearFormSpec((1, 1), (0, 0)))
print("atoms of x1 + x2 (unbiased):", list(zip(d.values, d.probs)))
print("Q(1)   =", levy_q(d, 1))
print("Q(3/2) =", levy_q(d, F(3, 2)))
print("Q(k*a) <= k*Q(a):", levy_scaling_check(d, 1, 2))

# Sperner's bound is tight for all-ones vectors at alpha = 1.
print("\nall-ones tightness: Q == C(a, a//2)/2^a")
for a in (2, 4, 8, 16):
    q = levy_q(linear_form_atoms(LinearFormSpec((1,) * a, (0,) * a)), 1)
    print(f"  a={a:2d}: Q = {q} = {sperner_bound(a)}")

# Biased forms (|p_i| <= 1/2): q*sqrt(a) reported against the unknown
# universal constant.
a, q, ratio = littlewood_check(LinearFormSpec((1,), (F(1, 2),)), 1)
print(f"\nbiased single coordinate: a={a}, Q={q}, Q*sqrt(a)={ratio}")

# Many separated dyadic scales drive Q down exponentially: r counts
# qualifying scales in units of 2*ln(n).
print("\nscale decay on v = (1, 1/2, ..., 2^(1-s)), alpha = 2^-13, n = 8:")
for s in (2, 5, 9, 12):
    v = tuple(F(1, 1 << i) for i in range(s))
    r, q, bound_ratio = group_bound_check(LinearFormSpec(v, (0,) * s), F(1, 1 << 13), 8)
    print(f"  scales={s:2d}: r={r}, Q={q}, Q*2^r={bound_ratio:.4f}")
