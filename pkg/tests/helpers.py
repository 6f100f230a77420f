"""Shared test utilities: random exact planes and independent brute-force oracles.

The oracles here deliberately avoid the library's fast paths: the slicing
oracle loops edge_crosses over every edge, the atom oracle enumerates all
2^n sign vectors with itertools, and the concentration oracle sums window
masses with a plain double loop.
"""

import itertools
from fractions import Fraction

from cubeslicer import Configuration, edge_crosses, iter_edges, make_hyperplane


def random_rational_plane(gen, n, lim=9):
    """A random exact plane with numerators/denominators bounded by lim."""
    while True:
        nums = gen.integers(-lim, lim + 1, size=n)
        if nums.any():
            break
    dens = gen.integers(1, lim + 1, size=n)
    coeffs = [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
    t = Fraction(int(gen.integers(-lim, lim + 1)), int(gen.integers(1, lim + 1)))
    return make_hyperplane(coeffs, t, "exact")


def random_rational_config(gen, n, m, mode="strict", lim=9):
    return Configuration(n, tuple(random_rational_plane(gen, n, lim) for _ in range(m)), mode)


def naive_slicing(config):
    """Reference slicing sweep: the per-edge predicate looped over everything."""
    counts = [0] * config.m
    unsliced = 0
    for e in iter_edges(config.n):
        hit = False
        for ell, h in enumerate(config.planes):
            if edge_crosses(h, e, config.mode):
                counts[ell] += 1
                hit = True
        if not hit:
            unsliced += 1
    return unsliced, counts


def enumerate_atoms_exact(v, p):
    """Law of sum_i x_i * v_i by enumerating all sign vectors (Fractions).

    Coordinates with v_i = 0 never change the value and their sign
    probabilities sum to one, so they are dropped before enumerating.
    """
    pairs = [(Fraction(x), Fraction(q)) for x, q in zip(v, p) if Fraction(x) != 0]
    law = {}
    for signs in itertools.product((-1, 1), repeat=len(pairs)):
        pr = Fraction(1)
        for s, (_, pi) in zip(signs, pairs):
            pr *= (1 + pi) / 2 if s == 1 else (1 - pi) / 2
        if pr == 0:
            continue
        val = sum(s * vi for s, (vi, _) in zip(signs, pairs))
        law[val] = law.get(val, Fraction(0)) + pr
    if not law:
        law[Fraction(0)] = Fraction(1)
    return sorted(law.items())


def mixture_atoms_exact(v, p):
    """Law of the biased linear form realized as a mixture of unbiased ones.

    Each coordinate with p_i != 0 is independently zeroed with probability
    |p_i| and compensated by the constant offset v_i * sign(p_i); conditioned
    on the zeroing pattern, the remaining form is unbiased.
    """
    v = [Fraction(x) for x in v]
    p = [Fraction(x) for x in p]
    biased = [i for i, pi in enumerate(p) if pi != 0]
    law = {}
    for bits in itertools.product((0, 1), repeat=len(biased)):
        weight = Fraction(1)
        offset = Fraction(0)
        vv = list(v)
        for b, i in zip(bits, biased):
            if b:
                weight *= abs(p[i])
                offset += v[i] * (1 if p[i] > 0 else -1)
                vv[i] = Fraction(0)
            else:
                weight *= 1 - abs(p[i])
        if weight == 0:
            continue
        for val, pr in enumerate_atoms_exact(vv, [0] * len(v)):
            key = val + offset
            law[key] = law.get(key, Fraction(0)) + weight * pr
    return sorted(law.items())


def direct_window_concentration(atoms, alpha):
    """sup_t Pr[|X - t| < alpha] for atomic X by direct window-mass summation."""
    alpha = Fraction(alpha)
    best = Fraction(0)
    for vi, _ in atoms:
        mass = sum(pr for val, pr in atoms if vi <= val < vi + 2 * alpha)
        best = max(best, mass)
    return best
