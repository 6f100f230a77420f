"""Bias samplers, the biased product distribution, and the evasive edge."""

import math

import numpy as np
import pytest
from scipy import stats

import cubeslicer.sampler as sampler_mod
from cubeslicer import (
    Configuration,
    RngSpec,
    make_hyperplane,
    sample_bias,
    sample_bias_conditioned,
    sample_bias_simple,
    sample_evasive_edge,
    sample_mu,
)
from cubeslicer.errors import BiasOutOfRange, DimensionTooSmall, RetriesExhausted
from cubeslicer.sampler import BiasVector, batch_bias, batch_mu, bias_setup


def single_axis_config(n=8):
    coeffs = [0.0] * n
    coeffs[0] = 1.0
    return Configuration(n, (make_hyperplane(coeffs, 0.0, "float"),))


def random_unit_config(gen, n, m):
    rows = gen.standard_normal((m, n))
    rows /= np.sqrt((rows * rows).sum(axis=1))[:, None]
    return Configuration(n, tuple(make_hyperplane(r.tolist(), 0.0, "float") for r in rows))


class TestRngSpec:
    def test_same_spec_same_stream(self):
        a = RngSpec(123, 4).generator().uniform(size=10)
        b = RngSpec(123, 4).generator().uniform(size=10)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = RngSpec(123, 0).generator().uniform(size=10)
        b = RngSpec(123, 1).generator().uniform(size=10)
        assert not np.array_equal(a, b)

    def test_children_are_nested_streams(self):
        child = RngSpec(9, 2).child(5)
        assert child.spawn_key() == (2, 5)
        again = RngSpec(9, 2).child(5)
        assert np.array_equal(child.generator().uniform(size=4), again.generator().uniform(size=4))


class TestSampleBias:
    def test_single_plane_support_and_range(self):
        c = single_axis_config(8)
        cap = 1.0 / (10.0 * math.sqrt(math.log(8)))
        for seed in range(50):
            bv = sample_bias(c, RngSpec(seed))
            assert np.all(bv.p[1:] == 0.0)
            assert abs(bv.p[0]) <= cap
            assert bv.conditioned is False
            assert set(bv.draws) == {(0, 0)}

    def test_single_plane_moments(self):
        # P_1 = alpha / (10 sqrt(ln 8)): mean 0, variance 1/(300 ln 8)
        c = single_axis_config(8)
        setup = bias_setup(c)
        P = batch_bias(setup, RngSpec(1001).generator(), 100000)
        target_var = 1.0 / (300.0 * math.log(8))
        se_mean = math.sqrt(target_var / 100000)
        assert abs(P[:, 0].mean()) <= 4 * se_mean
        assert abs(P[:, 0].var() - target_var) <= 0.02 * target_var

    def test_mean_zero_all_coordinates(self):
        gen = np.random.default_rng(5)
        c = random_unit_config(gen, 16, 4)
        P = batch_bias(bias_setup(c), RngSpec(17).generator(), 100000)
        sd = P.std(axis=0)
        assert np.all(np.abs(P.mean(axis=0)) <= 4 * sd / math.sqrt(100000) + 1e-12)

    def test_hard_norm_bound_and_alpha_range(self):
        gen = np.random.default_rng(6)
        c = random_unit_config(gen, 12, 3)
        setup = bias_setup(c)
        bound = len(setup.keys) / (10.0 * math.sqrt(c.m * math.log(c.n)))
        for seed in range(100):
            bv = sample_bias(c, RngSpec(seed, 3))
            assert np.max(np.abs(bv.p)) <= bound + 1e-12
            assert all(abs(a) <= 1.0 for a in bv.draws.values())

    def test_draw_keys_ordered_by_plane_then_scale(self):
        gen = np.random.default_rng(8)
        c = random_unit_config(gen, 10, 3)
        bv = sample_bias(c, RngSpec(0))
        keys = list(bv.draws)
        assert keys == sorted(keys)
        assert {ell for ell, _ in keys} == {0, 1, 2}

    def test_dimension_guards(self):
        with pytest.raises(DimensionTooSmall):
            sample_bias(Configuration(1, (make_hyperplane([1.0], 0.0, "float"),)), RngSpec(0))
        with pytest.raises(DimensionTooSmall):
            sample_bias(Configuration(4, ()), RngSpec(0))

    def test_unnormalizable_plane(self):
        from fractions import Fraction

        from cubeslicer.errors import UnnormalizedPlane

        huge = Configuration(2, (make_hyperplane([Fraction(10**400), 1], 0),))
        with pytest.raises(UnnormalizedPlane):
            sample_bias(huge, RngSpec(0))

    def test_log_base_knob(self):
        c = single_axis_config(8)
        natural = sample_bias(c, RngSpec(3))
        base2 = sample_bias(c, RngSpec(3), log_base=2.0)
        # same alpha draw, different damping scale: ln(8) vs log2(8) = 3
        ratio = natural.p[0] / base2.p[0]
        assert abs(ratio - math.sqrt(3.0 / math.log(8))) < 1e-12

    def test_determinism(self):
        gen = np.random.default_rng(10)
        c = random_unit_config(gen, 9, 2)
        a = sample_bias(c, RngSpec(77, 5))
        b = sample_bias(c, RngSpec(77, 5))
        assert np.array_equal(a.p, b.p)
        assert a.draws == b.draws


class TestSampleBiasConditioned:
    def test_single_plane_never_rejects(self):
        c = single_axis_config(8)
        bv = sample_bias_conditioned(c, RngSpec(5), max_retries=0)
        assert bv.conditioned
        assert np.max(np.abs(bv.p)) <= 0.5

    def test_norm_bound_always_holds(self):
        gen = np.random.default_rng(11)
        c = random_unit_config(gen, 6, 8)
        for seed in range(200):
            bv = sample_bias_conditioned(c, RngSpec(seed, 9))
            assert np.max(np.abs(bv.p)) <= 0.5
            assert bv.conditioned

    def test_retries_exhausted(self, monkeypatch):
        c = single_axis_config(8)

        def always_reject(config, rng, *, log_base=math.e, damping=10.0):
            return BiasVector(np.ones(config.n), {}, conditioned=False)

        monkeypatch.setattr(sampler_mod, "sample_bias", always_reject)
        with pytest.raises(RetriesExhausted):
            sample_bias_conditioned(c, RngSpec(0), max_retries=0)

    def test_rejection_rate_within_tail_bound(self):
        # the max-norm tail must stay below 2/n plus sampling noise
        gen = np.random.default_rng(12)
        c = random_unit_config(gen, 64, 16)
        P = batch_bias(bias_setup(c), RngSpec(404).generator(), 100000)
        rate = float(np.mean(np.abs(P).max(axis=1) > 0.5))
        bound = 2.0 / 64
        se = math.sqrt(bound * (1 - bound) / 100000)
        assert rate <= bound + 3 * se


class TestSampleBiasSimple:
    def test_orthonormal_axes_give_uniform_coordinates(self):
        n = 6
        planes = tuple(
            make_hyperplane([1.0 if i == j else 0.0 for i in range(n)], 0.0, "float")
            for j in range(n)
        )
        c = Configuration(n, planes)
        bv = sample_bias_simple(c, RngSpec(21))
        alphas = [bv.draws[(ell, None)] for ell in range(n)]
        assert np.allclose(bv.p, alphas)
        assert not bv.clamped

    def test_all_ones_plane_variance_third(self):
        n = 16
        c = Configuration(n, (make_hyperplane([1.0 / math.sqrt(n)] * n, 0.0, "float"),))
        gen = RngSpec(31).generator()
        samples = np.array([sample_bias_simple(c, gen).p for _ in range(20000)])
        assert abs(samples[:, 0].var() - 1.0 / 3.0) < 0.02

    def test_mean_zero(self):
        gen = np.random.default_rng(13)
        c = random_unit_config(gen, 8, 3)
        g = RngSpec(41).generator()
        samples = np.array([sample_bias_simple(c, g).p for _ in range(20000)])
        assert np.all(np.abs(samples.mean(axis=0)) < 0.03)

    def test_clamping_flagged(self):
        # two identical planes: P_1 = sqrt(n/2) * (a1 + a2) exceeds 1 often
        n = 8
        e1 = [1.0] + [0.0] * (n - 1)
        c = Configuration(n, (make_hyperplane(e1, 0.0, "float"), make_hyperplane(e1, 0.0, "float")))
        gen = RngSpec(51).generator()
        flags = [sample_bias_simple(c, gen) for _ in range(200)]
        assert any(bv.clamped for bv in flags)
        assert all(np.max(np.abs(bv.p)) <= 1.0 for bv in flags)


class TestSampleMu:
    def test_sure_all_ones(self):
        v = sample_mu([1.0] * 5, RngSpec(0))
        assert v.coords() == (1, 1, 1, 1, 1)
        v = sample_mu([-1.0] * 5, RngSpec(0))
        assert v.coords() == (-1, -1, -1, -1, -1)

    def test_uniform_at_zero_bias(self):
        gen = RngSpec(61).generator()
        tot = np.zeros(6)
        for _ in range(20000):
            tot += sample_mu(np.zeros(6), gen).coords()
        assert np.all(np.abs(tot / 20000) < 4 / math.sqrt(20000) + 1e-9)

    def test_half_bias_frequency(self):
        gen = RngSpec(71).generator()
        hits = sum(sample_mu([0.5], gen).coord(0) == 1 for _ in range(100000))
        se = math.sqrt(0.75 * 0.25 / 100000)
        assert abs(hits / 100000 - 0.75) <= 4 * se

    def test_moments_match_bias(self):
        gen = np.random.default_rng(14)
        p = gen.uniform(-1, 1, size=10)
        X = batch_mu(np.tile(p, (100000, 1)), RngSpec(81).generator()).astype(np.float64)
        assert np.all(np.abs(X.mean(axis=0) - p) <= 4 * np.sqrt((1 - p**2) / 100000) + 1e-9)
        assert np.all(np.abs(X.var(axis=0) - (1 - p**2)) <= 0.05)

    def test_bias_out_of_range(self):
        with pytest.raises(BiasOutOfRange):
            sample_mu([1.1], RngSpec(0))


class TestSampleEvasiveEdge:
    def test_axis_marginal_uniform(self):
        c = single_axis_config(8)
        gen = RngSpec(91).generator()
        counts = np.zeros(8, dtype=int)
        for _ in range(100000):
            counts[sample_evasive_edge(c, gen).axis] += 1
        assert stats.chisquare(counts).pvalue > 0.001

    def test_single_plane_crossing_probability(self):
        # edge crosses x_1 = 0 iff its axis is 1: probability exactly 1/8
        from cubeslicer import edge_crosses

        c = single_axis_config(8)
        gen = RngSpec(101).generator()
        n_draws = 20000
        hits = 0
        for _ in range(n_draws):
            e = sample_evasive_edge(c, gen)
            crossed = edge_crosses(c.planes[0], e, "strict")
            assert crossed == (e.axis == 0)
            hits += crossed
        se = math.sqrt(0.125 * 0.875 / n_draws)
        assert abs(hits / n_draws - 0.125) <= 4 * se

    def test_shifted_plane_never_crossed(self):
        from cubeslicer import edge_crosses

        coeffs = [1.0] + [0.0] * 7
        c = Configuration(8, (make_hyperplane(coeffs, 2.0, "float"),))
        gen = RngSpec(111).generator()
        assert not any(
            edge_crosses(c.planes[0], sample_evasive_edge(c, gen), "strict") for _ in range(2000)
        )

    def test_determinism(self):
        gen = np.random.default_rng(15)
        c = random_unit_config(gen, 10, 4)
        e1 = sample_evasive_edge(c, RngSpec(5, 6))
        e2 = sample_evasive_edge(c, RngSpec(5, 6))
        assert e1 == e2
