"""Dyadic decomposition: bucket ranges, round trips, disjoint supports."""

from fractions import Fraction

import numpy as np
import pytest

from cubeslicer import binary_decompose, recompose
from cubeslicer.decomp import BinaryDecomposition, scale_index
from cubeslicer.errors import NonFiniteEntry, OverlappingSupports


def test_unit_vector():
    d = binary_decompose([1, 0, 0])
    assert d.scales == (0,)
    assert d.parts[0] == ((0,), (1,))


def test_two_coords_same_bucket():
    # 0.5 and 0.3 both lie in (0.25, 0.5]
    d = binary_decompose([0.5, 0.3])
    assert d.scales == (1,)
    assert d.parts[1] == ((0, 1), (0.5, 0.3))


def test_mixed_buckets_zero_dropped():
    # 0.6 in (0.5, 1], 0.2 in (0.125, 0.25], third coordinate absent
    d = binary_decompose([0.6, -0.2, 0])
    assert d.scales == (0, 2)
    assert d.parts[0] == ((0,), (0.6,))
    assert d.parts[2] == ((1,), (-0.2,))


def test_entries_above_one_use_negative_scales():
    # 3 lies in (2, 4] so its bucket satisfies 2^(-j) = 4, i.e. j = -2
    d = binary_decompose([3])
    assert d.scales == (-2,)
    assert scale_index(Fraction(3)) == -2
    assert scale_index(3.0) == -2


@pytest.mark.parametrize(
    "value,expected",
    [
        (1.0, 0),
        (0.5, 1),  # boundary lands in the finer bucket
        (0.25, 2),
        (Fraction(1, 2), 1),
        (Fraction(1), 0),
        (Fraction(3, 4), 0),
        (2.0, -1),
        (0.75, 0),
    ],
)
def test_boundary_buckets(value, expected):
    assert scale_index(value) == expected


def test_range_property_floats_and_fractions():
    gen = np.random.default_rng(99)
    for _ in range(300):
        x = float(gen.uniform(-4, 4))
        if x == 0.0:
            continue
        j = scale_index(x)
        assert 2.0 ** (-j - 1) < abs(x) <= 2.0 ** (-j)
    for _ in range(300):
        f = Fraction(int(gen.integers(-999, 1000)), int(gen.integers(1, 1000)))
        if f == 0:
            continue
        j = scale_index(f)
        assert Fraction(2) ** (-j - 1) < abs(f) <= Fraction(2) ** (-j)


def test_round_trip_across_dimensions():
    gen = np.random.default_rng(4242)
    for n in range(1, 65):
        for _ in range(1000):
            v = gen.uniform(-2, 2, size=n)
            v[gen.random(n) < 0.2] = 0.0
            vec = v.tolist()
            assert recompose(binary_decompose(vec)) == vec


def test_round_trip_exact():
    gen = np.random.default_rng(7)
    for _ in range(200):
        n = int(gen.integers(1, 12))
        vec = [Fraction(int(a), int(b)) for a, b in zip(gen.integers(-20, 21, n), gen.integers(1, 21, n))]
        assert recompose(binary_decompose(vec)) == vec


def test_supports_partition_nonzero_coordinates():
    gen = np.random.default_rng(31)
    for _ in range(200):
        n = int(gen.integers(1, 30))
        v = gen.uniform(-2, 2, size=n)
        v[gen.random(n) < 0.3] = 0.0
        d = binary_decompose(v.tolist())
        seen = [k for j in d.scales for k in d.parts[j][0]]
        assert sorted(seen) == sorted(set(seen))
        assert set(seen) == {i for i, x in enumerate(v) if x != 0.0}
        for j in d.scales:
            assert len(d.parts[j][0]) > 0
            for x in d.parts[j][1]:
                assert 2.0 ** (-j - 1) < abs(x) <= 2.0 ** (-j)


def test_zero_vector_round_trip():
    d = binary_decompose([0, 0, 0])
    assert d.parts == {}
    assert recompose(d) == [0, 0, 0]


def test_non_finite_rejected():
    with pytest.raises(NonFiniteEntry):
        binary_decompose([1.0, float("nan")])
    with pytest.raises(NonFiniteEntry):
        binary_decompose([float("inf")])


def test_overlapping_supports_rejected():
    bad = BinaryDecomposition(2, {0: ((0,), (1.0,)), 1: ((0,), (0.5,))})
    with pytest.raises(OverlappingSupports):
        recompose(bad)
