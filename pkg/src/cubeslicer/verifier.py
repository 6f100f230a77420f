"""Exhaustive verification that a configuration slices every edge of the n-cube.

Per plane, the dot products over all 2^n vertices are built by a doubling
recursion over coordinates (one flip adds or removes 2*v_k, the incremental
Gray-walk identity).  Each edge is visited once in canonical form: the base
vertex has coordinate -1 on the edge axis.  Exact-kind planes are scaled to
integers by clearing denominators; the int64 fast path falls back to
arbitrary-precision object arrays when scaled magnitudes approach 2^63, so
exact verification never overflows.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    EXACT,
    RELAXED,
    STRICT,
    Configuration,
    Edge,
    Hyperplane,
    Vertex,
    float_zero_tolerance,
    total_edges,
)
from .errors import DimensionTooLarge

VERIFY_MAX_DIM = 28
_SAMPLE_CAP = 100
_INT64_GUARD = 1 << 62


@dataclass(frozen=True)
class SlicingReport:
    """Outcome of an exhaustive edge sweep against a configuration."""

    n: int
    m: int
    total_edges: int
    unsliced_count: int
    unsliced_sample: tuple[Edge, ...]
    per_plane_crossings: tuple[int, ...]
    elapsed_ms: float

    @property
    def complete(self) -> bool:
        return self.unsliced_count == 0


def max_crossings_bound(n: int) -> int:
    """Counting bound: one hyperplane dissects at most ceil(n/2) * C(n, ceil(n/2)) edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    half = (n + 1) // 2
    return half * math.comb(n, half)


def _int_plane(h: Hyperplane) -> tuple[np.ndarray, int, int]:
    """Clear denominators: integer coefficients plus integer threshold.

    The magnitude bound covers every intermediate of the doubling recursion
    (2 * partial sums) as well as the final side values; above the int64
    guard the arrays fall back to arbitrary-precision Python integers.
    """
    den = math.lcm(*(c.denominator for c in h.coeffs), h.threshold.denominator)
    cs = [int(c * den) for c in h.coeffs]
    t = int(h.threshold * den)
    bound = 2 * (sum(abs(c) for c in cs) + abs(t))
    arr = np.array(cs, dtype=np.int64 if bound < _INT64_GUARD else object)
    return arr, t, bound


def _side_values(h: Hyperplane) -> tuple[np.ndarray, float | None]:
    """(<v, u> - t) over all 2^n vertices (mask order) plus the float zero tolerance."""
    if h.kind == EXACT:
        cs, t, _ = _int_plane(h)
        tol = None
    else:
        cs = np.array(h.coeffs, dtype=np.float64)
        t = h.threshold
        tol = float_zero_tolerance(h)
    # S[mask] = sum of coefficients over set bits; dot = 2S - sum(coeffs)
    s = np.zeros(1, dtype=cs.dtype)
    for i in range(h.n):
        s = np.concatenate([s, s + cs[i]])
    return 2 * s - cs.sum() - t, tol


def _axis_pass(side, tol, k: int, relaxed: bool) -> tuple[np.ndarray, int]:
    """Crossing flags for all canonical axis-k edges against one plane."""
    cube = side.reshape(-1, 2, 1 << k)
    su = cube[:, 0, :].reshape(-1)
    sw = cube[:, 1, :].reshape(-1)
    if tol is None:
        zu = su == 0
        zw = sw == 0
        pu = su > 0
        pw = sw > 0
    else:
        zu = np.abs(su) < tol
        zw = np.abs(sw) < tol
        pu = su > 0
        pw = sw > 0
    nz = ~(zu | zw)
    cross = nz & (pu != pw)
    if relaxed:
        cross = cross | (zu != zw)
    return cross, int(np.count_nonzero(cross))


def _base_vertex(n: int, k: int, compressed: int) -> Vertex:
    high, low = compressed >> k, compressed & ((1 << k) - 1)
    return Vertex(n, (high << (k + 1)) | low)


def verify_slicing(c: Configuration, threads: int = 1, eps: float | None = None) -> SlicingReport:
    """Test every edge of the n-cube against every plane under c.mode.

    Deterministic and independent of the thread count: the vertex space is
    partitioned by edge axis, per-axis partial counts are integers, and the
    merge folds axes in order.
    """
    n = c.n
    if n > VERIFY_MAX_DIM:
        raise DimensionTooLarge(f"exhaustive verification capped at n <= {VERIFY_MAX_DIM}")
    start = time.perf_counter()
    relaxed = c.mode == RELAXED
    sides = []
    for h in c.planes:
        side, tol = _side_values(h)
        if eps is not None and tol is not None:
            tol = eps
        sides.append((side, tol))

    def axis_task(k: int):
        counts = [0] * c.m
        crossed = np.zeros(1 << (n - 1), dtype=bool)
        for ell, (side, tol) in enumerate(sides):
            cross, cnt = _axis_pass(side, tol, k, relaxed)
            counts[ell] = cnt
            crossed |= cross
        missing = np.flatnonzero(~crossed)
        sample = [_base_vertex(n, k, int(i)) for i in missing[:_SAMPLE_CAP]]
        return counts, int(missing.size), [Edge(v, k) for v in sample]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            per_axis = list(ex.map(axis_task, range(n)))
    else:
        per_axis = [axis_task(k) for k in range(n)]

    per_plane = [0] * c.m
    unsliced = 0
    sample: list[Edge] = []
    for counts, miss, edges in per_axis:
        for ell in range(c.m):
            per_plane[ell] += counts[ell]
        unsliced += miss
        if len(sample) < _SAMPLE_CAP:
            sample.extend(edges[: _SAMPLE_CAP - len(sample)])

    elapsed = (time.perf_counter() - start) * 1000.0
    return SlicingReport(
        n=n,
        m=c.m,
        total_edges=total_edges(n),
        unsliced_count=unsliced,
        unsliced_sample=tuple(sample),
        per_plane_crossings=tuple(per_plane),
        elapsed_ms=elapsed,
    )


def crossing_counts(c: Configuration, threads: int = 1) -> tuple[int, ...]:
    """Edges crossed per plane.  In strict mode every count is asserted
    against the counting bound; relaxed mode can exceed it (a plane through
    a weight level touches every incident edge), so no assert there."""
    report = verify_slicing(c, threads=threads)
    if c.mode == STRICT:
        bound = max_crossings_bound(c.n)
        assert all(cnt <= bound for cnt in report.per_plane_crossings)
    return report.per_plane_crossings
