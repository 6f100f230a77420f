"""Random bias vectors, the biased product distribution on cube vertices,
and the evasive-edge sampler.

Every sampler is a deterministic function of an RngSpec: the same
(seed, stream) reproduces the same draw sequence.  Batch helpers used by the
Monte Carlo estimators live here as well, so scalar and batch paths share
the plane-normalization and dyadic-term logic.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import decomp
from .core import Configuration, Edge, Vertex
from .errors import (
    BiasOutOfRange,
    DimensionTooSmall,
    RetriesExhausted,
    UnnormalizedPlane,
)


@dataclass(frozen=True)
class RngSpec:
    """Reproducible stream address: a 64-bit seed plus a substream index.

    Substreams (and their children) are realized as SeedSequence spawn keys,
    so distinct (seed, stream) pairs give statistically independent streams.
    """

    seed: int
    stream: Union[int, tuple[int, ...]] = 0

    def spawn_key(self) -> tuple[int, ...]:
        return self.stream if isinstance(self.stream, tuple) else (self.stream,)

    def child(self, *key: int) -> "RngSpec":
        return RngSpec(self.seed, self.spawn_key() + key)

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key())
        return np.random.default_rng(seq)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngSpec or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True, eq=False)
class BiasVector:
    """A realization of the random bias P in [-1,1]^n.

    draws records the underlying uniform multipliers keyed by
    (plane index, scale index); the simple variant uses scale index None.
    conditioned marks acceptance under the max|P_i| <= 1/2 rejection step;
    clamped marks that the simple variant exceeded [-1,1] and was clipped.
    """

    p: np.ndarray
    draws: dict
    conditioned: bool = False
    clamped: bool = False


def normalized_float_planes(c: Configuration) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm float copies of the planes: (m x n coefficient matrix, thresholds).

    Crossing is invariant under positive scaling, so sampling against the
    normalized copy agrees with the stored planes.
    """
    if c.m < 1:
        raise DimensionTooSmall("sampling needs at least one plane")
    try:
        V = np.array([[float(x) for x in h.coeffs] for h in c.planes], dtype=np.float64)
        t = np.array([float(h.threshold) for h in c.planes], dtype=np.float64)
    except OverflowError as exc:
        raise UnnormalizedPlane("plane does not fit float range") from exc
    if not (np.all(np.isfinite(V)) and np.all(np.isfinite(t))):
        raise UnnormalizedPlane("plane does not fit float range")
    norms = np.sqrt(np.einsum("ij,ij->i", V, V))
    if not np.all(norms > 0.0):
        raise UnnormalizedPlane("plane with zero float norm")
    V /= norms[:, None]
    t /= norms
    renorm = np.sqrt(np.einsum("ij,ij->i", V, V))
    if np.max(np.abs(renorm - 1.0)) > 1e-12:
        raise UnnormalizedPlane("normalization failed to reach unit length")
    return V, t


def dyadic_terms(V: np.ndarray) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Per-(plane, scale) rows 2^j * v_l^(j), ordered by plane then scale.

    Scaling by 2^j puts every nonzero entry of a row into (1/2, 1].
    """
    n = V.shape[1]
    keys: list[tuple[int, int]] = []
    rows: list[np.ndarray] = []
    for ell in range(V.shape[0]):
        d = decomp.binary_decompose([float(x) for x in V[ell]])
        for j in sorted(d.parts):
            idx, vals = d.parts[j]
            w = np.zeros(n, dtype=np.float64)
            w[list(idx)] = np.ldexp(np.array(vals, dtype=np.float64), j)
            keys.append((ell, j))
            rows.append(w)
    return keys, np.array(rows, dtype=np.float64)


def _check_dims(c: Configuration) -> None:
    if c.n < 2:
        raise DimensionTooSmall("bias sampler needs n >= 2 (log n must be positive)")
    if c.m < 1:
        raise DimensionTooSmall("bias sampler needs m >= 1")


def _log_n(n: int, log_base: float) -> float:
    val = math.log(n, log_base)
    if val <= 0.0:
        raise DimensionTooSmall(f"log base {log_base} gives nonpositive log({n})")
    return val


def sample_bias(c: Configuration, rng, *, log_base: float = math.e, damping: float = 10.0) -> BiasVector:
    """Draw the dyadic random bias

        P = (1 / (damping * sqrt(m log n))) * sum_l sum_j alpha_{lj} 2^j v_l^(j)

    with alpha_{lj} independent uniform on [-1,1] over the unit-norm float
    copies of the planes.  damping=10 and natural log are the defaults; both
    are exposed for sensitivity sweeps.
    """
    gen = as_generator(rng)
    setup = bias_setup(c, log_base=log_base, damping=damping)
    alphas = gen.uniform(-1.0, 1.0, size=len(setup.keys))
    p = setup.scale * (alphas @ setup.W)
    return BiasVector(p, dict(zip(setup.keys, alphas.tolist())), conditioned=False)


def sample_bias_conditioned(
    c: Configuration,
    rng,
    max_retries: int = 1000,
    *,
    log_base: float = math.e,
    damping: float = 10.0,
) -> BiasVector:
    """Rejection-sample the dyadic bias until max|P_i| <= 1/2.

    Rejection reproduces the conditional law exactly; the acceptance
    probability is at least 1 - 2/n, so the expected number of retries is
    tiny.  max_retries counts re-draws after the first attempt.
    """
    gen = as_generator(rng)
    for _ in range(max_retries + 1):
        bv = sample_bias(c, gen, log_base=log_base, damping=damping)
        if np.max(np.abs(bv.p)) <= 0.5:
            return dataclasses.replace(bv, conditioned=True)
    raise RetriesExhausted(f"no acceptance within {max_retries} retries")


def sample_bias_simple(c: Configuration, rng) -> BiasVector:
    """Overview-mode bias P = sum_l alpha_l sqrt(n/m) v_l (no dyadic split,
    no damping).  Carries no max-norm guarantee: entries outside [-1,1] are
    clipped and the clamped flag is set."""
    gen = as_generator(rng)
    setup = bias_setup(c)
    alphas = gen.uniform(-1.0, 1.0, size=c.m)
    raw = math.sqrt(c.n / c.m) * (alphas @ setup.V)
    clamped = bool(np.any(np.abs(raw) > 1.0))
    draws = {(ell, None): a for ell, a in enumerate(alphas.tolist())}
    return BiasVector(np.clip(raw, -1.0, 1.0), draws, conditioned=False, clamped=clamped)


def sample_mu(p, rng) -> Vertex:
    """One vertex from the product distribution with coordinate means p:
    Pr[z_i = +1] = (1 + p_i) / 2, independently."""
    gen = as_generator(rng)
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise BiasOutOfRange("bias must be a nonempty vector")
    if np.max(np.abs(arr)) > 1.0:
        raise BiasOutOfRange("bias entries must lie in [-1, 1]")
    ups = gen.random(arr.size) < (1.0 + arr) / 2.0
    mask = 0
    for i, b in enumerate(ups):
        if b:
            mask |= 1 << i
    return Vertex(arr.size, mask)


def sample_evasive_edge(
    c: Configuration,
    rng,
    max_retries: int = 1000,
    *,
    log_base: float = math.e,
    damping: float = 10.0,
) -> Edge:
    """The evasive random edge (U, k): U from the product distribution with
    conditioned bias P, and k a uniform axis independent of U given P."""
    gen = as_generator(rng)
    bv = sample_bias_conditioned(c, gen, max_retries, log_base=log_base, damping=damping)
    u = sample_mu(bv.p, gen)
    k = int(gen.integers(c.n))
    return Edge(u, k)


# ---------------------------------------------------------------------------
# Batch helpers (vectorized across samples) used by the Monte Carlo
# estimators.  Same distributions as the scalar samplers above.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BiasSetup:
    """Precomputed normalized planes and dyadic term matrix for batch work."""

    V: np.ndarray
    t: np.ndarray
    keys: list
    W: np.ndarray
    scale: float


@functools.lru_cache(maxsize=64)
def bias_setup(c: Configuration, *, log_base: float = math.e, damping: float = 10.0) -> BiasSetup:
    # Configurations are frozen and hashable, so the setup (normalization +
    # dyadic split) is computed once per config; arrays are treated read-only.
    _check_dims(c)
    V, t = normalized_float_planes(c)
    keys, W = dyadic_terms(V)
    scale = 1.0 / (damping * math.sqrt(c.m * _log_n(c.n, log_base)))
    return BiasSetup(V, t, keys, W, scale)


def batch_bias(setup: BiasSetup, gen: np.random.Generator, count: int) -> np.ndarray:
    alphas = gen.uniform(-1.0, 1.0, size=(count, len(setup.keys)))
    return setup.scale * (alphas @ setup.W)


def batch_bias_conditioned(
    setup: BiasSetup, gen: np.random.Generator, count: int, max_retries: int = 1000
) -> np.ndarray:
    P = batch_bias(setup, gen, count)
    for _ in range(max_retries + 1):
        bad = np.flatnonzero(np.abs(P).max(axis=1) > 0.5)
        if bad.size == 0:
            return P
        P[bad] = batch_bias(setup, gen, bad.size)
    raise RetriesExhausted(f"batch rejection exceeded {max_retries} retries")


def batch_mu(P: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Rows of +-1 vertices drawn coordinate-wise with means P (one row per sample)."""
    return np.where(gen.random(P.shape) < (1.0 + P) / 2.0, 1, -1).astype(np.int8)
