"""Dyadic decomposition of coefficient vectors by magnitude scale.

Bucket j collects the coordinates whose absolute value lies in
(2^(-j-1), 2^(-j)]; j may be negative, so entries above 1 are legal.  Zero
coordinates belong to no bucket.  Float bucket boundaries are decided by
exact comparison against the dyadic boundary (exactly representable as a
double), so no tolerance is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NonFiniteEntry, OverlappingSupports


@dataclass(frozen=True, eq=True)
class BinaryDecomposition:
    """Partition of a vector's nonzero support into dyadic magnitude buckets.

    parts maps the scale index j to (sorted coordinate indices, their values).
    """

    source_dim: int
    parts: Mapping[int, tuple[tuple[int, ...], tuple]]

    @property
    def scales(self) -> tuple[int, ...]:
        return tuple(sorted(self.parts))


def _pow2(j: int) -> Fraction:
    return Fraction(1, 1 << j) if j >= 0 else Fraction(1 << (-j))


def scale_index(x) -> int:
    """The unique j with 2^(-j-1) < |x| <= 2^(-j); x must be nonzero."""
    if isinstance(x, (Fraction, int)):
        a = abs(Fraction(x))
        # bit-length estimate of -log2, then exact fixup
        j = a.denominator.bit_length() - a.numerator.bit_length()
        while a > _pow2(j):
            j -= 1
        while a <= _pow2(j + 1):
            j += 1
        return j
    v = float(x)
    if not math.isfinite(v):
        raise NonFiniteEntry(f"non-finite entry {x!r}")
    mant, exp = math.frexp(abs(v))  # |v| = mant * 2^exp, mant in [0.5, 1)
    return 1 - exp if mant == 0.5 else -exp


def binary_decompose(v: Sequence) -> BinaryDecomposition:
    """Split v into per-scale sparse parts; zero coordinates are dropped."""
    buckets: dict[int, tuple[list[int], list]] = {}
    for k, x in enumerate(v):
        if isinstance(x, float):
            if not math.isfinite(x):
                raise NonFiniteEntry(f"non-finite entry at coordinate {k}")
            if x == 0.0:
                continue
        elif x == 0:
            continue
        j = scale_index(x)
        idx, vals = buckets.setdefault(j, ([], []))
        idx.append(k)
        vals.append(x)
    parts = {j: (tuple(idx), tuple(vals)) for j, (idx, vals) in sorted(buckets.items())}
    return BinaryDecomposition(len(v), parts)


def recompose(d: BinaryDecomposition) -> list:
    """Sum the parts back into a dense vector (exact round-trip: parts copy entries)."""
    out = [0] * d.source_dim
    seen: set[int] = set()
    for j in sorted(d.parts):
        idx, vals = d.parts[j]
        for k, x in zip(idx, vals):
            if k in seen:
                raise OverlappingSupports(f"coordinate {k} appears in more than one part")
            if not 0 <= k < d.source_dim:
                raise ValueError(f"coordinate {k} outside dimension {d.source_dim}")
            seen.add(k)
            out[k] = x
    return out
