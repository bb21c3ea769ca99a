"""Shared oracles for the test suite.

Everything here is deliberately independent of the package internals:
subspaces are enumerated from echelon-form bases, counts come from direct
pair loops, and expected values are recomputed rather than trusted.
"""

from itertools import combinations, product
from math import comb

import numpy as np
import pytest

from popdiff.f2n import DenseSet


def all_subspaces(n: int) -> list[tuple[int, ...]]:
    """Every linear subspace of F_2^n as a sorted tuple of its points.

    Enumerates echelon-form bases: pick pivot bit positions, then fill the
    free positions (below each pivot, not at other pivots) in all ways.
    Each subspace appears exactly once.
    """
    out = [(0,)]
    for d in range(1, n + 1):
        for pivots in combinations(range(n), d):
            frees = [[q for q in range(p) if q not in pivots] for p in pivots]
            for choice in product(*(range(1 << len(f)) for f in frees)):
                basis = []
                for i, p in enumerate(pivots):
                    v = 1 << p
                    for bit_idx, q in enumerate(frees[i]):
                        if (choice[i] >> bit_idx) & 1:
                            v |= 1 << q
                    basis.append(v)
                span = [0]
                for b in basis:
                    span.extend([s ^ b for s in span])
                out.append(tuple(sorted(span)))
    return out


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n."""
    num = den = 1
    for i in range(k):
        num *= (1 << n) - (1 << i)
        den *= (1 << k) - (1 << i)
    return num // den


def brute_counts(a: DenseSet) -> np.ndarray:
    """Pair counts by the definitional double loop over members."""
    counts = np.zeros(a.size, dtype=np.int64)
    pts = a.point_list()
    for x in pts:
        for y in pts:
            counts[x ^ y] += 1
    return counts


def set_from_mask(n: int, mask: int) -> DenseSet:
    bits = np.zeros(1 << n, dtype=np.uint8)
    for i in range(1 << n):
        if (mask >> i) & 1:
            bits[i] = 1
    return DenseSet(n, bits)


@pytest.fixture(scope="session")
def subspaces_n4() -> list[tuple[int, ...]]:
    subs = all_subspaces(4)
    # self-check the oracle against the counting formula
    assert len(subs) == sum(gaussian_binomial(4, k) for k in range(5))
    return subs
