"""Exact Walsh-Hadamard machinery for XOR convolution counts.

All arithmetic is integer-exact.  For a 0/1 indicator of length 2^n the
forward transform keeps every intermediate within |v| <= 2^n and the
pointwise product of two spectra within 4^n, both safe in int64 up to
n = 30.  The inverse pass is the risky one: after k butterfly stages a
value can reach 2^k * 4^n <= 8^n, which exceeds signed 64-bit range for
n >= 21.  Past INT64_SAFE_MAX_N the spectrum is therefore split into two
30-bit limbs, each transformed in int64, and recombined with Python
integers before the final exact division by 2^n.
"""

from __future__ import annotations

import numpy as np

INT64_SAFE_MAX_N = 20  # inverse-pass intermediates bounded by 8^n < 2^63
_LIMB_BITS = 30


def fwht_inplace(a: np.ndarray) -> None:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    Length of the last axis must be a power of two.  The transform is an
    involution up to the factor 2^n, which is what makes the exact
    integer inverse below possible.
    """
    size = a.shape[-1]
    h = 1
    while h < size:
        pairs = a.reshape(a.shape[:-1] + (size // (2 * h), 2, h))
        top = pairs[..., 0, :] + pairs[..., 1, :]
        pairs[..., 1, :] = pairs[..., 0, :] - pairs[..., 1, :]
        pairs[..., 0, :] = top
        h *= 2


def _exact_scaled_inverse(spectrum: np.ndarray, n: int) -> np.ndarray:
    """Return WHT(spectrum) / 2^n for an int64 spectrum with |v| <= 4^n.

    The result is known to be a vector of non-negative counts; both the
    divisibility by 2^n and the sign are asserted.
    """
    if n <= INT64_SAFE_MAX_N:
        work = spectrum.copy()
        fwht_inplace(work)
        if (work & ((1 << n) - 1)).any() or (work < 0).any():
            raise AssertionError("inverse transform produced a non-count vector")
        return work >> n
    # Two's-complement limb split: spectrum = hi * 2^30 + lo with 0 <= lo < 2^30.
    # |hi| <= 2^(2n-30) + 1, so each limb transform stays within 2^n * 2^30 <= 2^60.
    lo = spectrum & ((1 << _LIMB_BITS) - 1)
    hi = spectrum >> _LIMB_BITS
    fwht_inplace(lo)
    fwht_inplace(hi)
    scaled = hi.astype(object) * (1 << _LIMB_BITS) + lo.astype(object)
    if (scaled & ((1 << n) - 1)).any() or (scaled < 0).any():
        raise AssertionError("inverse transform produced a non-count vector")
    return (scaled >> n).astype(np.int64)


def xor_pair_counts(ind_a: np.ndarray, ind_b: np.ndarray | None = None) -> np.ndarray:
    """Exact pair counts N(x) = #{(a, b) in A x B : a XOR b = x}.

    ``ind_a`` and ``ind_b`` are 0/1 indicator vectors of equal power-of-two
    length; ``ind_b=None`` means B = A (autocorrelation).  Returns int64.
    """
    size = len(ind_a)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError(f"indicator length {size} is not a power of two")
    fa = ind_a.astype(np.int64)
    fwht_inplace(fa)
    if ind_b is None:
        spectrum = fa * fa
    else:
        if len(ind_b) != size:
            raise ValueError("indicator lengths differ")
        fb = ind_b.astype(np.int64)
        fwht_inplace(fb)
        spectrum = fa * fb
    return _exact_scaled_inverse(spectrum, n)
