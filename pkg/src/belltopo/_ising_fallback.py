"""Pure-numpy twin of the compiled enumeration kernel.

Same contract as _ising_kernel.hist_range: integer histograms over the bond
mismatch count, split by observable-mask parity.  Because everything counted
is an exact integer, this produces bit-identical histograms to the compiled
kernel regardless of chunk size.
"""

import numpy as np

# Configurations vectorized per slice of this many indices; keeps the
# temporaries around 10 MB at side 5.
_CHUNK = 1 << 20


def _shift_masks(side):
    n = side * side
    m1x = m2x = m1y = m2y = 0
    for i in range(n):
        x, y = i % side, i // side
        if x == side - 1:
            m2x |= 1 << i
        else:
            m1x |= 1 << i
        if y == side - 1:
            m2y |= 1 << i
        else:
            m1y |= 1 << i
    return (np.uint64(m1x), np.uint64(m2x), np.uint64(m1y), np.uint64(m2y))


def hist_range(side, masks, hist, hist_total, c_start, c_end):
    """Accumulate histograms for configurations in [c_start, c_end)."""
    m1x, m2x, m1y, m2y = _shift_masks(side)
    sx, srow = np.uint64(side - 1), np.uint64(side * (side - 1))
    one, sside = np.uint64(1), np.uint64(side)
    n_levels = hist_total.shape[0]
    masks = np.asarray(masks, dtype=np.uint64)

    for lo in range(c_start, c_end, _CHUNK):
        c = np.arange(lo, min(lo + _CHUNK, c_end), dtype=np.uint64)
        cx = ((c >> one) & m1x) | ((c << sx) & m2x)
        cy = ((c >> sside) & m1y) | ((c << srow) & m2y)
        mism = (np.bitwise_count(c ^ cx) + np.bitwise_count(c ^ cy)).astype(np.int64)
        hist_total += np.bincount(mism, minlength=n_levels)
        for m in range(len(masks)):
            parity = (np.bitwise_count(c & masks[m]) & 1).astype(np.int64)
            hist[m] += np.bincount(2 * mism + parity, minlength=2 * n_levels).reshape(
                n_levels, 2
            )
