# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel for periodic square-lattice spin sums.

Walks a range of spin configurations (one bit per site, bit y*L + x) and
builds integer histograms over the number of antiparallel bonds, split by the
parity of each observable mask.  Keeping the inner loop purely integral makes
the result independent of chunking and threading, and bit-identical to the
numpy fallback.
"""

from libc.stdint cimport int64_t, uint64_t


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define BT_POPCOUNT(x) __builtin_popcountll(x)
    #else
    static int BT_POPCOUNT(unsigned long long x) {
        int n = 0;
        while (x) { x &= x - 1; ++n; }
        return n;
    }
    #endif
    """
    int BT_POPCOUNT(unsigned long long x) nogil


def hist_range(int side, uint64_t[::1] masks, int64_t[:, :, ::1] hist,
               int64_t[::1] hist_total, uint64_t c_start, uint64_t c_end):
    """Accumulate bond-mismatch histograms for configurations in [c_start, c_end).

    hist has shape (n_masks, 2 * side^2 + 1, 2); entry [m, k, p] counts the
    configurations with k antiparallel bonds whose overlap with masks[m] has
    parity p.  hist_total counts per mismatch level only.
    """
    cdef int n = side * side
    cdef int n_masks = masks.shape[0]
    cdef int shift_row = side * (side - 1)
    cdef uint64_t m1x = 0, m2x = 0, m1y = 0, m2y = 0
    cdef uint64_t one = 1
    cdef int i, x, y, m, mism, par
    cdef uint64_t c, cx, cy

    for i in range(n):
        x = i % side
        y = i // side
        if x == side - 1:
            m2x |= one << i
        else:
            m1x |= one << i
        if y == side - 1:
            m2y |= one << i
        else:
            m1y |= one << i

    with nogil:
        for c in range(c_start, c_end):
            # cx holds each site's right neighbor, cy its upper neighbor
            # (periodic); XOR against c marks the antiparallel bonds.
            cx = ((c >> 1) & m1x) | ((c << (side - 1)) & m2x)
            cy = ((c >> side) & m1y) | ((c << shift_row) & m2y)
            mism = BT_POPCOUNT(c ^ cx) + BT_POPCOUNT(c ^ cy)
            hist_total[mism] += 1
            for m in range(n_masks):
                par = BT_POPCOUNT(c & masks[m]) & 1
                hist[m, mism, par] += 1
