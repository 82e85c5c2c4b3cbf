# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: seeded sampling, window scans, pairwise gap search.

Bit-for-bit equal to shiftchaos._kernels_py; see that module for the
algorithm notes and the splitmix64 reference outputs.
"""

from cpython cimport array
import array

ctypedef unsigned long long u64

cdef u64 _GAMMA = 0x9E3779B97F4A7C15ULL
cdef u64 _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 _MIX2 = 0x94D049BB133111EBULL


cdef inline u64 _next(u64* state) noexcept nogil:
    cdef u64 z
    state[0] = state[0] + _GAMMA
    z = state[0]
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


def splitmix64_stream(seed, Py_ssize_t n):
    """Return the first ``n`` splitmix64 outputs for ``seed`` as a list."""
    cdef u64 s = <u64> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t i
    out = []
    for i in range(n):
        out.append(_next(&s))
    return out


def sample_categorical(seed, thresholds, Py_ssize_t n):
    """Draw ``n`` symbols from {1..p} by inverse CDF on 64-bit draws."""
    cdef u64 s = <u64> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef array.array cuts = array.array("Q", thresholds)
    cdef u64[::1] tview = cuts
    cdef Py_ssize_t p_minus_1 = len(thresholds)
    cdef array.array result = array.array("q", bytes(8 * n)) if n else array.array("q")
    cdef long long[::1] rview = result
    cdef Py_ssize_t i, j
    cdef u64 u
    cdef long long sym
    with nogil:
        for i in range(n):
            u = _next(&s)
            sym = p_minus_1 + 1
            for j in range(p_minus_1):
                if u < tview[j]:
                    sym = j + 1
                    break
            rview[i] = sym
    return result.tolist()


def first_visit_times(symbols, Py_ssize_t p, Py_ssize_t k):
    """First time each length-``k`` window over {1..p} appears in ``symbols``."""
    cdef Py_ssize_t n = len(symbols)
    cdef Py_ssize_t size = p**k
    cdef array.array first = array.array("q", bytes(8 * size))
    cdef long long[::1] fview = first
    cdef Py_ssize_t i, t
    cdef long long code, mod
    for i in range(size):
        fview[i] = -1
    if n < k or k == 0:
        return first.tolist()
    cdef array.array syms = array.array("q", symbols)
    cdef long long[::1] sview = syms
    mod = p ** (k - 1)
    with nogil:
        code = 0
        for i in range(k):
            code = code * p + (sview[i] - 1)
        fview[code] = 0
        for t in range(1, n - k + 1):
            code = (code % mod) * p + (sview[t + k - 1] - 1)
            if fview[code] < 0:
                fview[code] = t
    return first.tolist()


def min_max_gap(starts, Py_ssize_t lo, Py_ssize_t hi):
    """Exhaustive min-max scan over unit-width interval start codes."""
    cdef array.array arr = array.array("q", starts)
    cdef long long[::1] view = arr
    cdef Py_ssize_t n = len(arr)
    cdef Py_ssize_t i, j
    cdef long long si, g, best, best_min
    best_min = -1
    with nogil:
        for i in range(lo, hi):
            si = view[i]
            best = 0
            for j in range(n):
                g = si - view[j]
                if g < 0:
                    g = -g
                g -= 1
                if g > best:
                    best = g
            if best_min < 0 or best < best_min:
                best_min = best
    return best_min


def gap_witnesses(starts, eps_units):
    """For each start code, the smallest index j whose gap is >= eps_units."""
    cdef array.array arr = array.array("q", starts)
    cdef long long[::1] view = arr
    cdef Py_ssize_t n = len(arr)
    cdef array.array result = array.array("q", bytes(8 * n)) if n else array.array("q")
    cdef long long[::1] rview = result
    cdef long long eps = eps_units
    cdef Py_ssize_t i, j
    cdef long long si, g, hit
    with nogil:
        for i in range(n):
            si = view[i]
            hit = -1
            for j in range(n):
                g = si - view[j]
                if g < 0:
                    g = -g
                g -= 1
                if g < 0:
                    g = 0
                if g >= eps:
                    hit = j
                    break
            rview[i] = hit
    return result.tolist()
