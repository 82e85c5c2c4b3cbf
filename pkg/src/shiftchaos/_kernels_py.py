"""Pure-Python reference kernels for the hot inner loops.

The compiled module ``shiftchaos._kernels`` implements the same four
functions with identical integer semantics; every result is bit-for-bit
equal between the two backends.  All arithmetic is integer-exact.

The random generator is splitmix64 (Steele/Lea/Vigna): the state advances
by the 64-bit golden-ratio increment 0x9E3779B97F4A7C15 and each output is
the mixed state.  Reference outputs for seed 0:

    16294208416658607535, 7960286522194355700,
    487617019471545679, 17909611376780542444
"""

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64_stream(seed, n):
    """Return the first ``n`` splitmix64 outputs for ``seed`` as a list."""
    out = []
    s = seed & _MASK64
    for _ in range(n):
        s = (s + _GAMMA) & _MASK64
        z = ((s ^ (s >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def sample_categorical(seed, thresholds, n):
    """Draw ``n`` symbols from {1..p} by inverse CDF on 64-bit draws.

    ``thresholds`` holds the first p-1 cumulative cut points, each equal to
    ceil(C_i * 2**64) for exact rational cumulative probabilities C_i, so
    the comparison u < C_i * 2**64 is decided exactly.  A draw that clears
    every threshold selects symbol p.
    """
    p_minus_1 = len(thresholds)
    out = []
    s = seed & _MASK64
    for _ in range(n):
        s = (s + _GAMMA) & _MASK64
        z = ((s ^ (s >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        u = z ^ (z >> 31)
        sym = p_minus_1 + 1
        for i in range(p_minus_1):
            if u < thresholds[i]:
                sym = i + 1
                break
        out.append(sym)
    return out


def first_visit_times(symbols, p, k):
    """First time each length-``k`` window over {1..p} appears in ``symbols``.

    Returns a list of p**k entries in lexicographic word order; entry -1
    means the window never occurs.  Time t corresponds to the window
    starting at position t (0-based), i.e. after t shift steps.
    """
    n = len(symbols)
    size = p**k
    first = [-1] * size
    if n < k or k == 0:
        return first
    mod = p ** (k - 1)
    code = 0
    for i in range(k):
        code = code * p + (symbols[i] - 1)
    first[code] = 0
    for t in range(1, n - k + 1):
        code = (code % mod) * p + (symbols[t + k - 1] - 1)
        if first[code] < 0:
            first[code] = t
    return first


def min_max_gap(starts, lo, hi):
    """Exhaustive min-max scan over unit-width interval start codes.

    For each i in [lo, hi) computes max_j max(0, |starts[i] - starts[j]| - 1)
    and returns the minimum over i.  The codes are cylinder start positions
    in units of the common cylinder width, so the gap between cylinders i
    and j is exactly max(0, |s_i - s_j| - 1) units.
    """
    best_min = -1
    for i in range(lo, hi):
        si = starts[i]
        best = 0
        for sj in starts:
            g = si - sj if si >= sj else sj - si
            g -= 1
            if g > best:
                best = g
        if best_min < 0 or best < best_min:
            best_min = best
    return best_min


def gap_witnesses(starts, eps_units):
    """For each start code, the smallest index j whose gap is >= eps_units."""
    out = []
    for si in starts:
        hit = -1
        for j, sj in enumerate(starts):
            g = (si - sj if si >= sj else sj - si) - 1
            if g < 0:
                g = 0
            if g >= eps_units:
                hit = j
                break
        out.append(hit)
    return out
