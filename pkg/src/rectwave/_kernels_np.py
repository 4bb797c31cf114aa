"""NumPy reference kernels for the 1D filter-bank steps.

These are the pure-Python fallback used when the compiled extension is not
available.  Both implementations accumulate filter taps in ascending tap
order for every output coefficient, so their results agree bit for bit.

Conventions (shared with the compiled kernels):

* analysis:   a_i = (1/sqrt2) * sum_t lo[t] * x[2i + lo_start + t]
              d_i = (1/sqrt2) * sum_t hi[t] * x[2i + hi_start + t]
* synthesis:  x_i = (1/sqrt2) * (sum_j lo[i-2j-lo_start] * a_j
                                 + sum_j hi[i-2j-hi_start] * d_j)
* boundary:   periodic (index mod n) or whole-point symmetric (reflection
              at samples 0 and n-1).  For symmetric synthesis the subband
              extensions are reflections about -c/2 and (n-1-c)/2, where c
              is the integer symmetry centre of the matching analysis
              filter; antisymmetric filters flip the sign per reflection.
"""

import numpy as np

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _fold_signal(idx, n):
    # whole-point symmetric extension: reflections at 0 and n-1
    period = 2 * n - 2 if n > 1 else 1
    u = np.mod(idx, period)
    return np.where(u >= n, period - u, u)


def _fold_subband(j, m, c, sign):
    """Reflect indices j into [0, m) about -c/2 and (2m-1-c)/2.

    Returns (indices, signs); signs are -1 where an odd number of
    reflections hit an antisymmetric (sign == -1) filter's subband.
    """
    u = np.mod(np.asarray(j, dtype=np.int64), 2 * m - 1) if m > 1 else np.zeros(len(j), dtype=np.int64)
    flips = np.zeros(u.shape, dtype=np.int64)
    # at most a few sweeps: each reflection moves u strictly toward [0, m)
    for _ in range(abs(c) + 4):
        over = u >= m
        if over.any():
            u = np.where(over, (2 * m - 1 - c) - u, u)
            flips += over
        under = u < 0
        if under.any():
            u = np.where(under, -c - u, u)
            flips += under
        if not (over.any() or under.any()):
            break
    else:
        raise RuntimeError("subband fold did not converge")
    signs = np.where(flips % 2 == 1, float(sign), 1.0) if sign < 0 else np.ones(u.shape)
    return u, signs


def analysis_rows(x, lo, lo_start, hi, hi_start, symmetric):
    """One analysis step applied to every row of x (shape (rows, n), n even)."""
    rows, n = x.shape
    half = n // 2
    base = 2 * np.arange(half)
    a = np.zeros((rows, half))
    d = np.zeros((rows, half))
    for taps, start, out in ((lo, lo_start, a), (hi, hi_start, d)):
        for t in range(len(taps)):
            idx = base + (start + t)
            idx = _fold_signal(idx, n) if symmetric else np.mod(idx, n)
            out += taps[t] * x[:, idx]
    a *= INV_SQRT2
    d *= INV_SQRT2
    return a, d


def synthesis_rows(a, d, lo, lo_start, hi, hi_start, symmetric, ca, cd, sa, sd):
    """One synthesis step on every row; returns shape (rows, 2*m)."""
    rows, m = a.shape
    n = 2 * m
    out = np.zeros((rows, n))
    for taps, start, sub, c, s in ((lo, lo_start, a, ca, sa), (hi, hi_start, d, cd, sd)):
        for t in range(len(taps)):
            shift = start + t
            par = shift & 1
            offs = (shift - par) >> 1
            j = np.arange(m) - offs
            if symmetric:
                idx, sgn = _fold_subband(j, m, c, s)
                out[:, par::2] += taps[t] * (sub[:, idx] * sgn)
            else:
                out[:, par::2] += taps[t] * sub[:, np.mod(j, m)]
    out *= INV_SQRT2
    return out
