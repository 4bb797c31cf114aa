"""One-dimensional fast wavelet transform and its inverse.

Scaling convention: a 1/sqrt(2) factor is applied per analysis and per
synthesis step on top of the sum-2 filter normalization, so orthogonal
banks give an orthonormal transform (exact Parseval).  Coefficients under
the convention that carries the whole 1/2 on synthesis differ from ours
by a deterministic 2^(l/2) factor per decomposition level l.

Downsampling phase: output index i reads the input window starting at
2*i + filter start offset; this is fixed so coefficient dumps are
bit-reproducible.

Boundary modes:

* "periodic" (default): index arithmetic mod n; perfect reconstruction
  for every bank and exact coefficient counting.
* "symmetric": whole-point symmetric extension (reflection at the first
  and last sample).  Only valid for banks whose four filters are
  symmetric or antisymmetric about integer centres (e.g. crf137); reduces
  edge artifacts in images.

Levels must divide the signal length exactly; padding is the image
layer's job.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _backend, filterbank
from .errors import FilterValidationError, TransformError

BOUNDARY_MODES = ("periodic", "symmetric")


@dataclass
class CoeffLevels:
    """Multilevel 1D coefficients: coarsest approximation plus per-level
    details, coarsest first (finest last)."""

    approx: np.ndarray
    details: list = field(default_factory=list)
    boundary: str = "periodic"

    @property
    def levels(self):
        return len(self.details)

    def total(self):
        return len(self.approx) + sum(len(d) for d in self.details)

    def copy(self):
        return CoeffLevels(self.approx.copy(), [d.copy() for d in self.details],
                           self.boundary)


def _boundary_params(fb, boundary):
    """Returns (symmetric_flag, (ca, cd, sa, sd)) for the kernel calls."""
    if boundary == "periodic":
        return False, (0, 0, 1, 1)
    if boundary == "symmetric":
        try:
            return True, filterbank.symmetric_boundary_params(fb)
        except FilterValidationError as exc:
            raise TransformError(str(exc)) from None
    raise TransformError(f"unknown boundary mode {boundary!r}; "
                         f"choose one of {BOUNDARY_MODES}")


def _as_rows(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise TransformError("expected a 2D array of row signals")
    return arr


def analysis_rows(x, fb, boundary="periodic"):
    """One analysis step on every row of a 2D array."""
    x = _as_rows(x)
    n = x.shape[1]
    if n < 2 or n % 2:
        raise TransformError(f"analysis needs an even length >= 2, got {n}")
    sym, _ = _boundary_params(fb, boundary)
    return _backend.kernels.analysis_rows(x, fb.h_dual.coef, fb.h_dual.start,
                                          fb.g_dual.coef, fb.g_dual.start, sym)


def synthesis_rows(a, d, fb, boundary="periodic"):
    """One synthesis step on every row; exact inverse of analysis_rows."""
    a = _as_rows(a)
    d = _as_rows(d)
    if a.shape != d.shape:
        raise TransformError(f"approx/detail shape mismatch: {a.shape} vs {d.shape}")
    sym, (ca, cd, sa, sd) = _boundary_params(fb, boundary)
    return _backend.kernels.synthesis_rows(a, d, fb.h.coef, fb.h.start,
                                           fb.g.coef, fb.g.start, sym, ca, cd, sa, sd)


def analysis_step(signal, fb, boundary="periodic"):
    """Split a signal into half-length approximation and detail channels."""
    x = np.ascontiguousarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise TransformError("expected a 1D signal")
    a, d = analysis_rows(x[None, :], fb, boundary)
    return a[0], d[0]


def synthesis_step(approx, detail, fb, boundary="periodic"):
    """Merge approximation and detail channels back into a signal."""
    a = np.ascontiguousarray(approx, dtype=np.float64)
    d = np.ascontiguousarray(detail, dtype=np.float64)
    if a.ndim != 1 or d.ndim != 1:
        raise TransformError("expected 1D channels")
    return synthesis_rows(a[None, :], d[None, :], fb, boundary)[0]


def forward(signal, fb, levels, boundary="periodic"):
    """Multilevel analysis; 2^levels must divide the signal length."""
    x = np.ascontiguousarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise TransformError("expected a 1D signal")
    if levels < 1:
        raise TransformError("levels must be a positive integer")
    if len(x) % (1 << levels):
        raise TransformError(f"2^{levels} does not divide signal length {len(x)}")
    details = []
    cur = x
    for _ in range(levels):
        cur, d = analysis_step(cur, fb, boundary)
        details.append(d)
    return CoeffLevels(cur, details[::-1], boundary)


def _check_levels(coeffs):
    base = len(coeffs.approx)
    if base < 1:
        raise TransformError("empty approximation channel")
    for k, d in enumerate(coeffs.details):
        if len(d) != base << k:
            raise TransformError(
                f"detail level {k} has length {len(d)}, expected {base << k}")


def inverse(coeffs, fb):
    """Exact inverse of forward."""
    _check_levels(coeffs)
    cur = coeffs.approx
    for d in coeffs.details:
        cur = synthesis_step(cur, d, fb, coeffs.boundary)
    return cur


def forward_rows(x, fb, levels, boundary="periodic"):
    """Multilevel analysis of every row; returns the packed plane
    [approx | detail 0 (coarsest) | ... | detail levels-1]."""
    x = _as_rows(x)
    n = x.shape[1]
    if levels < 1:
        raise TransformError("levels must be a positive integer")
    if n % (1 << levels):
        raise TransformError(f"2^{levels} does not divide row length {n}")
    details = []
    cur = x
    for _ in range(levels):
        cur, d = analysis_rows(cur, fb, boundary)
        details.append(d)
    return np.hstack([cur] + details[::-1])


def inverse_rows(plane, fb, levels, boundary="periodic"):
    """Inverse of forward_rows."""
    plane = _as_rows(plane)
    n = plane.shape[1]
    if n % (1 << levels):
        raise TransformError(f"2^{levels} does not divide row length {n}")
    w = n >> levels
    cur = np.ascontiguousarray(plane[:, :w])
    for k in range(levels):
        d = np.ascontiguousarray(plane[:, w << k: w << (k + 1)])
        cur = synthesis_rows(cur, d, fb, boundary)
    return cur
