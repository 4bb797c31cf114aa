"""Square (Mallat) and rectangular (anisotropic tensor-product) 2D
transforms, subband energy analysis, and the canonical coefficient stream.

Images are 2D float64 arrays, row index = y, column index = x.  The square
pyramid stores each subband as its own block: lh is low-x/high-y (picks up
horizontal edges), hl high-x/low-y (vertical edges), hh high/high (cross
terms).  The rectangular transform keeps the packed plane produced by a
full per-row then per-column 1D transform; subbands are rectangular
regions of that plane indexed by independent per-axis levels, where 'A'
is the scaling band and detail level j the dyadic band of width
n * 2^j / 2^J (coarsest j = 0).

Canonical coefficient order (selection ties and dump files depend on it):
square: ll block, then per level (coarsest first) lh, hl, hh; rect:
subbands sorted by (level-sum, x-index, y-index) with 'A' sorting before
detail levels ('A' counts 0 toward the level-sum, detail level j counts
j); row-major inside every block.
"""

from dataclasses import dataclass

import numpy as np

from . import dwt1d
from .errors import TransformError

BAND_TAGS = ("lh", "hl", "hh")
MAX_DEFAULT_LEVELS = 6


def as_image(img):
    arr = np.ascontiguousarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise TransformError("expected a non-empty 2D image array")
    return arr


def _dyadic_valuation(n):
    v = 0
    while n % 2 == 0 and n > 0:
        n //= 2
        v += 1
    return v


def default_levels(rows, cols):
    """Default decomposition depth: min(v2(rows), v2(cols), 6)."""
    j = min(_dyadic_valuation(rows), _dyadic_valuation(cols), MAX_DEFAULT_LEVELS)
    if j < 1:
        raise TransformError(f"image {rows}x{cols} has no dyadic factor; pad it first")
    return j


@dataclass
class SquarePyramid:
    """Mallat pyramid: coarsest ll plus (lh, hl, hh) per level, coarsest first."""

    ll: np.ndarray
    bands: list
    boundary: str
    bank: str

    @property
    def levels(self):
        return len(self.bands)

    @property
    def shape(self):
        lh = self.bands[-1][0]
        return (lh.shape[0] * 2, lh.shape[1] * 2)

    def total(self):
        return self.shape[0] * self.shape[1]

    def copy(self):
        return SquarePyramid(self.ll.copy(),
                             [tuple(b.copy() for b in lvl) for lvl in self.bands],
                             self.boundary, self.bank)


@dataclass
class RectGrid:
    """Rectangular-transform coefficients as the packed plane plus metadata."""

    plane: np.ndarray
    jx: int
    jy: int
    boundary: str
    bank: str

    @property
    def shape(self):
        return self.plane.shape

    def total(self):
        return self.plane.size

    def copy(self):
        return RectGrid(self.plane.copy(), self.jx, self.jy, self.boundary, self.bank)


@dataclass
class EnergyTable:
    """Per-level L2 norms of the square transform's edge terms (lh, hl
    together) and cross terms (hh), coarsest level first."""

    edge: np.ndarray
    cross: np.ndarray
    total_edge: float
    total_cross: float

    def to_csv(self):
        lines = ["level,edge_l2,cross_l2"]
        for k, (e, c) in enumerate(zip(self.edge, self.cross)):
            lines.append(f"{k},{e:.10g},{c:.10g}")
        lines.append(f"total,{self.total_edge:.10g},{self.total_cross:.10g}")
        return "\n".join(lines) + "\n"


def _check_divisible(rows, cols, jy, jx):
    if jx < 1 or jy < 1:
        raise TransformError("decomposition depth must be a positive integer")
    if cols % (1 << jx):
        raise TransformError(f"2^{jx} does not divide image width {cols}")
    if rows % (1 << jy):
        raise TransformError(f"2^{jy} does not divide image height {rows}")


def square_forward(img, fb, levels=None, boundary="periodic"):
    """Mallat recursion: one row step then one column step per level."""
    img = as_image(img)
    rows, cols = img.shape
    j = default_levels(rows, cols) if levels is None else int(levels)
    _check_divisible(rows, cols, j, j)
    bands = []
    cur = img
    for _ in range(j):
        xl, xh = dwt1d.analysis_rows(cur, fb, boundary)
        ll, lh = (b.T for b in dwt1d.analysis_rows(xl.T, fb, boundary))
        hl, hh = (b.T for b in dwt1d.analysis_rows(xh.T, fb, boundary))
        bands.append((np.ascontiguousarray(lh), np.ascontiguousarray(hl),
                      np.ascontiguousarray(hh)))
        cur = np.ascontiguousarray(ll)
    return SquarePyramid(cur, bands[::-1], boundary, fb.name)


def square_inverse(pyr, fb):
    """Exact inverse of square_forward."""
    cur = pyr.ll
    for lh, hl, hh in pyr.bands:
        if lh.shape != cur.shape or hl.shape != cur.shape or hh.shape != cur.shape:
            raise TransformError("malformed pyramid: band shapes do not match")
        xl = dwt1d.synthesis_rows(cur.T, lh.T, fb, pyr.boundary).T
        xh = dwt1d.synthesis_rows(hl.T, hh.T, fb, pyr.boundary).T
        cur = dwt1d.synthesis_rows(xl, xh, fb, pyr.boundary)
    return cur


def rect_forward(img, fb, jx=None, jy=None, boundary="periodic"):
    """Full 1D forward on every row (jx levels) then every column (jy)."""
    img = as_image(img)
    rows, cols = img.shape
    if jx is None or jy is None:
        j = default_levels(rows, cols)
        jx = j if jx is None else jx
        jy = j if jy is None else jy
    jx, jy = int(jx), int(jy)
    _check_divisible(rows, cols, jy, jx)
    plane = dwt1d.forward_rows(img, fb, jx, boundary)
    plane = dwt1d.forward_rows(plane.T, fb, jy, boundary).T
    return RectGrid(np.ascontiguousarray(plane), jx, jy, boundary, fb.name)


def rect_inverse(grid, fb):
    """Exact inverse of rect_forward."""
    rows, cols = grid.plane.shape
    _check_divisible(rows, cols, grid.jy, grid.jx)
    plane = dwt1d.inverse_rows(grid.plane.T, fb, grid.jy, grid.boundary).T
    return dwt1d.inverse_rows(plane, fb, grid.jx, grid.boundary)


def axis_segments(n, levels):
    """Packed-plane segments along one axis: [('A', start, stop), (0, ...), ...]."""
    w = n >> levels
    segs = [("A", 0, w)]
    for k in range(levels):
        segs.append((k, w << k, w << (k + 1)))
    return segs


def _axis_weight(key):
    return 0 if key == "A" else key


def _axis_code(key):
    return -1 if key == "A" else key


def rect_subbands(grid):
    """Subbands of a RectGrid in canonical order.

    Yields ((level_sum, kx, ky), block_view) where kx/ky are 'A' or the
    detail level; blocks are views into the packed plane.
    """
    rows, cols = grid.plane.shape
    xsegs = axis_segments(cols, grid.jx)
    ysegs = axis_segments(rows, grid.jy)
    entries = []
    for kx, xs, xe in xsegs:
        for ky, ys, ye in ysegs:
            lsum = _axis_weight(kx) + _axis_weight(ky)
            entries.append(((lsum, _axis_code(kx), _axis_code(ky)),
                            (kx, ky), (ys, ye, xs, xe)))
    entries.sort(key=lambda e: e[0])
    for (lsum, _, _), (kx, ky), (ys, ye, xs, xe) in entries:
        yield (lsum, kx, ky), grid.plane[ys:ye, xs:xe]


def square_subbands(pyr):
    """Subbands of a SquarePyramid in canonical order (ll, then per level
    lh, hl, hh).  Yields ((level, band_tag), block)."""
    yield (-1, "ll"), pyr.ll
    for level, bands in enumerate(pyr.bands):
        for tag, block in zip(BAND_TAGS, bands):
            yield (level, tag), block


def stream_blocks(container):
    """(subband key, block view) pairs in canonical stream order."""
    if isinstance(container, RectGrid):
        return list(rect_subbands(container))
    if isinstance(container, SquarePyramid):
        return list(square_subbands(container))
    raise TransformError(f"not a coefficient container: {type(container).__name__}")


def stream_values(container):
    """All coefficients as one 1D array in canonical stream order."""
    return np.concatenate([b.ravel() for _, b in stream_blocks(container)])


def set_stream_values(container, values):
    """Write a canonical-order value array back into the container."""
    values = np.asarray(values, dtype=np.float64)
    if values.size != sum(b.size for _, b in stream_blocks(container)):
        raise TransformError("value count does not match the container")
    pos = 0
    for _, block in stream_blocks(container):
        block[...] = values[pos:pos + block.size].reshape(block.shape)
        pos += block.size


def coeff_stream(container):
    """Deterministic (location key, value) sequence over all coefficients.

    Keys are (subband key..., row, col) with row/col relative to the
    subband block; the order is the canonical stream order.
    """
    for key, block in stream_blocks(container):
        rows, cols = block.shape
        for r in range(rows):
            for c in range(cols):
                yield key + (r, c), block[r, c]


def energy_distribution(pyr):
    """Per-level L2 norms of edge (lh+hl) and cross (hh) subbands."""
    edge = np.empty(pyr.levels)
    cross = np.empty(pyr.levels)
    for k, (lh, hl, hh) in enumerate(pyr.bands):
        edge[k] = np.sqrt(np.sum(lh * lh) + np.sum(hl * hl))
        cross[k] = np.sqrt(np.sum(hh * hh))
    return EnergyTable(edge, cross, float(np.sqrt(np.sum(edge**2))),
                       float(np.sqrt(np.sum(cross**2))))
