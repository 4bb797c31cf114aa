"""Non-linear N-term coefficient selection and compression reporting.

Two strategies: TopN keeps the n largest-magnitude coefficients over the
canonical stream (the minimax N-term selector in an orthogonal basis, and
the default benchmark rule); TheoremThreshold keeps every coefficient
whose subband level-sum is <= l0 and, above l0, those exceeding the
per-level-sum threshold schedule

    eps_l = D / 2**(l + (M + 1/p)/2 * l0 + (M - 1/p)/2 * l)

with l0 the largest l such that l^2 * (slots with level-sum l) <= N and D
a mixed-derivative norm estimate of the image.  The scaling band is never
thresholded.  eps_l lives in the continuous-coefficient normalization
(unit square, unnormalized dual inner products), so discrete coefficient
magnitudes are converted by the per-subband factor 2^((mx+my)/2)/(rows*cols)
before comparison, mx/my being the analysis step counts along each axis.

PSNR always uses peak 255 and reconstructed pixels are not clamped before
error computation (clamping happens only at image file output), so
Parseval accounting stays exact for orthogonal banks.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import filterbank, transform2d
from .errors import RectwaveError, SelectionError
from .transform2d import RectGrid

CSV_HEADER = "image,bank,transform,strategy,kept,total,ratio,psnr_db,l2,linf"


@dataclass(frozen=True)
class TopN:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise SelectionError("TopN needs a positive coefficient count")

    def describe(self):
        return f"topn(n={self.n})"


@dataclass(frozen=True)
class TheoremThreshold:
    m: int
    p: float
    budget: int

    def __post_init__(self):
        if self.m < 1:
            raise SelectionError("derivative order M must be a positive integer")
        if self.p < max(1.0, 1.0 / self.m):
            raise SelectionError(f"p must be >= max(1, 1/M) = {max(1.0, 1.0 / self.m)}")
        if self.budget < 1:
            raise SelectionError("budget N must be a positive integer")

    def describe(self):
        return f"theorem(M={self.m},p={self.p:g},N={self.budget})"


@dataclass(frozen=True)
class ThresholdSchedule:
    """Per-level-sum thresholds; eps[l] == 0 means keep-all for l <= l0."""

    l0: int
    d_norm: float
    eps: dict


@dataclass(frozen=True)
class SelectionOutcome:
    container: object
    kept: int
    total: int
    strategy: str


@dataclass(frozen=True)
class CompressionReport:
    kept: int
    total: int
    ratio: float
    psnr: float
    l2_error: float
    linf_error: float
    strategy: str = ""
    transform: str = ""
    bank: str = ""
    image: str = ""

    def csv_row(self):
        psnr = "inf" if math.isinf(self.psnr) else f"{self.psnr:.6f}"
        return (f"{self.image},{self.bank},{self.transform},{self.strategy},"
                f"{self.kept},{self.total},{self.ratio:.6f},{psnr},"
                f"{self.l2_error:.10g},{self.linf_error:.10g}")


def select_top_n(values, n):
    """Boolean keep-mask of the n largest |values|; ties go to the earlier
    stream position (stable), so selection is deterministic."""
    values = np.asarray(values)
    if n < 1:
        raise SelectionError("n must be a positive integer")
    if n > values.size:
        raise SelectionError(f"n = {n} exceeds the {values.size} available coefficients")
    order = np.argsort(-np.abs(values), kind="stable")
    mask = np.zeros(values.size, dtype=bool)
    mask[order[:n]] = True
    return mask


def estimate_mixed_norm(img, m, p):
    """Discrete estimate of the L_p norm of the order-(m, m) mixed derivative.

    Order-m forward differences along x then y, scaled by the grid step
    (1/rows) to the -2m, under the Riemann weight of the unit square.
    """
    img = transform2d.as_image(img)
    rows, cols = img.shape
    if rows <= m or cols <= m:
        raise RectwaveError(f"image {rows}x{cols} too small for order-{m} differences")
    delta = 1.0 / rows
    mixed = np.diff(np.diff(img, m, axis=1), m, axis=0) / delta ** (2 * m)
    return float((np.sum(np.abs(mixed) ** p) * delta * delta) ** (1.0 / p))


def _rect_level_populations(grid):
    pops = {}
    for (lsum, _, _), block in transform2d.rect_subbands(grid):
        pops[lsum] = pops.get(lsum, 0) + block.size
    return pops


def _subband_scale(grid, kx, ky):
    """Factor mapping a discrete coefficient to the continuous normalization."""
    rows, cols = grid.plane.shape
    mx = grid.jx if kx == "A" else grid.jx - kx
    my = grid.jy if ky == "A" else grid.jy - ky
    return 2.0 ** ((mx + my) / 2.0) / (rows * cols)


def theorem_thresholds(grid, m, p, budget, fb=None):
    """Threshold schedule for a rectangular grid (see module docstring)."""
    if not isinstance(grid, RectGrid):
        raise SelectionError("the threshold schedule is defined on the rectangular transform")
    if budget < 1:
        raise SelectionError("budget N must be a positive integer")
    pops = _rect_level_populations(grid)
    if budget < min(pops.values()):
        raise SelectionError(f"budget {budget} is below the smallest level population "
                             f"{min(pops.values())}")
    l0 = max(l for l in pops if l * l * pops[l] <= budget)
    if fb is None:
        fb = filterbank.builtin(grid.bank)
    d_norm = estimate_mixed_norm(transform2d.rect_inverse(grid, fb), m, p)
    eps = {}
    for l in pops:
        if l <= l0:
            eps[l] = 0.0
        else:
            eps[l] = d_norm / 2.0 ** (l + (m + 1.0 / p) / 2.0 * l0 + (m - 1.0 / p) / 2.0 * l)
    return ThresholdSchedule(l0, d_norm, eps)


def _theorem_mask(grid, strategy, fb):
    schedule = theorem_thresholds(grid, strategy.m, strategy.p, strategy.budget, fb)
    parts = []
    for (lsum, kx, ky), block in transform2d.rect_subbands(grid):
        if (kx == "A" and ky == "A") or lsum <= schedule.l0:
            parts.append(np.ones(block.size, dtype=bool))
        else:
            scale = _subband_scale(grid, kx, ky)
            parts.append((np.abs(block.ravel()) * scale > schedule.eps[lsum]))
    return np.concatenate(parts)


def apply_selection(container, strategy, fb=None):
    """Zero all non-selected coefficients; kept values are never altered."""
    values = transform2d.stream_values(container)
    if isinstance(strategy, TopN):
        mask = select_top_n(values, strategy.n)
    elif isinstance(strategy, TheoremThreshold):
        if not isinstance(container, RectGrid):
            raise SelectionError("the theorem strategy requires the rectangular transform")
        mask = _theorem_mask(container, strategy, fb)
    else:
        raise SelectionError(f"unknown selection strategy: {strategy!r}")
    masked = container.copy()
    transform2d.set_stream_values(masked, np.where(mask, values, 0.0))
    return SelectionOutcome(masked, int(mask.sum()), values.size, strategy.describe())


def compress_report(original, reconstructed, kept, total, strategy="",
                    transform="", bank="", image=""):
    """Error metrics for one compression run (no pixel clamping)."""
    original = transform2d.as_image(original)
    reconstructed = transform2d.as_image(reconstructed)
    if original.shape != reconstructed.shape:
        raise SelectionError(f"image shapes differ: {original.shape} vs {reconstructed.shape}")
    if not 0 < kept <= total:
        raise SelectionError("kept must satisfy 0 < kept <= total")
    diff = original - reconstructed
    sse = float(np.sum(diff * diff))
    mse = sse / original.size
    psnr = math.inf if mse == 0 else 10.0 * math.log10(255.0 ** 2 / mse)
    return CompressionReport(kept=int(kept), total=int(total), ratio=total / kept,
                             psnr=psnr, l2_error=math.sqrt(sse),
                             linf_error=float(np.max(np.abs(diff))),
                             strategy=strategy, transform=transform, bank=bank,
                             image=image)
