"""Empirical approximation-rate studies and coefficient-decay oracles.

Rate curves pit the rectangular transform against the square one: for a
budget list of kept-coefficient counts the image is compressed by TopN
and the discrete L_q error (Riemann weight 1/n^2 on the unit square) is
recorded; log-log slopes are fitted over a trimmed budget range (first
and last 15% excluded to dodge preasymptotic and floor effects).

The decay oracles specialize the integration-by-parts identity to the
Haar wavelet (one dual vanishing moment), whose first antiderivative is
the closed-form hat function; mind the sign that integration by parts
produces:

    <f, psi(sigma x - theta)> = -(1/sigma) * int f'(x) Psi1(sigma x - theta) dx

(symbolic check: <x, psi> = -1/4 at sigma = 1, theta = 0).  Quadrature
is composite Simpson per smooth piece, exact for polynomials up to
degree 3.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import approx, transform2d
from .errors import RectwaveError, SelectionError

TEST_FUNCTION_TAGS = ("tensor_smooth", "additive_smooth", "axis_edges", "diagonal_edge")

# axis-aligned rectangles (x0, y0, x1, y1) deliberately off the dyadic grid
DEFAULT_RECTS = ((0.13, 0.17, 0.58, 0.46), (0.37, 0.57, 0.86, 0.83))


@dataclass
class RateCurve:
    budgets: np.ndarray
    errors: np.ndarray
    q: float
    transform: str
    bank: str

    def to_csv(self):
        lines = ["transform,bank,N,error_q"]
        for n, e in zip(self.budgets, self.errors):
            lines.append(f"{self.transform},{self.bank},{int(n)},{e:.10g}")
        return "\n".join(lines) + "\n"


def sample_function(tag, n, rects=DEFAULT_RECTS, offset=0.0):
    """Midpoint samples of a test function on an n x n grid over [0,1]^2.

    n must be a power of two.  Row index is y, column index is x.
    """
    if n < 1 or n & (n - 1):
        raise RectwaveError(f"grid size must be a power of two, got {n}")
    t = (np.arange(n) + 0.5) / n
    x, y = np.meshgrid(t, t)
    if tag == "tensor_smooth":
        return np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y)
    if tag == "additive_smooth":
        return np.sin(2 * np.pi * x) + np.sin(2 * np.pi * y)
    if tag == "axis_edges":
        img = np.zeros((n, n))
        for x0, y0, x1, y1 in rects:
            img[(x >= x0) & (x < x1) & (y >= y0) & (y < y1)] = 1.0
        return img
    if tag == "diagonal_edge":
        return ((x - y) >= offset).astype(np.float64)
    raise RectwaveError(f"unknown test function {tag!r}; tags are {TEST_FUNCTION_TAGS}")


def rate_curve(img, transform, fb, budgets, q=2.0, levels=None, boundary="periodic"):
    """TopN error curve for one transform; budgets strictly increasing."""
    img = transform2d.as_image(img)
    budgets = [int(b) for b in budgets]
    if any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise SelectionError("budgets must be strictly increasing")
    if transform == "rect":
        grid = transform2d.rect_forward(img, fb, levels, levels, boundary)
        invert = transform2d.rect_inverse
    elif transform == "square":
        grid = transform2d.square_forward(img, fb, levels, boundary)
        invert = transform2d.square_inverse
    else:
        raise SelectionError(f"unknown transform {transform!r}")
    total = grid.total()
    if budgets and budgets[-1] > total:
        raise SelectionError(f"budget {budgets[-1]} exceeds the {total} coefficients")
    errors = []
    for n in budgets:
        outcome = approx.apply_selection(grid, approx.TopN(n), fb)
        recon = invert(outcome.container, fb)
        errors.append(float(np.mean(np.abs(img - recon) ** q) ** (1.0 / q)))
    return RateCurve(np.array(budgets), np.array(errors), q, transform, fb.name)


def default_fit_range(npoints):
    """Trim 15% of the budgets from each end (at least one point kept)."""
    k = int(0.15 * npoints)
    return (k, npoints - k)


def fit_loglog_slope(curve, fit_range=None):
    """Least-squares slope of log(error) against log(N) over an index range."""
    if fit_range is None:
        fit_range = default_fit_range(len(curve.budgets))
    i0, i1 = fit_range
    n = curve.budgets[i0:i1]
    e = curve.errors[i0:i1]
    if len(n) < 3:
        raise RectwaveError(f"need at least 3 points to fit a slope, got {len(n)}")
    if np.any(e <= 0):
        raise RectwaveError("zero error inside the fit range")
    return float(np.polyfit(np.log(n.astype(float)), np.log(e), 1)[0])


def haar_psi_antiderivative(m, x):
    """First antiderivative of the Haar wavelet: the unit hat on [0, 1].

    Only m = 1 has this closed form (higher orders would need a
    cascade-evaluated wavelet).
    """
    if m != 1:
        raise RectwaveError("closed-form antiderivative implemented for m = 1 only")
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x <= 0.5, x, 1.0 - x)
    return np.where((x < 0) | (x > 1), 0.0, out)


def _simpson(fn, a, b, step):
    """Composite Simpson on [a, b] with subinterval length <= step."""
    if b <= a:
        return 0.0
    count = 2 * max(1, math.ceil((b - a) / step / 2))
    xs = np.linspace(a, b, count + 1)
    w = np.ones(count + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = (b - a) / count
    return float(np.sum(w * fn(xs)) * h / 3.0)


def _haar_coefficient(f, sigma, theta, step):
    """<f, psi(sigma x - theta)> integrated piecewise (psi never sampled
    at its jumps)."""
    t0, t1, t2 = theta / sigma, (theta + 0.5) / sigma, (theta + 1.0) / sigma
    return _simpson(f, t0, t1, step) - _simpson(f, t1, t2, step)


def coefficient_identity_check(poly, sigma, theta, step=1e-5):
    """Check the Haar coefficient identity on a polynomial.

    poly holds coefficients in increasing degree.  Returns (lhs, rhs,
    residual): lhs integrates f * psi(sigma x - theta) directly, rhs the
    antiderivative identity; both by piecewise composite Simpson.
    """
    if sigma <= 0:
        raise RectwaveError("sigma must be positive")
    coeffs = np.asarray(poly, dtype=np.float64)
    f = lambda x: np.polynomial.polynomial.polyval(x, coeffs)
    dcoeffs = np.polynomial.polynomial.polyder(coeffs) if len(coeffs) > 1 else np.zeros(1)
    fprime = lambda x: np.polynomial.polynomial.polyval(x, dcoeffs)
    lhs = _haar_coefficient(f, sigma, theta, step)
    t0, t1, t2 = theta / sigma, (theta + 0.5) / sigma, (theta + 1.0) / sigma
    integrand = lambda x: fprime(x) * haar_psi_antiderivative(1, sigma * x - theta)
    rhs = -(_simpson(integrand, t0, t1, step) + _simpson(integrand, t1, t2, step)) / sigma
    return lhs, rhs, abs(lhs - rhs)


def coefficient_bound_ratio(f, f_deriv, sigma, theta=0.0, p=2.0, step=1e-4):
    """|<f, psi(sigma x - theta)>| * sigma^(M+1-1/p) / ||f'||_{L_p(window)}
    for the Haar wavelet (M = 1); the window is the support of the dilate."""
    if sigma <= 0:
        raise RectwaveError("sigma must be positive")
    t0, t2 = theta / sigma, (theta + 1.0) / sigma
    coef = _haar_coefficient(f, sigma, theta, step)
    dnorm = _simpson(lambda x: np.abs(f_deriv(x)) ** p, t0, t2, step) ** (1.0 / p)
    if dnorm == 0:
        raise RectwaveError("derivative norm vanishes on the window")
    return abs(coef) * sigma ** (2.0 - 1.0 / p) / dnorm


def coefficient_bound_check(f, f_deriv, sigmas=tuple(2 ** k for k in range(9)),
                            theta=0.0, p=2.0, step=1e-4):
    """Decay-law ratios across a sigma sweep; a bounded sweep (no growth
    in sigma) is the checkable form of the coefficient decay law."""
    return np.array([coefficient_bound_ratio(f, f_deriv, s, theta, p, step)
                     for s in sigmas])
