"""Biorthogonal wavelet filter banks: built-ins, file loading, validation.

Normalization: taps are stored in the two-scale convention where the
low-pass sums to 2 (Haar is h = (1, 1)).  The transform kernels apply a
1/sqrt(2) factor per analysis and per synthesis step, which makes
orthogonal banks energy preserving.  Relative to the convention that
carries the whole 1/2 factor on the synthesis step, coefficients at
decomposition depth l differ by a deterministic 2^(l/2) rescaling only.

Validation is operational: a bank is accepted when one analysis step
followed by one synthesis step (periodic boundary) reproduces every unit
impulse, which exercises all four biorthogonality families at once.
"""

import math
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import FilterSpecError, FilterValidationError, UnknownBankError


class Taps(NamedTuple):
    coef: np.ndarray  # float64 filter coefficients
    start: int        # index of coef[0]


@dataclass(frozen=True)
class FilterBank:
    """The four tap sequences of a biorthogonal bank plus moment counts.

    h/g are the synthesis pair, h_dual/g_dual the analysis pair;
    m_vanishing and m_dual_vanishing are the vanishing-moment counts of
    the high-pass synthesis and analysis filters respectively.
    """

    name: str
    h: Taps
    h_dual: Taps
    g: Taps
    g_dual: Taps
    m_vanishing: int
    m_dual_vanishing: int

    def filters(self):
        return {"h": self.h, "h_dual": self.h_dual, "g": self.g, "g_dual": self.g_dual}


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    max_deviation: float
    tol: float
    signal_length: int


def _taps(values, start):
    coef = np.asarray(values, dtype=np.float64)
    coef.setflags(write=False)
    return Taps(coef, int(start))


def _make_bank(name, h, h_dual, g, g_dual, m, m_dual):
    return FilterBank(name, _taps(*h), _taps(*h_dual), _taps(*g), _taps(*g_dual),
                      int(m), int(m_dual))


def _haar():
    return _make_bank("haar", ([1.0, 1.0], 0), ([1.0, 1.0], 0),
                      ([1.0, -1.0], 0), ([1.0, -1.0], 0), 1, 1)


def _d4():
    # closed-form construction: orthogonality + 2 vanishing moments
    s3 = math.sqrt(3.0)
    h = [(1 + s3) / 4, (3 + s3) / 4, (3 - s3) / 4, (1 - s3) / 4]
    g = [h[3], -h[2], h[1], -h[0]]  # alternating flip
    return _make_bank("d4", (h, 0), (h, 0), (g, 0), (g, 0), 2, 2)


def _crf137():
    text = resources.files("rectwave").joinpath("data/crf137.fspec").read_text()
    return load_filter_spec(text)


_BUILTINS = {"haar": _haar, "d4": _d4, "crf137": _crf137}


def builtin_names():
    return tuple(sorted(_BUILTINS))


def builtin(name):
    """Return a validated built-in bank: haar, d4 or crf137."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownBankError(f"unknown filter bank {name!r}; "
                               f"built-ins are {', '.join(builtin_names())}") from None
    fb = factory()
    _validate_bank(fb)
    return fb


def validate_biorthogonality(fb, tol=1e-10):
    """Impulse round trip through one analysis+synthesis step.

    Uses periodic boundary and signal length 4x the longest filter;
    reports the max absolute deviation from the identity map.
    """
    if tol <= 0:
        raise FilterValidationError("tolerance must be positive")
    n = 4 * max(len(f.coef) for f in fb.filters().values())
    x = np.eye(n)
    a, d = _backend.kernels.analysis_rows(x, fb.h_dual.coef, fb.h_dual.start,
                                          fb.g_dual.coef, fb.g_dual.start, False)
    y = _backend.kernels.synthesis_rows(a, d, fb.h.coef, fb.h.start,
                                        fb.g.coef, fb.g.start, False, 0, 0, 1, 1)
    dev = float(np.max(np.abs(y - x)))
    return ValidationReport(dev <= tol, dev, tol, n)


def _moment_count(taps, tol):
    j = np.arange(len(taps.coef), dtype=np.float64) + taps.start
    m = 0
    while m < len(taps.coef) and abs(float(np.sum(taps.coef * j**m))) <= tol:
        m += 1
    return m


def discrete_vanishing_moments(fb, tol=1e-8):
    """Largest M with sum_j g_dual[j]*j^k = 0 for k < M, capped at the filter length."""
    if tol <= 0:
        raise FilterValidationError("tolerance must be positive")
    return _moment_count(fb.g_dual, tol)


def _validate_bank(fb, biorth_tol=1e-10, moment_tol=1e-8):
    for fname, taps in fb.filters().items():
        if len(taps.coef) == 0:
            raise FilterValidationError(f"bank {fb.name!r}: filter {fname} is empty")
        if not np.all(np.isfinite(taps.coef)):
            raise FilterValidationError(f"bank {fb.name!r}: filter {fname} has "
                                        "non-finite taps")
    report = validate_biorthogonality(fb, biorth_tol)
    if not report.passed:
        raise FilterValidationError(
            f"bank {fb.name!r}: impulse round trip deviates by {report.max_deviation:.3e} "
            f"(biorthogonality tolerance {biorth_tol:g})")
    got = _moment_count(fb.g_dual, moment_tol)
    if got != fb.m_dual_vanishing:
        raise FilterValidationError(
            f"bank {fb.name!r}: declared-M mismatch: g_dual has {got} discrete vanishing "
            f"moments, declared {fb.m_dual_vanishing}")
    got = _moment_count(fb.g, moment_tol)
    if got != fb.m_vanishing:
        raise FilterValidationError(
            f"bank {fb.name!r}: declared-M mismatch: g has {got} discrete vanishing "
            f"moments, declared {fb.m_vanishing}")
    return fb


def filter_symmetry(taps):
    """(centre, sign) of a whole-point (anti)symmetric filter, else None.

    centre is in absolute index units and must be an integer for the
    symmetric boundary mode; sign is +1 (symmetric) or -1 (antisymmetric).
    """
    c = taps.coef
    rev = c[::-1]
    centre = taps.start + (len(c) - 1) / 2.0
    if np.array_equal(c, rev):
        return centre, 1
    if np.array_equal(c, -rev):
        return centre, -1
    return None


def symmetric_boundary_params(fb):
    """Fold parameters (ca, cd, sa, sd) for the symmetric boundary mode.

    Raises FilterValidationError unless all four filters are symmetric or
    antisymmetric about integer centres (whole-point symmetry).
    """
    info = {}
    for fname, taps in fb.filters().items():
        sym = filter_symmetry(taps)
        if sym is None or not float(sym[0]).is_integer():
            raise FilterValidationError(
                f"bank {fb.name!r}: filter {fname} is not whole-point symmetric; "
                "symmetric boundary mode requires it")
        info[fname] = (int(sym[0]), sym[1])
    return (info["h_dual"][0], info["g_dual"][0], info["h_dual"][1], info["g_dual"][1])


def supports_symmetric_boundary(fb):
    try:
        symmetric_boundary_params(fb)
        return True
    except FilterValidationError:
        return False


def parse_filter_spec(text):
    """Parse a FilterSpec document into an unvalidated FilterBank."""
    name = None
    filters = {}
    moments = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key = fields[0]
        if key == "bank":
            if len(fields) != 2:
                raise FilterSpecError(f"line {lineno}: expected 'bank <name>'")
            name = fields[1]
        elif key in ("h", "h_dual", "g", "g_dual"):
            if key in filters:
                raise FilterSpecError(f"line {lineno}: duplicate filter {key}")
            if len(fields) < 3:
                raise FilterSpecError(f"line {lineno}: filter {key} needs a start "
                                      "offset and at least one coefficient")
            try:
                start = int(fields[1])
                coef = [float(v) for v in fields[2:]]
            except ValueError as exc:
                raise FilterSpecError(f"line {lineno}: {exc}") from None
            filters[key] = (coef, start)
        elif key == "moments":
            if len(fields) != 3:
                raise FilterSpecError(f"line {lineno}: expected 'moments <M> <M_dual>'")
            try:
                moments = (int(fields[1]), int(fields[2]))
            except ValueError as exc:
                raise FilterSpecError(f"line {lineno}: {exc}") from None
        else:
            raise FilterSpecError(f"line {lineno}: unknown directive {key!r}")
    if name is None:
        raise FilterSpecError("missing 'bank' line")
    missing = [k for k in ("h", "h_dual", "g", "g_dual") if k not in filters]
    if missing:
        raise FilterSpecError(f"missing filter line(s): {', '.join(missing)}")
    if moments is None:
        raise FilterSpecError("missing 'moments' line")
    if moments[0] < 0 or moments[1] < 0:
        raise FilterSpecError("moment counts must be nonnegative")
    return _make_bank(name, filters["h"], filters["h_dual"], filters["g"],
                      filters["g_dual"], *moments)


def load_filter_spec(text):
    """Parse and validate a FilterSpec document."""
    return _validate_bank(parse_filter_spec(text))


def serialize_filter_spec(fb):
    """Render a FilterBank as FilterSpec text (round-trips exactly)."""
    lines = [f"bank {fb.name}"]
    for fname, taps in fb.filters().items():
        coefs = " ".join(repr(float(c)) for c in taps.coef)
        lines.append(f"{fname} {taps.start} {coefs}")
    lines.append(f"moments {fb.m_vanishing} {fb.m_dual_vanishing}")
    return "\n".join(lines) + "\n"
