"""Cross-checks between the compiled kernels and the NumPy fallback."""

import numpy as np
import pytest

from rectwave import _backend, _kernels_np

fastwt = pytest.importorskip("rectwave._fastwt",
                             reason="compiled kernels were not built")


def _bank_args(fb):
    return (fb.h_dual.coef, fb.h_dual.start, fb.g_dual.coef, fb.g_dual.start)


@pytest.mark.parametrize("name,sym", [("haar", False), ("d4", False),
                                      ("crf137", False), ("crf137", True)])
def test_analysis_bit_identical(banks, rng, name, sym):
    fb = banks[name]
    x = np.ascontiguousarray(rng.normal(size=(9, 64)))
    a1, d1 = _kernels_np.analysis_rows(x, *_bank_args(fb), sym)
    a2, d2 = fastwt.analysis_rows(x, *_bank_args(fb), sym)
    np.testing.assert_array_equal(a1, a2)
    np.testing.assert_array_equal(d1, d2)


@pytest.mark.parametrize("name,sym,cacd", [("haar", False, (0, 0)),
                                           ("d4", False, (0, 0)),
                                           ("crf137", False, (0, 0)),
                                           ("crf137", True, (0, 1))])
def test_synthesis_bit_identical(banks, rng, name, sym, cacd):
    fb = banks[name]
    a = np.ascontiguousarray(rng.normal(size=(9, 32)))
    d = np.ascontiguousarray(rng.normal(size=(9, 32)))
    args = (fb.h.coef, fb.h.start, fb.g.coef, fb.g.start, sym, *cacd, 1, 1)
    y1 = _kernels_np.synthesis_rows(a, d, *args)
    y2 = fastwt.synthesis_rows(a, d, *args)
    np.testing.assert_array_equal(y1, y2)


def test_backend_switching(rng):
    active = _backend.get_backend()
    try:
        for name in _backend.available_backends():
            _backend.set_backend(name)
            assert _backend.get_backend() == name
    finally:
        _backend.set_backend(active)
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


def test_full_transform_agrees_across_backends(banks, rng):
    from rectwave import transform2d

    img = rng.uniform(0, 255, size=(64, 64))
    active = _backend.get_backend()
    planes = {}
    try:
        for name in _backend.available_backends():
            _backend.set_backend(name)
            planes[name] = transform2d.rect_forward(img, banks["crf137"], 3, 3).plane
    finally:
        _backend.set_backend(active)
    if len(planes) == 2:
        np.testing.assert_array_equal(planes["python"], planes["cython"])
