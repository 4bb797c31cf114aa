import math

import numpy as np
import pytest

from rectwave import approx, ratelab, transform2d
from rectwave.approx import (CompressionReport, TheoremThreshold, TopN,
                             apply_selection, compress_report,
                             estimate_mixed_norm, select_top_n,
                             theorem_thresholds)
from rectwave.errors import RectwaveError, SelectionError


def test_select_top_n_magnitude_order():
    mask = select_top_n(np.array([3.0, -5.0, 2.0, 0.0]), 2)
    assert mask.tolist() == [True, True, False, False]


def test_select_top_n_tie_break_prefers_earlier():
    mask = select_top_n(np.array([1.0, -1.0, 1.0]), 2)
    assert mask.tolist() == [True, True, False]


def test_select_top_n_full_and_errors():
    v = np.array([1.0, 2.0])
    assert select_top_n(v, 2).all()
    with pytest.raises(SelectionError):
        select_top_n(v, 3)
    with pytest.raises(SelectionError):
        select_top_n(v, 0)


def test_estimate_mixed_norm_constant():
    assert estimate_mixed_norm(np.full((32, 32), 7.0), 1, 2.0) == 0.0


def test_estimate_mixed_norm_xy():
    t = (np.arange(256) + 0.5) / 256.0
    img = np.outer(t, t)
    assert estimate_mixed_norm(img, 1, 2.0) == pytest.approx(1.0, rel=0.02)


def test_estimate_mixed_norm_sin_sin():
    img = ratelab.sample_function("tensor_smooth", 256)
    assert estimate_mixed_norm(img, 1, 2.0) == pytest.approx(2 * math.pi**2, rel=0.02)


def test_estimate_mixed_norm_too_small():
    with pytest.raises(RectwaveError):
        estimate_mixed_norm(np.ones((2, 2)), 2, 2.0)


def test_theorem_keep_all_when_budget_huge(banks):
    img = ratelab.sample_function("tensor_smooth", 16)
    grid = transform2d.rect_forward(img, banks["haar"], 4, 4)
    pops = approx._rect_level_populations(grid)
    big = sum(l * l * p for l, p in pops.items()) + 1
    sched = theorem_thresholds(grid, 1, 2.0, big, banks["haar"])
    assert sched.l0 == max(pops)
    out = apply_selection(grid, TheoremThreshold(1, 2.0, big), banks["haar"])
    assert out.kept == out.total


def test_theorem_constant_image_reconstructs_exactly(banks):
    fb = banks["haar"]
    grid = transform2d.rect_forward(np.full((16, 16), 5.0), fb, 4, 4)
    sched = theorem_thresholds(grid, 1, 2.0, 20, fb)
    assert sched.d_norm == 0.0
    out = apply_selection(grid, TheoremThreshold(1, 2.0, 20), fb)
    rec = transform2d.rect_inverse(out.container, fb)
    np.testing.assert_allclose(rec, 5.0, atol=1e-10)
    # only the keep-all level-sums survive the strict |v| > 0 rule
    pops = approx._rect_level_populations(grid)
    assert out.kept == sum(p for l, p in pops.items() if l <= sched.l0)


def test_theorem_requires_rect(banks):
    pyr = transform2d.square_forward(np.zeros((16, 16)), banks["haar"], 2)
    with pytest.raises(SelectionError):
        apply_selection(pyr, TheoremThreshold(1, 2.0, 50), banks["haar"])


def test_theorem_budget_floor(banks):
    grid = transform2d.rect_forward(np.zeros((16, 16)), banks["haar"], 4, 4)
    with pytest.raises(SelectionError):
        theorem_thresholds(grid, 1, 2.0, 1, banks["haar"])


def test_strategy_parameter_validation():
    with pytest.raises(SelectionError):
        TopN(0)
    with pytest.raises(SelectionError):
        TheoremThreshold(0, 2.0, 10)
    with pytest.raises(SelectionError):
        TheoremThreshold(1, 0.5, 10)
    with pytest.raises(SelectionError):
        TheoremThreshold(2, 0.5, 10)  # p >= max(1, 1/M) still needs p >= 1


def test_eps_strictly_decreasing(banks):
    img = ratelab.sample_function("tensor_smooth", 64)
    grid = transform2d.rect_forward(img, banks["haar"], 6, 6)
    sched = theorem_thresholds(grid, 1, 2.0, 100, banks["haar"])
    tail = sorted(l for l in sched.eps if l > sched.l0)
    eps = [sched.eps[l] for l in tail]
    assert all(e2 < e1 for e1, e2 in zip(eps, eps[1:]))


def test_apply_selection_keeps_values_unchanged(banks, rng):
    img = rng.uniform(0, 255, size=(32, 32))
    grid = transform2d.rect_forward(img, banks["d4"], 3, 3)
    values = transform2d.stream_values(grid)
    out = apply_selection(grid, TopN(100), banks["d4"])
    masked = transform2d.stream_values(out.container)
    changed = masked != values
    assert np.all(masked[~changed] == values[~changed])
    assert np.all(masked[changed] == 0.0)
    assert out.kept == 100 and out.total == 1024


def test_topn_error_monotonicity(banks, rng):
    img = rng.uniform(0, 255, size=(32, 32))
    fb = banks["d4"]
    grid = transform2d.rect_forward(img, fb, 3, 3)
    errs = []
    for n in (50, 100, 200, 400, 800):
        out = apply_selection(grid, TopN(n), fb)
        rec = transform2d.rect_inverse(out.container, fb)
        errs.append(np.sqrt(np.sum((img - rec) ** 2)))
    for e1, e2 in zip(errs, errs[1:]):
        assert e2 <= e1 + 1e-12


def test_parseval_accounting(banks, rng):
    img = rng.uniform(0, 255, size=(32, 32))
    fb = banks["haar"]
    grid = transform2d.rect_forward(img, fb, 3, 3)
    values = transform2d.stream_values(grid)
    out = apply_selection(grid, TopN(77), fb)
    kept = transform2d.stream_values(out.container)
    discarded = np.sum(values**2) - np.sum(kept**2)
    rec = transform2d.rect_inverse(out.container, fb)
    rep = compress_report(img, rec, out.kept, out.total)
    assert rep.l2_error**2 == pytest.approx(discarded, rel=1e-9)


def test_compress_report_psnr_values():
    base = np.zeros((10, 10))
    rep = compress_report(base, base, 1, 100)
    assert math.isinf(rep.psnr) and rep.l2_error == 0.0
    # MSE = 1 -> 10*log10(255^2) = 48.1308 dB (frozen from 10*log10(65025))
    rep = compress_report(base, base + 1.0, 1, 100)
    assert rep.psnr == pytest.approx(48.1308, abs=1e-3)
    rep = compress_report(base, base + 255.0, 1, 100)
    assert rep.psnr == pytest.approx(0.0, abs=1e-12)
    assert rep.ratio == 100.0


def test_compress_report_errors():
    with pytest.raises(SelectionError):
        compress_report(np.zeros((2, 2)), np.zeros((2, 3)), 1, 4)
    with pytest.raises(SelectionError):
        compress_report(np.zeros((2, 2)), np.zeros((2, 2)), 0, 4)


def test_report_csv_row():
    rep = CompressionReport(kept=10, total=100, ratio=10.0, psnr=math.inf,
                            l2_error=0.0, linf_error=0.0, strategy="topn(n=10)",
                            transform="rect", bank="haar", image="x.pgm")
    row = rep.csv_row()
    assert row.startswith("x.pgm,haar,rect,topn(n=10),10,100,")
    assert ",inf," in row


def test_ratio_160_kept_count(banks):
    # --ratio 160 on 512x512 maps to round(262144/160) = 1638 kept;
    # the achieved ratio is 262144/1638 = 160.0391
    total = 512 * 512
    n = round(total / 160)
    assert n == 1638
    assert total / n == pytest.approx(160.0391, abs=0.005)
