"""Acceptance suite: one test per criterion, each printing a PASS line.

Criterion 7/8 run their hard gates on the bundled synthetic axis_edges
512x512 fixture.  To also exercise them on the standard 512x512 test
images (Mandrill, House, Lena, Barbara), point RECTWAVE_IMAGES at a
directory of PGM files; those results are reported and gated softly
(>= 3 of 4 images).
"""

import math
import os
import time

import numpy as np
import pytest

from rectwave import approx, filterbank, ratelab, transform2d
from rectwave.cli import main

BANKS = ("haar", "d4", "crf137")


def _compress_psnr(img, fb, transform, n):
    if transform == "rect":
        cont = transform2d.rect_forward(img, fb)
        out = approx.apply_selection(cont, approx.TopN(n), fb)
        rec = transform2d.rect_inverse(out.container, fb)
    else:
        cont = transform2d.square_forward(img, fb)
        out = approx.apply_selection(cont, approx.TopN(n), fb)
        rec = transform2d.square_inverse(out.container, fb)
    return approx.compress_report(img, rec, out.kept, out.total).psnr


def _user_images():
    root = os.environ.get("RECTWAVE_IMAGES")
    if not root or not os.path.isdir(root):
        return []
    from rectwave import imageio

    images = []
    for name in sorted(os.listdir(root)):
        if name.lower().endswith(".pgm"):
            img = imageio.load_pgm(os.path.join(root, name))
            if img.shape == (512, 512):
                images.append((name, img))
    return images


def test_criterion_1_perfect_reconstruction(banks, rng):
    t0 = time.monotonic()
    worst = 0.0
    for img in (rng.uniform(0, 255, size=(64, 64)) for _ in range(3)):
        for name in BANKS:
            fb = banks[name]
            modes = ("periodic", "symmetric") if name == "crf137" else ("periodic",)
            for mode in modes:
                pyr = transform2d.square_forward(img, fb, 4, mode)
                worst = max(worst,
                            np.max(np.abs(transform2d.square_inverse(pyr, fb) - img)))
                grid = transform2d.rect_forward(img, fb, 4, 4, mode)
                worst = max(worst,
                            np.max(np.abs(transform2d.rect_inverse(grid, fb) - img)))
    elapsed = time.monotonic() - t0
    assert worst <= 1e-9
    assert elapsed < 5.0
    print(f"\nPASS criterion 1: perfect reconstruction, max-abs {worst:.2e} "
          f"(tol 1e-9), {elapsed:.2f}s")


def test_criterion_2_biorthogonality(banks):
    declared = {"haar": 1, "d4": 2, "crf137": 4}
    for name in BANKS:
        report = filterbank.validate_biorthogonality(banks[name], 1e-10)
        assert report.passed, name
        assert filterbank.discrete_vanishing_moments(banks[name]) == declared[name]
    print("\nPASS criterion 2: biorthogonality at 1e-10; dual moments 1/2/4")


def test_criterion_3_parseval(banks, rng):
    img = rng.uniform(0, 255, size=(128, 128))
    energy = np.sum(img**2)
    worst = 0.0
    for name in ("haar", "d4"):
        fb = banks[name]
        for cont in (transform2d.square_forward(img, fb, 5),
                     transform2d.rect_forward(img, fb, 5, 5)):
            coeff = np.sum(transform2d.stream_values(cont) ** 2)
            worst = max(worst, abs(coeff / energy - 1.0))
    assert worst <= 1e-9
    print(f"\nPASS criterion 3: Parseval, worst relative deviation {worst:.2e}")


def test_criterion_4_appendix_identity_oracle():
    polys = ([1.0], [0.0, 1.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0])
    worst = 0.0
    for poly in polys:
        for sigma in (1.0, 2.0, 4.0):
            for theta in (0.0, 0.5):
                _, _, res = ratelab.coefficient_identity_check(poly, sigma, theta,
                                                               step=1e-5)
                worst = max(worst, res)
    assert worst < 1e-8
    lhs, _, _ = ratelab.coefficient_identity_check([0.0, 1.0], 1.0, 0.0, step=1e-5)
    assert abs(lhs - (-0.25)) < 1e-8
    print(f"\nPASS criterion 4: identity residual {worst:.2e} (tol 1e-8), "
          f"lhs(x, 1, 0) = {lhs:.10f}")


def test_criterion_5_coefficient_decay_scaling():
    sigmas = [2**k for k in range(9)]
    ratios = ratelab.coefficient_bound_check(lambda x: x, lambda x: np.ones_like(x),
                                             sigmas)
    spread = ratios.max() / ratios.min() - 1.0
    assert spread <= 0.05
    print(f"\nPASS criterion 5: monomial decay ratio spread {100 * spread:.3f}% "
          f"across sigma 1..256 (tol 5%)")


def test_criterion_6_rate_separation(banks):
    t0 = time.monotonic()
    img = ratelab.sample_function("tensor_smooth", 256)
    budgets = [2**k for k in range(8, 15)]
    rect = ratelab.rate_curve(img, "rect", banks["haar"], budgets)
    square = ratelab.rate_curve(img, "square", banks["haar"], budgets)
    slope_rect = ratelab.fit_loglog_slope(rect)
    slope_square = ratelab.fit_loglog_slope(square)
    elapsed = time.monotonic() - t0
    assert slope_rect <= -0.85
    assert -0.65 <= slope_square <= -0.35
    assert np.all(rect.errors < square.errors)
    assert elapsed < 60.0
    print(f"\nPASS criterion 6: slopes rect {slope_rect:.3f} (<= -0.85), "
          f"square {slope_square:.3f} (in [-0.65, -0.35]); rect strictly "
          f"smaller at every budget; {elapsed:.1f}s")


def test_criterion_7_compression_benchmark(tmp_path, banks):
    csv = tmp_path / "compare.csv"
    args = ["compare", "axis_edges:512", "--ratio", "80,160", "--csv", str(csv)]
    assert main(args) == 0
    first = csv.read_text()
    csv.unlink()
    assert main(args) == 0
    assert csv.read_text() == first  # deterministic
    rows = [r.split(",") for r in first.splitlines()[1:]]
    psnr = {(r[1], r[2], round(float(r[6]))): float(r[7]) for r in rows}
    assert len(rows) == 8
    for bank in ("d4", "crf137"):
        assert psnr[(bank, "rect", 160)] >= psnr[(bank, "square", 160)]
    msg = [f"{b}: rect {psnr[(b, 'rect', 160)]:.1f} dB >= square "
           f"{psnr[(b, 'square', 160)]:.1f} dB" for b in ("d4", "crf137")]
    print(f"\nPASS criterion 7: fixture hard gate at ratio 160 ({'; '.join(msg)})")
    user = _user_images()
    if user:
        wins = 0
        for name, img in user:
            fb = banks["crf137"]
            n = round(img.size / 160)
            r, s = (_compress_psnr(img, fb, t, n) for t in ("rect", "square"))
            print(f"  reported {name}: rect {r:.2f} dB vs square {s:.2f} dB")
            wins += r >= s
        assert wins >= math.ceil(0.75 * len(user))
        print(f"  soft gate: rect >= square on {wins}/{len(user)} user images")


def test_criterion_8_energy_distribution(banks):
    img = ratelab.sample_function("axis_edges", 512) * 255.0
    pyr = transform2d.square_forward(img, banks["d4"])
    table = transform2d.energy_distribution(pyr)
    assert np.all(table.cross < table.edge)
    print("\nPASS criterion 8: cross < edge at every level on the fixture "
          f"(edge head {table.edge[0]:.0f}, cross head {table.cross[0]:.0f})")
    for name, user_img in _user_images():
        t = transform2d.energy_distribution(
            transform2d.square_forward(user_img, banks["d4"]))
        ok = bool(np.all(t.cross < t.edge))
        print(f"  reported {name}: cross < edge at every level: {ok}")


def test_criterion_9_theorem_strategy_sanity(banks):
    fb = banks["haar"]
    img = ratelab.sample_function("tensor_smooth", 64)
    grid = transform2d.rect_forward(img, fb, 6, 6)
    prev = math.inf
    lines = []
    for n in (100, 300, 500):
        out = approx.apply_selection(grid, approx.TheoremThreshold(1, 2.0, n), fb)
        rec = transform2d.rect_inverse(out.container, fb)
        err = float(np.sqrt(np.mean((img - rec) ** 2)))
        ref = approx.apply_selection(grid, approx.TopN(out.kept), fb)
        ref_err = float(np.sqrt(np.mean(
            (img - transform2d.rect_inverse(ref.container, fb)) ** 2)))
        assert out.kept <= 8 * n
        assert err <= prev + 1e-12
        assert err <= 4.0 * ref_err
        lines.append(f"N={n}: kept={out.kept} err/topn={err / ref_err:.2f}")
        prev = err
    print(f"\nPASS criterion 9: theorem strategy ({'; '.join(lines)})")
