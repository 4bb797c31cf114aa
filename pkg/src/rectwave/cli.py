"""Command-line driver: decompositions, compression benchmarks, subband
energy tables, and approximation-rate studies.

Inputs are PGM files or synthetic tags (tensor_smooth, additive_smooth,
axis_edges, diagonal_edge, noise), optionally suffixed ':<size>' for the
grid size, e.g. 'axis_edges:512'.  Synthetic images are scaled to the
0..255 range except for the rate command, which works on raw samples.

Exit codes: 0 ok, 1 usage, 2 I/O, 3 numeric/validation.
"""

import argparse
import os
import sys

import numpy as np

from . import approx, filterbank, imageio, ratelab, transform2d
from .errors import CoeffDumpError, PgmError, RectwaveError

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SYNTH_SIZE = 256


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub, bank_default, bank_list=False):
    if bank_list:
        sub.add_argument("--bank", default=bank_default,
                         help="comma-separated built-in bank list")
    else:
        sub.add_argument("--bank", default=bank_default, choices=filterbank.builtin_names(),
                         help="built-in filter bank")
    sub.add_argument("--filter-spec", metavar="PATH",
                     help="load the bank from a FilterSpec file instead")
    sub.add_argument("--levels", type=int, default=None,
                     help="decomposition depth (default: min(v2(rows), v2(cols), 6))")
    sub.add_argument("--boundary", default="periodic", choices=("periodic", "symmetric"))
    sub.add_argument("--pad", choices=("reflect",), default=None,
                     help="pad non-dyadic images (reports use the cropped region)")
    sub.add_argument("--seed", type=int, default=0, help="seed for synthetic noise images")


def build_parser():
    parser = _Parser(prog="rectwave", description=__doc__.splitlines()[0])
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("decompose", help="write a composite plane and a coefficient dump")
    _add_common(p, "crf137")
    p.add_argument("input")
    p.add_argument("--transform", default="rect", choices=("rect", "square"))
    p.add_argument("--out", help="output prefix (writes <out>.pgm and <out>.rwc)")

    p = cmds.add_parser("compress", help="N-term compression of one image")
    _add_common(p, "crf137")
    p.add_argument("input")
    p.add_argument("--transform", default="rect", choices=("rect", "square"))
    p.add_argument("--ratio", type=float, help="keep total/R coefficients")
    p.add_argument("--keep-n", type=int, help="keep exactly N coefficients")
    p.add_argument("--strategy", default="topn", choices=("topn", "theorem"))
    p.add_argument("--M", type=int, default=1, help="derivative order for --strategy theorem")
    p.add_argument("--p", type=float, default=2.0, help="L_p index for --strategy theorem")
    p.add_argument("--out", help="reconstructed PGM path")
    p.add_argument("--csv", help="append the report row to this CSV file")

    p = cmds.add_parser("compare", help="both transforms x ratios x banks on one image")
    _add_common(p, "d4,crf137", bank_list=True)
    p.add_argument("input")
    p.add_argument("--ratio", default="80,160", help="comma-separated ratio list")
    p.add_argument("--csv", help="CSV output path (default: stdout)")

    p = cmds.add_parser("energy", help="per-level edge/cross energy of the square transform")
    _add_common(p, "d4")
    p.add_argument("input")
    p.add_argument("--csv", help="CSV output path (default: stdout)")

    p = cmds.add_parser("rate", help="TopN error curves and log-log slopes")
    _add_common(p, "haar")
    p.add_argument("input", help="image, synthetic tag, or an existing curve CSV to refit")
    p.add_argument("--transform", default="both", choices=("rect", "square", "both"))
    p.add_argument("--budgets", default=",".join(str(2 ** k) for k in range(8, 15)),
                   help="comma-separated ascending kept-coefficient counts")
    p.add_argument("--q", type=float, default=2.0, help="error norm index")
    p.add_argument("--csv", help="CSV output path (default: stdout)")

    p = cmds.add_parser("validate-filter", help="validate a bank and report moments")
    p.add_argument("--bank", choices=filterbank.builtin_names())
    p.add_argument("--filter-spec", metavar="PATH")
    p.add_argument("--tol", type=float, default=1e-10)
    return parser


def _get_bank(args):
    if getattr(args, "filter_spec", None):
        with open(args.filter_spec, "r", encoding="utf-8") as fh:
            return filterbank.load_filter_spec(fh.read())
    return filterbank.builtin(args.bank)


def _to_byte_range(img):
    lo, hi = float(img.min()), float(img.max())
    if hi == lo:
        return np.full_like(img, 127.5)
    return 255.0 * (img - lo) / (hi - lo)


def _load_input(source, seed, raw=False):
    """Returns (image, name).  source is a path or a synthetic 'tag[:size]'."""
    tag, _, size = source.partition(":")
    if tag in ratelab.TEST_FUNCTION_TAGS or tag == "noise":
        n = int(size) if size else DEFAULT_SYNTH_SIZE
        if tag == "noise":
            img = np.random.default_rng(seed).uniform(0.0, 255.0, size=(n, n))
        else:
            img = ratelab.sample_function(tag, n)
            if not raw:
                img = img * 255.0 if tag in ("axis_edges", "diagonal_edge") \
                    else _to_byte_range(img)
        return img, f"{tag}:{n}"
    return imageio.load_pgm(source), os.path.basename(source)


def _pad_reflect(img, mult):
    rows, cols = img.shape
    pr = (-rows) % mult
    pc = (-cols) % mult
    if pr == 0 and pc == 0:
        return img, (rows, cols)
    if pr >= rows or pc >= cols:
        raise RectwaveError(f"image {rows}x{cols} too small to pad to a multiple of {mult}")
    return np.pad(img, ((0, pr), (0, pc)), mode="reflect"), (rows, cols)


def _prepare(args, raw=False):
    img, name = _load_input(args.input, args.seed, raw)
    crop = img.shape
    if args.pad:
        levels = args.levels if args.levels else transform2d.MAX_DEFAULT_LEVELS
        img, crop = _pad_reflect(img, 1 << levels)
    return img, name, crop


def _forward(img, fb, transform, levels, boundary):
    if transform == "rect":
        return transform2d.rect_forward(img, fb, levels, levels, boundary)
    return transform2d.square_forward(img, fb, levels, boundary)


def _inverse(container, fb):
    if isinstance(container, transform2d.RectGrid):
        return transform2d.rect_inverse(container, fb)
    return transform2d.square_inverse(container, fb)


def _write_csv(path, lines):
    text = "\n".join(lines) + "\n"
    if path:
        new = not (os.path.exists(path) and os.path.getsize(path) > 0)
        with open(path, "a", encoding="utf-8") as fh:
            if not new:
                lines = [l for l in lines if not l.startswith(("image,", "transform,", "level,"))]
                text = "\n".join(lines) + "\n" if lines else ""
            fh.write(text)
    else:
        sys.stdout.write(text)


def _compress_one(img, name, fb, transform, levels, boundary, strategy):
    container = _forward(img, fb, transform, levels, boundary)
    outcome = approx.apply_selection(container, strategy, fb)
    if outcome.kept == outcome.total:
        # full-keep selection is the identity; skip the fp round trip
        return img.copy(), outcome
    recon = _inverse(outcome.container, fb)
    return recon, outcome


def cmd_decompose(args):
    img, name, _ = _prepare(args)
    fb = _get_bank(args)
    container = _forward(img, fb, args.transform, args.levels, args.boundary)
    prefix = args.out or f"{os.path.splitext(args.input)[0]}.{args.transform}"
    imageio.save_pgm(prefix + ".pgm", imageio.render_composite(container))
    with open(prefix + ".rwc", "wb") as fh:
        fh.write(imageio.dump_coeffs(container))
    print(f"wrote {prefix}.pgm and {prefix}.rwc")
    return EXIT_OK


def _make_strategy(args, total):
    if args.keep_n is not None:
        n = args.keep_n
    elif args.ratio is not None:
        if args.ratio <= 0:
            raise UsageError("--ratio must be positive")
        n = round(total / args.ratio)
    else:
        raise UsageError("compress needs --ratio or --keep-n")
    if args.strategy == "theorem":
        return approx.TheoremThreshold(args.M, args.p, n)
    return approx.TopN(n)


def cmd_compress(args):
    img, name, crop = _prepare(args)
    fb = _get_bank(args)
    strategy = _make_strategy(args, img.size)
    recon, outcome = _compress_one(img, name, fb, args.transform, args.levels,
                                   args.boundary, strategy)
    rows, cols = crop
    report = approx.compress_report(img[:rows, :cols], recon[:rows, :cols],
                                    outcome.kept, outcome.total, outcome.strategy,
                                    args.transform, fb.name, name)
    if args.out:
        imageio.save_pgm(args.out, recon[:rows, :cols])
    _write_csv(args.csv, [approx.CSV_HEADER, report.csv_row()])
    return EXIT_OK


def cmd_compare(args):
    img, name, crop = _prepare(args)
    rows, cols = crop
    if args.filter_spec:
        with open(args.filter_spec, "r", encoding="utf-8") as fh:
            bank_pool = [filterbank.load_filter_spec(fh.read())]
    else:
        bank_pool = [filterbank.builtin(b.strip())
                     for b in args.bank.split(",") if b.strip()]
    try:
        ratios = sorted(float(r) for r in args.ratio.split(","))
    except ValueError:
        raise UsageError(f"bad --ratio list {args.ratio!r}") from None
    lines = [approx.CSV_HEADER]
    for fb in sorted(bank_pool, key=lambda b: b.name):
        for transform in ("rect", "square"):
            for ratio in ratios:
                n = round(img.size / ratio)
                recon, outcome = _compress_one(img, name, fb, transform, args.levels,
                                               args.boundary, approx.TopN(n))
                report = approx.compress_report(img[:rows, :cols], recon[:rows, :cols],
                                                outcome.kept, outcome.total,
                                                outcome.strategy, transform, fb.name, name)
                lines.append(report.csv_row())
    _write_csv(args.csv, lines)
    return EXIT_OK


def cmd_energy(args):
    img, name, _ = _prepare(args)
    fb = _get_bank(args)
    pyr = transform2d.square_forward(img, fb, args.levels, args.boundary)
    table = transform2d.energy_distribution(pyr)
    _write_csv(args.csv, table.to_csv().splitlines())
    return EXIT_OK


def _parse_budgets(text):
    try:
        budgets = [int(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise UsageError(f"bad --budgets list {text!r}") from None
    if not budgets:
        raise UsageError("empty --budgets list")
    if any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise UsageError("budgets must be strictly increasing")
    return budgets


def _refit_curves_csv(path, args):
    curves = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith(("#", "transform,")):
                continue
            transform, bank, n, err = line.split(",")
            curves.setdefault((transform, bank), []).append((int(n), float(err)))
    lines = []
    for (transform, bank), pts in sorted(curves.items()):
        pts.sort()
        curve = ratelab.RateCurve(np.array([p[0] for p in pts]),
                                  np.array([p[1] for p in pts]), args.q, transform, bank)
        slope = ratelab.fit_loglog_slope(curve)
        lines.append(f"# slope {transform} {bank} {slope:.6f}")
    _write_csv(None, lines)
    return EXIT_OK


def cmd_rate(args):
    budgets = _parse_budgets(args.budgets)
    if args.input.endswith(".csv"):
        return _refit_curves_csv(args.input, args)
    img, name, _ = _prepare(args, raw=True)
    fb = _get_bank(args)
    transforms = ("rect", "square") if args.transform == "both" else (args.transform,)
    lines = ["transform,bank,N,error_q"]
    slopes = []
    for transform in transforms:
        curve = ratelab.rate_curve(img, transform, fb, budgets, args.q,
                                   args.levels, args.boundary)
        lines.extend(curve.to_csv().splitlines()[1:])
        slope = ratelab.fit_loglog_slope(curve)
        slopes.append(f"# slope {transform} {fb.name} {slope:.6f}")
    _write_csv(args.csv, lines + slopes)
    return EXIT_OK


def cmd_validate_filter(args):
    if not args.bank and not args.filter_spec:
        raise UsageError("validate-filter needs --bank or --filter-spec")
    fb = _get_bank(args)
    report = filterbank.validate_biorthogonality(fb, args.tol)
    moments = filterbank.discrete_vanishing_moments(fb)
    status = "PASS" if report.passed else "FAIL"
    print(f"{status} bank={fb.name} deviation={report.max_deviation:.3e} "
          f"tol={report.tol:g} dual_moments={moments} (declared {fb.m_dual_vanishing})")
    return EXIT_OK if report.passed else EXIT_NUMERIC


COMMANDS = {
    "decompose": cmd_decompose,
    "compress": cmd_compress,
    "compare": cmd_compare,
    "energy": cmd_energy,
    "rate": cmd_rate,
    "validate-filter": cmd_validate_filter,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PgmError, CoeffDumpError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RectwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
