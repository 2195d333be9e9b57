"""Command-line front end: corrupt, denoise, score, and benchmark.

Exit codes: 0 on success, 1 on IO/format/domain errors, 2 when a denoise run
ends in numerical failure (the image is still written for inspection).
"""

from __future__ import annotations

import argparse
import csv
import secrets
import sys
from dataclasses import dataclass
from pathlib import Path

from .corpus import make_corpus
from .errors import DomainError, FormatError, NumericalError, ShapeError
from .images import quantize, read_image, write_image
from .metrics import measure
from .noise import NoiseSpec, add_poisson_noise
from .solver import (
    EXPLICIT,
    NUMERICAL_FAILURE,
    SEMI_IMPLICIT,
    DenoiseResult,
    SolverParams,
    denoise,
)

__all__ = ["BenchRow", "main"]

TRACE_HEADER = ["iter", "energy", "rel_change", "min_px", "max_px"]
BENCH_HEADER = ["id", "width", "height", "scheme", "psnr_db", "ssim", "iterations", "time_ms"]


@dataclass
class BenchRow:
    """One benchmark CSV row; metric fields are None for failed runs."""

    image_id: str
    width: int | None
    height: int | None
    scheme: str
    psnr_db: float | None
    ssim: float | None
    iterations: int | None
    time_ms: float | None


def _fmt(value) -> str:
    # repr of a Python float round-trips exactly, so re-parsing the CSV
    # reproduces averages bit-for-bit; infinities render as 'inf'.
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _write_trace(path, result: DenoiseResult) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for rec in result.trace:
            writer.writerow(
                [
                    rec.iteration,
                    _fmt(rec.energy.total),
                    _fmt(rec.rel_change),
                    _fmt(rec.min_pixel),
                    _fmt(rec.max_pixel),
                ]
            )


def cmd_noise(args) -> int:
    img = read_image(args.input)
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    print(f"seed={seed}")
    noisy = add_poisson_noise(img, NoiseSpec(seed))
    write_image(noisy, args.out)
    return 0


def _params_from_args(args) -> SolverParams:
    params = SolverParams.defaults(args.scheme)
    overrides = {}
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.tol is not None:
        overrides["tolerance"] = args.tol
    if args.eps is not None:
        overrides["epsilon"] = args.eps
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    if not overrides:
        return params
    from dataclasses import replace

    return replace(params, **overrides)


def cmd_denoise(args) -> int:
    img = read_image(args.input)
    params = _params_from_args(args)
    result = denoise(img, params)
    write_image(result.image, args.out)
    if args.trace:
        _write_trace(args.trace, result)
    print(
        f"termination={result.termination} iterations={result.iterations} "
        f"wall_time_s={result.wall_time:.3f}"
    )
    return 2 if result.termination == NUMERICAL_FAILURE else 0


def cmd_metrics(args) -> int:
    ref = read_image(args.reference)
    test = read_image(args.test)
    report = measure(ref, test)
    print(f"psnr_db={report.psnr:.6f} ssim={report.ssim:.6f}")
    return 0


def _bench_one(clean, noisy, image_id: str, scheme: str) -> BenchRow:
    height, width = clean.shape
    result = denoise(noisy, SolverParams.defaults(scheme))
    report = measure(clean, result.image)
    return BenchRow(
        image_id=image_id,
        width=width,
        height=height,
        scheme=scheme,
        psnr_db=report.psnr,
        ssim=report.ssim,
        iterations=result.iterations,
        time_ms=result.wall_time * 1e3,
    )


def cmd_bench(args) -> int:
    manifest = Path(args.manifest)
    entries = [line.strip() for line in manifest.read_text().splitlines() if line.strip()]
    if not entries:
        print("error: manifest lists no images", file=sys.stderr)
        return 1
    schemes = args.scheme or [SEMI_IMPLICIT, EXPLICIT]

    rows: list[BenchRow] = []
    for index, entry in enumerate(entries):
        path = Path(entry)
        if not path.is_absolute():
            path = manifest.parent / path
        try:
            clean = read_image(path)
            noisy = quantize(
                add_poisson_noise(clean, NoiseSpec((args.seed + index) % 2**64))
            )
        except (OSError, FormatError, DomainError, ShapeError) as exc:
            print(f"bench: {entry}: {exc}", file=sys.stderr)
            for scheme in schemes:
                rows.append(BenchRow(entry, None, None, scheme, None, None, None, None))
            continue
        for scheme in schemes:
            try:
                rows.append(_bench_one(clean, noisy, entry, scheme))
            except (DomainError, ShapeError, NumericalError) as exc:
                print(f"bench: {entry} [{scheme}]: {exc}", file=sys.stderr)
                height, width = clean.shape
                rows.append(BenchRow(entry, width, height, scheme, None, None, None, None))

    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.image_id,
                    "" if row.width is None else row.width,
                    "" if row.height is None else row.height,
                    row.scheme,
                    _fmt(row.psnr_db),
                    _fmt(row.ssim),
                    "" if row.iterations is None else row.iterations,
                    _fmt(row.time_ms),
                ]
            )
        # Per-scheme average rows over the successful runs, mirroring the
        # usual benchmark-table footer.
        for scheme in schemes:
            scored = [r for r in rows if r.scheme == scheme and r.psnr_db is not None]
            if not scored:
                writer.writerow(["average", "", "", scheme, "", "", "", ""])
                continue
            n = len(scored)
            writer.writerow(
                [
                    "average",
                    "",
                    "",
                    scheme,
                    _fmt(sum(r.psnr_db for r in scored) / n),
                    _fmt(sum(r.ssim for r in scored) / n),
                    "",
                    _fmt(sum(r.time_ms for r in scored) / n),
                ]
            )

    succeeded = {r.image_id for r in rows if r.psnr_db is not None}
    return 0 if succeeded else 1


def cmd_corpus(args) -> int:
    paths = make_corpus(args.out_dir, seed=args.seed)
    print(f"wrote {len(paths)} images and manifest.txt to {args.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvpoisson",
        description="Total-variation Poisson denoising toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_noise = sub.add_parser("noise", help="corrupt an image with Poisson noise")
    p_noise.add_argument("--in", dest="input", required=True, help="clean input image")
    p_noise.add_argument("--out", required=True, help="output image path")
    p_noise.add_argument("--seed", type=int, default=None,
                         help="64-bit seed; generated and printed if omitted")
    p_noise.set_defaults(func=cmd_noise)

    p_den = sub.add_parser("denoise", help="restore a noisy image")
    p_den.add_argument("--in", dest="input", required=True, help="noisy input image")
    p_den.add_argument("--out", required=True, help="restored image path")
    p_den.add_argument("--scheme", choices=[SEMI_IMPLICIT, EXPLICIT],
                       default=SEMI_IMPLICIT)
    p_den.add_argument("--beta", type=float, default=None, help="fidelity weight")
    p_den.add_argument("--tau", type=float, default=None, help="time step")
    p_den.add_argument("--tol", type=float, default=None,
                       help="relative energy-change stop threshold")
    p_den.add_argument("--eps", type=float, default=None,
                       help="gradient-magnitude regularization")
    p_den.add_argument("--max-iter", type=int, default=None)
    p_den.add_argument("--trace", default=None, help="write per-iteration CSV here")
    p_den.set_defaults(func=cmd_denoise)

    p_met = sub.add_parser("metrics", help="PSNR/SSIM of a test image vs a reference")
    p_met.add_argument("reference", help="clean reference image")
    p_met.add_argument("test", help="image to score")
    p_met.set_defaults(func=cmd_metrics)

    p_bench = sub.add_parser("bench", help="corrupt+denoise+score a manifest of images")
    p_bench.add_argument("--manifest", required=True,
                         help="text file of clean image paths, one per line")
    p_bench.add_argument("--csv", required=True, help="output CSV path")
    p_bench.add_argument("--seed", type=int, default=0,
                         help="base seed; image i uses seed+i")
    p_bench.add_argument("--scheme", choices=[SEMI_IMPLICIT, EXPLICIT], nargs="+",
                         default=None, help="schemes to run (default: both)")
    p_bench.set_defaults(func=cmd_bench)

    p_corpus = sub.add_parser("corpus", help="generate the synthetic benchmark corpus")
    p_corpus.add_argument("--out-dir", required=True)
    p_corpus.add_argument("--seed", type=int, default=7)
    p_corpus.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, FormatError, DomainError, ShapeError, NumericalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
