"""Command-line front end.

Exit status: 0 on success, 1 when a bound check fails (a Lipschitz
violation or a principal-submatrix bound breach), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .errors import InputError, InsufficientSamplesError
from .formats import read_matrix_csv, read_spectrum, write_matrix_csv, write_spectrum
from .metrics import format_float
from .operators import (
    HermitianMatrix,
    Spectrum,
    eigenvalues_sorted,
    gen_clustered,
    gen_goe,
    gen_gue,
    gen_sphere_laplacian,
    ky_fan2,
    rho,
    sigma_k,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

parse_spectrum_file = read_spectrum
parse_matrix_csv = read_matrix_csv


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_report(report: dict, outdir: Path, name: str = "report.json") -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False)
    (outdir / name).write_text(text + "\n", encoding="ascii")


def write_samples_csv(path: Path, column: str, values) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"index,{column}\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{format_float(v)}\n")


def write_tail_tsv(path: Path, curve: ex.TailCurve) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("t\tq\n")
        for t, q in zip(curve.grid, curve.q):
            fh.write(f"{format_float(t)}\t{format_float(q)}\n")


# -- argument parsing -----------------------------------------------------


def _add_source(p, *, ensembles=("goe", "gue", "clustered", "sphere")):
    g = p.add_argument_group("operator")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--spectrum", type=Path, help="spectrum file (one eigenvalue per line)")
    src.add_argument("--matrix", type=Path, help="real symmetric matrix as CSV")
    src.add_argument("--ensemble", choices=ensembles, help="generate the operator")
    g.add_argument("--n", type=int, help="dimension for generated operators")
    g.add_argument("--center", type=float, default=0.0)
    g.add_argument("--spread", type=float, default=0.1)
    g.add_argument("--outliers", type=str, default="", help="comma-separated outlier eigenvalues")
    g.add_argument("--dimension", type=int, default=2, help="sphere surface dimension")
    g.add_argument("--degree", type=int, default=3, help="maximal spherical-harmonic degree")


def _add_run(p, *, counts=("N", "M"), model=True):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    defaults = {"N": 400, "M": 2000, "P": 1000}
    helps = {"N": "distance samples", "M": "reference (mean-measure) samples", "P": "subspace pairs"}
    for c in counts:
        p.add_argument(f"--{c}", type=int, default=defaults[c], help=helps[c])
    p.add_argument("--field", choices=("real", "complex"), default="real")
    if model:
        p.add_argument("--model", choices=("haar", "coordinate"), default="haar")
    p.add_argument("--workers", type=int, default=1, help="worker processes (results are identical)")
    p.add_argument("--out", type=Path, help="output directory for reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compressions", allow_abbrev=False, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("functionals", help="rho, sigma_k and the Ky Fan (k),2 norm of an operator")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spectrum", type=Path)
    src.add_argument("--matrix", type=Path)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("generate", help="write an ensemble spectrum (and matrix, when real)")
    _add_source(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("compress", help="sample compressions and dump their spectra")
    _add_source(p)
    _add_run(p, counts=("N",))

    for name, help_ in (("mean-distance", "distance statistics to the pooled mean measure"),
                        ("tail", "exceedance profile and subgaussian fit")):
        p = sub.add_parser(name, help=help_)
        _add_source(p)
        _add_run(p)
        p.add_argument("--metric", choices=("w1", "kolmogorov"), default="w1")
        if name == "tail":
            p.add_argument("--grid", type=str, help="comma-separated offsets t (default: 1..5 sd, 41 points)")

    p = sub.add_parser("lipschitz", help="check the Lipschitz bound on Haar subspace pairs")
    _add_source(p)
    _add_run(p, counts=("P",), model=False)

    p = sub.add_parser("cl", help="principal-submatrix Kolmogorov bounds")
    _add_source(p, ensembles=("goe", "gue"))
    _add_run(p, model=False)

    p = sub.add_parser("invariance", help="diagonal versus conjugated dense representation")
    _add_source(p)
    _add_run(p, model=False)
    p.add_argument("--conjugation", choices=("random", "identity"), default="random")
    return parser


def _resolve_source(args, *, need_matrix=False):
    if args.spectrum is not None:
        src = read_spectrum(args.spectrum)
    elif args.matrix is not None:
        src = read_matrix_csv(args.matrix)
    elif getattr(args, "ensemble", None) is not None:
        if args.n is None and args.ensemble != "sphere":
            raise InputError(f"--n is required for --ensemble {args.ensemble}")
        seed = getattr(args, "seed", None)
        if args.ensemble == "goe":
            src = gen_goe(args.n, seed)
        elif args.ensemble == "gue":
            src = gen_gue(args.n, seed)
        elif args.ensemble == "clustered":
            outliers = [float(x) for x in args.outliers.split(",") if x.strip()]
            src = gen_clustered(args.n, args.center, args.spread, outliers, seed)
        else:
            src = gen_sphere_laplacian(args.dimension, args.degree)
    else:
        raise InputError("give one of --spectrum, --matrix or --ensemble")
    if need_matrix and isinstance(src, Spectrum):
        src = HermitianMatrix.diagonal(src.values)
    return src


def _config(args, src, *, model=None):
    model = model or getattr(args, "model", "haar")
    field = args.field
    if model == "haar" and isinstance(src, HermitianMatrix):
        # Haar compressions depend on the operator only through its spectrum
        if src.field == "complex":
            field = "complex"
        src = eigenvalues_sorted(src)
    return ex.ExperimentConfig(
        src,
        args.k,
        n_samples=getattr(args, "N", 400),
        n_reference=getattr(args, "M", 2000),
        n_pairs=getattr(args, "P", 1000),
        seed=args.seed,
        field=field,
        model=model,
        workers=args.workers,
    )


def _spectrum_of(src) -> Spectrum:
    return src if isinstance(src, Spectrum) else eigenvalues_sorted(src)


# -- subcommands ----------------------------------------------------------


def cmd_functionals(args):
    s = _spectrum_of(_resolve_source(args))
    vals = {"n": s.n, "k": args.k, "rho": rho(s), "sigma_k": sigma_k(s, args.k), "ky_fan2": ky_fan2(s.values, args.k)}
    if args.out:
        write_report({"kind": "functionals", **vals}, args.out)
    print(f"rho={format_float(vals['rho'])} sigma_k={format_float(vals['sigma_k'])} "
          f"ky_fan2={format_float(vals['ky_fan2'])}")
    return EXIT_OK


def cmd_generate(args):
    src = _resolve_source(args)
    args.out.mkdir(parents=True, exist_ok=True)
    if isinstance(src, HermitianMatrix) and src.field == "real":
        write_matrix_csv(src, args.out / "matrix.csv")
    write_spectrum(_spectrum_of(src), args.out / "spectrum.txt")
    print(f"wrote n={src.n} to {args.out}")
    return EXIT_OK


def cmd_compress(args):
    src = _resolve_source(args, need_matrix=args.model == "coordinate")
    cfg = _config(args, src)
    rows = [ex.compression_eigenvalues(cfg, ex.sample_stream(cfg.seed, "compress", i)) for i in range(cfg.n_samples)]
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        with open(args.out / "spectra.csv", "w", encoding="ascii") as fh:
            fh.write("index," + ",".join(f"lambda_{j + 1}" for j in range(cfg.k)) + "\n")
            for i, r in enumerate(rows):
                fh.write(f"{i}," + ",".join(format_float(x) for x in r[::-1]) + "\n")
    print(f"sampled {len(rows)} compressions of n={cfg.n} to k={cfg.k} ({cfg.model})")
    return EXIT_OK


def cmd_mean_distance(args):
    src = _resolve_source(args, need_matrix=args.model == "coordinate")
    rep = ex.mean_distance(_config(args, src), args.metric)
    if args.out:
        write_report(rep.to_dict(), args.out)
        write_samples_csv(args.out / "samples.csv", args.metric, rep.stats.samples)
    print(f"mean={format_float(rep.stats.mean)} stderr={format_float(rep.stats.stderr)} "
          f"theorem_ratio={format_float(rep.ratio)}")
    return EXIT_OK


def cmd_tail(args):
    src = _resolve_source(args, need_matrix=args.model == "coordinate")
    rep = ex.mean_distance(_config(args, src), args.metric)
    stats = rep.stats
    if args.grid:
        grid = [float(x) for x in args.grid.split(",") if x.strip()]
    else:
        grid = stats.sd * np.linspace(1.0, 5.0, 41)
    curve = ex.tail_profile(stats, grid)
    if args.out:
        write_report({**rep.to_dict(), "kind": "tail", "tail": curve.to_dict()}, args.out)
        write_samples_csv(args.out / "samples.csv", args.metric, stats.samples)
        write_tail_tsv(args.out / "tail.tsv", curve)
    print(f"alpha={format_float(curve.alpha)} r_squared={format_float(curve.r_squared)} "
          f"retained={int(curve.retained.sum())} (centered at the empirical mean)")
    return EXIT_OK


def cmd_lipschitz(args):
    src = _resolve_source(args)
    rep = ex.lipschitz_check(_config(args, src, model="haar"))
    if args.out:
        write_report(rep.to_dict(), args.out)
        write_samples_csv(args.out / "pairs.csv", "ratio", rep.ratios)
    print(f"pairs={rep.pairs} violations={rep.violations} max_ratio={format_float(rep.max_ratio)}")
    return EXIT_OK if rep.violations == 0 else EXIT_CHECK_FAILED


def cmd_cl(args):
    src = _resolve_source(args, need_matrix=True)
    rep = ex.cl_check(src, args.k, args.N, args.seed, n_reference=args.M, workers=args.workers)
    if args.out:
        write_report(rep.to_dict(), args.out)
        write_samples_csv(args.out / "samples.csv", "kolmogorov", rep.stats.samples)
    print(f"mean={format_float(rep.stats.mean)} mean_bound={format_float(rep.mean_bound)} "
          f"passed={'yes' if rep.passed else 'no'}")
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_invariance(args):
    s = _spectrum_of(_resolve_source(args))
    rep = ex.conjugation_invariance_check(
        s, args.k, args.seed, n_samples=args.N, n_reference=args.M, conjugation=args.conjugation, workers=args.workers
    )
    if args.out:
        write_report(rep.to_dict(), args.out)
    print(f"diagonal_mean={format_float(rep.diagonal.mean)} dense_mean={format_float(rep.dense.mean)} "
          f"passed={'yes' if rep.passed else 'no'}")
    return EXIT_OK


COMMANDS = {
    "functionals": cmd_functionals,
    "generate": cmd_generate,
    "compress": cmd_compress,
    "mean-distance": cmd_mean_distance,
    "tail": cmd_tail,
    "lipschitz": cmd_lipschitz,
    "cl": cmd_cl,
    "invariance": cmd_invariance,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, InsufficientSamplesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
