"""Command-line surface.

Subcommands wrap the library for desk-scale experiments and emit
machine-readable CSV/JSON reports.  Exit codes: 0 success, 2 configuration
error, 3 I/O or parse error.  The optimized point-set cache directory can
be relocated with the SWQMC_CACHE_DIR environment variable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, cache, clouds
from .cap_discrepancy import spherical_cap_discrepancy
from .cube import halton_generate, sobol_generate
from .errors import ConfigError, ParseError, SwqmcError
from .estimators import (
    SCHEME_NAMES,
    estimate_sw,
    resolve_directions,
    spec_from_name,
)
from .flows import FlowConfig, color_transfer, euler_interpolate
from .ppm import read_ppm, write_ppm
from .report import ExperimentReport
from .seeding import derive_seed
from .sphere import scaled_map_baseline

QSW_VARIANTS = ("gqsw", "eqsw", "sqsw", "dqsw", "cqsw")

GEN_CONSTRUCTIONS = ("gaussian_map", "equal_area", "spiral", "max_distance",
                     "min_coulomb", "scaled_map_baseline", "random_uniform")


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swqmc",
        description="Sliced Wasserstein distances with quasi-Monte Carlo "
                    "direction sets",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-points", help="construct a sphere point set, save "
                                          "it, and print its cap discrepancy")
    p.add_argument("--construction", required=True, choices=GEN_CONSTRUCTIONS)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("make-cloud", help="write a deterministic synthetic cloud")
    p.add_argument("kind", choices=clouds.SYNTHETIC_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("approx-error", help="absolute estimation error against "
                                            "a high-L MC reference")
    p.add_argument("--cloud-a", default=None)
    p.add_argument("--cloud-b", default=None)
    p.add_argument("--synthetic-dirac", action="store_true",
                   help="use the unit-displacement dirac pair with its "
                        "closed-form truth instead of cloud files")
    p.add_argument("--L-grid", type=_int_list, default=[10, 100, 500, 1000])
    p.add_argument("--reference-L", type=int, default=100_000)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--seeds", type=int, default=10, help="MC seeds per L")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("interpolate", help="Euler flow between two clouds with "
                                           "checkpointed exact W2")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--checkpoints", type=_int_list, default=None,
                   help="comma-separated step indices (default: 5 evenly spaced)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("style-transfer", help="color transfer between PPM images")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--k", type=int, default=3000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None,
                   help="optional report path (defaults next to --out)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("discrepancy-curve", help="cap discrepancies across "
                                                 "constructions and sizes")
    p.add_argument("--constructions", default="spiral,equal_area,gaussian_map,"
                                              "min_coulomb,random",
                   help="comma-separated; 'random' averages over seeds")
    p.add_argument("--L-grid", type=_int_list, default=[10, 50, 100])
    p.add_argument("--random-seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


# ---------------------------------------------------------------------------
# Point-set construction shared by gen-points and discrepancy-curve


def _construct_pointset(construction: str, L: int, seed: int | None):
    if construction == "random_uniform" or construction == "random":
        if seed is None:
            raise ConfigError("random construction requires --seed")
        from .sphere import random_uniform
        return random_uniform(L, 3, seed)
    if construction == "scaled_map_baseline":
        return scaled_map_baseline(halton_generate(3, L))
    spec = spec_from_name({"gaussian_map": "gqsw", "equal_area": "eqsw",
                           "spiral": "sqsw", "max_distance": "dqsw",
                           "min_coulomb": "cqsw"}[construction], L)
    return resolve_directions(spec, 3)


def _cmd_gen_points(args) -> int:
    points = _construct_pointset(args.construction, args.L, args.seed)
    out = Path(args.out)
    cache.write_pointset(out, points.directions)
    disc = spherical_cap_discrepancy(points)
    print(f"construction={args.construction} L={args.L} "
          f"cap_discrepancy={disc:.6g}")
    print(f"wrote {out}")
    return 0


def _cmd_make_cloud(args) -> int:
    cloud = clouds.make_synthetic(args.kind, args.n, args.seed)
    clouds.save_point_cloud(args.out, cloud)
    print(f"wrote {args.out} ({cloud.size} points)")
    return 0


def _cmd_approx_error(args) -> int:
    if args.synthetic_dirac:
        mu, nu = clouds.dirac_pair()
        truth = 1.0 / 3.0
        source = "dirac-pair"
    else:
        if not args.cloud_a or not args.cloud_b:
            raise ConfigError("provide --cloud-a and --cloud-b, or --synthetic-dirac")
        mu = clouds.load_point_cloud(args.cloud_a)
        nu = clouds.load_point_cloud(args.cloud_b)
        ref_spec = spec_from_name("mc", args.reference_L, order=args.p,
                                  seed=derive_seed(args.seed, 999_983))
        truth = estimate_sw(mu, nu, ref_spec).value
        source = f"{args.cloud_a}|{args.cloud_b}"

    report = ExperimentReport(
        experiment="approx-error",
        config={
            "clouds": source,
            "p": args.p,
            "reference_L": args.reference_L,
            "mc_seeds": args.seeds,
            "master_seed": args.seed,
            "L_grid": ",".join(str(L) for L in args.L_grid),
        },
        columns=("method", "L", "abs_error"),
    )
    for L in args.L_grid:
        errs = []
        for s in range(args.seeds):
            spec = spec_from_name("mc", L, order=args.p,
                                  seed=derive_seed(args.seed, s))
            errs.append(abs(estimate_sw(mu, nu, spec).value - truth))
        report.add_row("mc", L, float(np.mean(errs)))
        for name in QSW_VARIANTS:
            spec = spec_from_name(name, L, order=args.p)
            err = abs(estimate_sw(mu, nu, spec).value - truth)
            report.add_row(name, L, err)
    path = report.write(args.out, args.format)
    print(f"wrote {path} (created {report.environment['timestamp']})")
    return 0


def _default_checkpoints(steps: int) -> list[int]:
    marks = sorted({max(1, round(steps * k / 5)) for k in range(1, 6)})
    return [m for m in marks if m <= steps]


def _cmd_interpolate(args) -> int:
    source = clouds.load_point_cloud(args.source)
    target = clouds.load_point_cloud(args.target)
    checkpoints = args.checkpoints or _default_checkpoints(args.steps)
    spec = spec_from_name(args.scheme, args.L, seed=args.seed)
    config = FlowConfig(steps=args.steps, step_size=args.eta, estimator=spec,
                        checkpoint_steps=tuple(checkpoints))
    trace = euler_interpolate(source, target, config)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = ExperimentReport(
        experiment="interpolate",
        config={
            "source": args.source, "target": args.target,
            "scheme": args.scheme, "L": args.L, "steps": args.steps,
            "eta": args.eta, "seed": "none" if args.seed is None else args.seed,
            "checkpoints": ",".join(str(c) for c in checkpoints),
        },
        columns=("step", "w2"),
    )
    for step, snapshot, w2 in zip(trace.checkpoint_steps, trace.snapshots,
                                  trace.w2_to_target):
        clouds.save_point_cloud(out_dir / f"checkpoint_{step:06d}.xyz", snapshot)
        report.add_row(step, w2)
    path = report.write(out_dir / f"interpolation.{args.format}", args.format)
    print(f"wrote {path} (created {report.environment['timestamp']})")
    return 0


def _cmd_style_transfer(args) -> int:
    source = read_ppm(args.source)
    target = read_ppm(args.target)
    spec = spec_from_name(args.scheme, args.L, seed=args.seed)
    config = FlowConfig(steps=args.steps, step_size=args.eta, estimator=spec)
    result, palette_w2 = color_transfer(source, target, config, k=args.k,
                                        kmeans_seed=0 if args.seed is None else args.seed)
    write_ppm(args.out, result)
    report = ExperimentReport(
        experiment="style-transfer",
        config={
            "source": args.source, "target": args.target,
            "scheme": args.scheme, "L": args.L, "steps": args.steps,
            "eta": args.eta, "k": args.k,
            "seed": "none" if args.seed is None else args.seed,
        },
        columns=("final_palette_w2",),
    )
    report.add_row(palette_w2)
    report_path = args.report or str(Path(args.out).with_suffix(f".{args.format}"))
    path = report.write(report_path, args.format)
    print(f"final_palette_w2={palette_w2:.6g}")
    print(f"wrote {args.out} and {path} (created {report.environment['timestamp']})")
    return 0


def _envelope(L: float) -> float:
    return L ** -0.75 * np.sqrt(np.log(L))


def _cmd_discrepancy_curve(args) -> int:
    constructions = [c.strip() for c in args.constructions.split(",") if c.strip()]
    report = ExperimentReport(
        experiment="discrepancy-curve",
        config={
            "constructions": ",".join(constructions),
            "L_grid": ",".join(str(L) for L in args.L_grid),
            "random_seeds": args.random_seeds,
            "master_seed": args.seed,
        },
        columns=("construction", "L", "discrepancy"),
    )
    values: dict = {}
    for construction in constructions:
        for L in args.L_grid:
            if construction == "random":
                per_seed = [
                    spherical_cap_discrepancy(
                        _construct_pointset("random", L, derive_seed(args.seed, s))
                    )
                    for s in range(args.random_seeds)
                ]
                disc = float(np.median(per_seed))
            else:
                disc = spherical_cap_discrepancy(
                    _construct_pointset(construction, L, args.seed)
                )
            values[(construction, L)] = disc
            report.add_row(construction, L, disc)
    for construction in constructions:
        ratios = [values[(construction, L)] / _envelope(L)
                  for L in args.L_grid if L > 1]
        report.extra[f"envelope_C_{construction}"] = float(max(ratios))
    path = report.write(args.out, args.format)
    print(f"wrote {path} (created {report.environment['timestamp']})")
    return 0


_COMMANDS = {
    "gen-points": _cmd_gen_points,
    "make-cloud": _cmd_make_cloud,
    "approx-error": _cmd_approx_error,
    "interpolate": _cmd_interpolate,
    "style-transfer": _cmd_style_transfer,
    "discrepancy-curve": _cmd_discrepancy_curve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SwqmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
