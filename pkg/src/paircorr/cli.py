"""Command-line interface: theory tables, pair histograms, point exports,
consistency checks, and Monte Carlo estimates.

Every run emits machine-readable provenance (tool version, the
computation-defining flags, seed): '#'-comment lines in CSV outputs, a
top-level "meta" object in JSON outputs.  Delivery details (output path,
worker count, format) are deliberately excluded so that identical
computations produce byte-identical artifacts regardless of where they are
written or how many workers ran them.

Exit codes: 0 when every requested operation succeeded and every embedded
pass-criterion passed; 1 on failed criteria or runtime errors; 2 on usage
errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from . import __version__, empirical, oracle, pointsets, theory
from .errors import BudgetExceededError, PairCorrError
from .pointsets import LatticePointSet, WedgeSpec

BUDGET_ENV_VAR = "PAIRCORR_BUDGET_POINTS"

_SIGMA_TOLERANCE = 3.0
_RADIAL_TOLERANCE = 0.01
_WEDGE_TOLERANCE = 0.02
_PRIMITIVE_TOLERANCE = 0.01
_PAIR_REGION_TOLERANCE = 0.02


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: subcommand, computation-defining parameters
    (sorted), and delivery settings."""

    subcommand: str
    params: tuple[tuple[str, object], ...]
    output_path: str | None
    fmt: str
    seed: int | None
    workers: int

    @staticmethod
    def from_args(subcommand: str, args: argparse.Namespace, param_names: Sequence[str]) -> "RunConfig":
        params = tuple(sorted((name, getattr(args, name)) for name in param_names))
        return RunConfig(
            subcommand=subcommand,
            params=params,
            output_path=getattr(args, "out", None),
            fmt=getattr(args, "format", "csv"),
            seed=getattr(args, "seed", None),
            workers=getattr(args, "workers", 0),
        )

    def config_string(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.params)

    def provenance_lines(self) -> list[str]:
        return [
            f"paircorr {__version__}",
            f"command: {self.subcommand}",
            f"config: {self.config_string()}",
        ]

    def meta(self) -> dict:
        return {
            "tool": "paircorr",
            "version": __version__,
            "command": self.subcommand,
            "config": {k: v for k, v in self.params},
        }


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_text(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _exact_cap() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return empirical.DEFAULT_EXACT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise PairCorrError(
            f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}"
        ) from None
    if cap < 1:
        raise PairCorrError(f"{BUDGET_ENV_VAR} must be >= 1, got {cap}")
    return cap


# ---------------------------------------------------------------- theory


def _cmd_theory(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args("theory", args, ["n", "grid", "what"])
    spec = theory.DistributionSpec(args.n)
    grid = np.linspace(0.0, 2.0, args.grid)
    columns = ["lambda"]
    if args.what in ("pdf", "both"):
        columns.append("pdf")
    if args.what in ("cdf", "both"):
        columns.append("cdf")
    rows = []
    for lam in grid:
        lam = float(lam)
        row = {"lambda": lam}
        if "pdf" in columns:
            row["pdf"] = theory.pdf(spec, lam)
        if "cdf" in columns:
            row["cdf"] = theory.cdf(spec, lam)
        rows.append(row)
    if args.format == "json":
        _write_text(_json_text({"meta": cfg.meta(), "rows": rows}), args.out)
    else:
        lines = [f"# {line}" for line in cfg.provenance_lines()]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in columns))
        _write_text("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- pairs


def _cmd_pairs(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(
        "pairs",
        args,
        ["n", "R", "kind", "boundary", "mode", "bins", "samples", "seed", "threshold"],
    )
    ps = LatticePointSet(args.n, args.R, kind=args.kind, boundary=args.boundary)
    if args.mode == "exact":
        hist = empirical.exact_histogram(
            ps, args.bins, max_points=_exact_cap(), workers=args.workers
        )
    else:
        hist = empirical.sampled_histogram(
            ps, args.bins, args.samples, args.seed, workers=args.workers
        )
    gof = empirical.ks_compare(
        hist, theory.DistributionSpec(args.n), threshold=args.threshold
    )
    gof_json = json.dumps(gof.to_json_dict(), sort_keys=True)
    header = cfg.provenance_lines() + [f"gof: {gof_json}"]
    import io

    buf = io.StringIO()
    empirical.write_histogram_csv(hist, buf, header_lines=header)
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        sys.stdout.write(gof_json + "\n")
    return 0 if gof.passed else 1


# ---------------------------------------------------------------- points


def _cmd_points(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args("points", args, ["n", "R", "kind", "boundary"])
    ps = LatticePointSet(args.n, args.R, kind=args.kind, boundary=args.boundary)
    pts = pointsets.points_array(ps)
    lines = [f"# {line}" for line in cfg.provenance_lines()]
    lines.extend(" ".join(str(int(v)) for v in row) for row in pts)
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- mc


def _cmd_mc(args: argparse.Namespace) -> int:
    cfg_names = ["what", "n", "samples", "seed"]
    if args.what == "cap_measure":
        cfg_names.append("half_angle")
    else:
        cfg_names.append("lam")
    cfg = RunConfig.from_args("mc", args, cfg_names)
    if args.what == "region":
        est = oracle.mc_region_volume(
            oracle.RegionSpec(args.n, theory.Lambda(args.lam)),
            args.samples,
            args.seed,
            workers=args.workers,
        )
        analytic = theory.region_volume(theory.DistributionSpec(args.n), args.lam)
    elif args.what == "cap_volume":
        est = oracle.mc_cap_volume(
            args.n, args.lam, args.samples, args.seed, workers=args.workers
        )
        analytic = oracle.analytic_cap_volume(args.n, args.lam)
    else:  # cap_measure
        if args.half_angle is None:
            raise PairCorrError("mc --what cap_measure requires --half-angle")
        est = oracle.mc_cap_measure(
            args.n, args.half_angle, args.samples, args.seed, workers=args.workers
        )
        analytic = pointsets.cap_measure(args.n, args.half_angle)
    rep = oracle.report(est, analytic)
    passed = rep["sigma_distance"] < _SIGMA_TOLERANCE
    payload = {"meta": cfg.meta(), "estimate": rep, "pass": passed}
    _write_text(_json_text(payload), args.out)
    return 0 if passed else 1


# ---------------------------------------------------------------- checks


def _check_entry(name: str, params: dict, fn) -> dict:
    try:
        return {"name": name, "params": params, **fn()}
    except (BudgetExceededError, PairCorrError) as exc:
        return {"name": name, "params": params, "error": str(exc), "pass": False}


def _ratio_result(value: float, target: float, tolerance: float) -> dict:
    return {
        "value": value,
        "target": target,
        "tolerance": tolerance,
        "pass": abs(value - target) <= tolerance,
    }


def _zeta(n: int) -> float:
    """Riemann zeta at integer n >= 2 via Euler–Maclaurin (plenty for checks)."""
    tail_from = 1000
    partial = sum(k ** (-float(n)) for k in range(1, tail_from))
    k = float(tail_from)
    return (
        partial
        + k ** (1.0 - n) / (n - 1.0)
        + 0.5 * k ** (-float(n))
        + n / 12.0 * k ** (-(n + 1.0))
    )


def _cmd_checks(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(
        "checks",
        args,
        ["which", "n", "r", "R", "kind", "lam", "samples", "seed"],
    )
    checks: list[dict] = []
    n = args.n
    if args.which in ("equidist", "all"):
        radial_lam = args.lam if args.lam is not None else 2.0
        checks.append(
            _check_entry(
                "radial_ratio",
                {"kind": args.kind, "n": n, "r": args.r, "lam": radial_lam},
                lambda: _ratio_result(
                    pointsets.radial_check(args.kind, n, args.r, radial_lam),
                    1.0,
                    _RADIAL_TOLERANCE,
                ),
            )
        )
        axis = tuple([1.0] + [0.0] * (n - 1))
        ps = LatticePointSet(n, args.r, kind=args.kind)
        for label, angle in (("pi/6", math.pi / 6), ("pi/3", math.pi / 3), ("pi/2", math.pi / 2)):
            wedge = WedgeSpec(axis=axis, half_angle=angle, radius=args.r)
            checks.append(
                _check_entry(
                    "wedge_ratio",
                    {"kind": args.kind, "n": n, "r": args.r, "half_angle": label},
                    lambda w=wedge: _ratio_result(
                        pointsets.wedge_check(ps, w), 1.0, _WEDGE_TOLERANCE
                    ),
                )
            )

        def primitive_fraction() -> dict:
            n_int = pointsets.count(LatticePointSet(n, args.r, kind="integer"))
            n_prim = pointsets.count(LatticePointSet(n, args.r, kind="primitive"))
            if n_int == 0:
                raise PairCorrError("empty integer set; fraction undefined")
            return _ratio_result(n_prim / n_int, 1.0 / _zeta(n), _PRIMITIVE_TOLERANCE)

        checks.append(
            _check_entry("primitive_fraction", {"n": n, "r": args.r}, primitive_fraction)
        )
    if args.which in ("volume", "all"):
        volume_lam = args.lam if args.lam is not None else 1.0
        spec = theory.DistributionSpec(n)

        def pair_region() -> dict:
            ps = LatticePointSet(n, args.R, kind="integer")
            n_points = pointsets.count(ps)
            pairs = empirical.pair_count_in_region(
                ps, volume_lam, max_points=_exact_cap(), workers=args.workers
            )
            return _ratio_result(
                pairs / n_points**2,
                theory.cdf(spec, volume_lam),
                _PAIR_REGION_TOLERANCE,
            )

        checks.append(
            _check_entry(
                "pair_region_vs_cdf", {"n": n, "R": args.R, "lam": volume_lam}, pair_region
            )
        )

        def mc_region() -> dict:
            est = oracle.mc_region_volume(
                oracle.RegionSpec(n, theory.Lambda(volume_lam)),
                args.samples,
                args.seed,
                workers=args.workers,
            )
            analytic = theory.region_volume(spec, volume_lam)
            sigma = est.sigma_distance(analytic)
            return {
                "value": est.value,
                "target": analytic,
                "sigma_distance": sigma,
                "tolerance": _SIGMA_TOLERANCE,
                "pass": sigma < _SIGMA_TOLERANCE,
            }

        checks.append(
            _check_entry(
                "mc_region_vs_analytic",
                {"n": n, "lam": volume_lam, "samples": args.samples, "seed": args.seed},
                mc_region,
            )
        )
    all_pass = all(c["pass"] for c in checks)
    payload = {"meta": cfg.meta(), "checks": checks, "pass": all_pass}
    _write_text(_json_text(payload), args.out)
    return 0 if all_pass else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paircorr",
        description="Pair-distance statistics of lattice points in n-balls.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_theory = sub.add_parser("theory", help="tabulate the analytic pdf/cdf on a lambda grid")
    p_theory.add_argument("--n", type=int, required=True, help="dimension")
    p_theory.add_argument("--grid", type=int, default=201, help="number of lambda grid points")
    p_theory.add_argument("--what", choices=["pdf", "cdf", "both"], default="both")
    p_theory.add_argument("--format", choices=["csv", "json"], default="csv")
    p_theory.add_argument("--out", default=None, help="output path (default stdout)")
    p_theory.set_defaults(func=_cmd_theory)

    p_pairs = sub.add_parser("pairs", help="empirical pair-distance histogram + goodness of fit")
    p_pairs.add_argument("--n", type=int, required=True)
    p_pairs.add_argument("--R", type=float, required=True, help="ball radius")
    p_pairs.add_argument("--kind", choices=["integer", "primitive"], default="integer")
    p_pairs.add_argument("--boundary", choices=["open", "closed"], default="closed")
    p_pairs.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p_pairs.add_argument("--bins", type=int, default=empirical.DEFAULT_BINS)
    p_pairs.add_argument("--samples", type=int, default=1_000_000, help="sampled-mode pair draws")
    p_pairs.add_argument("--seed", type=int, default=0)
    p_pairs.add_argument("--threshold", type=float, default=0.01, help="KS pass threshold")
    p_pairs.add_argument("--workers", type=int, default=0, help="0 = auto")
    p_pairs.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_pairs.set_defaults(func=_cmd_pairs)

    p_points = sub.add_parser("points", help="export the lattice point list")
    p_points.add_argument("--n", type=int, required=True)
    p_points.add_argument("--R", type=float, required=True)
    p_points.add_argument("--kind", choices=["integer", "primitive"], default="integer")
    p_points.add_argument("--boundary", choices=["open", "closed"], default="closed")
    p_points.add_argument("--out", default=None)
    p_points.set_defaults(func=_cmd_points)

    p_checks = sub.add_parser("checks", help="equidistribution / volume-heuristic check battery")
    p_checks.add_argument("--which", choices=["equidist", "volume", "all"], required=True)
    p_checks.add_argument("--n", type=int, default=2)
    p_checks.add_argument("--r", type=float, default=200.0, help="equidistribution radius")
    p_checks.add_argument("--R", type=float, default=50.0, help="volume-heuristic lattice radius")
    p_checks.add_argument("--kind", choices=["integer", "primitive"], default="integer")
    p_checks.add_argument("--lambda", dest="lam", type=float, default=None)
    p_checks.add_argument("--samples", type=int, default=1_000_000)
    p_checks.add_argument("--seed", type=int, default=0)
    p_checks.add_argument("--workers", type=int, default=0)
    p_checks.add_argument("--out", default=None)
    p_checks.set_defaults(func=_cmd_checks)

    p_mc = sub.add_parser("mc", help="Monte Carlo estimate vs analytic value")
    p_mc.add_argument("--what", choices=["region", "cap_volume", "cap_measure"], default="region")
    p_mc.add_argument("--n", type=int, required=True)
    p_mc.add_argument("--lambda", dest="lam", type=float, default=1.0,
                      help="pair distance (region) or cap separation (cap_volume)")
    p_mc.add_argument("--half-angle", dest="half_angle", type=float, default=None,
                      help="cap half-angle in radians (cap_measure)")
    p_mc.add_argument("--samples", type=int, default=1_000_000)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--workers", type=int, default=0)
    p_mc.add_argument("--out", default=None)
    p_mc.set_defaults(func=_cmd_mc)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PairCorrError as exc:
        print(f"paircorr: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
