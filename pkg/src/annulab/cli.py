"""Command-line front end: batch experiments with reproducible reports.

Subcommands: count, variance, decompose, sweep, oracle, selftest.  A JSON
config describes the experiment; flags override individual fields.  Every
output file embeds the resolved experiment config and its SHA-256 hash, so a
report is reproducible from its own header.  Execution parameters (--workers,
--out) are not part of the experiment config: reruns with a different worker
count produce byte-identical files.

Exit codes: 0 ok, 1 validation error, 2 numerical-quality flag raised.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bessel import bessel_j
from .bodies import (
    ball,
    body_from_json,
    curvature_finite_difference,
    curvature_volume_integral,
    ellipsoid,
)
from .counting import Annulus, GridScheme, RandomScheme, count_samples, sample_moments
from .decomposition import (
    SweepConfig,
    decompose,
    default_cutoff,
    residue_integral_check,
    theorem_sweep,
)
from .fourier import parseval_variance
from .oracle import square_stats

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_QUALITY = 2

_CONFIG_KEYS = {
    "body", "r", "t", "scheme", "estimators", "cutoff", "alpha", "r_list",
    "cutoff_factor", "min_cutoff", "reference", "oracle", "format", "seed",
    "samples", "grid", "on_shallow_alpha",
}


class ValidationError(ValueError):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, float) and math.isnan(obj):
        return "nan"
    return obj


def _config_hash(config: dict) -> str:
    canon = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _load_config(args) -> dict:
    config: dict = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ValidationError("config must be a JSON object")
        unknown = set(config) - _CONFIG_KEYS
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    for key in ("seed", "cutoff", "samples", "grid", "alpha"):
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if getattr(args, "format", None):
        config["format"] = args.format
    return config


def _require(config: dict, key: str):
    if key not in config:
        raise ValidationError(f"config field {key!r} is required for this command")
    return config[key]


def _build_scheme(config: dict):
    scheme = config.get("scheme")
    if scheme is None:
        if "grid" in config:
            scheme = {"kind": "grid", "m": config["grid"]}
        elif "samples" in config:
            scheme = {"kind": "random", "n": config["samples"], "seed": config.get("seed", 0)}
        else:
            raise ValidationError("config needs a 'scheme' (or --grid / --samples)")
    if scheme.get("kind") == "grid":
        if "grid" in config:
            scheme = {"kind": "grid", "m": config["grid"]}
        return GridScheme(int(scheme["m"]))
    if scheme.get("kind") == "random":
        n = int(config.get("samples", scheme.get("n", 0)))
        seed = int(config.get("seed", scheme.get("seed", 0)))
        return RandomScheme(n, seed)
    raise ValidationError(f"unknown scheme kind {scheme.get('kind')!r}")


def _build_annulus(config: dict) -> Annulus:
    body = body_from_json(_require(config, "body"))
    r = float(_require(config, "r"))
    t = float(_require(config, "t"))
    return Annulus(body, r, t)


def _resolved(config: dict, command: str, extra: dict | None = None) -> dict:
    resolved = {"command": command, **config}
    if extra:
        resolved.update(extra)
    return _jsonable(resolved)


def _envelope(resolved_config: dict, payload: dict, warnings: list[str]) -> dict:
    return _jsonable(
        {
            "version": __version__,
            "config": resolved_config,
            "config_sha256": _config_hash(resolved_config),
            "warnings": warnings,
            **payload,
        }
    )


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list], meta: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# config_sha256={meta['config_sha256']}", f"# version={meta['version']}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join("" if v is None else repr(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------- commands


def cmd_count(args) -> int:
    config = _load_config(args)
    annulus = _build_annulus(config)
    scheme = _build_scheme(config)
    resolved = _resolved(config, "count", {"scheme": scheme.describe()})
    samples = count_samples(annulus, scheme, workers=args.workers)
    meta = _envelope(resolved, {}, [])
    out = Path(args.out)
    d = annulus.body.dimension
    header = [f"x_{i+1}" for i in range(d)] + ["count"]
    rows = [
        [float(x) for x in samples.translations[i]] + [int(samples.counts[i])]
        for i in range(samples.counts.shape[0])
    ]
    _write_csv(out.with_suffix(".csv"), header, rows, meta)
    hist_payload = _envelope(resolved, {"histogram": {str(k): v for k, v in samples.histogram().items()}}, [])
    _write_json(out.with_suffix(".histogram.json"), hist_payload)
    print(f"count: {samples.counts.shape[0]} translations -> {out.with_suffix('.csv')}")
    return EXIT_OK


def cmd_variance(args) -> int:
    config = _load_config(args)
    annulus = _build_annulus(config)
    estimators = config.get("estimators", ["parseval"])
    warnings: list[str] = []
    payload: dict = {
        "body": config["body"],
        "r": annulus.r,
        "t": annulus.t,
        "volume": annulus.volume(),
        "mean": annulus.volume(),
        "estimators": {},
        "discrepancies": {},
    }
    exit_code = EXIT_OK
    values: dict[str, tuple[float, float]] = {}
    if "parseval" in estimators:
        cutoff = int(config.get("cutoff", default_cutoff(annulus.t)))
        res = parseval_variance(annulus, cutoff, workers=args.workers)
        payload["estimators"]["parseval"] = {
            "variance": res.value,
            "cutoff": cutoff,
            "tail": res.tail.as_dict(),
            "quadrature_error": res.quadrature_error,
            "flagged": res.flagged,
        }
        values["parseval"] = (res.value, res.tail.bound)
        if res.flagged:
            warnings.append("parseval quadrature error exceeds 1% of the sum")
            exit_code = EXIT_QUALITY
    if "sample" in estimators:
        scheme = _build_scheme(config)
        table = sample_moments(annulus, scheme, workers=args.workers)
        payload["estimators"]["sample"] = {
            "variance": table.variance,
            "mean": table.mean,
            "variance_se": table.variance_se,
            "scheme": table.scheme,
            "central_moments": {str(k): v for k, v in table.central_moments.items()},
        }
        payload["empirical_mean"] = table.mean
        values["sample"] = (table.variance, table.variance_se or 0.0)
    names = sorted(values)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            diff = values[a][0] - values[b][0]
            combined = math.sqrt(values[a][1] ** 2 + values[b][1] ** 2)
            payload["discrepancies"][f"{a}_vs_{b}"] = {
                "difference": diff,
                "combined_error": combined,
            }
    resolved = _resolved(config, "variance")
    report = _envelope(resolved, {"report": payload}, warnings)
    _write_json(Path(args.out).with_suffix(".json"), report)
    if config.get("format") == "csv":
        header = ["r", "t", "volume"] + [f"var_{n}" for n in names]
        row = [annulus.r, annulus.t, annulus.volume()] + [values[n][0] for n in names]
        _write_csv(Path(args.out).with_suffix(".csv"), header, [row], report)
    print(f"variance: {', '.join(f'{n}={values[n][0]:.6g}' for n in names)}")
    return exit_code


def cmd_decompose(args) -> int:
    config = _load_config(args)
    annulus = _build_annulus(config)
    cutoff = int(config.get("cutoff", default_cutoff(annulus.t)))
    reference = None
    source = None
    if "parseval" in config.get("estimators", ["parseval"]):
        reference = parseval_variance(annulus, cutoff, workers=args.workers).value
        source = "parseval"
    dec = decompose(
        annulus, cutoff=cutoff, reference_variance=reference,
        reference_source=source, workers=args.workers,
    )
    payload = {
        "body": config["body"],
        "r": annulus.r,
        "t": annulus.t,
        "volume": annulus.volume(),
        "x": dec.x_value,
        "y": dec.y_value,
        "main_term": dec.main_term,
        "w_estimate": dec.w_estimate,
        "z_estimate": dec.z_estimate,
        "z_omitted": dec.z_omitted,
        "cutoff": dec.cutoff,
        "tail_bounds": {k: v.as_dict() for k, v in dec.tail_bounds.items()},
        "reference_variance": dec.reference_variance,
        "reference_source": dec.reference_source,
    }
    warnings = [] if reference is not None else ["no reference variance; z omitted"]
    report = _envelope(_resolved(config, "decompose"), {"report": payload}, warnings)
    _write_json(Path(args.out).with_suffix(".json"), report)
    print(f"decompose: x={dec.x_value:.6g} y={dec.y_value:.6g} main={dec.main_term:.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load_config(args)
    body = body_from_json(_require(config, "body"))
    alpha = float(_require(config, "alpha"))
    r_list = [float(r) for r in _require(config, "r_list")]
    sweep_config = SweepConfig(
        estimators=tuple(config.get("estimators", ["parseval"])),
        reference=config.get("reference", "parseval"),
        cutoff_factor=float(config.get("cutoff_factor", 8.0)),
        min_cutoff=int(config.get("min_cutoff", 64)),
        samples=int(config.get("samples", 200_000)),
        seed=int(config.get("seed", 42)),
        workers=args.workers,
        on_shallow_alpha=config.get("on_shallow_alpha", "warn"),
    )
    table = theorem_sweep(body, alpha, r_list, sweep_config)
    resolved = _resolved(config, "sweep")
    header = [
        "r", "t", "volume", "var_sample", "var_parseval",
        "X", "Y", "Z", "W", "ratio", "beta_fit",
    ]
    rows = [
        [
            row.r, row.t, row.volume, row.var_sample, row.var_parseval,
            row.x_value, row.y_value, row.z_estimate, row.w_estimate,
            row.ratio, table.beta_fit,
        ]
        for row in table.rows
    ]
    json_rows = [
        {
            "r": row.r, "t": row.t, "volume": row.volume,
            "var_sample": row.var_sample, "var_parseval": row.var_parseval,
            "x": row.x_value, "y": row.y_value, "z": row.z_estimate,
            "w": row.w_estimate, "ratio": row.ratio, "cutoff": row.cutoff,
            "error_bar": row.error_bar, "tail_bounds": row.tail_bounds,
            "sample_se": row.sample_se,
        }
        for row in table.rows
    ]
    report = _envelope(
        resolved,
        {
            "rows": json_rows,
            "beta_fit": table.beta_fit,
            "beta_rows_used": table.beta_rows_used,
            "alpha": table.alpha,
        },
        table.warnings,
    )
    _write_json(Path(args.out).with_suffix(".json"), report)
    _write_csv(Path(args.out).with_suffix(".csv"), header, rows, report)
    print(
        f"sweep: {len(table.rows)} rows, beta_fit={table.beta_fit:.4g} "
        f"({table.beta_rows_used} rows used)"
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    config = _load_config(args)
    spec = _require(config, "oracle")
    stats = square_stats(spec["variant"], int(spec["n"]), spec["t"])
    report = _envelope(_resolved(config, "oracle"), {"report": stats.as_dict()}, [])
    _write_json(Path(args.out).with_suffix(".json"), report)
    print(f"oracle: mean={float(stats.mean)} variance={float(stats.variance)}")
    return EXIT_OK


def _selftest_checks():
    yield "residue integral", abs(residue_integral_check() - math.pi / 2.0), 1e-8
    disk = ball(1.0, 2)
    yield "curvature integral disk", abs(
        curvature_volume_integral(disk) / (2.0 * disk.volume()) - 1.0
    ), 1e-6
    ell = ellipsoid([2.0, 1.0])
    yield "curvature integral ellipse", abs(
        curvature_volume_integral(ell) / (2.0 * ell.volume()) - 1.0
    ), 1e-6
    ell3 = ellipsoid([2.0, 1.0, 1.0])
    yield "curvature integral ellipsoid", abs(
        curvature_volume_integral(ell3) / (3.0 * ell3.volume()) - 1.0
    ), 1e-6
    # half-integer orders against their trigonometric closed forms
    z = np.linspace(0.3, 40.0, 173)
    j_half = np.sqrt(2.0 / (math.pi * z)) * np.sin(z)
    yield "bessel order 1/2 trig form", float(np.max(np.abs(bessel_j(0.5, z) - j_half))), 1e-12
    j_3half = np.sqrt(2.0 / (math.pi * z)) * (np.sin(z) / z - np.cos(z))
    yield "bessel order 3/2 trig form", float(np.max(np.abs(bessel_j(1.5, z) - j_3half))), 1e-12
    # three-term recurrence across all evaluation regimes
    z = np.geomspace(0.5, 500.0, 301)
    lhs = bessel_j(0.0, z) + bessel_j(2.0, z)
    rhs = 2.0 / z * bessel_j(1.0, z)
    yield "bessel recurrence", float(np.max(np.abs(lhs - rhs))), 1e-13
    # ellipse curvature: finite differences against the closed form
    fd = curvature_finite_difference(ell, [1.0, 1.0])
    yield "ellipse curvature fd", abs(fd / ell.curvature([1.0, 1.0]) - 1.0), 5e-4


def cmd_selftest(args) -> int:
    failures = 0
    for name, err, tol in _selftest_checks():
        ok = err <= tol
        failures += 0 if ok else 1
        print(f"{'ok  ' if ok else 'FAIL'} {name}: err={err:.3e} tol={tol:.0e}")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annulab",
        description="lattice point count statistics in thin annuli of convex bodies",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_out in (
        ("count", cmd_count, True),
        ("variance", cmd_variance, True),
        ("decompose", cmd_decompose, True),
        ("sweep", cmd_sweep, True),
        ("oracle", cmd_oracle, True),
        ("selftest", cmd_selftest, False),
    ):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        if needs_out:
            p.add_argument("--config", help="experiment config JSON path")
            p.add_argument("--out", required=True, help="output path (suffixes added)")
            p.add_argument("--format", choices=["csv", "json"], default=None)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--cutoff", type=int, default=None)
            p.add_argument("--grid", type=int, default=None)
            p.add_argument("--samples", type=int, default=None)
            p.add_argument("--alpha", type=float, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
