"""Command-line front end: synthesize, build, analyze, evaluate, time.

Every invocation resolves its configuration (flags > config file >
defaults), archives the resolved values as config.json in the run
directory, writes its outputs there, and finishes with a summary.json
— so a run directory is always self-describing. The config file path
comes from --config or the DUSTBENCH_CONFIG environment variable.
Exit status is 0 iff no fatal error occurred; skipped dataset entries
and isolated per-pair metric failures do not change the exit status.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .cluster import kmeans_lab
from .color import default_palette, load_palette
from .dataset import SubsetSpec, build_dataset, load_manifest
from .io import ImageIOError, load_depth, load_image, save_image
from .report import evaluate_pairs
from .stats import (
    DEFAULT_DELTA_MIN,
    DEFAULT_SIGMA_MAX,
    channel_histograms,
    lab_samples,
    prior_characteristics,
)
from .synthesis import synthesize
from .timing import DEFAULT_SIZES, run_timing

CONFIG_ENV_VAR = "DUSTBENCH_CONFIG"


def _load_config(args) -> dict:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    config["__dir__"] = str(Path(path).resolve().parent)
    return config


def _resolve_path(value: str, config: dict) -> str:
    """Paths in a config file are relative to the config file itself."""
    p = Path(value)
    if p.is_absolute() or "__dir__" not in config:
        return str(p)
    return str(Path(config["__dir__"]) / p)


def _write_json(data: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=str) + "\n",
                    encoding="utf-8")


def _archive_config(args, out_dir: Path, resolved: dict) -> None:
    archive = {
        "command": args.command,
        "seed": args.seed,
        "config_file": args.config or os.environ.get(CONFIG_ENV_VAR),
        "resolved": resolved,
    }
    _write_json(archive, out_dir / "config.json")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


# --------------------------------------------------------------------------
# synthesize


def _cmd_synthesize(args, config: dict, out_dir: Path) -> dict:
    a_s = args.a_s if args.a_s is not None else config.get("a_s", "#C89463")
    beta = args.beta if args.beta is not None else config.get("beta", 0.45)
    resolved = {"clear": args.clear, "depth": args.depth,
                "a_s": a_s, "beta": beta, "output": args.output_name}
    _archive_config(args, out_dir, resolved)

    clear = load_image(args.clear)
    depth = load_depth(args.depth)
    deviation = load_palette([a_s])[0] if isinstance(a_s, str) else a_s
    result = synthesize(clear, depth, deviation, float(beta))
    out_path = out_dir / args.output_name
    save_image(result.image, out_path)

    record = {
        "clear": args.clear,
        "depth": args.depth,
        "a_s": a_s if isinstance(a_s, str) else list(a_s),
        "beta": float(beta),
        "clip_fraction": result.clip_fraction,
        "output": str(out_path),
    }
    print(json.dumps(record))
    return record


# --------------------------------------------------------------------------
# build


def _subset_specs(config: dict) -> list[SubsetSpec]:
    synthesis_cfg = config.get("synthesis", {})
    overrides = synthesis_cfg.get("beta_overrides", {})
    specs = []
    for raw in synthesis_cfg.get("subsets", []):
        name = raw["name"]
        intensity = raw.get("class", raw.get("intensity"))
        if intensity is None:
            raise ValueError(f"subset {name!r} missing its intensity class")
        override = overrides.get(name)
        specs.append(SubsetSpec(
            name=name,
            intensity=intensity,
            count=int(raw["count"]),
            beta_range=tuple(override) if override else None,
        ))
    return specs


def _cmd_build(args, config: dict, out_dir: Path) -> dict:
    if "synthesis" not in config:
        raise ValueError(
            "build requires a config file with a 'synthesis' section "
            "(--config or DUSTBENCH_CONFIG)")
    master_seed = args.seed if args.seed is not None \
        else int(config.get("master_seed", 0))
    corpus = [(_resolve_path(c, config), _resolve_path(d, config))
              for c, d in config.get("corpus", [])]
    palette_cfg = config.get("palette")
    palette = load_palette(palette_cfg) if palette_cfg else default_palette()
    specs = _subset_specs(config)
    resolved = {
        "master_seed": master_seed,
        "corpus": corpus,
        "palette": [p.hex_code() for p in palette],
        "subsets": [{"name": s.name, "class": s.intensity, "count": s.count,
                     "beta_range": list(s.beta_range) if s.beta_range else None}
                    for s in specs],
    }
    _archive_config(args, out_dir, resolved)

    manifest = build_dataset(corpus, specs, out_dir, master_seed, palette)
    for subset in manifest.subsets:
        lo, hi = subset.beta_range
        _say(args, f"subset {subset.name}: {len(subset.entries)} built, "
                   f"{len(subset.skipped)} skipped "
                   f"({subset.intensity}, beta in [{lo}, {hi}])")
    return {
        "entries": manifest.entry_count,
        "skipped": manifest.skip_count,
        "subsets": {s.name: {"built": len(s.entries),
                             "skipped": len(s.skipped)}
                    for s in manifest.subsets},
        "manifest": str(out_dir / "manifest.json"),
    }


# --------------------------------------------------------------------------
# analyze


def _analysis_options(args, config: dict) -> dict:
    section = config.get("analysis", {})

    def pick(flag, key, default):
        return flag if flag is not None else section.get(key, default)

    return {
        "k": int(pick(args.k, "k", 15)),
        "cap": int(pick(args.cap, "cap", 50000)),
        "quantize_levels": pick(args.quantize_levels, "quantize_levels", None),
        "bins": int(pick(args.bins, "bins", 256)),
        "sigma_max": float(pick(args.sigma_max, "sigma_max",
                                DEFAULT_SIGMA_MAX)),
        "delta_min": float(pick(args.delta_min, "delta_min",
                                DEFAULT_DELTA_MIN)),
    }


def _analyze_one(path: str, prefix: str, options: dict, seed: int,
                 out_dir: Path) -> dict:
    image = load_image(path)
    histograms = channel_histograms(image, options["bins"])
    priors = prior_characteristics(image, options["sigma_max"],
                                   options["delta_min"])
    levels = options["quantize_levels"]
    samples = lab_samples(image, cap=options["cap"], seed=seed,
                          quantize_levels=int(levels) if levels else None)
    clusters = kmeans_lab(samples, k=options["k"], seed=seed)

    hist_path = out_dir / f"{prefix}_hist.csv"
    hist_path.write_text(histograms.to_csv(), encoding="utf-8")
    priors_path = out_dir / f"{prefix}_priors.json"
    _write_json(priors.to_dict(), priors_path)
    cluster_path = out_dir / f"{prefix}_clusters.csv"
    lines = ["cluster_id,L,a,b,count"]
    for cid in range(clusters.k):
        l_, a_, b_ = clusters.centers[cid]
        count = int((clusters.assignments == cid).sum())
        lines.append(f"{cid},{l_:.6f},{a_:.6f},{b_:.6f},{count}")
    cluster_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    return {
        "image": path,
        "verdict": priors.verdict,
        "channel_means": list(priors.channel_means),
        "collinearity_residual": clusters.collinearity_residual,
        "histograms": str(hist_path),
        "priors": str(priors_path),
        "clusters": str(cluster_path),
    }


def _cmd_analyze(args, config: dict, out_dir: Path) -> dict:
    images = [(_resolve_path(p, {}), Path(p).stem) for p in args.image or []]
    if args.manifest:
        manifest = load_manifest(args.manifest)
        base = Path(args.manifest).resolve().parent
        for subset in manifest.subsets:
            for entry in subset.entries:
                images.append((str(base / entry.file), Path(entry.file).stem))
    if not images:
        raise ValueError("analyze needs --image and/or --manifest inputs")
    options = _analysis_options(args, config)
    resolved = dict(options)
    resolved["images"] = [p for p, _ in images]
    _archive_config(args, out_dir, resolved)

    results = []
    for index, (path, stem) in enumerate(images):
        record = _analyze_one(path, f"{index:03d}_{stem}", options,
                              args.seed or 0, out_dir)
        _say(args, f"{path}: verdict={record['verdict']} "
                   f"residual={record['collinearity_residual']:.4f}")
        results.append(record)
    return {"images": results}


# --------------------------------------------------------------------------
# evaluate


def _cmd_evaluate(args, config: dict, out_dir: Path) -> dict:
    if args.pairs:
        with open(args.pairs, encoding="utf-8") as handle:
            listing = json.load(handle)
        base_cfg = {"__dir__": str(Path(args.pairs).resolve().parent)}
    elif "pairs" in config:
        listing = config["pairs"]
        base_cfg = config
    else:
        raise ValueError("evaluate needs --pairs or a config 'pairs' list")
    if isinstance(listing, dict):
        listing = listing["pairs"]
    pairs = []
    for item in listing:
        test, ref = (item if isinstance(item, (list, tuple)) else (item, None))
        pairs.append((
            _resolve_path(test, base_cfg),
            _resolve_path(ref, base_cfg) if ref else None,
        ))
    _archive_config(args, out_dir, {"pairs": pairs})

    report = evaluate_pairs(pairs)
    report_dict = report.to_json_dict()
    (out_dir / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    _write_json(report_dict, out_dir / "report.json")
    errors = sum(1 for row in report.rows if row.error)
    _say(args, f"evaluated {len(report.rows)} pairs ({errors} errors)")
    return {
        "pairs": len(report.rows),
        "errors": errors,
        "aggregate": report_dict["aggregate"],
        "report_csv": str(out_dir / "report.csv"),
        "report_json": str(out_dir / "report.json"),
    }


# --------------------------------------------------------------------------
# time


def _cmd_time(args, config: dict, out_dir: Path) -> dict:
    section = config.get("timing", {})
    sizes = args.sizes or section.get("sizes") or list(DEFAULT_SIZES)
    repetitions = args.repetitions if args.repetitions is not None \
        else int(section.get("repetitions", 3))
    warmup = args.warmup if args.warmup is not None \
        else int(section.get("warmup", 1))
    resolved = {"sizes": list(sizes), "repetitions": repetitions,
                "warmup": warmup}
    _archive_config(args, out_dir, resolved)

    report = run_timing(sizes=[int(s) for s in sizes],
                        repetitions=repetitions, warmup=warmup,
                        seed=args.seed or 0)
    (out_dir / "timing.csv").write_text(report.to_csv(), encoding="utf-8")
    _write_json(report.to_json_dict(), out_dir / "timing.json")
    for cell in report.cells:
        _say(args, f"{cell.operation} @ {cell.size}x{cell.size}: "
                   f"{cell.mean_seconds:.4f} s mean over "
                   f"{len(cell.samples)} runs")
    return report.to_json_dict()


# --------------------------------------------------------------------------
# parser plumbing


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=None,
                        help="master seed (default 0 / config value)")
    shared.add_argument("--config", default=None,
                        help=f"config file (default ${CONFIG_ENV_VAR})")
    shared.add_argument("--out", default=None,
                        help="run directory (default ./dustbench-<command>)")
    shared.add_argument("--quiet", action="store_true",
                        help="suppress informational output")

    parser = argparse.ArgumentParser(
        prog="dustbench",
        description="Sand-dust image benchmark toolkit: synthesis, dataset "
                    "builds, color statistics, and quality metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", parents=[shared],
                       help="degrade one clear image with the scattering model")
    p.add_argument("--clear", required=True, help="clear RGB image path")
    p.add_argument("--depth", required=True, help="depth map path")
    p.add_argument("--a-s", dest="a_s", default=None,
                   help="global color deviation hex, e.g. '#C89463'")
    p.add_argument("--beta", type=float, default=None,
                   help="attenuation coefficient (> 0)")
    p.add_argument("--output-name", default="degraded.png",
                   help="output file name inside the run directory")
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("build", parents=[shared],
                       help="build a benchmark dataset from a config file")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("analyze", parents=[shared],
                       help="histograms, priors, and LAB clustering per image")
    p.add_argument("--image", action="append", help="image path (repeatable)")
    p.add_argument("--manifest", default=None,
                   help="analyze every entry of a dataset manifest")
    p.add_argument("--k", type=int, default=None, help="cluster count")
    p.add_argument("--cap", type=int, default=None,
                   help="max pixels clustered (seeded subsample)")
    p.add_argument("--quantize-levels", type=int, default=None,
                   help="optional per-channel quantization before clustering")
    p.add_argument("--bins", type=int, default=None, help="histogram bins")
    p.add_argument("--sigma-max", type=float, default=None,
                   help="concentration prior threshold")
    p.add_argument("--delta-min", type=float, default=None,
                   help="shifting prior threshold")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("evaluate", parents=[shared],
                       help="full- and no-reference metrics over image pairs")
    p.add_argument("--pairs", default=None,
                   help="JSON file listing [test, reference-or-null] pairs")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("time", parents=[shared],
                       help="wall-clock timing of the core operations")
    p.add_argument("--sizes", type=int, nargs="+", default=None,
                   help="square image sizes (default 256 512 1024)")
    p.add_argument("--repetitions", type=int, default=None,
                   help="recorded runs per cell (>= 3)")
    p.add_argument("--warmup", type=int, default=None,
                   help="unrecorded warmup runs per cell")
    p.set_defaults(handler=_cmd_time)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    out_dir = Path(args.out or f"dustbench-{args.command}")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        config = _load_config(args)
        summary = args.handler(args, config, out_dir)
        _write_json({"command": args.command, "status": "ok",
                     "summary": summary}, out_dir / "summary.json")
        return 0
    except (ValueError, OSError, ImageIOError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"dustbench {args.command}: error: {exc}", file=sys.stderr)
        try:
            _write_json({"command": args.command, "status": "error",
                         "error": f"{type(exc).__name__}: {exc}"},
                        out_dir / "summary.json")
        except OSError:
            pass
        return 1


if __name__ == "__main__":
    sys.exit(main())
