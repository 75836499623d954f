"""Benchmark dataset builds with bit-identical regeneration.

build_dataset degrades a clear-image/depth corpus into named subsets,
one intensity class per subset, cycling through the corpus until each
subset reaches its requested count. Per-entry parameters come from
SHA-256-derived seeds, so a manifest plus the original corpus fully
determines every output byte; rebuild_dataset replays the recorded
parameters and must reproduce the files exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .color import ColorDeviation, default_palette, parse_hex
from .io import ImageIOError, load_depth, load_image, save_image
from .synthesis import (
    IntensityClass,
    derive_entry_seed,
    intensity_class,
    sample_params,
    synthesize,
)

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class SubsetSpec:
    """Requested subset: name, intensity class, and image count.

    beta_range optionally overrides the class's attenuation interval
    (still within (0, 1]); the effective range is recorded in the
    manifest either way.
    """

    name: str
    intensity: str
    count: int
    beta_range: tuple[float, float] | None = None

    def resolve_class(self) -> IntensityClass:
        cls = intensity_class(self.intensity)
        if self.beta_range is None:
            return cls
        return IntensityClass(cls.tag, (float(self.beta_range[0]),
                                        float(self.beta_range[1])))


@dataclass(frozen=True)
class DatasetEntry:
    """One degraded image and everything needed to regenerate it."""

    index: int
    clear: str
    depth: str
    file: str
    a_s_hex: str
    beta: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "clear": self.clear,
            "depth": self.depth,
            "file": self.file,
            "a_s": self.a_s_hex,
            "beta": self.beta,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SubsetManifest:
    name: str
    intensity: str
    beta_range: tuple[float, float]
    entries: tuple[DatasetEntry, ...] = ()
    skipped: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "intensity": self.intensity,
            "beta_range": list(self.beta_range),
            "entries": [e.to_dict() for e in self.entries],
            "skipped": list(self.skipped),
        }


@dataclass(frozen=True)
class DatasetManifest:
    version: int
    master_seed: int
    palette: tuple[str, ...]
    subsets: tuple[SubsetManifest, ...] = ()

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "master_seed": self.master_seed,
            "palette": list(self.palette),
            "subsets": [s.to_dict() for s in self.subsets],
        }

    @property
    def entry_count(self) -> int:
        return sum(len(s.entries) for s in self.subsets)

    @property
    def skip_count(self) -> int:
        return sum(len(s.skipped) for s in self.subsets)


def _entry_from_dict(data: dict) -> DatasetEntry:
    return DatasetEntry(
        index=int(data["index"]),
        clear=str(data["clear"]),
        depth=str(data["depth"]),
        file=str(data["file"]),
        a_s_hex=str(data["a_s"]),
        beta=float(data["beta"]),
        seed=int(data["seed"]),
    )


def manifest_from_dict(data: dict) -> DatasetManifest:
    return DatasetManifest(
        version=int(data["version"]),
        master_seed=int(data["master_seed"]),
        palette=tuple(str(h) for h in data["palette"]),
        subsets=tuple(
            SubsetManifest(
                name=str(s["name"]),
                intensity=str(s["intensity"]),
                beta_range=(float(s["beta_range"][0]),
                            float(s["beta_range"][1])),
                entries=tuple(_entry_from_dict(e) for e in s["entries"]),
                skipped=tuple(dict(k) for k in s["skipped"]),
            )
            for s in data["subsets"]
        ),
    )


def load_manifest(path) -> DatasetManifest:
    with open(path, encoding="utf-8") as handle:
        return manifest_from_dict(json.load(handle))


def save_manifest(manifest: DatasetManifest, path) -> None:
    Path(path).write_text(
        json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


def validate_manifest(manifest: DatasetManifest) -> None:
    """Check structural invariants; raises ValueError on violation."""
    if manifest.version != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {manifest.version}")
    for code in manifest.palette:
        parse_hex(code)
    seen_names = set()
    for subset in manifest.subsets:
        if subset.name in seen_names:
            raise ValueError(f"duplicate subset name {subset.name!r}")
        seen_names.add(subset.name)
        intensity_class(subset.intensity)
        lo, hi = subset.beta_range
        if not 0.0 < lo <= hi <= 1.0:
            raise ValueError(
                f"subset {subset.name!r} beta range ({lo}, {hi}) "
                f"outside (0, 1]")
        for entry in subset.entries:
            if not lo <= entry.beta <= hi:
                raise ValueError(
                    f"entry {subset.name}/{entry.index} beta {entry.beta} "
                    f"outside [{lo}, {hi}]")
            parse_hex(entry.a_s_hex)
            if entry.seed != derive_entry_seed(manifest.master_seed,
                                               subset.name, entry.index):
                raise ValueError(
                    f"entry {subset.name}/{entry.index} seed does not match "
                    f"the master-seed derivation")


def _synthesize_entry(clear_path, depth_path, a_s, beta: float, out_path: Path):
    clear = load_image(clear_path)
    depth = load_depth(depth_path)
    result = synthesize(clear, depth, a_s, beta)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_image(result.image, out_path)
    return result


def build_dataset(corpus, subsets, out_dir, master_seed: int = 0,
                  palette=None) -> DatasetManifest:
    """Degrade a corpus of (clear, depth) path pairs into subsets.

    Entry i of a subset uses corpus pair i % len(corpus), so small
    corpora are reused across entries. Unreadable or mismatched pairs
    are skipped with a recorded reason; a skip never aborts the build.
    The manifest is written to out_dir/manifest.json after all subsets
    complete, and the same arguments always rebuild identical bytes.
    """
    out_dir = Path(out_dir)
    corpus = [(str(c), str(d)) for c, d in corpus]
    if palette is None:
        palette = default_palette()
    palette = [p if isinstance(p, ColorDeviation) else parse_hex(p)
               for p in palette]

    built_subsets: list[SubsetManifest] = []
    for spec in subsets:
        if not isinstance(spec, SubsetSpec):
            spec = SubsetSpec(**spec)
        cls = spec.resolve_class()
        entries: list[DatasetEntry] = []
        skipped: list[dict] = []
        for index in range(spec.count if corpus else 0):
            clear_path, depth_path = corpus[index % len(corpus)]
            seed = derive_entry_seed(master_seed, spec.name, index)
            params = sample_params(seed, cls, palette)
            rel_file = f"{spec.name}/{spec.name}_{index:04d}.png"
            try:
                _synthesize_entry(clear_path, depth_path, params.a_s,
                                  params.beta, out_dir / rel_file)
            except (ImageIOError, FileNotFoundError, ValueError) as exc:
                skipped.append({
                    "index": index,
                    "clear": clear_path,
                    "depth": depth_path,
                    "reason": f"{type(exc).__name__}: {exc}",
                })
                continue
            entries.append(DatasetEntry(
                index=index,
                clear=clear_path,
                depth=depth_path,
                file=rel_file,
                a_s_hex=params.a_s.hex_code(),
                beta=params.beta,
                seed=seed,
            ))
        built_subsets.append(SubsetManifest(
            name=spec.name,
            intensity=cls.tag,
            beta_range=cls.beta_range,
            entries=tuple(entries),
            skipped=tuple(skipped),
        ))

    manifest = DatasetManifest(
        version=MANIFEST_VERSION,
        master_seed=master_seed,
        palette=tuple(p.hex_code() for p in palette),
        subsets=tuple(built_subsets),
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    save_manifest(manifest, out_dir / MANIFEST_NAME)
    return manifest


def rebuild_dataset(manifest: DatasetManifest, out_dir) -> int:
    """Regenerate every manifest entry from its recorded parameters.

    Returns the number of files written. Outputs are byte-identical to
    the original build because synthesis and PNG encoding are both
    deterministic functions of (clear, depth, a_s, beta).
    """
    out_dir = Path(out_dir)
    written = 0
    for subset in manifest.subsets:
        for entry in subset.entries:
            _synthesize_entry(entry.clear, entry.depth,
                              parse_hex(entry.a_s_hex), entry.beta,
                              out_dir / entry.file)
            written += 1
    return written
