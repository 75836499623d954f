"""Dataset builds, manifests, validation, and bit-identical rebuilds."""

import dataclasses
import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from dustbench import (
    INTENSITY_CLASSES,
    SubsetSpec,
    build_dataset,
    derive_entry_seed,
    load_manifest,
    rebuild_dataset,
    save_manifest,
    validate_manifest,
)

FOUR_SUBSETS = [
    SubsetSpec(name="train-light", intensity="light", count=4),
    SubsetSpec(name="train-medium", intensity="medium", count=4),
    SubsetSpec(name="train-dense", intensity="dense", count=4),
    SubsetSpec(name="train-hybrid", intensity="hybrid", count=4),
]


def _hash_tree(root: Path) -> dict:
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*.png"))
    }


def test_build_four_by_four(disk_corpus, tmp_path):
    out = tmp_path / "ds"
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS, out, master_seed=11)
    assert manifest.entry_count == 16
    assert manifest.skip_count == 0
    assert (out / "manifest.json").exists()
    validate_manifest(manifest)
    for subset in manifest.subsets:
        lo, hi = INTENSITY_CLASSES[subset.intensity].beta_range
        for entry in subset.entries:
            assert lo <= entry.beta <= hi
            assert entry.a_s_hex in manifest.palette
            assert (out / entry.file).exists()


def test_build_empty_corpus_gives_empty_manifest(tmp_path):
    manifest = build_dataset([], FOUR_SUBSETS, tmp_path / "empty")
    assert manifest.entry_count == 0
    assert manifest.skip_count == 0
    assert len(manifest.subsets) == 4
    assert (tmp_path / "empty" / "manifest.json").exists()


def test_rebuild_is_bit_identical(disk_corpus, tmp_path):
    specs = [SubsetSpec(name="eval-dense", intensity="dense", count=6)]
    first = tmp_path / "first"
    second = tmp_path / "second"
    manifest = build_dataset(disk_corpus, specs, first, master_seed=3)
    written = rebuild_dataset(manifest, second)
    assert written == 6
    first_hashes = _hash_tree(first)
    second_hashes = _hash_tree(second)
    assert first_hashes == second_hashes
    assert len(first_hashes) == 6


def test_build_rerun_identical(disk_corpus, tmp_path):
    specs = [SubsetSpec(name="s", intensity="light", count=3)]
    a = build_dataset(disk_corpus, specs, tmp_path / "a", master_seed=9)
    build_dataset(disk_corpus, specs, tmp_path / "b", master_seed=9)
    assert _hash_tree(tmp_path / "a") == _hash_tree(tmp_path / "b")
    assert (tmp_path / "a" / "manifest.json").read_bytes() == \
        (tmp_path / "b" / "manifest.json").read_bytes()
    assert a.entry_count == 3


def test_build_skips_unreadable_pair(disk_corpus, tmp_path):
    corpus = list(disk_corpus) + [("missing_clear.png", "missing_depth.png")]
    specs = [SubsetSpec(name="s", intensity="medium", count=5)]
    manifest = build_dataset(corpus, specs, tmp_path / "skip", master_seed=1)
    subset = manifest.subsets[0]
    assert len(subset.entries) == 4
    assert len(subset.skipped) == 1
    skip = subset.skipped[0]
    assert skip["index"] == 4
    assert "missing_clear.png" in skip["clear"]
    assert "FileNotFoundError" in skip["reason"]


def test_build_skips_dimension_mismatch(disk_corpus, tmp_path):
    clear, _ = disk_corpus[0]
    _, other_depth = disk_corpus[1]
    from dustbench import save_depth
    small = tmp_path / "small_depth.png"
    save_depth(np.linspace(0, 1, 32 * 32).reshape(32, 32), small)
    corpus = [(clear, str(small)), disk_corpus[1]]
    specs = [SubsetSpec(name="s", intensity="dense", count=2)]
    manifest = build_dataset(corpus, specs, tmp_path / "mismatch")
    subset = manifest.subsets[0]
    assert len(subset.entries) == 1
    assert len(subset.skipped) == 1
    assert "dimension mismatch" in subset.skipped[0]["reason"]
    assert other_depth in subset.entries[0].depth


def test_corpus_cycling(disk_corpus, tmp_path):
    corpus = disk_corpus[:2]
    specs = [SubsetSpec(name="cycle", intensity="hybrid", count=5)]
    manifest = build_dataset(corpus, specs, tmp_path / "cycle")
    clears = [e.clear for e in manifest.subsets[0].entries]
    assert clears == [corpus[0][0], corpus[1][0], corpus[0][0],
                      corpus[1][0], corpus[0][0]]


def test_beta_range_override_recorded(disk_corpus, tmp_path):
    spec = SubsetSpec(name="narrow", intensity="light", count=5,
                      beta_range=(0.35, 0.38))
    manifest = build_dataset(disk_corpus, [spec], tmp_path / "narrow")
    subset = manifest.subsets[0]
    assert subset.beta_range == (0.35, 0.38)
    for entry in subset.entries:
        assert 0.35 <= entry.beta <= 0.38
    validate_manifest(manifest)


def test_manifest_json_roundtrip(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS, tmp_path / "rt",
                             master_seed=5)
    loaded = load_manifest(tmp_path / "rt" / "manifest.json")
    assert loaded == manifest
    other = tmp_path / "copy.json"
    save_manifest(loaded, other)
    assert json.loads(other.read_text()) == \
        json.loads((tmp_path / "rt" / "manifest.json").read_text())


def test_validate_rejects_wrong_version(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "v")
    broken = dataclasses.replace(manifest, version=99)
    with pytest.raises(ValueError, match="version"):
        validate_manifest(broken)


def test_validate_rejects_beta_outside_range(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "b")
    subset = manifest.subsets[0]
    entry = dataclasses.replace(subset.entries[0], beta=0.95)
    broken = dataclasses.replace(
        manifest,
        subsets=(dataclasses.replace(
            subset, entries=(entry,) + subset.entries[1:]),))
    with pytest.raises(ValueError, match="beta"):
        validate_manifest(broken)


def test_validate_rejects_wrong_seed(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "s")
    subset = manifest.subsets[0]
    entry = dataclasses.replace(subset.entries[0],
                                seed=subset.entries[0].seed + 1)
    broken = dataclasses.replace(
        manifest,
        subsets=(dataclasses.replace(
            subset, entries=(entry,) + subset.entries[1:]),))
    with pytest.raises(ValueError, match="seed"):
        validate_manifest(broken)


def test_validate_rejects_duplicate_subset_names(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "d")
    broken = dataclasses.replace(manifest,
                                 subsets=manifest.subsets * 2)
    with pytest.raises(ValueError, match="duplicate"):
        validate_manifest(broken)


def test_validate_rejects_bad_palette_hex(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "p")
    broken = dataclasses.replace(manifest,
                                 palette=manifest.palette + ("#0000FF",))
    with pytest.raises(ValueError, match="r > g > b"):
        validate_manifest(broken)


def test_validate_rejects_envelope_violation(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS[:1], tmp_path / "e")
    subset = dataclasses.replace(manifest.subsets[0], beta_range=(0.3, 1.2),
                                 entries=())
    broken = dataclasses.replace(manifest, subsets=(subset,))
    with pytest.raises(ValueError, match=r"\(0, 1\]"):
        validate_manifest(broken)


def test_entry_seed_matches_derivation(disk_corpus, tmp_path):
    manifest = build_dataset(disk_corpus, FOUR_SUBSETS, tmp_path / "seed",
                             master_seed=77)
    for subset in manifest.subsets:
        for entry in subset.entries:
            assert entry.seed == derive_entry_seed(77, subset.name,
                                                   entry.index)


def test_build_accepts_dict_specs_and_custom_palette(disk_corpus, tmp_path):
    manifest = build_dataset(
        disk_corpus,
        [{"name": "mini", "intensity": "dense", "count": 2}],
        tmp_path / "dict",
        palette=["#C89463", "#A14A10"],
    )
    assert manifest.palette == ("#C89463", "#A14A10")
    for entry in manifest.subsets[0].entries:
        assert entry.a_s_hex in ("#C89463", "#A14A10")
