"""Fixtures shared across the test modules."""

from __future__ import annotations

import pytest

from helpers import balanced_image, depth_map, write_corpus


@pytest.fixture(scope="session")
def disk_corpus(tmp_path_factory):
    """Four (clear PNG, depth PNG) pairs of 48x48 images on disk."""
    root = tmp_path_factory.mktemp("corpus")
    return write_corpus(root, count=4, size=48)


@pytest.fixture()
def clear_depth_pair():
    """One balanced clear image and a matching depth map (64x64 arrays)."""
    return balanced_image(0), depth_map(0)
