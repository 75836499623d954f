"""Input validation helpers shared by every module.

All image-like data is carried as plain numpy arrays: RGB images are
(H, W, 3) float64 in [0, 1], depth maps are (H, W) float64 in [0, 1],
transmission maps are (H, W) float64 in (0, 1]. The helpers below coerce
and verify those contracts and raise ValueError with a message naming
the offending argument.
"""

from __future__ import annotations

import numpy as np


def check_image(image, name: str = "image") -> np.ndarray:
    """Validate an (H, W, 3) RGB array with finite values in [0, 1]."""
    arr = np.ascontiguousarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has degenerate shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(
            f"{name} values must lie in [0, 1], got range "
            f"[{arr.min():.6g}, {arr.max():.6g}]"
        )
    return arr


def check_unclamped_image(image, name: str = "image") -> np.ndarray:
    """Like check_image but without the [0, 1] range requirement.

    Used for the unclamped intermediates of the scattering model, which
    legitimately leave [0, 1] before the final clamp.
    """
    arr = np.ascontiguousarray(image, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has degenerate shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_depth(depth, name: str = "depth") -> np.ndarray:
    """Validate an (H, W) depth map with finite values in [0, 1]."""
    arr = np.ascontiguousarray(depth, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must have shape (H, W), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has degenerate shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name} values must lie in [0, 1]")
    return arr


def check_transmission(t, name: str = "transmission") -> np.ndarray:
    """Validate an (H, W) transmission map with values in (0, 1]."""
    arr = np.ascontiguousarray(t, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must have shape (H, W), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    if arr.min() <= 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name} values must lie in (0, 1]")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray,
                     name_a: str = "first", name_b: str = "second") -> None:
    """Require matching spatial dimensions (leading two axes)."""
    if a.shape[:2] != b.shape[:2]:
        raise ValueError(
            f"dimension mismatch: {name_a} is {a.shape[:2]}, "
            f"{name_b} is {b.shape[:2]}"
        )


def check_color_triple(a_s, name: str = "a_s") -> np.ndarray:
    """Validate a per-channel color deviation as a (3,) array in [0, 1].

    The strict r > g > b sandstorm ordering is a property of palettes,
    not of the scattering math, so it is enforced by parse_hex and the
    palette loaders rather than here.
    """
    arr = np.asarray(a_s, dtype=np.float64).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have exactly 3 channels")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name} channels must lie in [0, 1]")
    return arr


def check_beta(beta, name: str = "beta") -> float:
    """Validate an attenuation coefficient: finite and strictly positive."""
    b = float(beta)
    if not np.isfinite(b) or b <= 0.0:
        raise ValueError(f"{name} must be finite and > 0, got {beta!r}")
    return b
