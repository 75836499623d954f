"""Shared generators and independent oracles for the test suite.

The image generators produce color-balanced outdoor-like scenes (channel
means pinned to 0.5) so that channel-ordering effects observed after
synthesis are attributable to the scattering model, not to the inputs.
The oracles are deliberately naive re-implementations (direct window
loops, angle grids) used to cross-check the fast library code.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from dustbench import save_depth, save_image


def balanced_image(seed: int, size: int = 64) -> np.ndarray:
    """Soft-voronoi patchwork of hue-wheel colors, channel means = 0.5."""
    rng = np.random.default_rng(seed)
    k = 8
    theta = 2 * np.pi * (np.arange(k) + rng.uniform(0, 1, k) * 0.5) / k
    sat = rng.uniform(0.18, 0.3, k)
    colors = 0.5 + sat[:, None] * np.stack(
        [np.cos(theta), np.cos(theta - 2 * np.pi / 3),
         np.cos(theta + 2 * np.pi / 3)], axis=1)
    yy, xx = np.mgrid[0:size, 0:size] / size
    sites = rng.random((k, 2))
    d2 = (xx[:, :, None] - sites[None, None, :, 0]) ** 2 \
        + (yy[:, :, None] - sites[None, None, :, 1]) ** 2
    w = np.exp(-d2 / (2 * 0.08 ** 2))
    w = (w + 1e-9) / (w + 1e-9).sum(axis=-1, keepdims=True)
    img = np.einsum("hwk,kc->hwc", w, colors)
    img += rng.normal(0.0, 0.02, img.shape)
    img = img - img.reshape(-1, 3).mean(axis=0) + 0.5
    return np.clip(img, 0.01, 0.99)


def depth_map(seed: int, size: int = 64) -> np.ndarray:
    """Smooth synthetic depth spanning exactly [0, 1]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / (size - 1)
    a, b = rng.uniform(0.5, 2.0, 2)
    phase = rng.uniform(0, 2 * np.pi)
    d = np.sin(2 * np.pi * (a * xx + b * yy) + phase) + 1.2 * yy
    d = d + 0.3 * rng.random((size, size))
    lo, hi = d.min(), d.max()
    return (d - lo) / (hi - lo)


def write_corpus(root, count: int, size: int = 48,
                 image_seed: int = 100, depth_seed: int = 200):
    """Write `count` (clear PNG, 16-bit depth PNG) pairs under root."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    pairs = []
    for i in range(count):
        clear_path = root / f"clear_{i:02d}.png"
        depth_path = root / f"depth_{i:02d}.png"
        save_image(balanced_image(image_seed + i, size), clear_path)
        save_depth(depth_map(depth_seed + i, size), depth_path)
        pairs.append((str(clear_path), str(depth_path)))
    return pairs


def brute_ssim(reference: np.ndarray, test: np.ndarray,
               window_size: int = 11, sigma: float = 1.5,
               k1: float = 0.01, k2: float = 0.03,
               dynamic_range: float = 1.0) -> float:
    """Direct-window SSIM oracle: explicit loop over valid windows."""
    def gray(img):
        return (0.299 * img[:, :, 0] + 0.587 * img[:, :, 1]
                + 0.114 * img[:, :, 2])

    x = gray(np.asarray(reference, dtype=np.float64))
    y = gray(np.asarray(test, dtype=np.float64))
    half = (window_size - 1) / 2.0
    g = np.exp(-((np.arange(window_size) - half) ** 2) / (2.0 * sigma * sigma))
    g = g / g.sum()
    w = np.outer(g, g)
    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2
    values = []
    for i in range(x.shape[0] - window_size + 1):
        for j in range(x.shape[1] - window_size + 1):
            wx = x[i:i + window_size, j:j + window_size]
            wy = y[i:i + window_size, j:j + window_size]
            mx = (w * wx).sum()
            my = (w * wy).sum()
            vx = (w * wx * wx).sum() - mx * mx
            vy = (w * wy * wy).sum() - my * my
            cxy = (w * wx * wy).sum() - mx * my
            values.append(((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                          / ((mx * mx + my * my + c1) * (vx + vy + c2)))
    return float(np.mean(values))


def tls_rms_residual(points: np.ndarray, n_angles: int = 200001) -> float:
    """Brute-force total-least-squares line fit on 2-d points.

    Scans line directions through the centroid over a dense angle grid
    and returns the minimum RMS perpendicular distance.
    """
    pts = np.asarray(points, dtype=np.float64)
    centered = pts - pts.mean(axis=0)
    angles = np.linspace(0.0, np.pi, n_angles)
    perp = centered[:, 0][:, None] * np.sin(angles)[None, :] \
        - centered[:, 1][:, None] * np.cos(angles)[None, :]
    rms = np.sqrt(np.mean(perp * perp, axis=0))
    return float(rms.min())


_YIQ = np.array([[0.299, 0.587, 0.114],
                 [0.596, -0.274, -0.322],
                 [0.211, -0.523, 0.312]])
_YIQ_INV = np.linalg.inv(_YIQ)


def yiq255_to_rgb01(y: np.ndarray, i: np.ndarray, q: np.ndarray) -> np.ndarray:
    """RGB image in [0, 1] whose YIQ planes (0-255 scale) are y, i, q."""
    yiq = np.stack([y, i, q], axis=-1)
    return (yiq @ _YIQ_INV.T) / 255.0
