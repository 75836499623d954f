"""Full-reference and no-reference image quality metrics.

Pixel metrics (MSE, PSNR) are reported on the conventional 0-255
scale even though images are passed in [0, 1]. SSIM follows the
standard single-scale formulation with an 11x11 Gaussian window
(sigma 1.5) on BT.601 luma and averages only fully valid windows.
CIE94 and CIEDE2000 operate on LAB arrays of any matching shape and
are averaged per-pixel when used through color_difference.

No-reference measures quantify degradation without a pristine
counterpart: average gradient (AG), Sobel edge intensity (EI), and
the Shannon entropy of the luma histogram (IE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .color import image_to_lab
from .validation import check_image, check_same_shape

PEAK = 255.0


def luma(image: np.ndarray) -> np.ndarray:
    """BT.601 luma in [0, 1] from an RGB image in [0, 1]."""
    image = check_image(image)
    return (0.299 * image[:, :, 0]
            + 0.587 * image[:, :, 1]
            + 0.114 * image[:, :, 2])


def mse(reference: np.ndarray, test: np.ndarray) -> float:
    """Mean squared error over all pixels and channels, 0-255 scale."""
    reference = check_image(reference)
    test = check_image(test)
    check_same_shape(reference, test)
    diff = (reference - test) * PEAK
    return float(np.mean(diff * diff))


def psnr(reference: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    err = mse(reference, test)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / err)


@dataclass(frozen=True)
class SSIMConfig:
    """Window and stabilization constants for ssim()."""

    window_size: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0


def _gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    x = np.arange(size) - half
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def ssim(reference: np.ndarray, test: np.ndarray,
         config: SSIMConfig | None = None) -> float:
    """Structural similarity on luma, averaged over valid windows only.

    Gaussian-weighted local moments; windows that would read outside
    the image are cropped away rather than padded, so images must be
    at least window_size on each side.
    """
    if config is None:
        config = SSIMConfig()
    x = luma(reference)
    y = luma(test)
    check_same_shape(x[:, :, None].repeat(3, axis=2),
                     y[:, :, None].repeat(3, axis=2))
    size = config.window_size
    if x.shape[0] < size or x.shape[1] < size:
        raise ValueError(
            f"image must be at least {size}x{size} for ssim, got {x.shape}")
    kernel = _gaussian_kernel(size, config.sigma)

    def smooth(img: np.ndarray) -> np.ndarray:
        full = cv2.sepFilter2D(img, -1, kernel, kernel,
                               borderType=cv2.BORDER_CONSTANT)
        crop = size // 2
        return full[crop:img.shape[0] - crop, crop:img.shape[1] - crop]

    c1 = (config.k1 * config.dynamic_range) ** 2
    c2 = (config.k2 * config.dynamic_range) ** 2
    mu_x = smooth(x)
    mu_y = smooth(y)
    mu_xx = mu_x * mu_x
    mu_yy = mu_y * mu_y
    mu_xy = mu_x * mu_y
    var_x = smooth(x * x) - mu_xx
    var_y = smooth(y * y) - mu_yy
    cov = smooth(x * y) - mu_xy
    ssim_map = ((2.0 * mu_xy + c1) * (2.0 * cov + c2)
                / ((mu_xx + mu_yy + c1) * (var_x + var_y + c2)))
    return float(ssim_map.mean())


def cie94(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """CIE94 color difference (graphic arts constants) on LAB arrays.

    Accepts (..., 3) arrays; the first argument is treated as the
    reference for the chroma-dependent weighting terms.
    """
    lab1 = np.asarray(lab1, dtype=np.float64)
    lab2 = np.asarray(lab2, dtype=np.float64)
    if lab1.shape != lab2.shape or lab1.shape[-1] != 3:
        raise ValueError(
            f"lab arrays must share a (..., 3) shape, got {lab1.shape} and {lab2.shape}")
    dl = lab1[..., 0] - lab2[..., 0]
    c1 = np.hypot(lab1[..., 1], lab1[..., 2])
    c2 = np.hypot(lab2[..., 1], lab2[..., 2])
    dc = c1 - c2
    da = lab1[..., 1] - lab2[..., 1]
    db = lab1[..., 2] - lab2[..., 2]
    dh_sq = np.maximum(da * da + db * db - dc * dc, 0.0)
    s_c = 1.0 + 0.045 * c1
    s_h = 1.0 + 0.015 * c1
    return np.sqrt((dl) ** 2 + (dc / s_c) ** 2 + dh_sq / (s_h * s_h))


def ciede2000(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """CIEDE2000 color difference on LAB arrays of shape (..., 3).

    Implements the complete formula including the a*-axis correction,
    the hue rotation term, and all three weighting functions, with
    kL = kC = kH = 1.
    """
    lab1 = np.asarray(lab1, dtype=np.float64)
    lab2 = np.asarray(lab2, dtype=np.float64)
    if lab1.shape != lab2.shape or lab1.shape[-1] != 3:
        raise ValueError(
            f"lab arrays must share a (..., 3) shape, got {lab1.shape} and {lab2.shape}")
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    c_bar = 0.5 * (c1 + c2)
    c_bar7 = c_bar ** 7
    g = 0.5 * (1.0 - np.sqrt(c_bar7 / (c_bar7 + 25.0 ** 7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)

    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0
    h1p = np.where((b1 == 0.0) & (a1p == 0.0), 0.0, h1p)
    h2p = np.where((b2 == 0.0) & (a2p == 0.0), 0.0, h2p)

    dlp = l2 - l1
    dcp = c2p - c1p
    dh = h2p - h1p
    dh = np.where(dh > 180.0, dh - 360.0, dh)
    dh = np.where(dh < -180.0, dh + 360.0, dh)
    dh = np.where(c1p * c2p == 0.0, 0.0, dh)
    dhp = 2.0 * np.sqrt(c1p * c2p) * np.sin(np.radians(dh) / 2.0)

    l_bar = 0.5 * (l1 + l2)
    cp_bar = 0.5 * (c1p + c2p)

    h_sum = h1p + h2p
    h_diff = np.abs(h1p - h2p)
    h_bar = np.where(h_diff <= 180.0, 0.5 * h_sum,
                     np.where(h_sum < 360.0, 0.5 * (h_sum + 360.0),
                              0.5 * (h_sum - 360.0)))
    h_bar = np.where(c1p * c2p == 0.0, h_sum, h_bar)

    t = (1.0
         - 0.17 * np.cos(np.radians(h_bar - 30.0))
         + 0.24 * np.cos(np.radians(2.0 * h_bar))
         + 0.32 * np.cos(np.radians(3.0 * h_bar + 6.0))
         - 0.20 * np.cos(np.radians(4.0 * h_bar - 63.0)))
    dtheta = 30.0 * np.exp(-(((h_bar - 275.0) / 25.0) ** 2))
    cp_bar7 = cp_bar ** 7
    r_c = 2.0 * np.sqrt(cp_bar7 / (cp_bar7 + 25.0 ** 7))
    lb = (l_bar - 50.0) ** 2
    s_l = 1.0 + 0.015 * lb / np.sqrt(20.0 + lb)
    s_c = 1.0 + 0.045 * cp_bar
    s_h = 1.0 + 0.015 * cp_bar * t
    r_t = -np.sin(np.radians(2.0 * dtheta)) * r_c

    term_l = dlp / s_l
    term_c = dcp / s_c
    term_h = dhp / s_h
    return np.sqrt(term_l ** 2 + term_c ** 2 + term_h ** 2
                   + r_t * term_c * term_h)


def color_difference(reference: np.ndarray, test: np.ndarray,
                     method: str = "ciede2000") -> float:
    """Mean per-pixel color difference between two RGB images.

    method selects the formula: "cie94" or "ciede2000".
    """
    reference = check_image(reference)
    test = check_image(test)
    check_same_shape(reference, test)
    lab_ref = image_to_lab(reference)
    lab_test = image_to_lab(test)
    if method == "cie94":
        delta = cie94(lab_ref, lab_test)
    elif method == "ciede2000":
        delta = ciede2000(lab_ref, lab_test)
    else:
        raise ValueError(f"unknown color difference method: {method!r}")
    return float(delta.mean())


def average_gradient(image: np.ndarray) -> float:
    """Mean RMS of forward horizontal/vertical differences, 0-255 luma.

    Computed over the (H-1) x (W-1) region where both forward
    differences exist; larger values indicate more fine detail.
    """
    y = luma(image) * PEAK
    if y.shape[0] < 2 or y.shape[1] < 2:
        raise ValueError(
            f"image must be at least 2x2 for average_gradient, got {y.shape}")
    dx = y[:-1, 1:] - y[:-1, :-1]
    dy = y[1:, :-1] - y[:-1, :-1]
    return float(np.mean(np.sqrt((dx * dx + dy * dy) / 2.0)))


def edge_intensity(image: np.ndarray) -> float:
    """Mean Sobel gradient magnitude over interior pixels, 0-255 luma."""
    y = luma(image) * PEAK
    if y.shape[0] < 3 or y.shape[1] < 3:
        raise ValueError(
            f"image must be at least 3x3 for edge_intensity, got {y.shape}")
    gx = cv2.Sobel(y, cv2.CV_64F, 1, 0, ksize=3, borderType=cv2.BORDER_CONSTANT)
    gy = cv2.Sobel(y, cv2.CV_64F, 0, 1, ksize=3, borderType=cv2.BORDER_CONSTANT)
    mag = np.hypot(gx, gy)
    return float(mag[1:-1, 1:-1].mean())


def information_entropy(image: np.ndarray, bins: int = 256) -> float:
    """Shannon entropy (bits) of the luma histogram."""
    y = luma(image)
    counts, _ = np.histogram(y, bins=bins, range=(0.0, 1.0))
    p = counts / counts.sum()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def simple_nr_metrics(image: np.ndarray) -> dict[str, float]:
    """AG, EI, and IE of a single image as a name -> value dict."""
    return {
        "AG": average_gradient(image),
        "EI": edge_intensity(image),
        "IE": information_entropy(image),
    }
