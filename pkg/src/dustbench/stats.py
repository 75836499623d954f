"""Channel statistics and the three sandstorm color priors.

Sandstorm-degraded images show three distribution signatures relative
to clear scenes: the R, G, B histograms are displaced from one another
(shifting), each is squeezed into a narrow band (concentration), and
the displacement is ordered with red above green above blue
(sequential). prior_characteristics scores all three and combines them
into a single verdict with configurable thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .color import image_to_lab
from .validation import check_image

DEFAULT_SIGMA_MAX = 0.18
DEFAULT_DELTA_MIN = 0.02


@dataclass(frozen=True)
class HistogramSet:
    """Per-channel normalized histograms plus raw-pixel moments.

    freq has shape (3, bins) and each row sums to 1. mean/std and the
    central 95% interval are computed from the raw pixels, not the bins.
    """

    bins: int
    freq: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    interval95: np.ndarray

    def to_csv(self) -> str:
        lines = ["bin_index,freq_r,freq_g,freq_b"]
        for i in range(self.bins):
            lines.append(
                f"{i},{self.freq[0, i]:.10g},{self.freq[1, i]:.10g},{self.freq[2, i]:.10g}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PriorReport:
    """Scores for the shifting/concentration/sequential priors."""

    channel_means: tuple[float, float, float]
    sequential_ok: bool
    concentration_scores: tuple[float, float, float]
    shifting_score: float
    sigma_max: float
    delta_min: float
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "channel_means": list(self.channel_means),
            "sequential_ok": self.sequential_ok,
            "concentration_scores": list(self.concentration_scores),
            "shifting_score": self.shifting_score,
            "sigma_max": self.sigma_max,
            "delta_min": self.delta_min,
            "verdict": self.verdict,
        }


def channel_histograms(image: np.ndarray, bins: int = 256) -> HistogramSet:
    """Uniform-width histograms of [0, 1] per channel; 1.0 lands in the
    last bin. Frequencies are normalized to sum to 1.
    """
    image = check_image(image)
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    n = image.shape[0] * image.shape[1]
    freq = np.empty((3, bins))
    mean = np.empty(3)
    std = np.empty(3)
    interval = np.empty((3, 2))
    for c in range(3):
        channel = image[:, :, c].ravel()
        counts, _ = np.histogram(channel, bins=bins, range=(0.0, 1.0))
        freq[c] = counts / n
        mean[c] = channel.mean()
        std[c] = channel.std()
        interval[c] = np.percentile(channel, [2.5, 97.5])
    return HistogramSet(bins=bins, freq=freq, mean=mean, std=std, interval95=interval)


def prior_characteristics(image: np.ndarray,
                          sigma_max: float = DEFAULT_SIGMA_MAX,
                          delta_min: float = DEFAULT_DELTA_MIN) -> PriorReport:
    """Evaluate the three sandstorm priors on one image.

    sequential: strict channel-mean ordering R > G > B.
    concentration: every per-channel standard deviation <= sigma_max.
    shifting: the minimum pairwise distance between channel means
    >= delta_min. The verdict is the conjunction of the three.
    """
    image = check_image(image)
    means = image.reshape(-1, 3).mean(axis=0)
    stds = image.reshape(-1, 3).std(axis=0)
    sequential = bool(means[0] > means[1] > means[2])
    shifting = float(min(
        abs(means[0] - means[1]),
        abs(means[0] - means[2]),
        abs(means[1] - means[2]),
    ))
    verdict = sequential and bool((stds <= sigma_max).all()) and shifting >= delta_min
    return PriorReport(
        channel_means=tuple(float(m) for m in means),
        sequential_ok=sequential,
        concentration_scores=tuple(float(s) for s in stds),
        shifting_score=shifting,
        sigma_max=float(sigma_max),
        delta_min=float(delta_min),
        verdict=verdict,
    )


def color_quantize(image: np.ndarray, levels: int) -> np.ndarray:
    """Quantize each channel to `levels` uniform values in [0, 1].

    Nearest-level rounding (half up); idempotent, and the identity on
    images already on the matching lattice (levels=256 for 8-bit data).
    """
    image = check_image(image)
    if not 2 <= levels <= 256:
        raise ValueError(f"levels must be in [2, 256], got {levels}")
    steps = levels - 1
    return np.floor(image * steps + 0.5) / steps


class ColorQuantizer(BaseEstimator, TransformerMixin):
    """Transformer form of color_quantize for pipeline use."""

    def __init__(self, levels: int = 16):
        self.levels = levels

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        return color_quantize(X, self.levels)


def lab_samples(image: np.ndarray, cap: int = 50000, seed: int = 0,
                quantize_levels: int | None = None) -> np.ndarray:
    """Uniformly subsampled pixels of an image as (N, 3) LAB points.

    Optional color quantization first, mirroring hue-extraction
    pipelines that cluster palette entries rather than raw pixels.
    A cap bounds the clustering cost; sampling is seeded.
    """
    image = check_image(image)
    if quantize_levels is not None:
        image = color_quantize(image, quantize_levels)
    pixels = image.reshape(-1, 3)
    if cap is not None and pixels.shape[0] > cap:
        rng = np.random.default_rng(seed)
        idx = rng.choice(pixels.shape[0], size=cap, replace=False)
        pixels = pixels[np.sort(idx)]
    return image_to_lab(pixels.reshape(1, -1, 3)).reshape(-1, 3)
