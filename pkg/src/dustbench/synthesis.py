"""Sand-dust scattering model and degradation parameter sampling.

A clear image J is degraded by an ambient tint A (the global color
deviation) and an attenuation coefficient beta acting through the
per-pixel transmission t = exp(-beta * d):

    I = (J - A') * t + A        with A' = 1 - A per channel

The same result decomposes into two intermediates: the inherent
deviation J_c = J + A - 1, carrying the tinted surface reflectance, and
J_d = J_c * t, carrying the dust distribution, so that I = J_d + A.
Intermediates are carried unclamped; the final image is clamped to
[0, 1] once, with clip statistics recorded, because strong tints (low
blue deviations especially) provably under- or overflow and that lost
information is what makes heavy sandstorms irreversible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .color import ColorDeviation, default_palette, parse_hex
from .validation import (
    check_beta,
    check_color_triple,
    check_depth,
    check_image,
    check_same_shape,
    check_transmission,
    check_unclamped_image,
)


class IntensityClass(NamedTuple):
    """A named dust intensity with its attenuation coefficient range."""

    tag: str
    beta_range: tuple[float, float]


LIGHT = IntensityClass("light", (0.3, 0.4))
MEDIUM = IntensityClass("medium", (0.4, 0.5))
DENSE = IntensityClass("dense", (0.5, 0.6))
HYBRID = IntensityClass("hybrid", (0.3, 0.6))

INTENSITY_CLASSES: dict[str, IntensityClass] = {
    c.tag: c for c in (LIGHT, MEDIUM, DENSE, HYBRID)
}


def intensity_class(name: str) -> IntensityClass:
    """Look up an intensity class by tag (case-insensitive)."""
    try:
        return INTENSITY_CLASSES[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown intensity class {name!r}; "
            f"expected one of {sorted(INTENSITY_CLASSES)}"
        ) from None


class ScatterParams(NamedTuple):
    """Degradation parameters: global color deviation and attenuation."""

    a_s: ColorDeviation
    beta: float


@dataclass(frozen=True)
class SynthesisResult:
    """Clamped output image plus pre-clamp statistics.

    clip_fraction is the share of channel samples that hit the [0, 1]
    clamp; it is 0 exactly when the pre-clamp extrema already lie in
    [0, 1].
    """

    image: np.ndarray
    pre_clamp_min: np.ndarray
    pre_clamp_max: np.ndarray
    clip_fraction: float


def transmission_map(depth: np.ndarray, beta: float) -> np.ndarray:
    """Per-pixel transmission t = exp(-beta * d).

    beta may be any finite positive value here; the (0, 1] envelope of
    the benchmark classes is enforced where parameters are sampled.
    """
    depth = check_depth(depth)
    beta = check_beta(beta)
    return np.exp(-beta * depth)


def inherent_deviation(clear: np.ndarray, a_s) -> np.ndarray:
    """Tinted surface reflectance J_c = J + A - 1 (unclamped)."""
    clear = check_image(clear, "clear")
    a_s = check_color_triple(a_s)
    return clear + a_s - 1.0


def apply_transmission(j_c: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Dust distribution J_d = J_c * t (unclamped, shared t per channel)."""
    j_c = check_unclamped_image(j_c, "j_c")
    t = check_transmission(t)
    check_same_shape(j_c, t, "j_c", "transmission")
    return j_c * t[:, :, None]


def synthesize(clear: np.ndarray, depth: np.ndarray, a_s, beta: float) -> SynthesisResult:
    """Run the full scattering model on a clear image + depth pair.

    Computes I = (J - (1 - A)) * t + A directly, records the per-channel
    pre-clamp extrema and the clipped-sample fraction, and clamps once
    to [0, 1].
    """
    clear = check_image(clear, "clear")
    depth = check_depth(depth)
    check_same_shape(clear, depth, "clear", "depth")
    a_s = check_color_triple(a_s)
    t = transmission_map(depth, beta)

    pre_clamp = (clear - (1.0 - a_s)) * t[:, :, None] + a_s
    clipped = float(np.mean((pre_clamp < 0.0) | (pre_clamp > 1.0)))
    return SynthesisResult(
        image=np.clip(pre_clamp, 0.0, 1.0),
        pre_clamp_min=pre_clamp.min(axis=(0, 1)),
        pre_clamp_max=pre_clamp.max(axis=(0, 1)),
        clip_fraction=clipped,
    )


def sample_params(seed: int, intensity: IntensityClass,
                  palette: Sequence[ColorDeviation]) -> ScatterParams:
    """Draw (A, beta) for one image: beta uniform over the class range,
    A uniform over the palette. Deterministic for a fixed seed; beta is
    drawn before the palette index.
    """
    if len(palette) == 0:
        raise ValueError("palette must be non-empty")
    lo, hi = intensity.beta_range
    if not 0.0 < lo <= hi <= 1.0:
        raise ValueError(f"beta range {intensity.beta_range} outside (0, 1]")
    rng = np.random.default_rng(seed)
    beta = float(rng.uniform(lo, hi))
    a_s = palette[int(rng.integers(len(palette)))]
    if not isinstance(a_s, ColorDeviation):
        a_s = ColorDeviation(*check_color_triple(a_s))
    return ScatterParams(a_s=a_s, beta=beta)


def derive_entry_seed(master_seed: int, subset: str, index: int) -> int:
    """Per-entry seed from (master seed, subset name, entry index).

    Uses SHA-256 so regeneration is identical across platforms and
    Python processes (the builtin hash is salted).
    """
    digest = hashlib.sha256(f"{master_seed}:{subset}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class DustSynthesizer(BaseEstimator):
    """Stateless transformer applying the scattering model to image pairs.

    Parameters
    ----------
    a_s : str or sequence of 3 floats
        Global color deviation, as a '#RRGGBB' hex code or an RGB
        triple in [0, 1].
    beta : float
        Attenuation coefficient, > 0.
    """

    def __init__(self, a_s="#C89463", beta: float = 0.45):
        self.a_s = a_s
        self.beta = beta

    def _deviation(self) -> np.ndarray:
        if isinstance(self.a_s, str):
            return parse_hex(self.a_s).as_array()
        return check_color_triple(self.a_s)

    def fit(self, X=None, y=None):
        """No-op; present for pipeline compatibility."""
        return self

    def synthesize(self, clear: np.ndarray, depth: np.ndarray) -> SynthesisResult:
        """Full result including pre-clamp statistics."""
        return synthesize(clear, depth, self._deviation(), self.beta)

    def transform(self, clear: np.ndarray, depth: np.ndarray) -> np.ndarray:
        """Degraded image only (clamped to [0, 1])."""
        return self.synthesize(clear, depth).image


def default_scatter_palette() -> list[ColorDeviation]:
    """Alias for the built-in 21-entry deviation palette."""
    return default_palette()
