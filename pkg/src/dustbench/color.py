"""Color-space conversions and the sandstorm tint palette.

The LAB pipeline is fixed: sRGB transfer function (IEC 61966-2-1),
linear RGB -> XYZ under the D65 white point, then CIELAB. L spans
[0, 100]; a and b are roughly [-128, 127].

Global color deviations are per-channel ambient tints with the strict
sandstorm ordering r > g > b (red attenuated least, blue most). The
default palette holds 21 deviations measured from the deepest-field
regions of real sandstorm photographs.
"""

from __future__ import annotations

import re
from typing import NamedTuple

import numpy as np

from .validation import check_image

# D65 reference white and the sRGB -> XYZ matrix.
_WHITE_D65 = np.array([0.95047, 1.0, 1.08883])
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])

# CIELAB f(t) breakpoints.
_LAB_EPS = (6.0 / 29.0) ** 3
_LAB_SLOPE = (29.0 / 6.0) ** 2 / 3.0


class ColorDeviation(NamedTuple):
    """A global color deviation: per-channel tint intensity in [0, 1]."""

    r: float
    g: float
    b: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)

    def hex_code(self) -> str:
        """Nearest 8-bit hex encoding, '#RRGGBB'."""
        r, g, b = (int(np.floor(v * 255.0 + 0.5)) for v in self)
        return f"#{r:02X}{g:02X}{b:02X}"


def srgb_to_linear(v: np.ndarray) -> np.ndarray:
    """IEC 61966-2-1 inverse transfer function, [0, 1] -> [0, 1]."""
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(v: np.ndarray) -> np.ndarray:
    """IEC 61966-2-1 forward transfer function, [0, 1] -> [0, 1]."""
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.0031308, v * 12.92, 1.055 * v ** (1.0 / 2.4) - 0.055)


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """Convert sRGB values in [0, 1] to CIELAB (D65).

    Accepts any array whose last axis has length 3, so it works on
    whole (H, W, 3) images and on (N, 3) sample lists alike.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise ValueError(f"last axis must have length 3, got shape {rgb.shape}")
    xyz = srgb_to_linear(rgb) @ _RGB_TO_XYZ.T
    ratio = xyz / _WHITE_D65
    f = np.where(ratio > _LAB_EPS, np.cbrt(ratio), _LAB_SLOPE * ratio + 4.0 / 29.0)
    lab = np.empty_like(rgb)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def image_to_lab(image: np.ndarray) -> np.ndarray:
    """rgb_to_lab with full image validation on the input."""
    return rgb_to_lab(check_image(image))


_HEX_RE = re.compile(r"^#([0-9a-fA-F]{2})([0-9a-fA-F]{2})([0-9a-fA-F]{2})$")


def parse_hex(code: str) -> ColorDeviation:
    """Parse '#RRGGBB' into a ColorDeviation, enforcing r > g > b.

    Raises ValueError for malformed codes and for codes violating the
    sandstorm channel ordering.
    """
    m = _HEX_RE.match(code.strip())
    if m is None:
        raise ValueError(f"malformed hex color {code!r}, expected '#RRGGBB'")
    r, g, b = (int(m.group(i), 16) / 255.0 for i in (1, 2, 3))
    if not r > g > b:
        raise ValueError(
            f"{code!r} violates the sandstorm ordering r > g > b "
            f"(got r={r:.5f}, g={g:.5f}, b={b:.5f})"
        )
    return ColorDeviation(r, g, b)


# Default global color deviations (hex-encoded), all satisfying r > g > b.
DEFAULT_PALETTE_HEX: tuple[str, ...] = (
    "#C89463", "#C6853D", "#C17137", "#BB9C87", "#B9A99C", "#B97455",
    "#B78E56", "#B56F4B", "#B37A43", "#B39163", "#A77135", "#A58961",
    "#A14A10", "#986339", "#977A38", "#8C6E38", "#84674C", "#826934",
    "#7D6E4A", "#7C766A", "#6F5633",
)


def default_palette() -> list[ColorDeviation]:
    """The 21 built-in global color deviations."""
    return [parse_hex(code) for code in DEFAULT_PALETTE_HEX]


def load_palette(codes) -> list[ColorDeviation]:
    """Validate a user-supplied list of hex codes into a palette."""
    palette = [parse_hex(code) for code in codes]
    if not palette:
        raise ValueError("palette must contain at least one color")
    return palette
