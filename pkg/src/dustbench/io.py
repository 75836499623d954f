"""Image and depth-map file I/O.

Supported formats, chosen to keep golden tests free of lossy-codec
nondeterminism:

* PNG, 8- or 16-bit (decoded via OpenCV)
* PPM, plain ``P3`` and binary ``P6``, maxval 255 or 65535
* PFM, single-channel ``Pf``, little- or big-endian scale

Pixel data is normalized to float64 in [0, 1]; 8-bit channels map by
``v / 255``, 16-bit by ``v / 65535``. Saving an RGB image quantizes to
8 bits with round-half-up, so a save/load round trip is the identity on
the 256-level lattice.
"""

from __future__ import annotations

import os
import re

import cv2
import numpy as np

from .validation import check_depth, check_image


class ImageIOError(Exception):
    """Base class for file decoding/encoding failures."""


class UnsupportedFormatError(ImageIOError):
    """The file extension or magic number is not a supported format."""


class CorruptFileError(ImageIOError):
    """The file matched a supported format but its contents are invalid."""


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _read_bytes(path) -> bytes:
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, "rb") as fh:
        return fh.read()


def load_image(path) -> np.ndarray:
    """Load an RGB image as an (H, W, 3) float64 array in [0, 1].

    Grayscale sources are replicated across the three channels; alpha
    channels are dropped.
    """
    raw = _read_bytes(path)
    if raw[:8] == _PNG_MAGIC:
        arr = _decode_png(raw, path)
    elif raw[:2] in (b"P3", b"P6"):
        arr = _decode_ppm(raw, path)
    else:
        raise UnsupportedFormatError(
            f"{path}: not a PNG or PPM file (unrecognized magic number)"
        )
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    return np.ascontiguousarray(arr[:, :, :3])


def save_image(image, path) -> None:
    """Save an RGB image in [0, 1] as 8-bit PNG or PPM (by extension).

    Quantization is round-half-up: byte = floor(v * 255 + 0.5).
    """
    arr = check_image(image)
    data = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".png":
        ok = cv2.imwrite(str(path), data[:, :, ::-1])  # cv2 expects BGR
        if not ok:
            raise ImageIOError(f"could not write PNG to {path}")
    elif ext == ".ppm":
        _write_ppm(data, path)
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported output extension {ext!r} (use .png or .ppm)"
        )


def load_depth(path, normalize: bool = True) -> np.ndarray:
    """Load a depth map from a 16-bit grayscale PNG or a PFM file.

    With normalize=True values are rescaled affinely so min -> 0 and
    max -> 1; a constant-depth input maps to all zeros. Without it, PNG
    values map to [0, 1] by v / 65535 and PFM values are required to
    already lie in [0, 1].
    """
    raw = _read_bytes(path)
    if raw[:8] == _PNG_MAGIC:
        decoded = cv2.imdecode(np.frombuffer(raw, np.uint8), cv2.IMREAD_UNCHANGED)
        if decoded is None:
            raise CorruptFileError(f"{path}: PNG could not be decoded")
        if decoded.ndim != 2:
            raise UnsupportedFormatError(f"{path}: depth PNG must be grayscale")
        if decoded.dtype != np.uint16:
            raise UnsupportedFormatError(
                f"{path}: depth PNG must be 16-bit, got {decoded.dtype}"
            )
        depth = decoded.astype(np.float64) / 65535.0
    elif raw[:2] == b"Pf":
        depth = _decode_pfm(raw, path)
    else:
        raise UnsupportedFormatError(
            f"{path}: depth must be a 16-bit grayscale PNG or a Pf PFM file"
        )

    if normalize:
        lo, hi = depth.min(), depth.max()
        depth = np.zeros_like(depth) if hi <= lo else (depth - lo) / (hi - lo)
    elif depth.min() < 0.0 or depth.max() > 1.0:
        raise CorruptFileError(
            f"{path}: depth values outside [0, 1]; pass normalize=True"
        )
    return check_depth(depth)


def save_depth(depth, path) -> None:
    """Save a depth map in [0, 1] as 16-bit grayscale PNG or PFM."""
    arr = check_depth(depth)
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".png":
        data = np.floor(arr * 65535.0 + 0.5).astype(np.uint16)
        if not cv2.imwrite(str(path), data):
            raise ImageIOError(f"could not write PNG to {path}")
    elif ext == ".pfm":
        _write_pfm(arr, path)
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported depth extension {ext!r} (use .png or .pfm)"
        )


# ---------------------------------------------------------------------------
# PNG (via OpenCV)

def _decode_png(raw: bytes, path) -> np.ndarray:
    decoded = cv2.imdecode(np.frombuffer(raw, np.uint8), cv2.IMREAD_UNCHANGED)
    if decoded is None:
        raise CorruptFileError(f"{path}: PNG could not be decoded")
    if decoded.dtype == np.uint8:
        scale = 255.0
    elif decoded.dtype == np.uint16:
        scale = 65535.0
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported PNG sample type {decoded.dtype}"
        )
    arr = decoded.astype(np.float64) / scale
    if arr.ndim == 3:
        arr = arr[:, :, :3][:, :, ::-1]  # drop alpha, BGR -> RGB
    return arr


# ---------------------------------------------------------------------------
# PPM (P3 plain / P6 binary)

def _ppm_tokens(raw: bytes):
    """Yield whitespace-separated header tokens, skipping '#' comments."""
    pos = 0
    while pos < len(raw):
        m = re.compile(rb"\s*(#[^\n\r]*[\n\r]|\S+)").match(raw, pos)
        if m is None:
            return
        pos = m.end()
        tok = m.group(1)
        if not tok.startswith(b"#"):
            yield tok, pos


def _decode_ppm(raw: bytes, path) -> np.ndarray:
    tokens = _ppm_tokens(raw)
    try:
        magic = next(tokens)[0]
        width = int(next(tokens)[0])
        height = int(next(tokens)[0])
        maxval, data_start = next(tokens)
        maxval = int(maxval)
    except (StopIteration, ValueError) as exc:
        raise CorruptFileError(f"{path}: malformed PPM header") from exc
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise CorruptFileError(
            f"{path}: invalid PPM dimensions or maxval "
            f"({width}x{height}, maxval {maxval})"
        )
    n = width * height * 3

    if magic == b"P3":
        fields = raw[data_start:].split()
        if len(fields) < n:
            raise CorruptFileError(f"{path}: PPM pixel data truncated")
        try:
            values = np.array(fields[:n], dtype=np.float64)
        except ValueError as exc:
            raise CorruptFileError(f"{path}: non-numeric P3 pixel data") from exc
    else:
        # P6: exactly one whitespace byte separates maxval from pixel data.
        payload = raw[data_start + 1:]
        if maxval < 256:
            if len(payload) < n:
                raise CorruptFileError(f"{path}: PPM pixel data truncated")
            values = np.frombuffer(payload[:n], dtype=np.uint8).astype(np.float64)
        else:
            if len(payload) < 2 * n:
                raise CorruptFileError(f"{path}: PPM pixel data truncated")
            values = np.frombuffer(payload[:2 * n], dtype=">u2").astype(np.float64)

    if values.max() > maxval:
        raise CorruptFileError(f"{path}: PPM sample exceeds maxval {maxval}")
    return (values / maxval).reshape(height, width, 3)


def _write_ppm(data: np.ndarray, path, plain: bool = False) -> None:
    height, width = data.shape[:2]
    header = f"P3\n{width} {height}\n255\n" if plain else f"P6\n{width} {height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        if plain:
            flat = data.reshape(-1, 3)
            lines = (" ".join(str(int(v)) for v in px) for px in flat)
            fh.write("\n".join(lines).encode("ascii"))
            fh.write(b"\n")
        else:
            fh.write(data.tobytes())


def save_image_ppm_plain(image, path) -> None:
    """Save an RGB image as plain-text P3 PPM (8-bit, round-half-up)."""
    arr = check_image(image)
    data = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    _write_ppm(data, path, plain=True)


# ---------------------------------------------------------------------------
# PFM (single channel 'Pf'; sign of the scale encodes endianness)

def _decode_pfm(raw: bytes, path) -> np.ndarray:
    # Header is "Pf", width, height, scale, each followed by exactly one
    # whitespace byte before the binary payload begins.
    m = re.match(rb"Pf\s+(\d+)\s+(\d+)\s+([-+]?[0-9.eE+-]+)\s", raw)
    if m is None:
        raise CorruptFileError(f"{path}: malformed PFM header")
    try:
        width, height = int(m.group(1)), int(m.group(2))
        scale = float(m.group(3))
    except ValueError as exc:
        raise CorruptFileError(f"{path}: malformed PFM header") from exc
    if width <= 0 or height <= 0 or scale == 0.0:
        raise CorruptFileError(f"{path}: invalid PFM dimensions or scale")

    dtype = "<f4" if scale < 0 else ">f4"
    n = width * height
    payload = raw[m.end():]
    if len(payload) < 4 * n:
        raise CorruptFileError(f"{path}: PFM pixel data truncated")
    values = np.frombuffer(payload[:4 * n], dtype=dtype).astype(np.float64)
    if not np.isfinite(values).all():
        raise CorruptFileError(f"{path}: PFM contains NaN or Inf samples")
    # PFM scanlines run bottom to top.
    return values.reshape(height, width)[::-1].copy()


def _write_pfm(depth: np.ndarray, path) -> None:
    height, width = depth.shape
    with open(path, "wb") as fh:
        fh.write(f"Pf\n{width} {height}\n-1.0\n".encode("ascii"))
        fh.write(depth[::-1].astype("<f4").tobytes())
