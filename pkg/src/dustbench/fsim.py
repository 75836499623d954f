"""Feature similarity (FSIM / FSIMc) built on phase congruency.

Phase congruency is computed with a bank of log-Gabor filters (4
scales x 4 orientations, minimum wavelength 6, scaling factor 2,
sigma_onf 0.55) under a raised Butterworth low-pass envelope, with a
median-based Rayleigh noise threshold accumulated over scales as a
geometric series. Gradient magnitude uses the Scharr operator. The
chrominance term compares the I/Q channels of YIQ. All stages run on
the 0-255 intensity scale, matching the stabilization constants
(T1=0.85, T2=160, T3=T4=200, lambda=0.03).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .validation import check_image, check_same_shape


@dataclass(frozen=True)
class FSIMConfig:
    """Filter-bank and similarity constants for fsim()/fsimc()."""

    nscale: int = 4
    norient: int = 4
    min_wavelength: float = 6.0
    mult: float = 2.0
    sigma_onf: float = 0.55
    dtheta_on_sigma: float = 1.2
    k_noise: float = 2.0
    epsilon: float = 1e-4
    lowpass_cutoff: float = 0.45
    lowpass_order: int = 15
    t_pc: float = 0.85
    t_gradient: float = 160.0
    t_i: float = 200.0
    t_q: float = 200.0
    lambda_chroma: float = 0.03


_SCHARR_DX = np.array([[3.0, 0.0, -3.0],
                       [10.0, 0.0, -10.0],
                       [3.0, 0.0, -3.0]]) / 16.0


def _frequency_grid(rows: int, cols: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalized radius and polar angle, DC at index [0, 0]."""
    if cols % 2:
        xrange = np.arange(-(cols - 1) / 2, (cols - 1) / 2 + 1) / (cols - 1)
    else:
        xrange = np.arange(-cols / 2, cols / 2) / cols
    if rows % 2:
        yrange = np.arange(-(rows - 1) / 2, (rows - 1) / 2 + 1) / (rows - 1)
    else:
        yrange = np.arange(-rows / 2, rows / 2) / rows
    x, y = np.meshgrid(xrange, yrange)
    radius = np.fft.ifftshift(np.sqrt(x * x + y * y))
    theta = np.fft.ifftshift(np.arctan2(-y, x))
    return radius, theta


def phase_congruency(image: np.ndarray,
                     config: FSIMConfig | None = None) -> np.ndarray:
    """Phase congruency map of a single-channel image.

    Sums, over orientations, the noise-thresholded local energy and
    normalizes by the total filter-response amplitude. Returns values
    in [0, 1]; a constant image yields an all-zero map.
    """
    if config is None:
        config = FSIMConfig()
    im = np.asarray(image, dtype=np.float64)
    if im.ndim != 2:
        raise ValueError(f"phase_congruency expects a 2-d array, got {im.shape}")
    rows, cols = im.shape
    radius, theta = _frequency_grid(rows, cols)
    radius[0, 0] = 1.0
    sintheta = np.sin(theta)
    costheta = np.cos(theta)

    lowpass = 1.0 / (1.0 + (radius / config.lowpass_cutoff)
                     ** (2 * config.lowpass_order))
    log_gabor = []
    for s in range(config.nscale):
        wavelength = config.min_wavelength * config.mult ** s
        fo = 1.0 / wavelength
        lg = np.exp(-(np.log(radius / fo)) ** 2
                    / (2.0 * math.log(config.sigma_onf) ** 2))
        lg *= lowpass
        lg[0, 0] = 0.0
        log_gabor.append(lg)

    theta_sigma = math.pi / config.norient / config.dtheta_on_sigma
    image_fft = np.fft.fft2(im)
    energy_all = np.zeros((rows, cols))
    an_all = np.zeros((rows, cols))

    for o in range(config.norient):
        angl = o * math.pi / config.norient
        ds = sintheta * math.cos(angl) - costheta * math.sin(angl)
        dc = costheta * math.cos(angl) + sintheta * math.sin(angl)
        dtheta = np.abs(np.arctan2(ds, dc))
        spread = np.exp(-(dtheta * dtheta) / (2.0 * theta_sigma * theta_sigma))

        sum_e = np.zeros((rows, cols))
        sum_o = np.zeros((rows, cols))
        sum_an = np.zeros((rows, cols))
        responses = []
        tau = 0.0
        for s in range(config.nscale):
            eo = np.fft.ifft2(image_fft * (log_gabor[s] * spread))
            responses.append(eo)
            an = np.abs(eo)
            sum_an += an
            sum_e += eo.real
            sum_o += eo.imag
            if s == 0:
                # Smallest scale carries the best noise estimate: the
                # amplitude of Gaussian noise is Rayleigh, whose median
                # fixes the scale parameter.
                tau = float(np.median(an)) / math.sqrt(math.log(4.0))

        x_energy = np.sqrt(sum_e * sum_e + sum_o * sum_o) + config.epsilon
        mean_e = sum_e / x_energy
        mean_o = sum_o / x_energy
        energy = np.zeros((rows, cols))
        for eo in responses:
            e, od = eo.real, eo.imag
            energy += e * mean_e + od * mean_o - np.abs(e * mean_o - od * mean_e)

        # Noise response shrinks with bandwidth at successive scales,
        # giving a geometric series for the total.
        total_tau = tau * (1.0 - (1.0 / config.mult) ** config.nscale) \
            / (1.0 - 1.0 / config.mult)
        noise_mean = total_tau * math.sqrt(math.pi / 2.0)
        noise_sigma = total_tau * math.sqrt((4.0 - math.pi) / 2.0)
        threshold = noise_mean + config.k_noise * noise_sigma
        energy_all += np.maximum(energy - threshold, 0.0)
        an_all += sum_an

    return energy_all / (an_all + config.epsilon)


def _rgb_to_yiq_255(image: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = image[:, :, 0] * 255.0
    g = image[:, :, 1] * 255.0
    b = image[:, :, 2] * 255.0
    y = 0.299 * r + 0.587 * g + 0.114 * b
    i = 0.596 * r - 0.274 * g - 0.322 * b
    q = 0.211 * r - 0.523 * g + 0.312 * b
    return y, i, q


def _average_downsample(channel: np.ndarray, factor: int) -> np.ndarray:
    """Box-average (zero padded) then keep every factor-th sample."""
    if factor == 1:
        return channel
    kernel = np.full((factor, factor), 1.0 / (factor * factor))
    anchor = factor - 1 - factor // 2
    smoothed = cv2.filter2D(channel, -1, kernel, anchor=(anchor, anchor),
                            borderType=cv2.BORDER_CONSTANT)
    return smoothed[::factor, ::factor]


def _scharr_magnitude(channel: np.ndarray) -> np.ndarray:
    gx = cv2.filter2D(channel, -1, _SCHARR_DX,
                      borderType=cv2.BORDER_CONSTANT)
    gy = cv2.filter2D(channel, -1, _SCHARR_DX.T,
                      borderType=cv2.BORDER_CONSTANT)
    return np.sqrt(gx * gx + gy * gy)


def _similarity(m1: np.ndarray, m2: np.ndarray, t: float) -> np.ndarray:
    return (2.0 * m1 * m2 + t) / (m1 * m1 + m2 * m2 + t)


def _fsim_core(reference: np.ndarray, test: np.ndarray,
               config: FSIMConfig, with_chroma: bool) -> float:
    reference = check_image(reference)
    test = check_image(test)
    check_same_shape(reference, test)
    rows, cols = reference.shape[:2]
    if min(rows, cols) < 32:
        raise ValueError(
            f"image must be at least 32x32 for fsim, got {rows}x{cols}")

    y1, i1, q1 = _rgb_to_yiq_255(reference)
    y2, i2, q2 = _rgb_to_yiq_255(test)
    factor = max(1, int(round(min(rows, cols) / 256.0)))
    y1 = _average_downsample(y1, factor)
    y2 = _average_downsample(y2, factor)

    pc1 = phase_congruency(y1, config)
    pc2 = phase_congruency(y2, config)
    g1 = _scharr_magnitude(y1)
    g2 = _scharr_magnitude(y2)

    pc_m = np.maximum(pc1, pc2)
    weight_total = float(pc_m.sum())
    if weight_total == 0.0:
        # Featureless inputs (e.g. constant images) give an empty
        # weighting mask; similarity is defined only for exact equality.
        return 1.0 if np.array_equal(reference, test) else math.nan

    sim = _similarity(pc1, pc2, config.t_pc) \
        * _similarity(g1, g2, config.t_gradient)
    if with_chroma:
        i1 = _average_downsample(i1, factor)
        i2 = _average_downsample(i2, factor)
        q1 = _average_downsample(q1, factor)
        q2 = _average_downsample(q2, factor)
        s_chroma = _similarity(i1, i2, config.t_i) \
            * _similarity(q1, q2, config.t_q)
        # The chroma product can go negative; the fractional power is
        # evaluated on the complex plane and its real part retained.
        sim = sim * np.real(np.power(s_chroma.astype(complex),
                                     config.lambda_chroma))
    return float((sim * pc_m).sum() / weight_total)


def fsim(reference: np.ndarray, test: np.ndarray,
         config: FSIMConfig | None = None) -> float:
    """Luma-only feature similarity index in [0, 1]."""
    return _fsim_core(reference, test, config or FSIMConfig(),
                      with_chroma=False)


def fsimc(reference: np.ndarray, test: np.ndarray,
          config: FSIMConfig | None = None) -> float:
    """Color feature similarity index (chrominance-aware) in [0, 1]."""
    return _fsim_core(reference, test, config or FSIMConfig(),
                      with_chroma=True)
