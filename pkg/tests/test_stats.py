"""Channel histograms, sandstorm priors, quantization, LAB sampling."""

import numpy as np
import pytest

from dustbench import (
    DENSE,
    ColorQuantizer,
    channel_histograms,
    color_quantize,
    default_palette,
    derive_entry_seed,
    image_to_lab,
    lab_samples,
    prior_characteristics,
    sample_params,
    synthesize,
)
from helpers import balanced_image, depth_map


# ---------------------------------------------------------------------------
# channel_histograms


def test_histogram_constant_gray():
    hist = channel_histograms(np.full((4, 4, 3), 0.5), bins=256)
    for c in range(3):
        assert hist.freq[c].sum() == pytest.approx(1.0, abs=1e-9)
        nonzero = np.nonzero(hist.freq[c])[0]
        assert nonzero.tolist() == [128]
        assert hist.freq[c, 128] == 1.0


def test_histogram_two_extremes():
    image = np.array([[[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]])
    hist = channel_histograms(image, bins=256)
    for c in range(3):
        assert hist.freq[c, 0] == 0.5
        assert hist.freq[c, 255] == 0.5
        assert hist.freq[c].sum() == pytest.approx(1.0, abs=1e-12)


def test_histogram_moments_match_pixels():
    rng = np.random.default_rng(0)
    image = rng.random((20, 30, 3))
    hist = channel_histograms(image)
    for c in range(3):
        channel = image[:, :, c].ravel()
        assert hist.mean[c] == pytest.approx(channel.mean(), abs=1e-9)
        assert hist.std[c] == pytest.approx(channel.std(), abs=1e-9)
        np.testing.assert_allclose(hist.interval95[c],
                                   np.percentile(channel, [2.5, 97.5]),
                                   atol=1e-9)


def test_histogram_bins_validation():
    with pytest.raises(ValueError, match="bins"):
        channel_histograms(np.zeros((2, 2, 3)), bins=1)
    hist = channel_histograms(np.zeros((2, 2, 3)), bins=2)
    assert hist.freq.shape == (3, 2)


def test_histogram_synthesized_means_ordered():
    clear = balanced_image(7)
    depth = depth_map(7)
    params = sample_params(derive_entry_seed(0, "dense", 0), DENSE,
                           default_palette())
    degraded = synthesize(clear, depth, params.a_s, params.beta).image
    hist = channel_histograms(degraded)
    assert hist.mean[0] > hist.mean[1] > hist.mean[2]


def test_histogram_csv_shape():
    hist = channel_histograms(balanced_image(1), bins=16)
    lines = hist.to_csv().strip().split("\n")
    assert lines[0] == "bin_index,freq_r,freq_g,freq_b"
    assert len(lines) == 17
    table = np.array([line.split(",")[1:] for line in lines[1:]],
                     dtype=np.float64)
    np.testing.assert_allclose(table.sum(axis=0), [1.0, 1.0, 1.0], atol=1e-9)


# ---------------------------------------------------------------------------
# prior_characteristics


def test_priors_gray_image():
    report = prior_characteristics(np.full((4, 4, 3), 0.5))
    assert report.sequential_ok is False
    assert report.shifting_score == 0.0
    assert report.concentration_scores == (0.0, 0.0, 0.0)
    assert report.verdict is False


def test_priors_constant_ordered_image():
    image = np.zeros((2, 2, 3))
    image[:, :, 0] = 0.8
    image[:, :, 1] = 0.5
    image[:, :, 2] = 0.2
    report = prior_characteristics(image)
    assert report.sequential_ok is True
    assert report.concentration_scores == (0.0, 0.0, 0.0)
    assert report.shifting_score == pytest.approx(0.3, abs=1e-12)
    assert report.verdict is True


def test_priors_clear_vs_synthesized():
    clear = balanced_image(100)
    depth = depth_map(200)
    params = sample_params(derive_entry_seed(7, "dense", 0), DENSE,
                           default_palette())
    degraded = synthesize(clear, depth, params.a_s, params.beta).image
    assert prior_characteristics(degraded).verdict is True
    assert prior_characteristics(clear).verdict is False


def test_priors_threshold_knobs():
    image = np.zeros((2, 2, 3))
    image[:, :, 0] = 0.52
    image[:, :, 1] = 0.50
    image[:, :, 2] = 0.48
    tight = prior_characteristics(image, delta_min=0.05)
    loose = prior_characteristics(image, delta_min=0.01)
    assert tight.verdict is False
    assert loose.verdict is True
    noisy = np.clip(image + np.random.default_rng(0).normal(0, 0.3,
                                                            image.shape),
                    0.0, 1.0)
    assert prior_characteristics(noisy, sigma_max=0.05).verdict is False


def test_priors_to_dict_keys():
    report = prior_characteristics(balanced_image(2))
    data = report.to_dict()
    assert set(data) == {"channel_means", "sequential_ok",
                         "concentration_scores", "shifting_score",
                         "sigma_max", "delta_min", "verdict"}
    assert isinstance(data["verdict"], bool)


# ---------------------------------------------------------------------------
# color_quantize / ColorQuantizer


def test_quantize_two_levels_example():
    image = np.array([[[0.4, 0.6, 0.9]]])
    np.testing.assert_array_equal(color_quantize(image, 2),
                                  np.array([[[0.0, 1.0, 1.0]]]))


def test_quantize_idempotent():
    rng = np.random.default_rng(1)
    image = rng.random((8, 8, 3))
    once = color_quantize(image, 7)
    np.testing.assert_array_equal(color_quantize(once, 7), once)


def test_quantize_identity_on_8bit_lattice():
    rng = np.random.default_rng(2)
    image = rng.integers(0, 256, (6, 6, 3)).astype(np.float64) / 255.0
    np.testing.assert_array_equal(color_quantize(image, 256), image)


def test_quantize_values_on_lattice():
    rng = np.random.default_rng(3)
    image = rng.random((10, 10, 3))
    quantized = color_quantize(image, 5)
    lattice = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    assert np.isin(quantized, lattice).all()
    assert np.abs(quantized - image).max() <= 0.125 + 1e-12


@pytest.mark.parametrize("levels", [1, 0, 257, -3])
def test_quantize_rejects_bad_levels(levels):
    with pytest.raises(ValueError, match="levels"):
        color_quantize(np.zeros((2, 2, 3)), levels)


def test_color_quantizer_transformer():
    rng = np.random.default_rng(4)
    image = rng.random((5, 5, 3))
    est = ColorQuantizer(levels=9)
    assert est.get_params() == {"levels": 9}
    np.testing.assert_array_equal(est.fit().transform(image),
                                  color_quantize(image, 9))
    np.testing.assert_array_equal(est.fit_transform(image),
                                  color_quantize(image, 9))


# ---------------------------------------------------------------------------
# lab_samples


def test_lab_samples_no_cap_returns_all_pixels():
    image = balanced_image(5, size=16)
    samples = lab_samples(image, cap=10000)
    assert samples.shape == (256, 3)
    np.testing.assert_allclose(samples,
                               image_to_lab(image).reshape(-1, 3),
                               atol=1e-12)


def test_lab_samples_cap_and_seed():
    image = balanced_image(6, size=64)  # 4096 pixels
    a = lab_samples(image, cap=500, seed=1)
    b = lab_samples(image, cap=500, seed=1)
    c = lab_samples(image, cap=500, seed=2)
    assert a.shape == (500, 3)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_lab_samples_quantize_pre_step():
    image = balanced_image(7, size=16)
    quantized = lab_samples(image, cap=10000, quantize_levels=4)
    direct = image_to_lab(color_quantize(image, 4)).reshape(-1, 3)
    np.testing.assert_allclose(quantized, direct, atol=1e-12)
    distinct = np.unique(np.round(quantized, 9), axis=0)
    assert distinct.shape[0] <= 64  # at most 4^3 quantized colors
