"""dustbench: sand-dust image benchmark toolkit.

Synthesizes sand-dust degraded images from clear image + depth pairs
via a scattering model with per-channel complement tinting, validates
outputs against the statistical priors of real sandstorm photographs
(channel shifting / concentration / sequential ordering, LAB cluster
collinearity), and scores reconstruction algorithms with standard
full-reference and no-reference quality metrics.
"""

from .cluster import ClusterResult, LabKMeans, cluster_linearity, kmeans_lab
from .color import (
    DEFAULT_PALETTE_HEX,
    ColorDeviation,
    default_palette,
    image_to_lab,
    linear_to_srgb,
    load_palette,
    parse_hex,
    rgb_to_lab,
    srgb_to_linear,
)
from .dataset import (
    DatasetEntry,
    DatasetManifest,
    SubsetSpec,
    build_dataset,
    load_manifest,
    rebuild_dataset,
    save_manifest,
    validate_manifest,
)
from .fsim import FSIMConfig, fsim, fsimc, phase_congruency
from .io import (
    CorruptFileError,
    ImageIOError,
    UnsupportedFormatError,
    load_depth,
    load_image,
    save_depth,
    save_image,
    save_image_ppm_plain,
)
from .metrics import (
    SSIMConfig,
    average_gradient,
    cie94,
    ciede2000,
    color_difference,
    edge_intensity,
    information_entropy,
    luma,
    mse,
    psnr,
    simple_nr_metrics,
    ssim,
)
from .report import (
    FULL_REFERENCE_COLUMNS,
    METRIC_COLUMNS,
    NO_REFERENCE_COLUMNS,
    MetricReport,
    PairResult,
    evaluate_images,
    evaluate_pairs,
)
from .stats import (
    ColorQuantizer,
    HistogramSet,
    PriorReport,
    channel_histograms,
    color_quantize,
    lab_samples,
    prior_characteristics,
)
from .synthesis import (
    DENSE,
    HYBRID,
    INTENSITY_CLASSES,
    LIGHT,
    MEDIUM,
    DustSynthesizer,
    IntensityClass,
    ScatterParams,
    SynthesisResult,
    apply_transmission,
    derive_entry_seed,
    inherent_deviation,
    intensity_class,
    sample_params,
    synthesize,
    transmission_map,
)
from .timing import TimingReport, generate_test_depth, generate_test_image, run_timing

__version__ = "0.1.0"

__all__ = [
    "ClusterResult",
    "LabKMeans",
    "cluster_linearity",
    "kmeans_lab",
    "DEFAULT_PALETTE_HEX",
    "ColorDeviation",
    "default_palette",
    "image_to_lab",
    "linear_to_srgb",
    "load_palette",
    "parse_hex",
    "rgb_to_lab",
    "srgb_to_linear",
    "DatasetEntry",
    "DatasetManifest",
    "SubsetSpec",
    "build_dataset",
    "load_manifest",
    "rebuild_dataset",
    "save_manifest",
    "validate_manifest",
    "FSIMConfig",
    "fsim",
    "fsimc",
    "phase_congruency",
    "CorruptFileError",
    "ImageIOError",
    "UnsupportedFormatError",
    "load_depth",
    "load_image",
    "save_depth",
    "save_image",
    "save_image_ppm_plain",
    "SSIMConfig",
    "average_gradient",
    "cie94",
    "ciede2000",
    "color_difference",
    "edge_intensity",
    "information_entropy",
    "luma",
    "mse",
    "psnr",
    "simple_nr_metrics",
    "ssim",
    "FULL_REFERENCE_COLUMNS",
    "METRIC_COLUMNS",
    "NO_REFERENCE_COLUMNS",
    "MetricReport",
    "PairResult",
    "evaluate_images",
    "evaluate_pairs",
    "ColorQuantizer",
    "HistogramSet",
    "PriorReport",
    "channel_histograms",
    "color_quantize",
    "lab_samples",
    "prior_characteristics",
    "DENSE",
    "HYBRID",
    "INTENSITY_CLASSES",
    "LIGHT",
    "MEDIUM",
    "DustSynthesizer",
    "IntensityClass",
    "ScatterParams",
    "SynthesisResult",
    "apply_transmission",
    "derive_entry_seed",
    "inherent_deviation",
    "intensity_class",
    "sample_params",
    "synthesize",
    "transmission_map",
    "TimingReport",
    "generate_test_depth",
    "generate_test_image",
    "run_timing",
    "__version__",
]
