"""Batch metric evaluation and report serialization.

evaluate_pairs walks (test, reference) pairs — arrays or paths — and
produces one row per pair plus an arithmetic-mean aggregate row.
Full-reference metrics appear only when a reference is supplied;
failures are isolated per pair and recorded as error rows instead of
aborting the batch. PSNR's infinity is rendered as the string "+inf"
in both CSV and JSON, and the aggregate PSNR is "+inf" whenever any
pair compares perfectly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics as _metrics
from .fsim import FSIMConfig, fsimc
from .io import load_image
from .metrics import SSIMConfig

METRIC_COLUMNS = ("MSE", "PSNR", "SSIM", "FSIMc", "CIE94", "CIEDE2000",
                  "AG", "EI", "IE")
FULL_REFERENCE_COLUMNS = ("MSE", "PSNR", "SSIM", "FSIMc", "CIE94", "CIEDE2000")
NO_REFERENCE_COLUMNS = ("AG", "EI", "IE")
AGGREGATE_LABEL = "aggregate"


@dataclass(frozen=True)
class PairResult:
    """Metrics (or an error) for one evaluated pair."""

    test: str
    reference: str | None
    metrics: dict[str, float] = field(default_factory=dict)
    error: str | None = None


@dataclass(frozen=True)
class MetricReport:
    """Ordered per-pair rows plus the aggregate means."""

    rows: tuple[PairResult, ...]
    aggregate: dict[str, float]

    def to_csv(self) -> str:
        header = "test,reference," + ",".join(METRIC_COLUMNS) + ",error"
        lines = [header]
        for row in self.rows:
            lines.append(_csv_row(row.test, row.reference, row.metrics,
                                  row.error))
        if self.rows:
            lines.append(_csv_row(AGGREGATE_LABEL, None, self.aggregate, None))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "test": row.test,
                    "reference": row.reference,
                    "metrics": {k: _json_value(v)
                                for k, v in row.metrics.items()},
                    "error": row.error,
                }
                for row in self.rows
            ],
            "aggregate": {k: _json_value(v) for k, v in self.aggregate.items()},
        }


def _format_value(value: float) -> str:
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.10g}"


def _json_value(value: float):
    if math.isinf(value) or math.isnan(value):
        return _format_value(value)
    return value


def _csv_row(name: str, reference: str | None, values: dict[str, float],
             error: str | None) -> str:
    cells = [name, reference or ""]
    for column in METRIC_COLUMNS:
        cells.append(_format_value(values[column]) if column in values else "")
    cells.append((error or "").replace(",", ";").replace("\n", " "))
    return ",".join(cells)


def evaluate_images(test: np.ndarray, reference: np.ndarray | None = None,
                    ssim_config: SSIMConfig | None = None,
                    fsim_config: FSIMConfig | None = None) -> dict[str, float]:
    """All metrics for one image, keyed and ordered by METRIC_COLUMNS.

    Full-reference entries are included only when a reference image is
    given; the no-reference measures always are.
    """
    values: dict[str, float] = {}
    if reference is not None:
        values["MSE"] = _metrics.mse(reference, test)
        values["PSNR"] = _metrics.psnr(reference, test)
        values["SSIM"] = _metrics.ssim(reference, test, ssim_config)
        values["FSIMc"] = fsimc(reference, test, fsim_config)
        values["CIE94"] = _metrics.color_difference(reference, test, "cie94")
        values["CIEDE2000"] = _metrics.color_difference(reference, test,
                                                        "ciede2000")
    values.update(_metrics.simple_nr_metrics(test))
    return values


def _resolve(source, label: str) -> tuple[np.ndarray, str]:
    if isinstance(source, (str, Path)):
        return load_image(source), str(source)
    return np.asarray(source), label


def _aggregate(rows: list[PairResult]) -> dict[str, float]:
    aggregate: dict[str, float] = {}
    for column in METRIC_COLUMNS:
        values = [row.metrics[column] for row in rows
                  if row.error is None and column in row.metrics]
        if not values:
            continue
        if column == "PSNR" and any(math.isinf(v) for v in values):
            aggregate[column] = math.inf
        else:
            aggregate[column] = float(np.mean(values))
    return aggregate


def evaluate_pairs(pairs, ssim_config: SSIMConfig | None = None,
                   fsim_config: FSIMConfig | None = None) -> MetricReport:
    """Evaluate (test, reference-or-None) pairs into a MetricReport.

    Elements may be arrays or image paths. A failing pair contributes
    an error row; remaining pairs are unaffected. Rows keep input
    order and the aggregate averages each metric over its error-free
    rows.
    """
    rows: list[PairResult] = []
    for index, (test_src, ref_src) in enumerate(pairs):
        test_label = f"pair-{index:04d}"
        ref_label = None
        try:
            test_img, test_label = _resolve(test_src, test_label)
            ref_img = None
            if ref_src is not None:
                ref_img, ref_label = _resolve(ref_src,
                                              f"{test_label}-reference")
            values = evaluate_images(test_img, ref_img, ssim_config,
                                     fsim_config)
            rows.append(PairResult(test=test_label, reference=ref_label,
                                   metrics=values))
        except Exception as exc:  # noqa: BLE001 - per-pair isolation
            label = str(test_src) if isinstance(test_src, (str, Path)) \
                else test_label
            rows.append(PairResult(test=label, reference=ref_label,
                                   error=f"{type(exc).__name__}: {exc}"))
    return MetricReport(rows=tuple(rows), aggregate=_aggregate(rows))
