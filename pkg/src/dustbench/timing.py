"""Wall-clock timing harness for the synthesis and evaluation kernels.

Times each operation on seeded self-generated test images at several
square sizes, with warmup runs excluded and raw samples kept alongside
the means so reports stay auditable. No absolute runtime targets are
asserted anywhere; the harness only fixes the methodology (sizes,
repetitions, monotonic clock, single-threaded kernels).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import cv2
import numpy as np

from .color import parse_hex
from .report import evaluate_pairs
from .synthesis import synthesize

DEFAULT_SIZES = (256, 512, 1024)


@dataclass(frozen=True)
class TimingCell:
    """Timings for one (operation, image size) combination."""

    operation: str
    size: int
    samples: tuple[float, ...]
    mean_seconds: float


@dataclass(frozen=True)
class TimingReport:
    repetitions: int
    warmup: int
    cells: tuple[TimingCell, ...]

    def to_csv(self) -> str:
        lines = ["operation,size,repetitions,mean_seconds,samples"]
        for cell in self.cells:
            samples = ";".join(f"{s:.9f}" for s in cell.samples)
            lines.append(f"{cell.operation},{cell.size},{len(cell.samples)},"
                         f"{cell.mean_seconds:.9f},{samples}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "warmup": self.warmup,
            "cells": [
                {
                    "operation": cell.operation,
                    "size": cell.size,
                    "samples": list(cell.samples),
                    "mean_seconds": cell.mean_seconds,
                }
                for cell in self.cells
            ],
        }


def generate_test_image(size: int, seed: int = 0) -> np.ndarray:
    """Structured synthetic RGB image: bands + ramp + seeded noise."""
    if size < 32:
        raise ValueError(f"size must be >= 32, got {size}")
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    ramp = (xx + yy) / (2.0 * (size - 1))
    bands = 0.5 + 0.5 * np.sin(2.0 * np.pi * xx / 37.0) \
        * np.cos(2.0 * np.pi * yy / 23.0)
    base = 0.45 * ramp + 0.35 * bands
    noise = rng.random((size, size, 3))
    return np.clip(base[:, :, None] + 0.2 * noise, 0.0, 1.0)


def generate_test_depth(size: int, seed: int = 0) -> np.ndarray:
    """Synthetic depth map: vertical ramp with seeded roughness."""
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    rng = np.random.default_rng(seed)
    yy = np.mgrid[0:size, 0:size][0].astype(np.float64)
    ramp = yy / max(size - 1, 1)
    return np.clip(0.9 * ramp + 0.1 * rng.random((size, size)), 0.0, 1.0)


def _time_callable(func, repetitions: int, warmup: int) -> tuple[float, ...]:
    for _ in range(warmup):
        func()
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        func()
        samples.append(time.perf_counter() - start)
    return tuple(samples)


def run_timing(sizes=DEFAULT_SIZES, repetitions: int = 3, warmup: int = 1,
               seed: int = 0) -> TimingReport:
    """Benchmark synthesize and evaluate_pairs at each square size.

    repetitions must be >= 3 so the mean is meaningful; warmup runs
    are executed but not recorded. Kernels run single-threaded during
    the timed region for comparability.
    """
    if repetitions < 3:
        raise ValueError(f"repetitions must be >= 3, got {repetitions}")
    if warmup < 0:
        raise ValueError(f"warmup must be >= 0, got {warmup}")
    a_s = parse_hex("#C89463")
    cells: list[TimingCell] = []
    previous_threads = cv2.getNumThreads()
    cv2.setNumThreads(1)
    try:
        for size in sizes:
            clear = generate_test_image(size, seed)
            depth = generate_test_depth(size, seed + 1)
            degraded = synthesize(clear, depth, a_s, 0.45).image

            timed = {
                "synthesize": lambda: synthesize(clear, depth, a_s, 0.45),
                "evaluate_pairs": lambda: evaluate_pairs([(degraded, clear)]),
            }
            for operation, func in timed.items():
                samples = _time_callable(func, repetitions, warmup)
                cells.append(TimingCell(
                    operation=operation,
                    size=size,
                    samples=samples,
                    mean_seconds=sum(samples) / len(samples),
                ))
    finally:
        cv2.setNumThreads(previous_threads)
    return TimingReport(repetitions=repetitions, warmup=warmup,
                        cells=tuple(cells))
