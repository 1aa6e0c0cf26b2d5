"""Sauvola-style adaptive binarization on top of the integral engines.

Local mean and deviation come from integral images of the image and of its
square. Windows are clamped at the border and divide by their true area.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import MAX_PIXEL, as_image, ceil_log2, check_lanes, integral_rows, naive_integral


@dataclass(frozen=True)
class BinarizeParams:
    window: int = 15
    k: float = 0.5
    R: float = 128.0

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if not 0 < self.k <= 1:
            raise ValueError(f"k must be in (0, 1], got {self.k}")
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class BinaryImage:
    bits: np.ndarray  # True = foreground (black)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def as_pgm_values(self) -> np.ndarray:
        return np.where(self.bits, 0, 255).astype(np.uint8)


def sauvola_foreground(pixels: np.ndarray, s1: np.ndarray, s2: np.ndarray,
                       area: np.ndarray, params: BinarizeParams) -> np.ndarray:
    """Shared thresholding rule ``pixel <= m (1 + k (s / R - 1))``.

    ``s1``, ``s2`` and ``area`` are exact integer window sums; the variance is
    formed as ``(area * s2 - s1**2) / area**2`` so no precision is lost before
    the square root.
    """
    s1 = np.asarray(s1)
    if int(area.max()) ** 2 * MAX_PIXEL ** 2 >= 2 ** 62:
        s1, s2, area = (np.asarray(a, dtype=object) for a in (s1, s2, area))
    spread = area * s2 - s1 * s1
    mean = np.asarray(s1 / area, dtype=np.float64)
    std = np.sqrt(np.asarray(spread, dtype=np.float64)) / np.asarray(area, dtype=np.float64)
    thresh = mean * (1.0 + params.k * (std / params.R - 1.0))
    return pixels <= thresh


def _window_bounds(size: int, half: int):
    idx = np.arange(size)
    return np.clip(idx - half, 0, size - 1), np.clip(idx + half, 0, size - 1)


def window_sums_from_integral(ii: np.ndarray, window: int):
    """Clamped-window sums and areas from an integral table (four lookups each)."""
    h, w = ii.shape
    half = window // 2
    pad = np.zeros((h + 1, w + 1), dtype=ii.dtype)
    pad[1:, 1:] = ii
    r0, r1 = _window_bounds(h, half)
    c0, c1 = _window_bounds(w, half)
    R0, C0 = np.meshgrid(r0, c0, indexing="ij")
    R1, C1 = np.meshgrid(r1 + 1, c1 + 1, indexing="ij")
    sums = pad[R1, C1] - pad[R0, C1] - pad[R1, C0] + pad[R0, C0]
    area = (R1 - R0) * (C1 - C0)
    return sums, area.astype(np.int64)


def window_sums_direct(grid: np.ndarray, window: int):
    """Clamped-window sums by summing every window element explicitly."""
    half = window // 2
    padded = np.pad(grid, half)
    inside = np.pad(np.ones(grid.shape, dtype=np.int64), half)
    sums = sliding_window_view(padded, (window, window)).sum(axis=(-2, -1))
    area = sliding_window_view(inside, (window, window)).sum(axis=(-2, -1))
    return sums, area


def _integral(grid: np.ndarray, strategy: str, n: Optional[int], max_value: int) -> np.ndarray:
    strategy = strategy.replace("-", "_")
    if strategy == "naive":
        return naive_integral(grid)
    if strategy == "diff_row":
        from .hw import diff_row_integral

        return diff_row_integral(grid, max_value)[0]
    lanes = {"serial": 1, "two_row": 2, "four_row": 4}
    if strategy == "n_row":
        if n is None:
            raise ValueError("strategy n_row needs n")
        return integral_rows(grid, check_lanes(n), strategy)[0]
    if strategy not in lanes:
        raise ValueError(f"unknown strategy {strategy!r}")
    return integral_rows(grid, lanes[strategy], strategy)[0]


def binarize(img, params: Optional[BinarizeParams] = None, strategy: str = "four_row",
             n: Optional[int] = None) -> BinaryImage:
    params = params or BinarizeParams()
    image = as_image(img)
    grid = image.pixels.astype(np.int64)
    sq = grid * grid
    ii1 = _integral(grid, strategy, n, image.max_value)
    ii2 = _integral(sq, strategy, n, image.max_value ** 2)
    sq_bits = ceil_log2(image.width * image.height * image.max_value ** 2)
    if int(ii2[-1, -1]) >= 1 << sq_bits:
        raise OverflowError(f"squared integral exceeds its {sq_bits}-bit bound")
    s1, area = window_sums_from_integral(ii1, params.window)
    s2, _ = window_sums_from_integral(ii2, params.window)
    return BinaryImage(sauvola_foreground(grid, s1, s2, area, params))


def binarize_naive(img, params: Optional[BinarizeParams] = None) -> BinaryImage:
    params = params or BinarizeParams()
    grid = as_image(img).pixels.astype(np.int64)
    s1, area = window_sums_direct(grid, params.window)
    s2, _ = window_sums_direct(grid * grid, params.window)
    return BinaryImage(sauvola_foreground(grid, s1, s2, area, params))


def synthetic_document(height: int = 120, width: int = 160, seed: int = 0) -> np.ndarray:
    """Dark strokes on an unevenly lit, noisy light page; handy for trying thresholds."""
    rng = np.random.default_rng(seed)
    rows, cols = np.mgrid[0:height, 0:width]
    page = 215 - 45 * (cols / max(width - 1, 1)) + 15 * np.sin(rows / 17.0)
    ink = np.zeros((height, width), dtype=bool)
    for line_top in range(8, height - 14, 18):
        col = 6
        while col < width - 10:
            glyph_w = int(rng.integers(3, 8))
            ink[line_top:line_top + 10, col:col + 2] |= rng.random() < 0.8
            ink[line_top + int(rng.integers(0, 9)), col:col + glyph_w] = True
            ink[line_top:line_top + 10, col + glyph_w - 1] |= rng.random() < 0.5
            col += glyph_w + int(rng.integers(2, 5))
    values = np.where(ink, 40 + 25 * rng.random((height, width)), page)
    values += rng.normal(0, 6, size=values.shape)
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)
