"""Integral image computation strategies with instrumented adder counts.

Every strategy evaluates the row-sum / integral recurrences with exact
64-bit integers and records how many two-operand additions and lockstep
column steps (cycles) an engine following the same equations would need.
Indexing is 0-based, row-major, with a virtual zero row and column.

Vector operations stand in for the per-column hardware steps: an add of two
length-``W`` rows counts as ``W`` scalar additions, and a group of rows that
is swept left-to-right in lockstep costs ``W`` cycles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

PIXEL_BITS = 8
MAX_PIXEL = (1 << PIXEL_BITS) - 1
MAX_SIDE = 1 << 15

STRATEGIES = ("naive", "serial", "two_row", "four_row", "n_row", "diff_row")


def ceil_log2(x: int) -> int:
    """Smallest ``b`` with ``2**b >= x`` (exact, no floating point)."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (int(x) - 1).bit_length()


@dataclass(frozen=True)
class Image:
    """An 8-bit greyscale raster, ``pixels[row, col]``."""

    pixels: np.ndarray
    bits_per_pixel: int = PIXEL_BITS

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"image must be 2-D, got shape {arr.shape}")
        h, w = arr.shape
        if h < 1 or w < 1:
            raise ValueError("image must be at least 1x1")
        if h > MAX_SIDE or w > MAX_SIDE:
            raise ValueError(f"image {w}x{h} exceeds the {MAX_SIDE}x{MAX_SIDE} limit")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise TypeError("pixel values must be integers")
            top = (1 << self.bits_per_pixel) - 1
            if arr.min() < 0 or arr.max() > top:
                raise ValueError(f"pixel values must lie in [0, {top}]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def max_value(self) -> int:
        return (1 << self.bits_per_pixel) - 1


def as_image(img) -> Image:
    if isinstance(img, Image):
        return img
    return Image(np.asarray(img))


@dataclass(frozen=True)
class IntegralImage:
    """Exact integral table; ``values[r, c]`` sums pixels in ``[0..r] x [0..c]``.

    ``max_pixel`` is the largest value the source grid could hold; it sets the
    engine word width ``word_bits`` (K).
    """

    values: np.ndarray
    max_pixel: int = MAX_PIXEL

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def word_bits(self) -> int:
        return ceil_log2(self.height * self.width * self.max_pixel)

    @property
    def total(self) -> int:
        return int(self.values[-1, -1])

    def __eq__(self, other):
        if not isinstance(other, IntegralImage):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True)
class CostTrace:
    strategy: str
    additions: int
    cycles: int

    def counts(self) -> tuple[int, int]:
        return self.additions, self.cycles

    def as_dict(self) -> dict:
        return {"strategy": self.strategy, "additions": self.additions, "cycles": self.cycles}


class AdderBank:
    """Performs and counts the additions of an integral engine."""

    def __init__(self):
        self.additions = 0
        self.cycles = 0

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.add(a, b)
        self.additions += out.size
        return out

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.subtract(a, b)
        self.additions += out.size
        return out

    def row_sums(self, rows: np.ndarray) -> np.ndarray:
        """S(r, c) = i(r, c) + S(r, c-1) along axis 1, with S(r, -1) = 0.

        The first column is an addition against the zero register, so a
        ``k x W`` block costs ``k * W`` additions.
        """
        self.additions += rows.size
        return np.cumsum(rows, axis=-1)

    def step(self, columns: int) -> None:
        self.cycles += columns

    def trace(self, strategy: str) -> CostTrace:
        return CostTrace(strategy, self.additions, self.cycles)


def _grid(img) -> np.ndarray:
    return as_image(img).pixels.astype(np.int64)


def row_groups(height: int, n: int) -> Iterator[tuple[int, int]]:
    """Yield ``(start_row, size)`` for an n-row engine.

    Full groups of ``n`` rows first; a leftover of ``r`` rows becomes one
    even group of ``r - r % 2`` rows (if nonempty) and one serial row.
    """
    start = 0
    while height - start >= n:
        yield start, n
        start += n
    rest = height - start
    if rest >= 2:
        even = rest - rest % 2
        yield start, even
        start += even
    if height - start == 1:
        yield start, 1


def _group_step(bank: AdderBank, prev: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Integral rows for one lockstep group; ``prev`` is ii of the row above.

    A single row uses the serial pair S = i + S_left, ii = ii_up + S. An even
    group pairs rows (2m, 2m+1) so both read the same upper row::

        ii(2m)   = ii(2m-1) + S(2m)
        ii(2m+1) = ii(2m-1) + S(2m) + S(2m+1)
    """
    sums = bank.row_sums(block)
    out = np.empty_like(sums)
    if block.shape[0] == 1:
        out[0] = bank.add(prev, sums[0])
    else:
        base = prev
        for m in range(0, block.shape[0], 2):
            out[m] = bank.add(base, sums[m])
            out[m + 1] = bank.add(bank.add(base, sums[m]), sums[m + 1])
            base = out[m + 1]
    bank.step(block.shape[1])
    return out


def integral_rows(grid: np.ndarray, n: int, strategy: str) -> tuple[np.ndarray, CostTrace]:
    """Run the n-row engine (n=1 is the serial engine) over an int64 grid."""
    h, w = grid.shape
    bank = AdderBank()
    out = np.empty((h, w), dtype=np.int64)
    prev = np.zeros(w, dtype=np.int64)
    groups = ((r, 1) for r in range(h)) if n == 1 else row_groups(h, n)
    for start, size in groups:
        out[start:start + size] = _group_step(bank, prev, grid[start:start + size])
        prev = out[start + size - 1]
    return out, bank.trace(strategy)


def naive_integral(grid: np.ndarray) -> np.ndarray:
    """Direct double sum over the upper-left quadrant of every cell.

    Written as ``L_h @ grid @ L_w.T`` with lower-triangular masks of ones,
    i.e. each output is the masked sum of all inputs with row' <= row and
    col' <= col. Float64 BLAS is exact here because every partial sum is an
    integer below 2**53 (at most 255 * 2**30 for the largest allowed image).
    """
    h, w = grid.shape
    upto_row = np.tri(h, dtype=np.float64)
    upto_col = np.tri(w, dtype=np.float64).T
    out = upto_row @ (grid.astype(np.float64) @ upto_col)
    return np.rint(out).astype(np.int64)


def naive_additions(width: int, height: int) -> int:
    """Additions actually performed by summing every quadrant independently."""
    return (height * (height + 1) // 2) * (width * (width + 1) // 2) - width * height


def compute_naive(img) -> IntegralImage:
    """Reference oracle: every cell is summed from scratch."""
    image = as_image(img)
    return IntegralImage(naive_integral(_grid(image)), image.max_value)


def compute_serial(img) -> tuple[IntegralImage, CostTrace]:
    image = as_image(img)
    values, trace = integral_rows(_grid(image), 1, "serial")
    return IntegralImage(values, image.max_value), trace


def compute_two_row(img) -> tuple[IntegralImage, CostTrace]:
    image = as_image(img)
    values, trace = integral_rows(_grid(image), 2, "two_row")
    return IntegralImage(values, image.max_value), trace


def compute_four_row(img) -> tuple[IntegralImage, CostTrace]:
    image = as_image(img)
    values, trace = integral_rows(_grid(image), 4, "four_row")
    return IntegralImage(values, image.max_value), trace


def check_lanes(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("n must be an integer")
    if n < 2 or n % 2:
        raise ValueError(f"n-row engines need an even n >= 2, got {n}")
    return int(n)


def compute_n_row(img, n: int) -> tuple[IntegralImage, CostTrace]:
    n = check_lanes(n)
    image = as_image(img)
    values, trace = integral_rows(_grid(image), n, f"n_row({n})")
    return IntegralImage(values, image.max_value), trace


@dataclass(frozen=True)
class WavefrontSchedule:
    """Earliest cycle at which each cell can be produced when all rows run at once."""

    cycles: np.ndarray

    @property
    def makespan(self) -> int:
        return int(self.cycles.max()) + 1

    def __getitem__(self, cell):
        return int(self.cycles[cell])


def delayed_row_schedule(height: int, width: int) -> WavefrontSchedule:
    """Schedule every cell as soon as its two inputs exist.

    ``S(r, c)`` waits for ``S(r, c-1)`` and ``ii(r, c)`` waits for
    ``ii(r-1, c)``; each cell takes one cycle. The resulting skew is one cycle
    per row, i.e. ``cycle(r, c) = r + c``.
    """
    if height < 1 or width < 1:
        raise ValueError("schedule needs height, width >= 1")
    cols = np.arange(width)
    cyc = np.empty((height, width), dtype=np.int64)
    above = np.full(width, -1, dtype=np.int64)
    for r in range(height):
        # cyc[c] = max(above[c] + 1, cyc[c-1] + 1), solved as a running max
        ready = above + 1 - cols
        cyc[r] = np.maximum.accumulate(np.maximum(ready, 0)) + cols
        above = cyc[r]
    return WavefrontSchedule(cyc)


def compute(img, strategy: str, n: Optional[int] = None) -> tuple[IntegralImage, CostTrace]:
    """Dispatch by strategy tag (``STRATEGIES``); ``n`` is used by ``n_row``."""
    strategy = strategy.replace("-", "_")
    if strategy == "naive":
        image = as_image(img)
        ii = compute_naive(image)
        # the oracle has no pipeline; report one output per cycle
        return ii, CostTrace("naive", naive_additions(image.width, image.height),
                             image.width * image.height)
    if strategy == "diff_row":
        from .hw import compute_diff_row

        ii, trace, _ = compute_diff_row(img)
        return ii, trace
    engines: dict[str, Callable] = {
        "serial": compute_serial,
        "two_row": compute_two_row,
        "four_row": compute_four_row,
    }
    if strategy == "n_row":
        if n is None:
            raise ValueError("strategy n_row needs n")
        return compute_n_row(img, n)
    if strategy not in engines:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    return engines[strategy](img)
