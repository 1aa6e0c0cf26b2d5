"""Lossless integral-image storage reduction and box-filter queries.

Two orthogonal savings:

* depth: keep only the plus-shaped five of every 3x3 block of integral values
  and rebuild the four corners from neighbours plus one input pixel;
* width: store values modulo ``2**L`` where ``L`` is sized for the largest box
  filter, relying on wrap-around arithmetic to keep box sums exact.

Both combine (the hybrid methods), since corner rebuilding is linear and so
also holds modulo ``2**L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import NamedTuple, Optional

import numpy as np

from .core import PIXEL_BITS, AdderBank, Image, IntegralImage, as_image

# Customised 17-bit float (half precision plus one exponent bit); comparison
# baseline only, integral values are never stored this way here.
FLOAT17_BITS = 17

METHODS = ("full", "exact", "variant", "method1", "method2_exact", "method2_variant")
_NEEDS_BOUNDS = {"exact", "variant", "method2_exact", "method2_variant"}

# in-block (row, col) of the retained values, in dump order b, d, e, f, h
PLUS_CELLS = ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1))
_PLUS_INDEX = {pos: k for k, pos in enumerate(PLUS_CELLS)}
B, D, E, F, H = range(5)


class DiscardedRegionError(ValueError):
    """A query touches rows/columns dropped when trimming to multiples of 3."""


@dataclass(frozen=True)
class Rect:
    """Inclusive, 0-based cell rectangle."""

    top: int
    left: int
    bottom: int
    right: int

    def __post_init__(self):
        if self.top < 0 or self.left < 0:
            raise ValueError(f"{self} has negative coordinates")
        if self.top > self.bottom or self.left > self.right:
            raise ValueError(f"{self} is empty or inverted")

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def width(self) -> int:
        return self.right - self.left + 1

    def check_inside(self, height: int, width: int) -> None:
        if self.bottom >= height or self.right >= width:
            raise IndexError(f"{self} lies outside a {width}x{height} grid")

    def corners(self):
        """``(sign, row, col)`` of the four integral lookups; -1 means the zero border."""
        return (
            (+1, self.bottom, self.right),
            (-1, self.top - 1, self.right),
            (-1, self.bottom, self.left - 1),
            (+1, self.top - 1, self.left - 1),
        )


def _combine(rect: Rect, lookup, bank: Optional[AdderBank] = None, modulus: Optional[int] = None) -> int:
    """Signed four-corner sum, skipping lookups on the virtual zero border."""
    acc = None
    for sign, r, c in rect.corners():
        if r < 0 or c < 0:
            continue
        v = lookup(r, c)
        if acc is None:
            acc = v if sign > 0 else -v
        else:
            acc = acc + v if sign > 0 else acc - v
            if bank is not None:
                bank.additions += 1
    if modulus is not None:
        acc %= modulus
    return acc


def box_filter_sum(ii: IntegralImage, rect: Rect, bank: Optional[AdderBank] = None) -> int:
    """Sum of pixels in ``rect`` from four integral values (three add/subtracts)."""
    rect.check_inside(ii.height, ii.width)
    vals = ii.values
    return _combine(rect, lambda r, c: int(vals[r, c]), bank)


def box_filter_direct(img, rect: Rect) -> int:
    image = as_image(img)
    rect.check_inside(image.height, image.width)
    return int(image.pixels[rect.top:rect.bottom + 1, rect.left:rect.right + 1].sum(dtype=np.int64))


# ---------------------------------------------------------------------------
# plus-pattern depth reduction


class BoxQuery(NamedTuple):
    total: int
    reconstructed: int


@dataclass(frozen=True)
class CompressedIntegral:
    """Plus-pattern store: five values per 3x3 block plus the input pixels.

    ``stored[br, bc]`` holds the block's b, d, e, f, h values modulo
    ``2**word_bits``. With a full word width this is lossless storage of the
    integral image; with a reduced width only box sums up to
    ``wmax x hmax`` are guaranteed.
    """

    stored: np.ndarray
    source: Image
    word_bits: int
    wmax: Optional[int] = None
    hmax: Optional[int] = None

    @property
    def trimmed_height(self) -> int:
        return self.stored.shape[0] * 3

    @property
    def trimmed_width(self) -> int:
        return self.stored.shape[1] * 3

    @property
    def stored_count(self) -> int:
        return int(self.stored.shape[0] * self.stored.shape[1] * 5)

    @property
    def modulus(self) -> int:
        return 1 << self.word_bits

    def is_stored(self, row: int, col: int) -> bool:
        return (row % 3, col % 3) in _PLUS_INDEX

    def _check(self, row: int, col: int) -> None:
        if not (0 <= row < self.trimmed_height and 0 <= col < self.trimmed_width):
            raise DiscardedRegionError(
                f"({row}, {col}) is outside the kept {self.trimmed_width}x{self.trimmed_height} region"
            )

    def reconstruct_cell(self, row: int, col: int) -> int:
        self._check(row, col)
        br, bc = row // 3, col // 3
        lr, lc = row % 3, col % 3
        blk = [int(v) for v in self.stored[br, bc]]
        if (lr, lc) in _PLUS_INDEX:
            return blk[_PLUS_INDEX[(lr, lc)]]
        px = self.source.pixels
        r0, c0 = 3 * br, 3 * bc
        if (lr, lc) == (0, 0):
            v = blk[B] + blk[D] - blk[E] + int(px[r0 + 1, c0 + 1])
        elif (lr, lc) == (0, 2):
            v = blk[B] + blk[F] - blk[E] - int(px[r0 + 1, c0 + 2])
        elif (lr, lc) == (2, 0):
            v = blk[D] + blk[H] - blk[E] - int(px[r0 + 2, c0 + 1])
        else:
            v = blk[H] + blk[F] - blk[E] + int(px[r0 + 2, c0 + 2])
        return v % self.modulus

    def decompress(self) -> np.ndarray:
        """All kept integral values (modulo ``2**word_bits``), vectorised."""
        bh, bw = self.stored.shape[:2]
        s = self.stored.astype(object) if self.word_bits > 60 else self.stored.astype(np.int64)
        px = self.source.pixels[: 3 * bh, : 3 * bw].astype(np.int64)
        p = px.reshape(bh, 3, bw, 3).transpose(0, 2, 1, 3)
        blocks = np.empty((bh, bw, 3, 3), dtype=s.dtype)
        for k, (lr, lc) in enumerate(PLUS_CELLS):
            blocks[:, :, lr, lc] = s[:, :, k]
        b, d, e, f, h = (s[:, :, k] for k in range(5))
        blocks[:, :, 0, 0] = b + d - e + p[:, :, 1, 1]
        blocks[:, :, 0, 2] = b + f - e - p[:, :, 1, 2]
        blocks[:, :, 2, 0] = d + h - e - p[:, :, 2, 1]
        blocks[:, :, 2, 2] = h + f - e + p[:, :, 2, 2]
        blocks %= self.modulus
        return blocks.transpose(0, 2, 1, 3).reshape(3 * bh, 3 * bw)


def compress_plus_pattern(ii: IntegralImage, img, word_bits: Optional[int] = None,
                          wmax: Optional[int] = None, hmax: Optional[int] = None) -> CompressedIntegral:
    """Trim to multiples of 3 and keep the plus-pattern values of every block.

    ``word_bits`` defaults to the full integral width (lossless); pass a
    reduced width with ``wmax``/``hmax`` for the hybrid methods.
    """
    image = as_image(img)
    if (ii.height, ii.width) != (image.height, image.width):
        raise ValueError("integral image and source image differ in size")
    if image.height < 3 or image.width < 3:
        raise ValueError("plus-pattern storage needs an image of at least 3x3")
    if word_bits is None:
        word_bits = ii.word_bits
    if not 1 <= word_bits <= 64:
        raise ValueError("word_bits must be in [1, 64]")
    bh, bw = image.height // 3, image.width // 3
    kept = ii.values[: 3 * bh, : 3 * bw].astype(np.uint64)
    if word_bits < 64:
        kept &= np.uint64((1 << word_bits) - 1)
    blocks = kept.reshape(bh, 3, bw, 3).transpose(0, 2, 1, 3)
    stored = np.stack([blocks[:, :, lr, lc] for lr, lc in PLUS_CELLS], axis=-1)
    return CompressedIntegral(np.ascontiguousarray(stored), image, word_bits, wmax, hmax)


def reconstruct_cell(c: CompressedIntegral, row: int, col: int) -> int:
    return c.reconstruct_cell(row, col)


def box_filter_compressed(c: CompressedIntegral, rect: Rect) -> BoxQuery:
    """Box sum from a plus-pattern store, rebuilding discarded corners as needed."""
    if rect.bottom >= c.trimmed_height or rect.right >= c.trimmed_width:
        raise DiscardedRegionError(f"{rect} touches the discarded margin")
    _check_bounds(rect, c.wmax, c.hmax)
    rebuilt = 0
    for _, r, col in rect.corners():
        if r >= 0 and col >= 0 and not c.is_stored(r, col):
            rebuilt += 1
    total = _combine(rect, c.reconstruct_cell, modulus=c.modulus)
    return BoxQuery(total, rebuilt)


# ---------------------------------------------------------------------------
# word-length reduction


def _bits_for(value: int) -> int:
    """Smallest L with 2**L - 1 >= value."""
    return max(int(value), 0).bit_length()


def _check_positive(**kw):
    for name, v in kw.items():
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


def word_length_full(L_i: int, W: int, H: int) -> int:
    """Bits for the worst-case integral value of a ``W x H`` image."""
    _check_positive(L_i=L_i, W=W, H=H)
    return _bits_for(((1 << L_i) - 1) * W * H)


def word_length_exact(L_i: int, Wmax: int, Hmax: int) -> int:
    """Bits so that any box up to ``Wmax x Hmax`` survives wrap-around."""
    _check_positive(L_i=L_i, Wmax=Wmax, Hmax=Hmax)
    return _bits_for(((1 << L_i) - 1) * Wmax * Hmax)


def variant_bound(L_i: int, Wmax: int, Hmax: int) -> Fraction:
    """Worst box sum if 96% of its pixels are at maximum and 4% at half maximum."""
    area = Wmax * Hmax
    return (((1 << L_i) - 1) * area * Fraction(96, 100)
            + ((1 << (L_i - 1)) - 1) * area * Fraction(4, 100))


def word_length_variant(L_i: int, Wmax: int, Hmax: int) -> int:
    _check_positive(L_i=L_i, Wmax=Wmax, Hmax=Hmax)
    return _bits_for(ceil(variant_bound(L_i, Wmax, Hmax)))


@dataclass(frozen=True)
class ReducedIntegral:
    """Integral values kept modulo ``2**word_bits``.

    ``shadow`` optionally keeps the full-width table so queries can detect a
    box whose true sum does not fit (possible with the variant sizing).
    """

    values: np.ndarray
    word_bits: int
    wmax: int
    hmax: int
    shadow: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def modulus(self) -> int:
        return 1 << self.word_bits


def reduce_word_length(ii: IntegralImage, word_bits: int, wmax: Optional[int] = None,
                       hmax: Optional[int] = None, shadow: bool = False) -> ReducedIntegral:
    if not 1 <= word_bits <= 64:
        raise ValueError("word_bits must be in [1, 64]")
    vals = ii.values.astype(np.uint64)
    if word_bits < 64:
        vals &= np.uint64((1 << word_bits) - 1)
    return ReducedIntegral(
        vals,
        word_bits,
        ii.width if wmax is None else wmax,
        ii.height if hmax is None else hmax,
        ii.values.copy() if shadow else None,
    )


def _check_bounds(rect: Rect, wmax: Optional[int], hmax: Optional[int]) -> None:
    if (wmax is not None and rect.width > wmax) or (hmax is not None and rect.height > hmax):
        raise ValueError(
            f"{rect.width}x{rect.height} box exceeds the {wmax}x{hmax} bound the word length was sized for"
        )


def box_filter_modular(r: ReducedIntegral, rect: Rect) -> int:
    """Four-corner sum in ``Z / 2**word_bits``, read as an unsigned residue."""
    rect.check_inside(r.height, r.width)
    _check_bounds(rect, r.wmax, r.hmax)
    vals = r.values
    total = _combine(rect, lambda i, j: int(vals[i, j]), modulus=r.modulus)
    if r.shadow is not None:
        true = _combine(rect, lambda i, j: int(r.shadow[i, j]))
        if true != total:
            raise OverflowError(f"box sum {true} does not fit in {r.word_bits} bits")
    return total


# ---------------------------------------------------------------------------
# memory accounting


@dataclass(frozen=True)
class MemoryReport:
    width: int
    height: int
    method: str
    word_bits: int
    cells: int
    bits: int
    bytes: float
    full_word_bits: int
    full_bits: int
    full_bytes: float
    reduction_pct: float
    increase_vs_input_pct: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def memory_report(W: int, H: int, L_i: int = PIXEL_BITS, method: str = "full",
                  Wmax: Optional[int] = None, Hmax: Optional[int] = None) -> MemoryReport:
    """Storage needed by one method, in bits and bytes (``cells * L / 8``).

    ``reduction_pct`` is measured against full-width storage of the same
    cell region: the whole image for the width-only methods, the trimmed
    multiple-of-3 region for the plus-pattern methods.
    """
    method = method.replace("-", "_")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    _check_positive(W=W, H=H, L_i=L_i)
    if method in _NEEDS_BOUNDS and (Wmax is None or Hmax is None):
        raise ValueError(f"method {method} needs Wmax and Hmax")
    full_word = word_length_full(L_i, W, H)
    if method in ("full", "method1"):
        word = full_word
    elif method.endswith("exact"):
        word = word_length_exact(L_i, Wmax, Hmax)
    else:
        word = word_length_variant(L_i, Wmax, Hmax)
    if method.startswith("method"):
        region = (W // 3 * 3) * (H // 3 * 3)
        cells = region * 5 // 9
    else:
        region = cells = W * H
    bits = cells * word
    baseline = region * full_word
    input_bits = W * H * L_i
    return MemoryReport(
        width=W,
        height=H,
        method=method,
        word_bits=word,
        cells=cells,
        bits=bits,
        bytes=bits / 8,
        full_word_bits=full_word,
        full_bits=W * H * full_word,
        full_bytes=W * H * full_word / 8,
        reduction_pct=100.0 * (1 - bits / baseline) if baseline else 0.0,
        increase_vs_input_pct=100.0 * (bits - input_bits) / input_bits,
    )
