"""Binary dumps for integral tables (``IIMG``) and plus-pattern stores (``IICP``).

Both share a header: 4-byte magic, version byte, width and height as
little-endian u32, word width in bits as one byte. Values follow row-major
(``IIMG``) or block-major in b, d, e, f, h order (``IICP``), each packed in
``ceil(word_bits / 8)`` little-endian bytes. ``IICP`` then appends the kept
region of the 8-bit input image, row-major.
"""
from __future__ import annotations

import struct
from typing import Union

import numpy as np

from .core import Image, IntegralImage
from .storage import CompressedIntegral, ReducedIntegral

IIMG_MAGIC = b"IIMG"
IICP_MAGIC = b"IICP"
VERSION = 1
_HEADER = struct.Struct("<4sBIIB")


class FormatError(ValueError):
    pass


def _pack(values: np.ndarray, word_bits: int) -> bytes:
    nbytes = (word_bits + 7) // 8
    raw = np.ascontiguousarray(values, dtype="<u8").reshape(-1).view(np.uint8).reshape(-1, 8)
    return raw[:, :nbytes].tobytes()


def _unpack(buf: bytes, count: int, word_bits: int) -> np.ndarray:
    nbytes = (word_bits + 7) // 8
    need = count * nbytes
    if len(buf) < need:
        raise FormatError(f"expected {need} value bytes, found {len(buf)}")
    raw = np.zeros((count, 8), dtype=np.uint8)
    raw[:, :nbytes] = np.frombuffer(buf[:need], dtype=np.uint8).reshape(count, nbytes)
    return raw.view("<u8").reshape(count).astype(np.uint64)


def _header(data: bytes, magic: bytes):
    if len(data) < _HEADER.size:
        raise FormatError(f"file is {len(data)} bytes, shorter than the {_HEADER.size}-byte header")
    got, version, width, height, word_bits = _HEADER.unpack_from(data)
    if got != magic:
        raise FormatError(f"bad magic {got!r}, expected {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if not 1 <= word_bits <= 64:
        raise FormatError(f"word width {word_bits} out of range")
    return width, height, word_bits


def dump_integral(table: Union[IntegralImage, ReducedIntegral]) -> bytes:
    word_bits, values = table.word_bits, table.values
    h, w = values.shape
    return _HEADER.pack(IIMG_MAGIC, VERSION, w, h, word_bits) + _pack(values, word_bits)


def load_integral(data: bytes) -> tuple[np.ndarray, int]:
    """Return ``(values, word_bits)``; values are uint64, row-major."""
    width, height, word_bits = _header(data, IIMG_MAGIC)
    body = data[_HEADER.size:]
    values = _unpack(body, width * height, word_bits)
    if len(body) != width * height * ((word_bits + 7) // 8):
        raise FormatError("trailing bytes after IIMG values")
    return values.reshape(height, width), word_bits


def dump_compressed(c: CompressedIntegral) -> bytes:
    th, tw = c.trimmed_height, c.trimmed_width
    head = _HEADER.pack(IICP_MAGIC, VERSION, tw, th, c.word_bits)
    pixels = np.ascontiguousarray(c.source.pixels[:th, :tw]).tobytes()
    return head + _pack(c.stored, c.word_bits) + pixels


def load_compressed(data: bytes) -> CompressedIntegral:
    width, height, word_bits = _header(data, IICP_MAGIC)
    if width % 3 or height % 3 or width == 0 or height == 0:
        raise FormatError(f"IICP dims {width}x{height} are not positive multiples of 3")
    bh, bw = height // 3, width // 3
    count = bh * bw * 5
    body = data[_HEADER.size:]
    stored = _unpack(body, count, word_bits).reshape(bh, bw, 5)
    rest = body[count * ((word_bits + 7) // 8):]
    if len(rest) != width * height:
        raise FormatError(f"expected {width * height} pixel bytes, found {len(rest)}")
    pixels = np.frombuffer(rest, dtype=np.uint8).reshape(height, width)
    return CompressedIntegral(stored, Image(pixels.copy()), word_bits)
