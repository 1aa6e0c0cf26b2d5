"""Minimal netpbm I/O: 8-bit PGM in (P2/P5), PGM or PBM (P4) out."""
from __future__ import annotations

import numpy as np

_WS = b" \t\n\r\v\f"


class PGMError(ValueError):
    """Malformed netpbm data; ``offset`` is the byte where parsing stopped."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"byte {offset}: {message}")
        self.offset = offset


def _tokens(data: bytes, pos: int, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and (data[pos] in _WS or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        if pos >= n:
            raise PGMError(pos, "truncated header")
        start = pos
        while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
            pos += 1
        tok = data[start:pos]
        if not tok.isdigit():
            raise PGMError(start, f"expected an integer, got {tok[:16]!r}")
        out.append(int(tok))
    return out, pos


def parse_pgm(data: bytes) -> np.ndarray:
    if len(data) < 2:
        raise PGMError(len(data), "truncated header")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(0, f"not a greyscale PGM (magic {magic!r})")
    (width, height, maxval), pos = _tokens(data, 2, 3)
    if width < 1 or height < 1:
        raise PGMError(pos, f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PGMError(pos, f"maxval must be 255, got {maxval}")
    count = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos] not in _WS:
            raise PGMError(pos, "missing whitespace before raster")
        pos += 1
        end = pos + count
        if len(data) < end:
            raise PGMError(len(data), f"raster truncated: need {count} bytes, have {len(data) - pos}")
        return np.frombuffer(data[pos:end], dtype=np.uint8).reshape(height, width).copy()
    values, _ = _tokens(data, pos, count)
    arr = np.array(values, dtype=np.int64)
    if arr.max() > 255:
        raise PGMError(pos, "sample value above maxval")
    return arr.astype(np.uint8).reshape(height, width)


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def encode_pgm(pixels) -> bytes:
    arr = np.asarray(pixels, dtype=np.uint8)
    h, w = arr.shape
    return b"P5\n%d %d\n255\n" % (w, h) + arr.tobytes()


def encode_pbm(bits) -> bytes:
    """P4 bitmap; ``True`` pixels are black."""
    arr = np.asarray(bits, dtype=bool)
    h, w = arr.shape
    return b"P4\n%d %d\n" % (w, h) + np.packbits(arr, axis=1).tobytes()


def parse_pbm(data: bytes) -> np.ndarray:
    if data[:2] != b"P4":
        raise PGMError(0, f"not a raw PBM (magic {data[:2]!r})")
    (width, height), pos = _tokens(data, 2, 2)
    pos += 1
    stride = (width + 7) // 8
    raw = np.frombuffer(data[pos:pos + stride * height], dtype=np.uint8)
    if raw.size != stride * height:
        raise PGMError(len(data), "raster truncated")
    return np.unpackbits(raw.reshape(height, stride), axis=1)[:, :width].astype(bool)


def write_pgm(path, pixels) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pgm(pixels))


def write_pbm(path, bits) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pbm(bits))
