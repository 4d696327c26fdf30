"""Binary serialization of sampled complexes (.qcx).

Layout (little-endian):

  offset  size  field
  0       4     magic bytes 0x51 0x43 0x32 0x58 ("QC2X")
  4       1     version (1)
  5       1     n
  6       2     reserved, zero
  8       8     p as IEEE-754 binary64
  16      8     seed as uint64
  24      8     face bit count as uint64
  32      ...   ceil(count / 8) payload bytes; face k lives at bit (k mod 8)
                of byte floor(k / 8)
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Union

import numpy as np

from . import cubes
from .complexes import Complex

MAGIC = b"QC2X"
VERSION = 1
_HEADER = struct.Struct("<4sBBHdQQ")


class QcxFormatError(ValueError):
    """Malformed .qcx data; carries the byte offset of the offending field."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def dumps(c: Complex) -> bytes:
    count = c.faces.shape[0]
    header = _HEADER.pack(MAGIC, VERSION, c.n, 0, c.p, c.seed, count)
    payload = np.packbits(c.faces, bitorder="little").tobytes()
    return header + payload


def loads(data: bytes) -> Complex:
    if len(data) < _HEADER.size:
        raise QcxFormatError("truncated header", len(data))
    magic, version, n, reserved, p, seed, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise QcxFormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise QcxFormatError(f"unsupported version {version}", 4)
    if not 3 <= n <= cubes.MAX_N:
        raise QcxFormatError(f"dimension {n} out of range", 5)
    if reserved != 0:
        raise QcxFormatError("reserved bytes must be zero", 6)
    if not 0.0 <= p <= 1.0:
        raise QcxFormatError(f"probability {p} out of range", 8)
    expected_count = cubes.square_count(n)
    if count != expected_count:
        raise QcxFormatError(
            f"face bit count {count} does not match n={n} (expected {expected_count})", 24
        )
    payload_len = (count + 7) // 8
    if len(data) < _HEADER.size + payload_len:
        raise QcxFormatError("truncated payload", len(data))
    raw = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size, count=payload_len)
    bits = np.unpackbits(raw, bitorder="little")[:count].astype(np.bool_)
    return Complex(n=n, faces=bits, p=p, seed=seed)


def write(c: Complex, path: Union[str, Path]) -> None:
    Path(path).write_bytes(dumps(c))


def read(path: Union[str, Path]) -> Complex:
    return loads(Path(path).read_bytes())
