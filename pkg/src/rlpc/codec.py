"""Encode and decode symbol streams with a canonical codebook.

Bit order is MSB-first: the first transmitted bit is the most significant
bit of the first octet, and the final partial octet is zero-padded.  The
decoder is the classic linear scan over distinct lengths, which is exactly
the structure whose speed depends on how many distinct lengths a code uses.
"""

from __future__ import annotations

import struct
import time
import zlib
from array import array
from dataclasses import dataclass
from statistics import median

from .codes import Codebook, LengthVector, assign_canonical
from .errors import (
    BadParameterError,
    IndexOutOfRangeError,
    InvalidCodeError,
    ParseError,
    TruncatedError,
)

CONTAINER_MAGIC = b"RLPC"
CONTAINER_VERSION = 1


@dataclass(frozen=True)
class BitStream:
    """A packed bit sequence; `bit_count` excludes the zero padding."""

    data: bytes
    bit_count: int

    def __post_init__(self) -> None:
        if self.bit_count < 0:
            raise ValueError("bit count cannot be negative")
        if not self.bit_count <= 8 * len(self.data) < self.bit_count + 8:
            raise ValueError(
                f"{len(self.data)} bytes cannot hold exactly {self.bit_count} bits"
            )


@dataclass(frozen=True)
class DecodeTable:
    """Per distinct length (ascending): first code value, first symbol, count."""

    lengths: tuple[int, ...]
    first_codes: tuple[int, ...]
    first_indices: tuple[int, ...]
    counts: tuple[int, ...]


def build_decode_table(cb: Codebook) -> DecodeTable:
    """Derive the linear-scan decoding table from a canonical codebook."""
    return DecodeTable(
        lengths=tuple(r.bits for r in cb.ranges),
        first_codes=tuple(r.first_code for r in cb.ranges),
        first_indices=tuple(r.first_index for r in cb.ranges),
        counts=tuple(r.count for r in cb.ranges),
    )


def encode(cb: Codebook, symbols) -> BitStream:
    """Concatenate the codewords of sorted-domain symbol indices, MSB-first."""
    lengths = cb.lengths
    codewords = cb.codewords
    n = len(lengths)
    out = bytearray()
    acc = 0
    nbits = 0
    for s in symbols:
        if not 0 <= s < n:
            raise IndexOutOfRangeError(f"symbol index {s} not in [0, {n})")
        l = lengths[s]
        acc = (acc << l) | codewords[s]
        nbits += l
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
        acc &= (1 << nbits) - 1  # keep the accumulator small
    total = 8 * len(out) + nbits
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return BitStream(data=bytes(out), bit_count=total)


def decode(dt: DecodeTable, bs: BitStream, count: int) -> list[int]:
    """Read `count` symbols; returns sorted-domain indices.

    Raises TruncatedError when the stream cannot supply the bits the next
    candidate length needs, and InvalidCodeError when an accumulated value
    falls outside every length's code range (possible only for codes whose
    Kraft sum is below one).
    """
    if count < 0:
        raise BadParameterError(f"cannot decode {count} symbols")
    lengths = dt.lengths
    firsts = dt.first_codes
    indices = dt.first_indices
    limits = tuple(f + c for f, c in zip(dt.first_codes, dt.counts))
    num_lengths = len(lengths)
    data = bs.data
    total = bs.bit_count
    consumed = 0
    buf = 0
    buffered = 0
    byte_pos = 0
    out: list[int] = []
    for _ in range(count):
        value = 0
        have = 0
        for k in range(num_lengths):
            need = lengths[k] - have
            if consumed + need > total:
                raise TruncatedError(
                    f"stream ended after {consumed} of {total} bits mid-codeword"
                )
            while buffered < need:
                buf = (buf << 8) | data[byte_pos]
                byte_pos += 1
                buffered += 8
            buffered -= need
            value = (value << need) | (buf >> buffered)
            buf &= (1 << buffered) - 1
            consumed += need
            have = lengths[k]
            if value < limits[k]:
                if value < firsts[k]:
                    raise InvalidCodeError(
                        f"{have}-bit pattern {value:0{have}b} is below the code range"
                    )
                out.append(indices[k] + (value - firsts[k]))
                break
        else:
            raise InvalidCodeError(
                f"{have}-bit pattern {value:0{have}b} matches no codeword"
            )
    return out


@dataclass(frozen=True)
class ThroughputReport:
    """Wall-clock decode timings; output is checksummed so work cannot be skipped."""

    symbols_decoded: int
    seconds: tuple[float, ...]
    symbols_per_second_median: float
    checksum: int


def bench_decode(dt: DecodeTable, bs: BitStream, count: int, repeats: int) -> ThroughputReport:
    """Decode the same stream `repeats` times and report the median rate."""
    if repeats < 1:
        raise BadParameterError(f"need repeats >= 1, got {repeats}")
    checksum = None
    seconds = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = decode(dt, bs, count)
        elapsed = time.perf_counter() - start
        seconds.append(elapsed)
        digest = zlib.crc32(array("I", out).tobytes())
        if checksum is None:
            checksum = digest
        elif digest != checksum:
            raise AssertionError("decode produced different output across repeats")
    mid = median(seconds)
    return ThroughputReport(
        symbols_decoded=count,
        seconds=tuple(seconds),
        symbols_per_second_median=count / mid if mid > 0 else float("inf"),
        checksum=checksum,
    )


def build_container(lengths: LengthVector, payload: BitStream, symbol_count: int) -> bytes:
    """Serialize a coded stream: the length vector plus the packed bits.

    Codewords are not stored; the canonical rule regenerates them from the
    lengths on the reading side.
    """
    n = lengths.n
    if symbol_count < 0:
        raise BadParameterError(f"negative symbol count {symbol_count}")
    if any(l > 0xFF for l in lengths.lengths):
        raise BadParameterError("container stores lengths as octets; max is 255")
    blob = bytearray(CONTAINER_MAGIC)
    blob.append(CONTAINER_VERSION)
    blob += struct.pack(">I", n)
    blob += bytes(lengths.lengths)
    blob += struct.pack(">Q", symbol_count)
    blob += payload.data
    return bytes(blob)


def parse_container(blob: bytes) -> tuple[LengthVector, int, BitStream]:
    """Inverse of build_container; the payload's exact bit count is not stored,
    so the returned BitStream spans whole octets."""
    if blob[:4] != CONTAINER_MAGIC:
        raise ParseError("not a coded-stream container (bad magic)")
    if len(blob) < 17:
        raise ParseError("container header is truncated")
    if blob[4] != CONTAINER_VERSION:
        raise ParseError(f"unsupported container version {blob[4]}")
    (n,) = struct.unpack(">I", blob[5:9])
    if len(blob) < 17 + n:
        raise ParseError("container length table is truncated")
    try:
        lengths = LengthVector(tuple(blob[9 : 9 + n]))
    except ValueError as exc:
        raise ParseError(f"container length table is invalid: {exc}") from exc
    (symbol_count,) = struct.unpack(">Q", blob[9 + n : 17 + n])
    payload = blob[17 + n :]
    return lengths, symbol_count, BitStream(data=payload, bit_count=8 * len(payload))


def write_container(path, lengths: LengthVector, payload: BitStream, symbol_count: int) -> None:
    with open(path, "wb") as fh:
        fh.write(build_container(lengths, payload, symbol_count))


def read_container(path) -> tuple[LengthVector, int, BitStream]:
    with open(path, "rb") as fh:
        return parse_container(fh.read())


def decoder_for_lengths(lengths: LengthVector) -> DecodeTable:
    """Decode table straight from a length vector via canonical assignment."""
    return build_decode_table(assign_canonical(lengths))
