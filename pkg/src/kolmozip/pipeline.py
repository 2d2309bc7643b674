"""Streaming compress/decompress built on predict -> code -> update.

The compressed artifact carries three things: the predictor config (the
shared program's parameters-of-the-parameters, a handful of bytes), the
token count d, and the arithmetic-coded payload.  No learned weights
travel: the receiver reconstructs every prediction by replaying the same
training loop the sender ran.

Artifact layout (little-endian throughout):

    magic "KZV1" | version u8 | config-len u16 | config bytes
    | d LEB128 | context-len LEB128 | payload-len u64 | payload

The context-length field supports conditional compression; plain
compression writes 0.  The context bytes themselves are never stored —
the decoding caller must supply them, mirroring how conditional
complexity treats the conditioning string as given.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coder import (
    PROB_BITS,
    CumulativeTable,
    RangeDecoder,
    RangeEncoder,
    quantize_weights,
)
from .errors import FormatError
from .predictors import PredictorConfig, make_predictor

MAGIC = b"KZV1"
VERSION = 1
MAX_INPUT = 1 << 48


@dataclass(frozen=True)
class CompressedArtifact:
    """Header (config), token count d, priming length, coded payload."""

    config: PredictorConfig
    d: int
    context_length: int
    payload: bytes


@dataclass
class SessionStats:
    """Per-token ideal code lengths plus the realized payload size.

    ideal bits for a token = 16 - log2(quantized width); the coder's
    overhead on top of the ideal total is bounded by 64 bits.
    """

    token_bits: np.ndarray
    payload_bits: int
    digests: list[bytes] = field(default_factory=list)

    @property
    def n_tokens(self) -> int:
        return len(self.token_bits)

    @property
    def ideal_bits(self) -> float:
        return float(self.token_bits.sum())

    @property
    def mean_bpb(self) -> float:
        return self.ideal_bits / self.n_tokens if self.n_tokens else 0.0

    @property
    def payload_bpb(self) -> float:
        return self.payload_bits / self.n_tokens if self.n_tokens else 0.0


def _prime(pred, context: bytes) -> None:
    # training without coding: the model sees the context but no bits flow
    for tok in context:
        pred.predict_weights()
        pred.update(tok)


def _static_table(pred) -> CumulativeTable | None:
    return quantize_weights(pred.predict_weights()) if pred.is_static else None


def _session(
    data: bytes, config: PredictorConfig, context: bytes, audit: bool
) -> tuple[CompressedArtifact, SessionStats]:
    if len(data) >= MAX_INPUT:
        raise ValueError("input too long for the 48-bit token counter")
    pred = make_predictor(config)
    _prime(pred, context)
    encoder = RangeEncoder()
    widths = np.empty(len(data), dtype=np.int64)
    digests: list[bytes] = []
    static = _static_table(pred)
    predict, update = pred.predict_weights, pred.update
    encode = encoder.encode_symbol
    for i, tok in enumerate(data):
        table = static or quantize_weights(predict())
        widths[i] = table.cum[tok + 1] - table.cum[tok]
        encode(table, tok)
        update(tok)
        if audit:
            digests.append(pred.digest())
    payload = encoder.finish()
    stats = SessionStats(
        token_bits=PROB_BITS - np.log2(widths) if len(data) else np.zeros(0),
        payload_bits=8 * len(payload),
        digests=digests,
    )
    artifact = CompressedArtifact(config, len(data), len(context), payload)
    return artifact, stats


def compress(
    data: bytes, config: PredictorConfig, *, audit: bool = False
) -> tuple[CompressedArtifact, SessionStats]:
    """Code data under an online-trained predictor started from scratch."""
    return _session(data, config, b"", audit)


def compress_conditional(
    target: bytes, context: bytes, config: PredictorConfig, *, audit: bool = False
) -> tuple[CompressedArtifact, SessionStats]:
    """Code target with a predictor first primed on context.

    Only len(context) enters the artifact; decoding requires the caller
    to present the identical context.  Wrong context bytes of the right
    length decode to garbage or exhaust the payload early — the format
    carries no integrity check.
    """
    return _session(target, config, context, audit)


def decompress(
    artifact: CompressedArtifact, context: bytes = b"", *, audit: bool = False
):
    """Reconstruct the exact input by replaying training on decoded tokens.

    Returns bytes, or (bytes, digests) when audit is set.
    """
    if len(context) != artifact.context_length:
        raise FormatError(
            f"artifact was coded against {artifact.context_length} context "
            f"bytes, got {len(context)}"
        )
    pred = make_predictor(artifact.config)
    _prime(pred, context)
    decoder = RangeDecoder(artifact.payload)
    out = bytearray()
    digests: list[bytes] = []
    static = _static_table(pred)
    predict, update = pred.predict_weights, pred.update
    decode, append = decoder.decode_symbol, out.append
    for _ in range(artifact.d):
        table = static or quantize_weights(predict())
        tok = decode(table)
        append(tok)
        update(tok)
        if audit:
            digests.append(pred.digest())
    data = bytes(out)
    return (data, digests) if audit else data


# --- wire format -----------------------------------------------------------


def _leb128(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_leb128(blob: bytes, pos: int) -> tuple[int, int]:
    value = shift = 0
    while True:
        if pos >= len(blob):
            raise FormatError("truncated varint")
        byte = blob[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7
        if shift > 63:
            raise FormatError("varint too long")


def serialize(artifact: CompressedArtifact) -> bytes:
    config = artifact.config.to_bytes()
    return b"".join(
        (
            MAGIC,
            bytes([VERSION]),
            struct.pack("<H", len(config)),
            config,
            _leb128(artifact.d),
            _leb128(artifact.context_length),
            struct.pack("<Q", len(artifact.payload)),
            artifact.payload,
        )
    )


def deserialize(blob: bytes) -> CompressedArtifact:
    if len(blob) < 7:
        raise FormatError("artifact shorter than its fixed header")
    if blob[:4] != MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}")
    if blob[4] != VERSION:
        raise FormatError(f"unknown format version {blob[4]}")
    (config_len,) = struct.unpack_from("<H", blob, 5)
    pos = 7
    if pos + config_len > len(blob):
        raise FormatError("truncated predictor config")
    try:
        config = PredictorConfig.from_bytes(blob[pos : pos + config_len])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    pos += config_len
    d, pos = _read_leb128(blob, pos)
    context_length, pos = _read_leb128(blob, pos)
    if pos + 8 > len(blob):
        raise FormatError("truncated payload length")
    (payload_len,) = struct.unpack_from("<Q", blob, pos)
    pos += 8
    if pos + payload_len > len(blob):
        raise FormatError("truncated payload")
    if pos + payload_len < len(blob):
        raise FormatError("trailing bytes after payload")
    return CompressedArtifact(config, d, context_length, blob[pos : pos + payload_len])


# --- experiments -------------------------------------------------------------


def _ladder_entry(args: tuple[bytes, PredictorConfig]) -> dict:
    data, config = args
    artifact, stats = compress(data, config)
    return {
        "config": config.spec_string(),
        "input_bytes": len(data),
        "payload_bytes": len(artifact.payload),
        "ideal_bits": stats.ideal_bits,
        "bpb": stats.payload_bits / len(data) if data else 0.0,
    }


def scaling_ladder(data: bytes, configs: list[PredictorConfig]) -> list[dict]:
    """Compress one corpus under each config; report in config order.

    KOLMOZIP_THREADS caps worker processes; richer models of the same
    family are expected (not enforced) to appear later in the list.
    """
    jobs = [(data, cfg) for cfg in configs]
    limit = int(os.environ.get("KOLMOZIP_THREADS", os.cpu_count() or 1))
    workers = max(1, min(limit, len(configs)))
    if workers == 1:
        return [_ladder_entry(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_ladder_entry, jobs))
