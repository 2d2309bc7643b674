"""Online byte predictors: uniform, context counting, tiny fixed-point net.

All three share one duck-typed surface:

    predict() -> Distribution     pure; weights for the next byte
    update(token)                 advance state by one observed byte
    digest() -> bytes             16-byte canonical hash of all state
    token_position                number of tokens consumed so far

The per-token protocol is always predict -> code -> update, and every
predictor is built from its config alone, so an encoder and a decoder
that see the same byte sequence replay identical state.  Mutating state
arithmetic is integer-only with truncation toward zero; the only floats
anywhere are in reporting, never in state.

Digest byte order (md5 over): magic ``KZPD``, canonical config bytes,
token position as u64 LE, then the kind-specific state payload described
on each class.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from .coder import Distribution
from .rng import Lcg64, mix64

KIND_UNIFORM = "uniform"
KIND_FREQ = "freq"
KIND_NEURAL = "neural"
_KIND_TAGS = {KIND_UNIFORM: 0, KIND_FREQ: 1, KIND_NEURAL: 2}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}

ONE = 1 << 16  # Q16.16 unit
DEFAULT_LEARNING_RATE = ONE // 8  # 0.125 in Q16.16; stable across widths 8..256
_WEIGHT_CLIP = 8 * ONE  # saturate parameters to [-8.0, 8.0]


_COUNT_LIMIT = 1 << 16  # halve a context when any count reaches this
_MAX_LEARNING_RATE = 1 << 20  # 16.0; keeps lr * grad inside int64


@dataclass(frozen=True)
class PredictorConfig:
    """Everything a decoder needs to rebuild the predictor from scratch.

    `order` applies to freq, `context`/`width` to neural; unused fields
    must stay at their defaults so configs round-trip through the
    canonical bytes unambiguously.
    """

    kind: str
    order: int = 0  # freq: context length in bytes
    context: int = 2  # neural: context bytes fed to the net
    width: int = 16  # neural: hidden units
    seed: int = 0
    learning_rate: int = DEFAULT_LEARNING_RATE  # Q16.16

    def __post_init__(self):
        if self.kind not in _KIND_TAGS:
            raise ValueError(f"unknown predictor kind {self.kind!r}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if not 1 <= self.learning_rate <= _MAX_LEARNING_RATE:
            raise ValueError("learning_rate (Q16.16) must be in [1, 2^20]")
        if self.kind == KIND_FREQ and not 0 <= self.order <= 3:
            raise ValueError("freq order must be 0..3")
        if self.kind == KIND_NEURAL:
            if not 1 <= self.context <= 8:
                raise ValueError("neural context must be 1..8")
            if not 8 <= self.width <= 256:
                raise ValueError("neural width must be 8..256")
        defaults = {"uniform": ("order", "context", "width"), "freq": ("context", "width"), "neural": ("order",)}
        for field in defaults[self.kind]:
            if getattr(self, field) != PredictorConfig.__dataclass_fields__[field].default:
                raise ValueError(f"{field} is not used by kind {self.kind!r}; leave it at its default")

    # canonical serialization: kind tag byte, kind parameters (LE), seed u64 LE,
    # learning rate u32 LE; constant size per kind
    def to_bytes(self) -> bytes:
        tail = struct.pack("<QI", self.seed, self.learning_rate)
        if self.kind == KIND_UNIFORM:
            return bytes([0]) + tail
        if self.kind == KIND_FREQ:
            return bytes([1, self.order]) + tail
        return bytes([2, self.context]) + struct.pack("<H", self.width) + tail

    @classmethod
    def from_bytes(cls, data: bytes) -> "PredictorConfig":
        if not data:
            raise ValueError("empty config bytes")
        kind = _TAG_KINDS.get(data[0])
        sizes = {KIND_UNIFORM: 13, KIND_FREQ: 14, KIND_NEURAL: 16}
        if kind is None or len(data) != sizes[kind]:
            raise ValueError("malformed predictor config bytes")
        seed, lr = struct.unpack("<QI", data[-12:])
        if kind == KIND_UNIFORM:
            return cls(kind, seed=seed, learning_rate=lr)
        if kind == KIND_FREQ:
            return cls(kind, order=data[1], seed=seed, learning_rate=lr)
        (width,) = struct.unpack("<H", data[2:4])
        return cls(kind, context=data[1], width=width, seed=seed, learning_rate=lr)

    def spec_string(self) -> str:
        """Short text form: uniform | freq:K | neural:K,W."""
        if self.kind == KIND_UNIFORM:
            return "uniform"
        if self.kind == KIND_FREQ:
            return f"freq:{self.order}"
        return f"neural:{self.context},{self.width}"

    @classmethod
    def from_spec(
        cls, text: str, *, seed: int = 0, learning_rate: int = DEFAULT_LEARNING_RATE
    ) -> "PredictorConfig":
        """Parse `uniform`, `freq:K`, or `neural:K,W` into a config."""
        name, _, args = text.strip().partition(":")
        try:
            if name == KIND_UNIFORM and not args:
                return cls(KIND_UNIFORM, seed=seed, learning_rate=learning_rate)
            if name == KIND_FREQ:
                return cls(KIND_FREQ, order=int(args), seed=seed, learning_rate=learning_rate)
            if name == KIND_NEURAL:
                k, w = args.split(",")
                return cls(
                    KIND_NEURAL, context=int(k), width=int(w), seed=seed, learning_rate=learning_rate
                )
        except ValueError as exc:
            raise ValueError(f"bad model spec {text!r}: {exc}") from None
        raise ValueError(f"bad model spec {text!r}; want uniform | freq:K | neural:K,W")


def _digest(config: PredictorConfig, position: int, state: bytes) -> bytes:
    h = hashlib.md5(b"KZPD")
    h.update(config.to_bytes())
    h.update(struct.pack("<Q", position))
    h.update(state)
    return h.digest()


class UniformPredictor:
    """Fixed 1/alphabet distribution; the do-nothing baseline."""

    is_static = True

    def __init__(self, config: PredictorConfig, alphabet_size: int = 256) -> None:
        self.config = config
        self.token_position = 0
        self._dist = Distribution(np.ones(alphabet_size, dtype=np.int64))

    def predict(self) -> Distribution:
        return self._dist

    def predict_weights(self) -> np.ndarray:
        return np.asarray(self._dist.weights)

    def update(self, token: int) -> None:
        self.token_position += 1

    def digest(self) -> bytes:
        return _digest(self.config, self.token_position, b"")


_ONES_ROWS: dict[int, np.ndarray] = {}  # shared fresh-context rows, never mutated


class FreqPredictor:
    """Order-k add-one counting model over the byte alphabet.

    Counts start at 1 for every symbol in every context; a context whose
    maximum count reaches 2^16 has all of its counts halved (floored at 1,
    preserving add-one support).  Near the start of a stream the context
    is simply the bytes available so far; no synthetic start symbol exists.

    Digest state payload: for each context key in lexicographic order,
    u8 key length, key bytes, counts as little-endian int32.
    """

    is_static = False

    def __init__(self, config: PredictorConfig, alphabet_size: int = 256) -> None:
        self.config = config
        self.order = config.order
        self.alphabet_size = alphabet_size
        self.token_position = 0
        self._counts: dict[bytes, np.ndarray] = {}
        self._recent = bytearray()

    def _row(self, create: bool) -> np.ndarray | None:
        key = bytes(self._recent)
        row = self._counts.get(key)
        if row is None and create:
            row = np.ones(self.alphabet_size, dtype=np.int32)
            self._counts[key] = row
        return row

    def predict(self) -> Distribution:
        row = self._row(create=False)
        if row is None:
            return Distribution(np.ones(self.alphabet_size, dtype=np.int32))
        return Distribution(row.copy())

    def predict_weights(self) -> np.ndarray:
        # read-only view for the coding loop; unseen context = virtual ones row
        row = self._row(create=False)
        if row is None:
            return _ONES_ROWS.setdefault(
                self.alphabet_size, np.ones(self.alphabet_size, dtype=np.int32)
            )
        return row

    def update(self, token: int) -> None:
        row = self._row(create=True)
        row[token] += 1
        if row[token] >= _COUNT_LIMIT:
            np.maximum(row >> 1, 1, out=row)
        if self.order:
            self._recent.append(token)
            if len(self._recent) > self.order:
                del self._recent[0]
        self.token_position += 1

    def digest(self) -> bytes:
        parts = []
        for key in sorted(self._counts):
            parts.append(bytes([len(key)]))
            parts.append(key)
            parts.append(self._counts[key].astype("<i4").tobytes())
        return _digest(self.config, self.token_position, b"".join(parts))


def _iroot(x: int, k: int) -> int:
    """Floor of the integer k-th root, by Newton iteration on exact ints."""
    if x < 0 or k < 1:
        raise ValueError("x >= 0 and k >= 1 required")
    if x < 2:
        return x
    r = 1 << (x.bit_length() // k + 1)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


# EXP_TABLE[g] = floor(2^16 * 2^(-g/256)): table-driven base-2 exponential
# with exponent granularity 1/256, built from exact integer roots so every
# platform gets the same bytes.
_EXP_TABLE = np.array([_iroot(1 << (4096 - g), 256) for g in range(256)], dtype=np.int64)

# same curve pre-shifted for whole-number exponents: entry g is
# 2^16 * 2^(-g/256) for the full logit gap g/256 <= 64; everything past the
# table (gap > 2^22 in Q16.16) is identically zero, so lookups clamp
_G8 = np.arange(1 << 14)
_SOFTMAX_TABLE = _EXP_TABLE[_G8 & 0xFF] >> np.minimum(_G8 >> 8, 62)
del _G8


class NeuralPredictor:
    """One-hidden-layer byte model in Q16.16 fixed point.

    Forward pass: positional embeddings of the last K bytes are summed
    with a bias, saturated to [-1, 1] (hard clamp), multiplied into a
    W x 256 output layer, and turned into weights by a table-driven
    base-2 softmax (exponent granularity 1/256).  Missing context at the
    stream start contributes nothing (no pad byte).

    Updates follow the analytic cross-entropy gradient, scaled by the
    Q16.16 learning rate with arithmetic (floor) shifts, and parameters
    saturate at +/-8.0.  Initial weights come from the shared 64-bit LCG,
    drawn in a fixed order (emb row-major, then w2 row-major), scaled by
    1/(2 sqrt(fan)).

    Digest state payload: emb, b1, w2, b2 as little-endian int64 in that
    order, then the retained context bytes.
    """

    is_static = False

    def __init__(self, config: PredictorConfig, alphabet_size: int = 256) -> None:
        self.config = config
        self.k = config.context
        self.w = config.width
        self.alphabet_size = alphabet_size
        self.lr = config.learning_rate
        self.token_position = 0
        self._recent = bytearray()
        self._cache: tuple | None = None  # (position, pre, hidden, weights)
        self._width_shift = (self.w - 1).bit_length()

        stream = Lcg64(mix64(config.seed, 0x4E455552))
        emb_scale = (ONE << 8) // (2 * math.isqrt(self.k << 16))
        w2_scale = (ONE << 8) // (2 * math.isqrt(self.w << 16))
        self.emb = self._draw(stream, (self.k, alphabet_size, self.w), emb_scale)
        self.b1 = np.zeros(self.w, dtype=np.int64)
        self.w2 = self._draw(stream, (self.w, alphabet_size), w2_scale)
        self.b2 = np.zeros(alphabet_size, dtype=np.int64)

    @staticmethod
    def _draw(stream: Lcg64, shape: tuple, scale: int) -> np.ndarray:
        n = int(np.prod(shape))
        flat = np.empty(n, dtype=np.int64)
        for i in range(n):
            u = (stream.next_u64() >> 48) - 32768  # uniform in [-32768, 32767]
            flat[i] = (u * scale) // 32768 if u >= 0 else -((-u * scale) // 32768)
        return flat.reshape(shape)

    def _forward(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        recent = self._recent
        if recent:
            start = self.k - len(recent)
            pre = self.emb[start, recent[0]] + self.b1
            for i in range(1, len(recent)):
                pre += self.emb[start + i, recent[i]]
        else:
            pre = self.b1.copy()
        hidden = np.minimum(pre, ONE)
        np.maximum(hidden, -ONE, out=hidden)
        logits = hidden @ self.w2  # |h| <= 2^16, |w2| <= 2^19, W <= 256: fits int64
        logits >>= 16  # arithmetic shift: floor scaling, Q32.32 -> Q16.16
        logits += self.b2
        gap = np.subtract(logits.max(), logits, out=logits)  # >= 0, Q16.16
        gap >>= 8
        np.minimum(gap, len(_SOFTMAX_TABLE) - 1, out=gap)
        weights = _SOFTMAX_TABLE.take(gap)
        return pre, hidden, weights

    def predict(self) -> Distribution:
        if self._cache is None or self._cache[0] != self.token_position:
            self._cache = (self.token_position, *self._forward())
        return Distribution(self._cache[3].copy())

    def predict_weights(self) -> np.ndarray:
        # read-only view; the same forward pass feeds the next update()
        if self._cache is None or self._cache[0] != self.token_position:
            self._cache = (self.token_position, *self._forward())
        return self._cache[3]

    def _error_signal(self, token: int) -> np.ndarray:
        """d(cross-entropy)/d(logits) = p_hat - onehot, in Q16.16."""
        if self._cache is None or self._cache[0] != self.token_position:
            self._cache = (self.token_position, *self._forward())
        weights = self._cache[3]
        total = int(weights.sum())
        p_hat = (weights * ONE) // total  # nonnegative; plain // truncates
        p_hat[token] -= ONE
        return p_hat

    def final_layer_gradient(self, token: int) -> np.ndarray:
        """Exact integer d(loss)/d(w2) in Q32.32, before learning-rate scaling."""
        dlog = self._error_signal(token)
        hidden = self._cache[2]
        return np.outer(hidden, dlog)

    def update(self, token: int) -> None:
        dlog = self._error_signal(token)
        _, pre, hidden, _ = self._cache
        lr = self.lr
        clip = _WEIGHT_CLIP

        # backprop through the (pre-update) output layer, zeroed where the
        # hard clamp saturated (hidden == pre exactly where unclamped)
        dpre = self.w2 @ dlog
        dpre >>= 16
        dpre *= hidden == pre

        # output layer: step shift grows with log2(width) so the per-logit
        # movement sum_j h_j*dw2[j,s] stays width-invariant
        step2 = (hidden * lr)[:, None] * dlog  # |h*lr*dlog| < 2^52
        step2 >>= 32 + self._width_shift
        self.w2 -= step2
        np.minimum(self.w2, clip, out=self.w2)
        np.maximum(self.w2, -clip, out=self.w2)
        step = lr * dlog
        step >>= 16
        self.b2 -= step
        np.minimum(self.b2, clip, out=self.b2)
        np.maximum(self.b2, -clip, out=self.b2)

        step1 = lr * dpre
        step1 >>= 16
        self.b1 -= step1
        np.minimum(self.b1, clip, out=self.b1)
        np.maximum(self.b1, -clip, out=self.b1)
        k_avail = len(self._recent)
        for i, b in enumerate(self._recent):
            row = self.emb[self.k - k_avail + i, b]
            row -= step1
            np.minimum(row, clip, out=row)
            np.maximum(row, -clip, out=row)

        self._recent.append(token)
        if len(self._recent) > self.k:
            del self._recent[0]
        self.token_position += 1
        self._cache = None

    def digest(self) -> bytes:
        state = b"".join(
            arr.astype("<i8").tobytes() for arr in (self.emb, self.b1, self.w2, self.b2)
        )
        return _digest(self.config, self.token_position, state + bytes(self._recent))


def make_predictor(config: PredictorConfig, alphabet_size: int = 256):
    """Build a fresh predictor in its deterministic initial state."""
    cls = {
        KIND_UNIFORM: UniformPredictor,
        KIND_FREQ: FreqPredictor,
        KIND_NEURAL: NeuralPredictor,
    }[config.kind]
    return cls(config, alphabet_size)
