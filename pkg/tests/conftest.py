"""Session corpora shared by the pipeline and acceptance suites."""

from __future__ import annotations

import bisect

import pytest

from kolmozip.rng import Lcg64
from kolmozip.sources import MarkovSpec, generate, worksheet_corpus, worksheet_stream

# the order-2 chain used wherever a structured byte source is needed;
# entropy_rate(MARKOV2) = 1.7411 bits/byte
MARKOV2 = MarkovSpec(order=2, alphabet=4, concentration=4, seed=2024)

_WORDS = (
    "the of and to in a is that for it was on are as with his they at be "
    "this have from or had by word but not what all were when we there can "
    "an your which their said if do will each about how up out them she "
    "many some so these would other into has more her two like him see "
    "time could no make than first been its who now people my made over "
    "did down only way find use may water long little very after called "
    "just where most know get through back much before go good new write "
    "our used me man too any day same right look think also around another "
    "came come work three must because does part even place well such here"
).split()


def pseudo_text(seed: int, min_bytes: int) -> bytes:
    """Zipf-weighted word salad with sentence and paragraph structure."""
    ranks = [1.0 / (i + 1) for i in range(len(_WORDS))]
    cum = []
    acc = 0.0
    for r in ranks:
        acc += r
        cum.append(acc)
    stream = Lcg64(seed)

    def word() -> str:
        u = stream.below(1 << 30) / (1 << 30) * acc
        return _WORDS[min(bisect.bisect_right(cum, u), len(_WORDS) - 1)]

    out: list[str] = []
    size = 0
    sentences = 0
    while size < min_bytes or out[-1] != "\n\n":
        n = 4 + stream.below(9)
        words = [word() for _ in range(n)]
        sentence = (" ".join(words)).capitalize() + "."
        sep = "\n\n" if sentences % (5 + stream.below(5)) == 4 else " "
        out.append(sentence)
        out.append(sep)
        size += len(sentence) + len(sep)
        sentences += 1
    return "".join(out).encode("ascii")


@pytest.fixture(scope="session")
def corpus_random() -> bytes:
    stream = Lcg64(3)
    return bytes(stream.below(256) for _ in range(1 << 16))


@pytest.fixture(scope="session")
def corpus_constant() -> bytes:
    return b"\x2a" * (1 << 16)


@pytest.fixture(scope="session")
def corpus_markov() -> bytes:
    return generate(MARKOV2, 1 << 18)


@pytest.fixture(scope="session")
def corpus_text() -> bytes:
    return pseudo_text(11, 100 << 10)


@pytest.fixture(scope="session")
def worksheet_records():
    return worksheet_corpus(7, 1000)


@pytest.fixture(scope="session")
def corpus_worksheet(worksheet_records) -> bytes:
    return worksheet_stream(worksheet_records)
