"""kolmozip: lossless compression by online learning, plus a shortest-program workbench."""

from .coder import (
    CumulativeTable,
    Distribution,
    IdealInterval,
    RangeDecoder,
    RangeEncoder,
    ideal_locate,
    ideal_refine,
    quantize_distribution,
    shortest_binary_in_interval,
)
from .errors import FormatError, KolmozipError, TruncatedStreamError
from .kclab import (
    KcEstimate,
    MachineResult,
    TinyProgram,
    family_max_gap,
    joint_bound_report,
    literal_program,
    pair_decode,
    pair_encode,
    phi,
    phi_curve,
    prefix_decode,
    prefix_encode,
    run_program,
)
from .pipeline import (
    CompressedArtifact,
    SessionStats,
    compress,
    compress_conditional,
    decompress,
    deserialize,
    scaling_ladder,
    serialize,
)
from .predictors import PredictorConfig, make_predictor
from .sources import (
    MarkovSpec,
    WorksheetRecord,
    entropy_rate,
    generate,
    read_worksheet,
    worksheet_corpus,
    worksheet_stream,
    write_worksheet,
)

__version__ = "0.1.0"

__all__ = [
    "CompressedArtifact",
    "CumulativeTable",
    "Distribution",
    "FormatError",
    "IdealInterval",
    "KcEstimate",
    "KolmozipError",
    "MachineResult",
    "MarkovSpec",
    "PredictorConfig",
    "RangeDecoder",
    "RangeEncoder",
    "SessionStats",
    "TinyProgram",
    "TruncatedStreamError",
    "WorksheetRecord",
    "compress",
    "compress_conditional",
    "decompress",
    "deserialize",
    "entropy_rate",
    "family_max_gap",
    "generate",
    "ideal_locate",
    "ideal_refine",
    "joint_bound_report",
    "literal_program",
    "make_predictor",
    "pair_decode",
    "pair_encode",
    "phi",
    "phi_curve",
    "prefix_decode",
    "prefix_encode",
    "quantize_distribution",
    "read_worksheet",
    "run_program",
    "scaling_ladder",
    "serialize",
    "shortest_binary_in_interval",
    "worksheet_corpus",
    "worksheet_stream",
    "write_worksheet",
]
