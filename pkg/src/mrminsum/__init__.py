"""Map-reduce Min-Sum decoding for binary LDPC codes."""

from .channel import ChannelConfig, add_awgn, modulate, raw_ber
from .decoder_mr import (
    MinSumDecoder,
    RowSummary,
    StageTimings,
    column_sum,
    decode_batch,
    decode_mr,
    fan_out,
    produce_eta,
    reduce_rows,
)
from .decoder_ref import DecodeOutcome, bit_node_update, check_node_update, decode_ref, slice_hard
from .kernels import DEFAULT_BACKEND, available_backends
from .parity import (
    ParityFormatError,
    ParityMatrix,
    QcSpec,
    build_parity_matrix,
    expand_qc,
    is_codeword,
    parse_alist,
    parse_qc,
    serialize_alist,
    serialize_qc,
    syndrome,
)

__version__ = "0.1.0"
