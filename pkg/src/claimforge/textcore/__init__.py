"""Tokenization, vocabulary, and the shared transformer text encoder."""

from claimforge.textcore.vocab import (
    Vocabulary,
    tokenize,
    detokenize,
    PAD_ID,
    UNK_ID,
    BOS_ID,
    EOS_ID,
    SEP_ID,
    NUM_RESERVED,
)
from claimforge.textcore.segment import sentence_boundaries
from claimforge.textcore.encoder import (
    EncoderConfig,
    init_encoder_params,
    encode_sequence,
    positional_encoding,
    mean_pool,
)

__all__ = [
    "Vocabulary",
    "tokenize",
    "detokenize",
    "PAD_ID",
    "UNK_ID",
    "BOS_ID",
    "EOS_ID",
    "SEP_ID",
    "NUM_RESERVED",
    "sentence_boundaries",
    "EncoderConfig",
    "init_encoder_params",
    "encode_sequence",
    "positional_encoding",
    "mean_pool",
]
