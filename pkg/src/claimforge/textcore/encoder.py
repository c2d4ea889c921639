"""Small pre-norm transformer encoder shared by every pipeline stage.

Full attention stands in for the long-context encoder: desk-scale sequences
stay under ``max_seq_len`` tokens, where full attention is exact. Positions
are fixed sinusoidal. Residual blocks are pre-norm, so zeroing every layer
weight matrix reduces the stack to token + positional embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from claimforge.numerics import Rng, Tensor, layer_norm, softmax, take_rows


@dataclass(frozen=True)
class EncoderConfig:
    model_dim: int = 512
    num_heads: int = 8
    head_dim: int = 64
    num_layers: int = 2
    max_seq_len: int = 1024

    def __post_init__(self):
        if self.num_heads * self.head_dim != self.model_dim:
            raise ValueError(
                f"num_heads * head_dim must equal model_dim: "
                f"{self.num_heads} * {self.head_dim} != {self.model_dim}"
            )


@lru_cache(maxsize=32)
def _positional_encoding_cached(length: int, dim: int) -> np.ndarray:
    pos = np.arange(length, dtype=np.float64)[:, None]
    i = np.arange(dim // 2, dtype=np.float64)[None, :]
    angles = pos / np.power(10000.0, 2.0 * i / dim)
    pe = np.zeros((length, dim))
    pe[:, 0::2] = np.sin(angles)
    pe[:, 1::2] = np.cos(angles)
    return pe


def positional_encoding(length: int, dim: int) -> np.ndarray:
    return _positional_encoding_cached(length, dim).copy()


def init_encoder_params(vocab_size: int, cfg: EncoderConfig, rng: Rng,
                        prefix: str = "enc") -> dict[str, Tensor]:
    d = cfg.model_dim
    params: dict[str, Tensor] = {}

    def param(name, shape, scale=0.02):
        params[f"{prefix}/{name}"] = Tensor(rng.normal(shape, scale), requires_grad=True)

    def ones(name, shape):
        params[f"{prefix}/{name}"] = Tensor(np.ones(shape), requires_grad=True)

    def zeros(name, shape):
        params[f"{prefix}/{name}"] = Tensor(np.zeros(shape), requires_grad=True)

    param("embed", (vocab_size, d))
    for layer in range(cfg.num_layers):
        p = f"l{layer}"
        ones(f"{p}/ln1/g", (d,))
        zeros(f"{p}/ln1/b", (d,))
        for proj in ("wq", "wk", "wv", "wo"):
            param(f"{p}/attn/{proj}", (d, d))
        ones(f"{p}/ln2/g", (d,))
        zeros(f"{p}/ln2/b", (d,))
        param(f"{p}/ffn/w1", (d, 4 * d))
        zeros(f"{p}/ffn/b1", (4 * d,))
        param(f"{p}/ffn/w2", (4 * d, d))
        zeros(f"{p}/ffn/b2", (d,))
    return params


def _split_heads(x: Tensor, num_heads: int, head_dim: int) -> Tensor:
    length = x.shape[0]
    return x.reshape(length, num_heads, head_dim).swapaxes(0, 1)


def _merge_heads(x: Tensor) -> Tensor:
    num_heads, length, head_dim = x.shape
    return x.swapaxes(0, 1).reshape(length, num_heads * head_dim)


def encode_sequence(ids, cfg: EncoderConfig, params: dict[str, Tensor],
                    prefix: str = "enc", causal: bool = False,
                    weight_overrides: dict[str, Tensor] | None = None) -> Tensor:
    """Run the transformer stack over a token id sequence.

    ``weight_overrides`` maps full parameter names to replacement tensors
    (used by the generator to apply low-rank adapter deltas to projections).
    Returns the (len, model_dim) hidden-state matrix.
    """
    ids = list(ids)
    if not ids:
        raise ValueError("empty sequence")
    if len(ids) > cfg.max_seq_len:
        raise ValueError(f"sequence length {len(ids)} exceeds max_seq_len {cfg.max_seq_len}")
    overrides = weight_overrides or {}

    def get(name: str) -> Tensor:
        full = f"{prefix}/{name}"
        if full in overrides:
            return overrides[full]
        return params[full]

    embed = get("embed")
    vocab_size = embed.shape[0]
    if min(ids) < 0 or max(ids) >= vocab_size:
        raise ValueError(f"token id out of vocabulary range [0, {vocab_size})")

    length = len(ids)
    x = take_rows(embed, ids) + Tensor(positional_encoding(length, cfg.model_dim))

    mask = None
    if causal:
        mask = Tensor(np.triu(np.full((length, length), -1e9), k=1))

    scale = 1.0 / np.sqrt(cfg.head_dim)
    for layer in range(cfg.num_layers):
        p = f"l{layer}"
        h = layer_norm(x, get(f"{p}/ln1/g"), get(f"{p}/ln1/b"))
        q = _split_heads(h @ get(f"{p}/attn/wq"), cfg.num_heads, cfg.head_dim)
        k = _split_heads(h @ get(f"{p}/attn/wk"), cfg.num_heads, cfg.head_dim)
        v = _split_heads(h @ get(f"{p}/attn/wv"), cfg.num_heads, cfg.head_dim)
        scores = (q @ k.transpose()) * scale
        if mask is not None:
            scores = scores + mask
        attended = softmax(scores, axis=-1) @ v
        x = x + _merge_heads(attended) @ get(f"{p}/attn/wo")
        h = layer_norm(x, get(f"{p}/ln2/g"), get(f"{p}/ln2/b"))
        inner = (h @ get(f"{p}/ffn/w1") + get(f"{p}/ffn/b1")).relu()
        x = x + inner @ get(f"{p}/ffn/w2") + get(f"{p}/ffn/b2")
    return x


def mean_pool(states: Tensor) -> Tensor:
    """Column mean of a (len, dim) hidden-state matrix."""
    return states.mean(axis=0)
