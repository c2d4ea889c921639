"""Decoder-only language model with adapter-modified projections."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from claimforge.numerics import Rng, Tensor
from claimforge.generator.adapters import AdapterBank, effective_overrides
from claimforge.generator.classify import DomainClassifier, classify_domain, pool_embedding
from claimforge.textcore import BOS_ID, EOS_ID, SEP_ID, EncoderConfig, encode_sequence, init_encoder_params


@dataclass
class GeneratorModel:
    cfg: EncoderConfig
    vocab_size: int
    params: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def init(cls, vocab_size: int, cfg: EncoderConfig, rng: Rng) -> "GeneratorModel":
        params = init_encoder_params(vocab_size, cfg, rng, prefix="dec")
        params["dec/out_w"] = Tensor(
            rng.normal((cfg.model_dim, vocab_size), 1.0 / np.sqrt(cfg.model_dim)),
            requires_grad=True,
        )
        params["dec/out_b"] = Tensor(np.zeros(vocab_size), requires_grad=True)
        return cls(cfg=cfg, vocab_size=vocab_size, params=params)

    @property
    def embed(self) -> Tensor:
        return self.params["dec/embed"]


def decoder_logits(ids: list[int], model: GeneratorModel,
                   overrides: dict[str, Tensor] | None = None) -> Tensor:
    """Next-token logits at every position (causal self-attention)."""
    states = encode_sequence(ids, model.cfg, model.params, prefix="dec",
                             causal=True, weight_overrides=overrides)
    return states @ model.params["dec/out_w"] + model.params["dec/out_b"]


def generate(description_ids: list[int], model: GeneratorModel,
             bank: AdapterBank, classifier: DomainClassifier,
             max_len: int, mode: str = "greedy",
             rng: Rng | None = None) -> tuple[list[int], np.ndarray, str]:
    """Autoregressive decoding conditioned on the description prefix.

    The domain mixture alpha is computed once per document, before decoding.
    Returns (generated token ids, alpha, domain label); greedy mode is
    deterministic, "sample" mode needs an Rng.
    """
    if not description_ids:
        raise ValueError("empty document")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if mode not in ("greedy", "sample"):
        raise ValueError(f"unknown decoding mode {mode!r}")
    if mode == "sample" and rng is None:
        raise ValueError("sample mode requires an rng")

    alpha, label, _ = classify_domain(pool_embedding(description_ids, model.embed), classifier)
    overrides = effective_overrides(model.params, bank, alpha)

    budget = model.cfg.max_seq_len - max_len - 2
    prefix = [BOS_ID] + list(description_ids)[:budget] + [SEP_ID]
    ids = list(prefix)
    out: list[int] = []
    for _ in range(max_len):
        logits = decoder_logits(ids, model, overrides).data[-1]
        if mode == "greedy":
            nxt = int(np.argmax(logits))
        else:
            shifted = logits - logits.max()
            probs = np.exp(shifted) / np.exp(shifted).sum()
            nxt = int(np.searchsorted(np.cumsum(probs), float(rng.uniform(()))))
        if nxt == EOS_ID:
            break
        out.append(nxt)
        ids.append(nxt)
    return out, alpha, label
