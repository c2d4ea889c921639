"""Curriculum training loop for the generator, adapters, and classifier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from claimforge.numerics import Rng, Tensor, backward, cross_entropy_logits, softmax
from claimforge.generator.adapters import DOMAINS, AdapterBank, effective_overrides
from claimforge.generator.classify import DomainClassifier, pool_embedding
from claimforge.generator.decode import GeneratorModel, decoder_logits
from claimforge.textcore import BOS_ID, EOS_ID, SEP_ID
from claimforge.training import (
    AdamW,
    CurriculumSchedule,
    bucket_corpus,
    clip_grad_norm,
    curriculum_progress,
    difficulty_level,
    sample_batch,
    sequence_cross_entropy,
)
from claimforge.training.curriculum import difficulty_key


@dataclass
class GeneratorSample:
    id: str
    description_ids: list[int]
    claim_ids: list[int]
    domain_label: str | None = None
    dependent_claim_count: int = 0

    @property
    def key(self) -> float:
        return difficulty_key(len(self.claim_ids), self.dependent_claim_count)


@dataclass
class GeneratorTrainConfig:
    batch_size: int = 4
    lr: float = 5e-5
    weight_decay: float = 0.01
    steps: int = 100
    grad_clip: float = 1.0
    train_base: bool = True
    train_classifier: bool = True
    classifier_loss_weight: float = 1.0
    curriculum: bool = True


def _sample_loss(sample: GeneratorSample, model: GeneratorModel,
                 bank: AdapterBank, classifier: DomainClassifier,
                 train_cfg: GeneratorTrainConfig) -> Tensor:
    pooled = pool_embedding(sample.description_ids, model.embed)
    alpha = softmax(classifier.logits(pooled))
    overrides = effective_overrides(model.params, bank, alpha)

    budget = model.cfg.max_seq_len - len(sample.claim_ids) - 3
    seq = ([BOS_ID] + sample.description_ids[:budget] + [SEP_ID]
           + sample.claim_ids + [EOS_ID])
    logits = decoder_logits(seq[:-1], model, overrides)
    loss = sequence_cross_entropy(logits, seq[1:])

    if train_cfg.train_classifier and sample.domain_label is not None:
        dom_ce = cross_entropy_logits(classifier.logits(pooled),
                                      DOMAINS.index(sample.domain_label))
        loss = loss + train_cfg.classifier_loss_weight * dom_ce
    return loss


def train_generator(samples: list[GeneratorSample], model: GeneratorModel,
                    bank: AdapterBank, classifier: DomainClassifier,
                    schedule: CurriculumSchedule, rng: Rng,
                    train_cfg: GeneratorTrainConfig = GeneratorTrainConfig(),
                    log_fn: Callable[[dict], None] | None = None) -> list[float]:
    """Next-token training with curriculum batch sampling; returns loss history."""
    if not samples:
        raise ValueError("empty corpus")
    if train_cfg.train_classifier and all(s.domain_label is None for s in samples):
        raise ValueError("classifier training enabled but corpus has no domain labels")

    by_id = {s.id: s for s in samples}
    buckets = bucket_corpus([(s.id, s.key) for s in samples]) if train_cfg.curriculum else None

    trainable: dict[str, Tensor] = dict(bank.params)
    if train_cfg.train_base:
        trainable.update(model.params)
    if train_cfg.train_classifier:
        trainable.update(classifier.params)
    opt = AdamW(trainable, lr=train_cfg.lr, weight_decay=train_cfg.weight_decay)

    history: list[float] = []
    ids = sorted(by_id)
    for t in range(train_cfg.steps):
        if buckets is not None:
            batch_ids = sample_batch(buckets, t, schedule, train_cfg.batch_size, rng)
        else:
            idx = rng.integers(0, len(ids), size=train_cfg.batch_size)
            batch_ids = [ids[i] for i in idx]
        loss = None
        for sid in batch_ids:
            term = _sample_loss(by_id[sid], model, bank, classifier, train_cfg)
            loss = term if loss is None else loss + term
        loss = loss * (1.0 / len(batch_ids))
        grads = backward(loss, trainable)
        norm = clip_grad_norm(grads, train_cfg.grad_clip)
        opt.step(grads)
        history.append(loss.item())
        if log_fn is not None:
            log_fn({
                "step": t,
                "level": difficulty_level(t, schedule),
                "tau": curriculum_progress(t, schedule),
                "loss": history[-1],
                "grad_norm": norm,
            })
    return history
