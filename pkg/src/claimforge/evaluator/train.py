"""Margin-ranking training on (reference, better, worse) claim tuples."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from claimforge.numerics import Tensor, backward
from claimforge.evaluator.aspects import (
    ASPECTS,
    EvaluatorModel,
    adaptive_margin,
    aspect_scores,
    encode_pair,
    overall_score,
)
from claimforge.generator.adapters import DOMAINS
from claimforge.training import AdamW, clip_grad_norm


@dataclass
class EvaluatorTrainConfig:
    lr: float = 1e-3
    weight_decay: float = 0.01
    epochs: int = 10
    batch_size: int = 8
    train_encoder: bool = True
    grad_clip: float = 1.0


def domain_one_hot(domain: str) -> np.ndarray:
    alpha = np.zeros(len(DOMAINS))
    alpha[DOMAINS.index(domain)] = 1.0
    return alpha


def _tuple_loss(ref_ids, better_ids, worse_ids, alpha,
                model: EvaluatorModel, enc_params) -> Tensor:
    h_better = encode_pair(ref_ids, better_ids, model.cfg, enc_params)
    h_worse = encode_pair(ref_ids, worse_ids, model.cfg, enc_params)
    s_better, _ = aspect_scores(h_better, model)
    s_worse, _ = aspect_scores(h_worse, model)
    margins = adaptive_margin(alpha, model)
    return (margins - s_better + s_worse).relu().sum()


def train_evaluator(tuples: list[tuple[list[int], list[int], list[int], str]],
                    model: EvaluatorModel, enc_params: dict[str, Tensor],
                    train_cfg: EvaluatorTrainConfig = EvaluatorTrainConfig()) -> list[float]:
    """Minimize the summed per-aspect hinge over better/worse score gaps.

    Each tuple is (reference ids, better generation ids, worse generation ids,
    domain label). Degenerate tuples (better == worse) are skipped.
    """
    if not tuples:
        raise ValueError("empty corpus")
    usable = []
    for ref, better, worse, domain in tuples:
        if better == worse:
            warnings.warn("skipping degenerate tuple with identical better/worse claims")
            continue
        usable.append((ref, better, worse, domain))
    if not usable:
        raise ValueError("no usable tuples after skipping degenerates")

    trainable = {
        k: v for k, v in model.params.items() if k != "eval/aspect_logits"
    }
    if train_cfg.train_encoder:
        trainable.update(enc_params)
    opt = AdamW(trainable, lr=train_cfg.lr, weight_decay=train_cfg.weight_decay)

    history: list[float] = []
    for _ in range(train_cfg.epochs):
        for start in range(0, len(usable), train_cfg.batch_size):
            batch = usable[start:start + train_cfg.batch_size]
            loss = None
            for ref, better, worse, domain in batch:
                term = _tuple_loss(ref, better, worse, domain_one_hot(domain),
                                   model, enc_params)
                loss = term if loss is None else loss + term
            loss = loss * (1.0 / len(batch))
            grads = backward(loss, trainable)
            clip_grad_norm(grads, train_cfg.grad_clip)
            opt.step(grads)
            history.append(loss.item())
    return history


def ordering_accuracy(tuples: list[tuple[list[int], list[int], list[int], str]],
                      model: EvaluatorModel, enc_params: dict[str, Tensor]) -> float:
    """Fraction of tuples whose better claim outranks the worse on `overall`."""
    correct = 0
    for ref, better, worse, domain in tuples:
        logits = model.params["eval/aspect_logits"]
        s_b, _ = aspect_scores(encode_pair(ref, better, model.cfg, enc_params), model)
        s_w, _ = aspect_scores(encode_pair(ref, worse, model.cfg, enc_params), model)
        o_b, _ = overall_score(s_b, logits)
        o_w, _ = overall_score(s_w, logits)
        correct += float(o_b.data) > float(o_w.data)
    return correct / len(tuples)
