"""Domain classification producing the adapter mixing weights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from claimforge.numerics import Rng, Tensor, backward, cross_entropy_logits, softmax, take_rows
from claimforge.generator.adapters import DOMAINS
from claimforge.training import AdamW


@dataclass
class DomainClassifier:
    """MLP from a mean-pooled description embedding to 5 domain logits."""

    model_dim: int
    hidden: int = 64
    params: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def init(cls, model_dim: int, rng: Rng, hidden: int = 64) -> "DomainClassifier":
        clf = cls(model_dim=model_dim, hidden=hidden)
        scale = 1.0 / np.sqrt(model_dim)
        clf.params = {
            "domain/w1": Tensor(rng.normal((model_dim, hidden), scale), requires_grad=True),
            "domain/b1": Tensor(np.zeros(hidden), requires_grad=True),
            "domain/w2": Tensor(rng.normal((hidden, len(DOMAINS)), 1.0 / np.sqrt(hidden)),
                                requires_grad=True),
            "domain/b2": Tensor(np.zeros(len(DOMAINS)), requires_grad=True),
        }
        return clf

    def logits(self, pooled: Tensor) -> Tensor:
        h = (pooled @ self.params["domain/w1"] + self.params["domain/b1"]).relu()
        return h @ self.params["domain/w2"] + self.params["domain/b2"]


def pool_embedding(token_ids: list[int], embed_table: Tensor) -> Tensor:
    """Mean token embedding of a description (classifier input features)."""
    if not token_ids:
        raise ValueError("empty document")
    return take_rows(embed_table, token_ids).mean(axis=0)


def classify_domain(pooled: Tensor, classifier: DomainClassifier
                    ) -> tuple[np.ndarray, str, float]:
    """Softmax mixing weights alpha, argmax domain label, and confidence."""
    alpha = softmax(classifier.logits(pooled)).data
    idx = int(np.argmax(alpha))
    return alpha, DOMAINS[idx], float(alpha[idx])


def train_domain_classifier(samples: list[tuple[list[int], str]],
                            embed_table: Tensor, classifier: DomainClassifier,
                            lr: float = 1e-2, epochs: int = 30,
                            batch_size: int = 16) -> list[float]:
    """Cross-entropy training on (description token ids, domain label) pairs."""
    if not samples:
        raise ValueError("empty corpus")
    label_idx = {d: i for i, d in enumerate(DOMAINS)}
    opt = AdamW(classifier.params, lr=lr, weight_decay=0.01)
    history = []
    for _ in range(epochs):
        for start in range(0, len(samples), batch_size):
            batch = samples[start:start + batch_size]
            loss = None
            for token_ids, label in batch:
                logits = classifier.logits(pool_embedding(token_ids, embed_table))
                term = cross_entropy_logits(logits, label_idx[label])
                loss = term if loss is None else loss + term
            loss = loss * (1.0 / len(batch))
            grads = backward(loss, classifier.params)
            opt.step(grads)
            history.append(loss.item())
    return history


def eval_domain_accuracy(samples: list[tuple[list[int], str]],
                         embed_table: Tensor, classifier: DomainClassifier) -> float:
    correct = 0
    for token_ids, label in samples:
        _, pred, _ = classify_domain(pool_embedding(token_ids, embed_table), classifier)
        correct += pred == label
    return correct / len(samples)
