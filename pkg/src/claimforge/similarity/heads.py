"""Specialized-head similarity scoring between claim and document chunks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from claimforge.numerics import (
    Rng,
    Tensor,
    concat,
    cosine_similarity,
    scaled_dot_attention,
    softmax,
)
from claimforge.textcore import mean_pool

NUM_HEADS = 8
HEAD_DIM = 64

# two heads per relationship group; order fixes argmax tie-breaking
RELATIONSHIP_GROUPS: dict[str, tuple[int, int]] = {
    "equivalence": (1, 2),
    "improvement": (3, 4),
    "contradiction": (5, 6),
    "technical": (7, 8),
}
RELATIONSHIP_ORDER = ("equivalence", "improvement", "contradiction", "technical")


@dataclass
class HeadBank:
    """Per-head projection triples plus the shared head-weight MLP."""

    model_dim: int
    head_dim: int = HEAD_DIM
    phi_hidden: int = 128
    params: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def init(cls, model_dim: int, rng: Rng, head_dim: int = HEAD_DIM,
             phi_hidden: int = 128) -> "HeadBank":
        bank = cls(model_dim=model_dim, head_dim=head_dim, phi_hidden=phi_hidden)
        p = bank.params
        scale = 1.0 / np.sqrt(model_dim)
        for h in range(1, NUM_HEADS + 1):
            for proj in ("wq", "wk", "wv"):
                p[f"sim/h{h}/{proj}"] = Tensor(
                    rng.normal((model_dim, head_dim), scale), requires_grad=True
                )
        p["sim/phi/w1"] = Tensor(rng.normal((3 * model_dim, phi_hidden), scale), requires_grad=True)
        p["sim/phi/b1"] = Tensor(np.zeros(phi_hidden), requires_grad=True)
        p["sim/phi/w2"] = Tensor(
            rng.normal((phi_hidden, NUM_HEADS), 1.0 / np.sqrt(phi_hidden)), requires_grad=True
        )
        p["sim/phi/b2"] = Tensor(np.zeros(NUM_HEADS), requires_grad=True)
        return bank


@dataclass
class SimilarityReport:
    claim_chunk_id: str
    doc_chunk_id: str
    head_scores: list[float]
    head_weights: list[float]
    similarity: float
    relationship_label: str
    group_masses: dict[str, float]

    def to_record(self) -> dict:
        return {
            "claim_chunk_id": self.claim_chunk_id,
            "doc_chunk_id": self.doc_chunk_id,
            "head_scores": self.head_scores,
            "head_weights": self.head_weights,
            "similarity": self.similarity,
            "relationship_label": self.relationship_label,
            "group_masses": self.group_masses,
        }


def head_weights(claim_repr: Tensor, doc_repr: Tensor, bank: HeadBank) -> Tensor:
    """Softmax over 8 logits from MLP([claim; doc; claim * doc])."""
    if claim_repr.shape != (bank.model_dim,) or doc_repr.shape != (bank.model_dim,):
        raise ValueError(
            f"pooled representations must have dim {bank.model_dim}, "
            f"got {claim_repr.shape} and {doc_repr.shape}"
        )
    x = concat([claim_repr, doc_repr, claim_repr * doc_repr])
    h = (x @ bank.params["sim/phi/w1"] + bank.params["sim/phi/b1"]).relu()
    logits = h @ bank.params["sim/phi/w2"] + bank.params["sim/phi/b2"]
    return softmax(logits)


def head_score(claim_states: Tensor, doc_states: Tensor, bank: HeadBank, h: int) -> Tensor:
    """Cosine between pooled attended output and pooled query for head h."""
    if claim_states.shape[0] == 0 or doc_states.shape[0] == 0:
        raise ValueError("empty states")
    q = claim_states @ bank.params[f"sim/h{h}/wq"]
    k = doc_states @ bank.params[f"sim/h{h}/wk"]
    v = doc_states @ bank.params[f"sim/h{h}/wv"]
    attended, _ = scaled_dot_attention(q, k, v)
    return cosine_similarity(mean_pool(attended), mean_pool(q))


def group_masses_from_weights(w: np.ndarray) -> dict[str, float]:
    return {
        name: float(sum(w[h - 1] for h in heads))
        for name, heads in RELATIONSHIP_GROUPS.items()
    }


def label_from_masses(masses: dict[str, float]) -> str:
    # argmax with fixed tie-break order
    best = RELATIONSHIP_ORDER[0]
    for name in RELATIONSHIP_ORDER:
        if masses[name] > masses[best]:
            best = name
    return best


def similarity(claim_chunk_id: str, doc_chunk_id: str,
               claim_states: Tensor, doc_states: Tensor,
               bank: HeadBank) -> SimilarityReport:
    """Head-weighted similarity report for one (claim chunk, doc chunk) pair."""
    w = head_weights(mean_pool(claim_states), mean_pool(doc_states), bank)
    scores = [head_score(claim_states, doc_states, bank, h) for h in range(1, NUM_HEADS + 1)]
    w_np = w.data
    score_np = np.array([s.item() for s in scores])
    masses = group_masses_from_weights(w_np)
    return SimilarityReport(
        claim_chunk_id=claim_chunk_id,
        doc_chunk_id=doc_chunk_id,
        head_scores=[float(s) for s in score_np],
        head_weights=[float(x) for x in w_np],
        similarity=float(np.dot(w_np, score_np)),
        relationship_label=label_from_masses(masses),
        group_masses=masses,
    )
