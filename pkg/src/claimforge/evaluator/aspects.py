"""Shared pair encoding, per-aspect cross-attention scores, adaptive margins."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from claimforge.numerics import Rng, Tensor, softmax
from claimforge.generator.adapters import DOMAINS
from claimforge.textcore import BOS_ID, EOS_ID, SEP_ID, EncoderConfig, encode_sequence

ASPECTS = ("completeness", "clarity", "terminology", "logic", "overall")

DEFAULT_BASE_MARGIN = 0.3  # strongest fixed-margin setting, kept as the default base
DEFAULT_ADAPT_STRENGTH = 0.1
DOMAIN_EMBED_DIM = 16


@dataclass
class EvaluatorModel:
    """Aspect query embeddings, score projections, and the margin adapter."""

    cfg: EncoderConfig
    base_margins: np.ndarray
    adapt_strengths: np.ndarray
    params: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def init(cls, cfg: EncoderConfig, rng: Rng,
             base_margins: np.ndarray | None = None,
             adapt_strengths: np.ndarray | None = None) -> "EvaluatorModel":
        k = len(ASPECTS)
        d = cfg.model_dim
        mu = np.full(k, DEFAULT_BASE_MARGIN) if base_margins is None else np.asarray(base_margins, float)
        beta = np.full(k, DEFAULT_ADAPT_STRENGTH) if adapt_strengths is None else np.asarray(adapt_strengths, float)
        model = cls(cfg=cfg, base_margins=mu, adapt_strengths=beta)
        # aspect queries start as rows of a random orthonormal matrix so the
        # five aspects are distinguishable from step 0
        q, _ = np.linalg.qr(rng.normal((d, d)))
        model.params = {
            "eval/queries": Tensor(q[:k], requires_grad=True),
            "eval/score_w": Tensor(rng.normal((k, d), 1.0 / np.sqrt(d)), requires_grad=True),
            "eval/score_b": Tensor(np.zeros(k), requires_grad=True),
            "eval/aspect_logits": Tensor(np.zeros(k), requires_grad=True),
            "eval/margin/e_dom": Tensor(rng.normal((len(DOMAINS), DOMAIN_EMBED_DIM), 0.1),
                                        requires_grad=True),
            "eval/margin/w": Tensor(rng.normal((DOMAIN_EMBED_DIM, k), 0.1), requires_grad=True),
            "eval/margin/b": Tensor(np.zeros(k), requires_grad=True),
        }
        return model


@dataclass
class QualityReport:
    aspect_scores: dict[str, float]
    aspect_weights: dict[str, float]
    overall: float
    display_scores: dict[str, float]
    margins: dict[str, float]
    domain_mixture: list[float]

    def to_record(self) -> dict:
        return {
            "aspect_scores": self.aspect_scores,
            "aspect_weights": self.aspect_weights,
            "overall": self.overall,
            "display_scores": self.display_scores,
            "margins": self.margins,
            "domain_mixture": self.domain_mixture,
        }


def encode_pair(ref_ids: list[int], gen_ids: list[int], cfg: EncoderConfig,
                enc_params: dict[str, Tensor], prefix: str = "enc") -> Tensor:
    """Encoder states over [BOS] reference [SEP] generated [EOS]."""
    if not ref_ids and not gen_ids:
        raise ValueError("empty claim pair")
    total = len(ref_ids) + len(gen_ids) + 3
    if total > cfg.max_seq_len:
        excess = total - cfg.max_seq_len
        raise ValueError(
            f"claim pair length {total} exceeds max_seq_len {cfg.max_seq_len}; "
            f"truncate inputs by {excess} tokens total"
        )
    ids = [BOS_ID] + list(ref_ids) + [SEP_ID] + list(gen_ids) + [EOS_ID]
    return encode_sequence(ids, cfg, enc_params, prefix=prefix)


def aspect_scores(h_shared: Tensor, model: EvaluatorModel) -> tuple[Tensor, np.ndarray]:
    """Sigmoid scores per aspect via single-query cross-attention over h_shared.

    Returns (scores tensor of shape (5,), attention weight matrix (5, len)).
    """
    if h_shared.shape[0] == 0:
        raise ValueError("empty shared encoding")
    d = model.cfg.model_dim
    queries = model.params["eval/queries"]
    attn = softmax((queries @ h_shared.T) * (1.0 / np.sqrt(d)), axis=-1)
    pooled = attn @ h_shared
    logits = (pooled * model.params["eval/score_w"]).sum(axis=1) + model.params["eval/score_b"]
    return logits.sigmoid(), attn.data


def overall_score(scores: Tensor, aspect_logits: Tensor) -> tuple[Tensor, np.ndarray]:
    """Softmax-weighted combination of the five aspect scores."""
    w = softmax(aspect_logits)
    return (w * scores).sum(), w.data


def adaptive_margin(alpha, model: EvaluatorModel) -> Tensor:
    """Per-aspect margin mu_k + beta_k * tanh(row_k of domain projection).

    ``alpha`` is the domain mixture; the domain embedding is its soft mixture
    over the embedding table, so margins stay within mu_k +/- beta_k.
    """
    alpha = alpha if isinstance(alpha, Tensor) else Tensor(np.asarray(alpha, float))
    if alpha.shape != (len(DOMAINS),):
        raise ValueError(f"domain mixture must have {len(DOMAINS)} entries")
    d_embed = alpha @ model.params["eval/margin/e_dom"]
    z = d_embed @ model.params["eval/margin/w"] + model.params["eval/margin/b"]
    return Tensor(model.base_margins) + Tensor(model.adapt_strengths) * z.tanh()


def score_pair(ref_ids: list[int], gen_ids: list[int], alpha,
               model: EvaluatorModel, enc_params: dict[str, Tensor],
               prefix: str = "enc") -> QualityReport:
    """Full quality report for one (reference, generated) claim pair."""
    h_shared = encode_pair(ref_ids, gen_ids, model.cfg, enc_params, prefix=prefix)
    scores, _ = aspect_scores(h_shared, model)
    overall, w = overall_score(scores, model.params["eval/aspect_logits"])
    margins = adaptive_margin(alpha, model).data
    s = scores.data
    return QualityReport(
        aspect_scores={a: float(s[i]) for i, a in enumerate(ASPECTS)},
        aspect_weights={a: float(w[i]) for i, a in enumerate(ASPECTS)},
        overall=float(overall.data),
        display_scores={a: float(10.0 * s[i]) for i, a in enumerate(ASPECTS)},
        margins={a: float(margins[i]) for i, a in enumerate(ASPECTS)},
        domain_mixture=[float(x) for x in np.asarray(alpha, float)],
    )
