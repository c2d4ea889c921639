"""Stage 3: unified multi-aspect quality assessment with adaptive margins."""

from claimforge.evaluator.aspects import (
    ASPECTS,
    EvaluatorModel,
    QualityReport,
    encode_pair,
    aspect_scores,
    overall_score,
    adaptive_margin,
    score_pair,
)
from claimforge.evaluator.train import (
    train_evaluator,
    EvaluatorTrainConfig,
    ordering_accuracy,
)

__all__ = [
    "ASPECTS",
    "EvaluatorModel",
    "QualityReport",
    "encode_pair",
    "aspect_scores",
    "overall_score",
    "adaptive_margin",
    "score_pair",
    "train_evaluator",
    "EvaluatorTrainConfig",
    "ordering_accuracy",
]
