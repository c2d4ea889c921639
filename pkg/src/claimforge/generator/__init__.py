"""Stage 2: decoder LM with softmax-mixed low-rank adapters per patent domain."""

from claimforge.generator.adapters import (
    DOMAINS,
    ADAPTER_RANK,
    ADAPTED_PROJECTIONS,
    AdapterBank,
    effective_projection,
    effective_overrides,
)
from claimforge.generator.classify import (
    DomainClassifier,
    classify_domain,
    pool_embedding,
    train_domain_classifier,
    eval_domain_accuracy,
)
from claimforge.generator.decode import (
    GeneratorModel,
    decoder_logits,
    generate,
)
from claimforge.generator.train import (
    train_generator,
    GeneratorTrainConfig,
    GeneratorSample,
)

__all__ = [
    "DOMAINS",
    "ADAPTER_RANK",
    "ADAPTED_PROJECTIONS",
    "AdapterBank",
    "effective_projection",
    "effective_overrides",
    "DomainClassifier",
    "classify_domain",
    "pool_embedding",
    "train_domain_classifier",
    "eval_domain_accuracy",
    "GeneratorModel",
    "decoder_logits",
    "generate",
    "train_generator",
    "GeneratorTrainConfig",
    "GeneratorSample",
]
