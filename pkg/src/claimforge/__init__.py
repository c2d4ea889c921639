"""claimforge: desk-scale three-stage patent-claim pipeline.

Stages: relationship-aware similarity analysis, domain-adaptive claim
generation with mixed low-rank adapters under curriculum training, and
unified multi-aspect quality assessment.
"""

__version__ = "0.1.0"
