"""Rank-8 low-rank adapter bank mixed by domain weights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from claimforge.numerics import Rng, Tensor

DOMAINS = ("mechanical", "electrical", "software", "chemical", "biotech")
ADAPTER_RANK = 8

# adapters attach to the decoder's attention query and value projections
ADAPTED_PROJECTIONS = ("wq", "wv")


@dataclass
class AdapterBank:
    """One (B, C) factor pair per domain per adapted projection.

    The delta for domain d is B_d @ C_d^T, rank at most ``rank``. B starts at
    zero so an untrained bank leaves the base model exactly unchanged.
    """

    rank: int = ADAPTER_RANK
    params: dict[str, Tensor] = field(default_factory=dict)
    target_names: list[str] = field(default_factory=list)

    @classmethod
    def init(cls, num_layers: int, model_dim: int, rng: Rng,
             rank: int = ADAPTER_RANK, prefix: str = "dec") -> "AdapterBank":
        bank = cls(rank=rank)
        for layer in range(num_layers):
            for proj in ADAPTED_PROJECTIONS:
                target = f"{prefix}/l{layer}/attn/{proj}"
                bank.target_names.append(target)
                for domain in DOMAINS:
                    base = f"adapter/{domain}/l{layer}/{proj}"
                    bank.params[f"{base}/B"] = Tensor(
                        np.zeros((model_dim, rank)), requires_grad=True
                    )
                    bank.params[f"{base}/C"] = Tensor(
                        rng.normal((model_dim, rank), 0.02), requires_grad=True
                    )
        return bank

    def factors(self, domain: str, target_name: str) -> tuple[Tensor, Tensor]:
        # target name "dec/l0/attn/wq" -> adapter key "adapter/<domain>/l0/wq"
        parts = target_name.split("/")
        layer, proj = parts[-3], parts[-1]
        base = f"adapter/{domain}/{layer}/{proj}"
        return self.params[f"{base}/B"], self.params[f"{base}/C"]

    def delta(self, domain: str, target_name: str) -> np.ndarray:
        b, c = self.factors(domain, target_name)
        return b.data @ c.data.T


def effective_projection(base: Tensor, bank: AdapterBank, alpha,
                         target_name: str) -> Tensor:
    """base + sum_d alpha_d * B_d C_d^T for one projection matrix."""
    out = base
    for d, domain in enumerate(DOMAINS):
        b, c = bank.factors(domain, target_name)
        if b.shape[0] != base.shape[0] or c.shape[0] != base.shape[1]:
            raise ValueError(
                f"adapter shapes {b.shape} x {c.shape} incompatible with base {base.shape}"
            )
        a_d = alpha[d] if isinstance(alpha, Tensor) else float(np.asarray(alpha)[d])
        out = out + a_d * (b @ c.T)
    return out


def effective_overrides(base_params: dict[str, Tensor], bank: AdapterBank,
                        alpha) -> dict[str, Tensor]:
    """Adapter-modified replacements for every targeted projection."""
    return {
        name: effective_projection(base_params[name], bank, alpha, name)
        for name in bank.target_names
    }
