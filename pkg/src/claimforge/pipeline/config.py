"""Flat key-value configuration mirroring every pipeline default."""

from __future__ import annotations

from dataclasses import dataclass, fields

from claimforge.textcore import EncoderConfig
from claimforge.training import CurriculumSchedule


@dataclass
class PipelineConfig:
    # encoder / decoder geometry
    model_dim: int = 512
    num_heads: int = 8
    head_dim: int = 64
    num_layers: int = 2
    max_seq_len: int = 1024
    vocab_cap: int = 8192
    # chunking
    chunk_centering: float = 0.0
    chunk_scale: float = 1.0
    # similarity
    sim_temperature: float = 0.1
    aux_weight: float = 0.5
    # generator
    adapter_rank: int = 8
    max_gen_len: int = 32
    # training
    batch_size: int = 4
    lr: float = 5e-5
    weight_decay: float = 0.01
    grad_clip: float = 1.0
    # curriculum
    gamma: float = 0.01
    t0: float = 5000.0
    level3_tau_threshold: float = 0.999
    verbatim_mode: bool = False
    # evaluation
    base_margin: float = 0.3
    adapt_strength: float = 0.1
    # reporting
    top_k: int = 5
    workers: int = 1
    seed: int = 0

    def encoder_config(self) -> EncoderConfig:
        return EncoderConfig(
            model_dim=self.model_dim,
            num_heads=self.num_heads,
            head_dim=self.head_dim,
            num_layers=self.num_layers,
            max_seq_len=self.max_seq_len,
        )

    def curriculum(self) -> CurriculumSchedule:
        return CurriculumSchedule(
            gamma=self.gamma,
            t0=self.t0,
            level3_tau_threshold=self.level3_tau_threshold,
            verbatim_mode=self.verbatim_mode,
        )

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
                kwargs[key] = _parse(known[key], value, key)
        return cls(**kwargs)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for f in fields(self):
                fh.write(f"{f.name} = {getattr(self, f.name)}\n")


def _parse(type_name: str, value: str, key: str):
    if type_name == "bool":
        low = value.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"config key {key!r}: cannot parse bool from {value!r}")
    if type_name == "int":
        return int(value)
    if type_name == "float":
        return float(value)
    return value
