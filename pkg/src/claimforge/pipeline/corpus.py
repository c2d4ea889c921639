"""Line-delimited corpus records with named fields (one JSON object per line)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict


@dataclass
class CorpusRecord:
    id: str
    description: str
    claims: list[str] = field(default_factory=list)
    domain: str | None = None
    jurisdiction: str | None = None
    figure_count: int | None = None
    # relationship-labeled chunk pairs for similarity training:
    # each entry is {"claim_text": ..., "doc_text": ..., "label": ...}
    relationship_pairs: list[dict] = field(default_factory=list)
    # evaluator corruption tuples: {"reference": ..., "better": ..., "worse": ...}
    corruption_tuples: list[dict] = field(default_factory=list)

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be nonempty")
        if not self.description:
            raise ValueError(f"record {self.id}: description must be nonempty")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "CorpusRecord":
        data = json.loads(line)
        return cls(**data)


def write_corpus(path, records: list[CorpusRecord]) -> None:
    seen = set()
    for rec in records:
        if rec.id in seen:
            raise ValueError(f"duplicate record id {rec.id!r}")
        seen.add(rec.id)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_corpus(path) -> list[CorpusRecord]:
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = CorpusRecord.from_json(line)
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
            if rec.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate record id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records
