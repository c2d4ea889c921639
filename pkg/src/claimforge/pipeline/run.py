"""Three-stage pipeline orchestration and report writing.

Reports are line-delimited records plus a human-readable summary. Wall-clock
timings go to a sidecar file so the report proper is byte-identical across
reruns with the same inputs and seed.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from claimforge.numerics import Rng, Tensor, load_checkpoint
from claimforge.chunker import Document, chunk_document, complexity, embed_chunk, target_size
from claimforge.evaluator import ASPECTS, EvaluatorModel, score_pair
from claimforge.generator import (
    AdapterBank,
    DomainClassifier,
    GeneratorModel,
    generate,
)
from claimforge.pipeline.config import PipelineConfig
from claimforge.pipeline.corpus import CorpusRecord, read_corpus
from claimforge.pipeline.metrics import bleu, rouge_l
from claimforge.similarity import HeadBank, similarity
from claimforge.textcore import (
    EncoderConfig,
    Vocabulary,
    encode_sequence,
)
from claimforge.training import curriculum_progress, difficulty_level


@dataclass
class PipelineModels:
    vocab: Vocabulary
    cfg: EncoderConfig
    enc_params: dict[str, Tensor]
    head_bank: HeadBank
    generator: GeneratorModel
    adapter_bank: AdapterBank
    classifier: DomainClassifier
    evaluator: EvaluatorModel


@dataclass
class PipelineResult:
    reports: list[dict]
    failures: list[dict]
    report_path: Path | None = None
    summary_path: Path | None = None
    timings_path: Path | None = None


def build_models(vocab: Vocabulary, config: PipelineConfig, seed: int,
                 checkpoint: dict[str, np.ndarray] | None = None) -> PipelineModels:
    cfg = config.encoder_config()
    rng = Rng(seed, ("init",))
    from claimforge.textcore import init_encoder_params

    enc_params = init_encoder_params(len(vocab), cfg, rng.substream("enc"))
    head_bank = HeadBank.init(cfg.model_dim, rng.substream("sim"), head_dim=cfg.head_dim)
    generator = GeneratorModel.init(len(vocab), cfg, rng.substream("dec"))
    adapter_bank = AdapterBank.init(cfg.num_layers, cfg.model_dim, rng.substream("bank"),
                                    rank=config.adapter_rank)
    classifier = DomainClassifier.init(cfg.model_dim, rng.substream("clf"))
    evaluator = EvaluatorModel.init(
        cfg, rng.substream("eval"),
        base_margins=np.full(len(ASPECTS), config.base_margin),
        adapt_strengths=np.full(len(ASPECTS), config.adapt_strength),
    )
    models = PipelineModels(vocab, cfg, enc_params, head_bank, generator,
                            adapter_bank, classifier, evaluator)
    if checkpoint is not None:
        _load_into(models, checkpoint, config)
    return models


def _load_into(models: PipelineModels, ckpt: dict[str, np.ndarray],
               config: PipelineConfig) -> None:
    if "enc/embed" in ckpt:
        dim = ckpt["enc/embed"].shape[1]
        if dim != config.model_dim:
            raise ValueError(
                f"checkpoint model_dim {dim} does not match config model_dim {config.model_dim}"
            )
    holders = (models.enc_params, models.head_bank.params, models.generator.params,
               models.adapter_bank.params, models.classifier.params, models.evaluator.params)
    for name, arr in ckpt.items():
        for params in holders:
            if name in params:
                if params[name].data.shape != arr.shape:
                    raise ValueError(
                        f"checkpoint tensor {name!r} has shape {arr.shape}, "
                        f"model expects {params[name].data.shape}"
                    )
                params[name].data = arr
                break


def all_params(models: PipelineModels) -> dict[str, np.ndarray]:
    out = {}
    for params in (models.enc_params, models.head_bank.params, models.generator.params,
                   models.adapter_bank.params, models.classifier.params,
                   models.evaluator.params):
        for name, t in params.items():
            out[name] = t.data
    return out


def _document_from_record(rec: CorpusRecord, vocab: Vocabulary) -> Document:
    text = rec.description
    claims_text = "\n".join(rec.claims)
    full = text + ("\n\nCLAIMS\n" + claims_text if claims_text else "")
    return Document.from_text(
        rec.id, full, vocab,
        claim_count=len(rec.claims) if rec.claims else None,
        figure_count=rec.figure_count,
        domain_label=rec.domain,
        jurisdiction=rec.jurisdiction,
    )


def _chunk_states(token_ids: list[int], models: PipelineModels) -> Tensor:
    return encode_sequence(token_ids, models.cfg, models.enc_params)


def process_document(rec: CorpusRecord, prior_art: list[CorpusRecord],
                     models: PipelineModels, config: PipelineConfig,
                     train_step: int = 0) -> tuple[dict, dict]:
    """Run stages 1-3 for one record; returns (report record, stage timings)."""
    timings = {}

    def mark(stage: str, t_start: float) -> None:
        timings[f"{stage}_start"] = t_start
        timings[f"{stage}_seconds"] = time.perf_counter() - t_start

    # Stage 1: adaptive chunking + relationship-aware similarity
    t_start = time.perf_counter()
    doc = _document_from_record(rec, models.vocab)
    kappa = complexity(doc)
    size = target_size(kappa, centering=config.chunk_centering, scale=config.chunk_scale)
    chunks = chunk_document(doc, size)

    claim_texts = rec.claims if rec.claims else [rec.description]
    claim_ids_list = [models.vocab.encode_text(t) for t in claim_texts]

    sim_reports = []
    for pa in prior_art:
        pa_doc = _document_from_record(pa, models.vocab)
        pa_size = target_size(complexity(pa_doc), centering=config.chunk_centering,
                              scale=config.chunk_scale)
        pa_chunks = chunk_document(pa_doc, pa_size)
        for ci, claim_ids in enumerate(claim_ids_list):
            if not claim_ids:
                continue
            claim_states = _chunk_states(claim_ids, models)
            for chunk in pa_chunks:
                span = pa_doc.tokens[chunk.start_token:chunk.end_token]
                doc_states = _chunk_states(span, models)
                report = similarity(
                    f"{rec.id}/claim{ci}",
                    f"{pa.id}/[{chunk.start_token},{chunk.end_token})",
                    claim_states, doc_states, models.head_bank,
                )
                sim_reports.append(report)
    sim_reports.sort(key=lambda r: (-r.similarity, r.claim_chunk_id, r.doc_chunk_id))
    top_sims = [r.to_record() for r in sim_reports[:config.top_k]]
    mark("stage1", t_start)

    # Stage 2: domain-adaptive generation
    t_start = time.perf_counter()
    desc_ids = models.vocab.encode_text(rec.description)
    schedule = config.curriculum()
    tau = curriculum_progress(train_step, schedule)
    level = difficulty_level(train_step, schedule)
    gen_ids, alpha, domain_label = generate(
        desc_ids, models.generator, models.adapter_bank, models.classifier,
        max_len=config.max_gen_len,
    )
    generated_text = models.vocab.decode_text(gen_ids)
    mark("stage2", t_start)

    # Stage 3: unified quality assessment
    t_start = time.perf_counter()
    reference_ids = claim_ids_list[0] if claim_ids_list else desc_ids
    quality = score_pair(reference_ids, gen_ids if gen_ids else [models.vocab.token_id("<unk>")],
                         alpha, models.evaluator, models.enc_params)
    ref_tokens = models.vocab.decode(reference_ids)
    gen_tokens = models.vocab.decode(gen_ids) if gen_ids else []
    p, r, f = rouge_l(ref_tokens, gen_tokens)
    metrics = {
        "rouge_l": {"precision": p, "recall": r, "f": f},
        "bleu": bleu(ref_tokens, gen_tokens),
    }
    mark("stage3", t_start)

    report = {
        "doc_id": rec.id,
        "complexity": kappa,
        "target_chunk_size": size,
        "chunks": [[c.start_token, c.end_token] for c in chunks],
        "top_similarity": top_sims,
        "domain_mixture": [float(x) for x in alpha],
        "domain_label": domain_label,
        "curriculum": {"step": train_step, "tau": tau, "level": level},
        "generated_claims": [generated_text],
        "quality": quality.to_record(),
        "metrics": metrics,
    }
    return report, timings


def _ordered_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_pipeline(corpus_path, prior_art_path, out_dir, config: PipelineConfig,
                 seed: int, checkpoint_path=None) -> PipelineResult:
    """Execute the full three-stage pipeline over a corpus file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = read_corpus(corpus_path)
    prior_art = read_corpus(prior_art_path) if prior_art_path else []

    texts = [r.description for r in records + prior_art]
    for r in records + prior_art:
        texts.extend(r.claims)
    vocab = Vocabulary.build(texts, cap=config.vocab_cap)

    ckpt = load_checkpoint(checkpoint_path) if checkpoint_path else None
    models = build_models(vocab, config, seed, checkpoint=ckpt)

    def safe_process(rec: CorpusRecord):
        try:
            return rec.id, process_document(rec, prior_art, models, config), None
        except Exception as exc:  # failure isolation: one bad record skips one doc
            return rec.id, None, str(exc)

    results = _ordered_map(safe_process, records, config.workers)

    reports, failures, timing_rows = [], [], []
    for doc_id, payload, error in results:
        if error is not None:
            failures.append({"doc_id": doc_id, "error": error})
            continue
        report, timings = payload
        reports.append(report)
        timing_rows.append({"doc_id": doc_id, **timings})

    report_path = out / "report.jsonl"
    with open(report_path, "w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(json.dumps(report, sort_keys=True) + "\n")
        for failure in failures:
            fh.write(json.dumps({"skipped": failure}, sort_keys=True) + "\n")

    timings_path = out / "timings.jsonl"
    with open(timings_path, "w", encoding="utf-8") as fh:
        for row in timing_rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")

    summary_path = out / "summary.txt"
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(f"{'doc':<10} {'domain':<12} {'overall':>8} {'rouge-f':>8} {'bleu':>8}\n")
        for report in reports:
            fh.write(
                f"{report['doc_id']:<10} {report['domain_label']:<12} "
                f"{report['quality']['overall']:>8.4f} "
                f"{report['metrics']['rouge_l']['f']:>8.4f} "
                f"{report['metrics']['bleu']:>8.4f}\n"
            )
        fh.write(f"\nprocessed {len(reports)}; skipped {len(failures)}\n")
        for failure in failures:
            fh.write(f"skipped {failure['doc_id']}: {failure['error']}\n")

    return PipelineResult(reports=reports, failures=failures,
                          report_path=report_path, summary_path=summary_path,
                          timings_path=timings_path)
