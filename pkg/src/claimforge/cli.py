"""Command-line interface for the patent-claim pipeline."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from claimforge.numerics import NonFiniteError, Rng, save_checkpoint, load_checkpoint, CheckpointError
from claimforge.chunker import Document, chunk_document, complexity, target_size
from claimforge.evaluator import EvaluatorTrainConfig, ordering_accuracy, score_pair, train_evaluator
from claimforge.generator import (
    GeneratorSample,
    GeneratorTrainConfig,
    generate,
    train_domain_classifier,
    train_generator,
)
from claimforge.pipeline import (
    PipelineConfig,
    read_corpus,
    run_pipeline,
    synth_corpus,
    write_corpus,
)
from claimforge.pipeline.metrics import bleu, rouge_l
from claimforge.pipeline.run import all_params, build_models
from claimforge.similarity import SimilarityTrainConfig, similarity, train_similarity
from claimforge.textcore import Vocabulary, encode_sequence, tokenize

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="claimforge",
        description="Three-stage patent claim pipeline: similarity, generation, assessment.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="root seed (overrides CLAIMFORGE_SEED and config)")
    parser.add_argument("--config", type=Path, default=None, help="flat key=value config file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("synth", help="generate a synthetic patent corpus")
    p.add_argument("--size", type=int, default=60)
    p.add_argument("--domains", type=int, default=5)

    p = sub.add_parser("chunk", help="adaptive chunking report for a corpus")
    p.add_argument("--corpus", type=Path, required=True)

    p = sub.add_parser("similarity", help="similarity reports between claims and prior art")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--prior-art", type=Path, required=True)
    p.add_argument("--checkpoint", type=Path, default=None)

    p = sub.add_parser("train-sim", help="train the similarity encoder and head weights")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--epochs", type=int, default=5)

    p = sub.add_parser("train-gen", help="train the generator with curriculum sampling")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--checkpoint", type=Path, default=None)

    p = sub.add_parser("train-eval", help="train the quality evaluator on corruption tuples")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--checkpoint", type=Path, default=None)

    p = sub.add_parser("generate", help="generate claims for each corpus record")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--checkpoint", type=Path, default=None)
    p.add_argument("--max-len", type=int, default=None)

    p = sub.add_parser("evaluate", help="score (reference, generated) claim pairs")
    p.add_argument("--pairs", type=Path, required=True,
                   help="jsonl with fields reference, generated, domain")
    p.add_argument("--checkpoint", type=Path, default=None)
    p.add_argument("--corpus", type=Path, default=None,
                   help="corpus used to build the vocabulary (defaults to the pairs file)")

    p = sub.add_parser("pipeline", help="run all three stages end to end")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--prior-art", type=Path, default=None)
    p.add_argument("--checkpoint", type=Path, default=None)

    p = sub.add_parser("metrics", help="ROUGE-L and BLEU for claim pairs")
    p.add_argument("--pairs", type=Path, required=True)

    return parser


def _resolve_seed(args, config: PipelineConfig) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CLAIMFORGE_SEED")
    if env is not None:
        return int(env)
    return config.seed


def _vocab_from_corpus_files(paths: list[Path], cap: int) -> Vocabulary:
    texts = []
    for path in paths:
        if path is None:
            continue
        for rec in read_corpus(path):
            texts.append(rec.description)
            texts.extend(rec.claims)
            for pair in rec.relationship_pairs:
                texts.extend([pair["claim_text"], pair["doc_text"]])
    return Vocabulary.build(texts, cap=cap)


def _models_for(args, config, seed, corpus_paths, checkpoint=None):
    vocab = _vocab_from_corpus_files(corpus_paths, config.vocab_cap)
    ckpt = load_checkpoint(checkpoint) if checkpoint else None
    return build_models(vocab, config, seed, checkpoint=ckpt)


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def _cmd_synth(args, config, seed) -> int:
    corpus = synth_corpus(seed, args.size, domains=args.domains)
    args.out.mkdir(parents=True, exist_ok=True)
    write_corpus(args.out / "corpus.jsonl", corpus.records)
    write_corpus(args.out / "prior_art.jsonl", corpus.prior_art)
    print(f"wrote {len(corpus.records)} records and {len(corpus.prior_art)} prior-art records "
          f"to {args.out}")
    return EXIT_OK


def _cmd_chunk(args, config, seed) -> int:
    vocab = _vocab_from_corpus_files([args.corpus], config.vocab_cap)
    rows = []
    for rec in read_corpus(args.corpus):
        doc = Document.from_text(rec.id, rec.description, vocab,
                                 claim_count=len(rec.claims) or None,
                                 figure_count=rec.figure_count)
        kappa = complexity(doc)
        size = target_size(kappa, centering=config.chunk_centering, scale=config.chunk_scale)
        rows.append({
            "doc_id": rec.id,
            "complexity": kappa,
            "target_size": size,
            "chunks": [[c.start_token, c.end_token] for c in chunk_document(doc, size)],
        })
    _write_jsonl(args.out / "chunks.jsonl", rows)
    print(f"chunked {len(rows)} documents -> {args.out / 'chunks.jsonl'}")
    return EXIT_OK


def _cmd_similarity(args, config, seed) -> int:
    models = _models_for(args, config, seed, [args.corpus, args.prior_art], args.checkpoint)
    cfg = models.cfg
    rows = []
    prior = read_corpus(args.prior_art)
    for rec in read_corpus(args.corpus):
        for ci, claim in enumerate(rec.claims):
            claim_ids = models.vocab.encode_text(claim)
            if not claim_ids:
                continue
            claim_states = encode_sequence(claim_ids, cfg, models.enc_params)
            for pa in prior:
                doc_ids = models.vocab.encode_text(pa.description)[:cfg.max_seq_len]
                doc_states = encode_sequence(doc_ids, cfg, models.enc_params)
                report = similarity(f"{rec.id}/claim{ci}", pa.id,
                                    claim_states, doc_states, models.head_bank)
                rows.append(report.to_record())
    _write_jsonl(args.out / "similarity.jsonl", rows)
    print(f"wrote {len(rows)} similarity reports -> {args.out / 'similarity.jsonl'}")
    return EXIT_OK


def _save_models(models, out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    ckpt_path = out / "model.ckpt"
    save_checkpoint(ckpt_path, all_params(models))
    models.vocab.save(out / "vocab.txt")
    return ckpt_path


def _cmd_train_sim(args, config, seed) -> int:
    models = _models_for(args, config, seed, [args.corpus])
    pairs = []
    for rec in read_corpus(args.corpus):
        for pair in rec.relationship_pairs:
            claim_ids = models.vocab.encode_text(pair["claim_text"])
            doc_ids = models.vocab.encode_text(pair["doc_text"])
            if claim_ids and doc_ids:
                pairs.append((claim_ids, doc_ids, pair.get("label")))
    if not pairs:
        raise ValueError("corpus has no relationship-labeled pairs")
    history = train_similarity(
        pairs, models.cfg, models.enc_params, models.head_bank,
        SimilarityTrainConfig(temperature=config.sim_temperature,
                              aux_weight=config.aux_weight, epochs=args.epochs),
    )
    ckpt = _save_models(models, args.out)
    print(f"trained similarity on {len(pairs)} pairs; "
          f"loss {history[0]:.4f} -> {history[-1]:.4f}; checkpoint {ckpt}")
    return EXIT_OK


def _cmd_train_gen(args, config, seed) -> int:
    models = _models_for(args, config, seed, [args.corpus], args.checkpoint)
    samples = []
    for rec in read_corpus(args.corpus):
        if not rec.claims:
            continue
        claim_ids = models.vocab.encode_text(rec.claims[0])
        samples.append(GeneratorSample(
            id=rec.id,
            description_ids=models.vocab.encode_text(rec.description),
            claim_ids=claim_ids,
            domain_label=rec.domain,
            dependent_claim_count=max(0, len(rec.claims) - 1),
        ))
    log_rows = []
    history = train_generator(
        samples, models.generator, models.adapter_bank, models.classifier,
        config.curriculum(), Rng(seed, ("train-gen",)),
        GeneratorTrainConfig(batch_size=config.batch_size, lr=config.lr,
                             weight_decay=config.weight_decay, steps=args.steps,
                             grad_clip=config.grad_clip),
        log_fn=log_rows.append,
    )
    clf_samples = [(s.description_ids, s.domain_label) for s in samples
                   if s.domain_label is not None]
    if clf_samples:
        train_domain_classifier(clf_samples, models.generator.embed, models.classifier)
    _write_jsonl(args.out / "train_log.jsonl", log_rows)
    ckpt = _save_models(models, args.out)
    print(f"trained generator for {args.steps} steps; "
          f"loss {history[0]:.4f} -> {history[-1]:.4f}; checkpoint {ckpt}")
    return EXIT_OK


def _cmd_train_eval(args, config, seed) -> int:
    models = _models_for(args, config, seed, [args.corpus], args.checkpoint)
    tuples = []
    for rec in read_corpus(args.corpus):
        for tup in rec.corruption_tuples:
            tuples.append((
                models.vocab.encode_text(tup["reference"]),
                models.vocab.encode_text(tup["better"]),
                models.vocab.encode_text(tup["worse"]),
                rec.domain or "mechanical",
            ))
    if not tuples:
        raise ValueError("corpus has no corruption tuples")
    history = train_evaluator(tuples, models.evaluator, models.enc_params,
                              EvaluatorTrainConfig(epochs=args.epochs))
    acc = ordering_accuracy(tuples, models.evaluator, models.enc_params)
    ckpt = _save_models(models, args.out)
    print(f"trained evaluator on {len(tuples)} tuples; loss {history[0]:.4f} -> "
          f"{history[-1]:.4f}; train ordering accuracy {acc:.3f}; checkpoint {ckpt}")
    return EXIT_OK


def _cmd_generate(args, config, seed) -> int:
    models = _models_for(args, config, seed, [args.corpus], args.checkpoint)
    max_len = args.max_len if args.max_len is not None else config.max_gen_len
    rows = []
    for rec in read_corpus(args.corpus):
        desc_ids = models.vocab.encode_text(rec.description)
        gen_ids, alpha, label = generate(desc_ids, models.generator,
                                         models.adapter_bank, models.classifier,
                                         max_len=max_len)
        rows.append({
            "doc_id": rec.id,
            "domain_label": label,
            "domain_mixture": [float(a) for a in alpha],
            "generated": models.vocab.decode_text(gen_ids),
        })
    _write_jsonl(args.out / "generations.jsonl", rows)
    print(f"generated claims for {len(rows)} documents -> {args.out / 'generations.jsonl'}")
    return EXIT_OK


def _read_pairs(path: Path) -> list[dict]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            if "reference" not in row or "generated" not in row:
                raise ValueError(f"{path}:{lineno}: pair needs 'reference' and 'generated'")
            pairs.append(row)
    return pairs


def _cmd_evaluate(args, config, seed) -> int:
    pairs = _read_pairs(args.pairs)
    texts = [p["reference"] for p in pairs] + [p["generated"] for p in pairs]
    vocab = Vocabulary.build(texts, cap=config.vocab_cap)
    ckpt = load_checkpoint(args.checkpoint) if args.checkpoint else None
    models = build_models(vocab, config, seed, checkpoint=ckpt)
    from claimforge.evaluator.train import domain_one_hot

    rows = []
    for pair in pairs:
        alpha = domain_one_hot(pair.get("domain", "mechanical"))
        report = score_pair(vocab.encode_text(pair["reference"]),
                            vocab.encode_text(pair["generated"]),
                            alpha, models.evaluator, models.enc_params)
        rows.append({"reference": pair["reference"], "generated": pair["generated"],
                     **report.to_record()})
    _write_jsonl(args.out / "quality.jsonl", rows)
    print(f"scored {len(rows)} pairs -> {args.out / 'quality.jsonl'}")
    return EXIT_OK


def _cmd_pipeline(args, config, seed) -> int:
    result = run_pipeline(args.corpus, args.prior_art, args.out, config, seed,
                          checkpoint_path=args.checkpoint)
    print(f"pipeline processed {len(result.reports)} documents, "
          f"skipped {len(result.failures)}; report {result.report_path}")
    return EXIT_OK if not result.failures else EXIT_INPUT_ERROR


def _cmd_metrics(args, config, seed) -> int:
    rows = []
    for pair in _read_pairs(args.pairs):
        ref = tokenize(pair["reference"])
        cand = tokenize(pair["generated"])
        p, r, f = rouge_l(ref, cand)
        rows.append({
            "reference": pair["reference"],
            "generated": pair["generated"],
            "rouge_l": {"precision": p, "recall": r, "f": f},
            "bleu": bleu(ref, cand),
        })
    _write_jsonl(args.out / "metrics.jsonl", rows)
    print(f"computed metrics for {len(rows)} pairs -> {args.out / 'metrics.jsonl'}")
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "chunk": _cmd_chunk,
    "similarity": _cmd_similarity,
    "train-sim": _cmd_train_sim,
    "train-gen": _cmd_train_gen,
    "train-eval": _cmd_train_eval,
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "pipeline": _cmd_pipeline,
    "metrics": _cmd_metrics,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code not in (0, None) else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
        seed = _resolve_seed(args, config)
        return _COMMANDS[args.command](args, config, seed)
    except (ValueError, OSError, KeyError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (NonFiniteError, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
