"""Unified quality assessment: five aspect heads over one shared pair encoding.

Trains the evaluator on corruption tuples (reference, intact copy, corrupted
copy) and shows the ranking accuracy it reaches on held-out tuples, plus a
full per-aspect quality report and the surface metrics for one pair.
"""

from claimforge.evaluator import (
    EvaluatorModel,
    ordering_accuracy,
    score_pair,
    train_evaluator,
)
from claimforge.evaluator.train import EvaluatorTrainConfig, domain_one_hot
from claimforge.numerics import Rng
from claimforge.pipeline import bleu, rouge_l, synth_corpus
from claimforge.textcore import EncoderConfig, Vocabulary, init_encoder_params, tokenize

CFG = EncoderConfig(model_dim=16, num_heads=2, head_dim=8, num_layers=1,
                    max_seq_len=128)


def main():
    corpus = synth_corpus(0, 60)
    texts = [r.description for r in corpus.records]
    for r in corpus.records:
        texts.extend(r.claims)
        for tup in r.corruption_tuples:
            texts.extend(tup.values())
    vocab = Vocabulary.build(texts, cap=2048)

    tuples = []
    for r in corpus.records:
        for tup in r.corruption_tuples:
            tuples.append((vocab.encode_text(tup["reference"]),
                           vocab.encode_text(tup["better"]),
                           vocab.encode_text(tup["worse"]),
                           r.domain))
    held_out = tuples[::4]
    train = [t for i, t in enumerate(tuples) if i % 4 != 0]

    enc = init_encoder_params(len(vocab), CFG, Rng(0, ("enc",)))
    model = EvaluatorModel.init(CFG, Rng(0, ("eval",)))
    print(f"held-out ordering accuracy before training: "
          f"{ordering_accuracy(held_out, model, enc):.3f}")
    history = train_evaluator(train, model, enc,
                              EvaluatorTrainConfig(epochs=5, lr=1e-3))
    print(f"hinge loss: {history[0]:.3f} -> {history[-1]:.3f}")
    print(f"held-out ordering accuracy after training:  "
          f"{ordering_accuracy(held_out, model, enc):.3f}")

    rec = corpus.records[0]
    tup = rec.corruption_tuples[0]
    report = score_pair(vocab.encode_text(tup["reference"]),
                        vocab.encode_text(tup["worse"]),
                        domain_one_hot(rec.domain), model, enc)
    print(f"\nquality report for a corrupted claim ({rec.domain}):")
    for aspect, value in report.aspect_scores.items():
        print(f"  {aspect:<15} {value:.3f}  (display {report.display_scores[aspect]:.1f}/10)")
    print(f"  unified score   {report.overall:.3f}  "
          f"(softmax-weighted blend of the five aspects)")

    ref, cand = tokenize(tup["reference"]), tokenize(tup["worse"])
    _, _, f = rouge_l(ref, cand)
    print(f"\nsurface metrics: ROUGE-L F={f:.3f}  BLEU={bleu(ref, cand):.3f}")


if __name__ == "__main__":
    main()
