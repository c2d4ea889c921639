"""Adaptive chunking: document complexity drives the chunk size.

Documents with more claims and figures per token get larger chunks, so
structurally dense disclosures keep related material together.
"""

from claimforge.chunker import Document, chunk_document, complexity, target_size
from claimforge.pipeline import synth_corpus
from claimforge.textcore import Vocabulary


def main():
    corpus = synth_corpus(0, 15)
    vocab = Vocabulary.build([r.description for r in corpus.records], cap=2048)

    print("kappa -> target size (sigmoid ramp, capped at 1024):")
    for kappa in (0.0, 0.05, 0.5, 2.0, 10.0):
        print(f"  kappa={kappa:<5} s={target_size(kappa)}")

    print("\nper-document chunking:")
    for rec in corpus.records[:5]:
        doc = Document.from_text(rec.id, rec.description, vocab,
                                 claim_count=len(rec.claims),
                                 figure_count=rec.figure_count)
        kappa = complexity(doc)
        s = target_size(kappa)
        chunks = chunk_document(doc, s)
        spans = ", ".join(f"[{c.start_token},{c.end_token})" for c in chunks)
        print(f"  {rec.id}: {len(doc.tokens)} tokens, kappa={kappa:.4f}, "
              f"s={s}, chunks: {spans}")


if __name__ == "__main__":
    main()
