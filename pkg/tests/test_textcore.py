"""Tokenizer, sentence boundaries, vocabulary, and encoder behavior."""

import numpy as np
import pytest

from claimforge.numerics import Rng, Tensor, softmax
from claimforge.textcore import (
    BOS_ID,
    EOS_ID,
    NUM_RESERVED,
    PAD_ID,
    SEP_ID,
    UNK_ID,
    EncoderConfig,
    Vocabulary,
    encode_sequence,
    init_encoder_params,
    mean_pool,
    positional_encoding,
    sentence_boundaries,
    tokenize,
)

FIXTURE_40_WORDS = (
    "The rotary valve assembly includes a housing, a shaft, and a bearing "
    "mounted therein. Each port communicates with the chamber through a "
    "passage formed in the body. The spring biases the plug toward the seat "
    "so that flow stops when pressure drops."
)


def scan_tokens(text: str) -> list[str]:
    """Independent character-scan segmenter (no regex)."""
    out, cur = [], []
    for ch in text.lower():
        if ch.isspace():
            if cur:
                out.append("".join(cur))
                cur = []
        elif ("a" <= ch <= "z") or ("0" <= ch <= "9"):
            cur.append(ch)
        else:
            if cur:
                out.append("".join(cur))
                cur = []
            out.append(ch)
    if cur:
        out.append("".join(cur))
    return out


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_split(self):
        assert tokenize("A claim, comprising:") == ["a", "claim", ",", "comprising", ":"]

    def test_forty_word_fixture_matches_character_scan(self):
        expected = scan_tokens(FIXTURE_40_WORDS)
        assert tokenize(FIXTURE_40_WORDS) == expected

    def test_lowercasing(self):
        assert tokenize("FIG. 3") == ["fig", ".", "3"]


class TestSentenceBoundaries:
    def test_two_terminators(self):
        assert sentence_boundaries("One. Two.") == [4, 9]

    def test_no_terminators(self):
        text = "no terminators here"
        assert sentence_boundaries(text) == [len(text)]

    def test_empty(self):
        assert sentence_boundaries("") == []

    def test_final_offset_always_text_length(self):
        for text in ("a. b", "x", "one; two? three"):
            assert sentence_boundaries(text)[-1] == len(text)

    def test_fixture_patent_hand_annotated(self):
        # 12 description sentences and 3 numbered claims -> 15 boundaries.
        # Sentences 1..11 end at their periods; sentence 12 has no terminator
        # and ends at the paragraph break, which coincides with claim 1's
        # line start; claims 2 and 3 add their line starts; the text end
        # closes claim 3. Claim numbering dots are not terminators.
        sentences = [f"Sentence number {i} describes the device." for i in range(11)]
        sentences.append("The claimed subject matter is recited below")
        description = " ".join(sentences)
        claims = [
            "1. A device comprising a frame",
            "2. The device of preceding item, wherein the frame is steel",
            "3. The device of preceding item, further comprising a lid",
        ]
        text = description + "\n\n" + "\n".join(claims)

        expected = []
        pos = 0
        for s in sentences[:-1]:
            pos += len(s)
            expected.append(pos)  # offset just past the terminating period
            pos += 1  # the separating space
        start_claims = text.index("1. A device")
        expected.append(start_claims)  # sentence 12 end == claim 1 start
        prev = start_claims
        for c in claims[:-1]:
            prev += len(c) + 1
            expected.append(prev)
        expected.append(len(text))
        assert len(expected) == 15
        assert sentence_boundaries(text) == sorted(expected)

    def test_claim_number_dot_not_terminator(self):
        text = "1. A widget"
        assert sentence_boundaries(text) == [len(text)]


class TestVocabulary:
    def test_reserved_ids(self):
        assert (PAD_ID, UNK_ID, BOS_ID, EOS_ID, SEP_ID) == (0, 1, 2, 3, 4)

    def test_round_trip(self):
        vocab = Vocabulary.build(["alpha beta gamma alpha"], cap=64)
        ids = vocab.encode_text("alpha gamma beta")
        assert vocab.decode(ids) == ["alpha", "gamma", "beta"]
        assert all(i >= NUM_RESERVED for i in ids)

    def test_unknown_maps_to_unk(self):
        vocab = Vocabulary.build(["alpha"], cap=64)
        assert vocab.encode_text("zeta") == [UNK_ID]

    def test_frequency_then_lexicographic_order(self):
        vocab = Vocabulary.build(["b b a a c"], cap=64)
        assert vocab.decode([NUM_RESERVED, NUM_RESERVED + 1, NUM_RESERVED + 2]) == \
            ["a", "b", "c"]

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            Vocabulary([f"t{i}" for i in range(10)], cap=10)

    def test_save_load(self, tmp_path):
        vocab = Vocabulary.build(["gear shaft bearing gear"], cap=64)
        path = tmp_path / "vocab.txt"
        vocab.save(path)
        loaded = Vocabulary.load(path, cap=64)
        text = "gear bearing shaft"
        assert loaded.encode_text(text) == vocab.encode_text(text)


class TestEncoder:
    def test_config_validates_geometry(self):
        with pytest.raises(ValueError):
            EncoderConfig(model_dim=64, num_heads=8, head_dim=64)

    def test_zero_layer_weights_reduce_to_embeddings(self, small_cfg, small_vocab):
        params = init_encoder_params(len(small_vocab), small_cfg, Rng(0, ("z",)))
        for name, t in params.items():
            if "/attn/" in name or "/ffn/" in name:
                t.data = np.zeros_like(t.data)
        ids = small_vocab.encode_text("w0 w1 w2 w3")
        out = encode_sequence(ids, small_cfg, params)
        expected = params["enc/embed"].data[ids] + positional_encoding(
            len(ids), small_cfg.model_dim)
        np.testing.assert_allclose(out.data, expected, atol=1e-12)

    def test_seed0_brute_force_attention_oracle(self, small_cfg, small_vocab, small_enc):
        ids = small_vocab.encode_text("w0 w1 w2 w3 w4 w5 w6 w7")
        assert len(ids) == 8
        out = encode_sequence(ids, small_cfg, small_enc)

        # loop-based re-implementation of the single pre-norm block
        d, nh, hd = small_cfg.model_dim, small_cfg.num_heads, small_cfg.head_dim
        g = lambda n: small_enc[f"enc/{n}"].data
        x = g("embed")[ids] + positional_encoding(len(ids), d)

        def ln(mat, gain, bias, eps=1e-6):
            mu = mat.mean(axis=-1, keepdims=True)
            var = ((mat - mu) ** 2).mean(axis=-1, keepdims=True)
            return (mat - mu) / np.sqrt(var + eps) * gain + bias

        h = ln(x, g("l0/ln1/g"), g("l0/ln1/b"))
        q_all, k_all, v_all = h @ g("l0/attn/wq"), h @ g("l0/attn/wk"), h @ g("l0/attn/wv")
        merged = np.zeros_like(q_all)
        for head in range(nh):
            sl = slice(head * hd, (head + 1) * hd)
            q, k, v = q_all[:, sl], k_all[:, sl], v_all[:, sl]
            for i in range(len(ids)):
                scores = np.array([q[i] @ k[j] / np.sqrt(hd) for j in range(len(ids))])
                w = np.exp(scores - scores.max())
                w /= w.sum()
                merged[i, sl] = sum(w[j] * v[j] for j in range(len(ids)))
        x = x + merged @ g("l0/attn/wo")
        h = ln(x, g("l0/ln2/g"), g("l0/ln2/b"))
        inner = np.maximum(h @ g("l0/ffn/w1") + g("l0/ffn/b1"), 0.0)
        x = x + inner @ g("l0/ffn/w2") + g("l0/ffn/b2")

        np.testing.assert_allclose(out.data, x, atol=1e-10)

    def test_permutation_changes_output(self, small_cfg, small_vocab, small_enc):
        a = small_vocab.encode_text("w0 w1 w2")
        b = [a[1], a[0], a[2]]
        out_a = encode_sequence(a, small_cfg, small_enc).data
        out_b = encode_sequence(b, small_cfg, small_enc).data
        assert not np.allclose(out_a, out_b)

    def test_shape_contract_sampled_lengths(self, small_cfg, small_vocab, small_enc):
        for n in (1, 2, 7, 31, small_cfg.max_seq_len):
            ids = [NUM_RESERVED + (i % 30) for i in range(n)]
            out = encode_sequence(ids, small_cfg, small_enc)
            assert out.shape == (n, small_cfg.model_dim)

    def test_empty_sequence_error(self, small_cfg, small_enc):
        with pytest.raises(ValueError, match="empty sequence"):
            encode_sequence([], small_cfg, small_enc)

    def test_too_long_error(self, small_cfg, small_enc):
        with pytest.raises(ValueError, match="max_seq_len"):
            encode_sequence([5] * (small_cfg.max_seq_len + 1), small_cfg, small_enc)

    def test_out_of_range_id_error(self, small_cfg, small_vocab, small_enc):
        with pytest.raises(ValueError, match="vocabulary range"):
            encode_sequence([len(small_vocab) + 3], small_cfg, small_enc)

    def test_causal_mask_blocks_future(self, small_cfg, small_vocab, small_enc):
        # with causal attention, changing a later token leaves earlier
        # positions' states unchanged
        a = small_vocab.encode_text("w0 w1 w2 w3")
        b = list(a)
        b[-1] = small_vocab.encode_text("w9")[0]
        out_a = encode_sequence(a, small_cfg, small_enc, causal=True).data
        out_b = encode_sequence(b, small_cfg, small_enc, causal=True).data
        np.testing.assert_allclose(out_a[:-1], out_b[:-1], atol=1e-12)
        assert not np.allclose(out_a[-1], out_b[-1])

    def test_mean_pool(self, small_cfg, small_vocab, small_enc):
        ids = small_vocab.encode_text("w0 w1 w2")
        states = encode_sequence(ids, small_cfg, small_enc)
        np.testing.assert_allclose(mean_pool(states).data,
                                   states.data.mean(axis=0), atol=1e-12)
