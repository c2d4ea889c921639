"""Synthetic corpus, config, orchestration, reports, and the CLI contract."""

import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from claimforge.cli import main as cli_main
from claimforge.generator import DOMAINS
from claimforge.pipeline import (
    CorpusRecord,
    PipelineConfig,
    read_corpus,
    run_pipeline,
    synth_corpus,
    write_corpus,
)
from claimforge.pipeline.synth import DOMAIN_POOLS

DATA = Path(__file__).parent / "data"


def compact_config(**kw):
    base = dict(model_dim=16, num_heads=2, head_dim=8, num_layers=1,
                max_seq_len=256, max_gen_len=8, top_k=3)
    base.update(kw)
    return PipelineConfig(**base)


class TestSynthCorpus:
    def test_uniform_allocation_seed0_size60(self):
        corpus = synth_corpus(0, 60)
        per_domain = {}
        for rec in corpus.records:
            per_domain[rec.domain] = per_domain.get(rec.domain, 0) + 1
        assert per_domain == {d: 12 for d in DOMAINS}

    def test_byte_identical_across_runs(self, tmp_path):
        for run in ("a", "b"):
            corpus = synth_corpus(3, 20)
            write_corpus(tmp_path / f"{run}.jsonl", corpus.records)
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()

    def test_domain_pool_overlap_below_20_percent(self):
        pools = synth_corpus(0, 15).domain_pools
        names = list(pools)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                overlap = len(set(pools[a]) & set(pools[b]))
                assert overlap < 0.2 * len(pools[a])

    def test_size_too_small_rejected(self):
        with pytest.raises(ValueError, match="size"):
            synth_corpus(0, 14)

    def test_records_carry_training_data(self):
        corpus = synth_corpus(1, 15)
        for rec in corpus.records:
            assert len(rec.relationship_pairs) == 4
            assert len(rec.corruption_tuples) == 2
            assert rec.claims and rec.description
            assert rec.figure_count >= 1


class TestCorpusIO:
    def test_roundtrip(self, tmp_path):
        records = synth_corpus(2, 15).records[:5]
        path = tmp_path / "c.jsonl"
        write_corpus(path, records)
        loaded = read_corpus(path)
        assert [r.id for r in loaded] == [r.id for r in records]
        assert loaded[0].to_json() == records[0].to_json()

    def test_duplicate_id_rejected_on_write(self, tmp_path):
        rec = CorpusRecord(id="x", description="text")
        with pytest.raises(ValueError, match="duplicate"):
            write_corpus(tmp_path / "d.jsonl", [rec, rec])

    def test_bad_line_reports_location(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "description": "ok"}\nnot json\n')
        with pytest.raises(ValueError, match=":2:"):
            read_corpus(path)

    def test_empty_description_rejected(self):
        with pytest.raises(ValueError, match="description"):
            CorpusRecord(id="x", description="")


class TestPipelineConfig:
    def test_file_roundtrip(self, tmp_path):
        cfg = compact_config(seed=9, verbatim_mode=True)
        path = tmp_path / "p.cfg"
        cfg.to_file(path)
        assert PipelineConfig.from_file(path) == cfg

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "p.cfg"
        path.write_text("nope = 3\n")
        with pytest.raises(ValueError, match="unknown config key"):
            PipelineConfig.from_file(path)

    def test_comments_and_blanks_ignored(self, tmp_path):
        path = tmp_path / "p.cfg"
        path.write_text("# comment\n\nmodel_dim = 32  # inline\nnum_heads=4\nhead_dim = 8\n")
        cfg = PipelineConfig.from_file(path)
        assert (cfg.model_dim, cfg.num_heads, cfg.head_dim) == (32, 4, 8)

    def test_bool_parsing(self, tmp_path):
        path = tmp_path / "p.cfg"
        path.write_text("verbatim_mode = true\n")
        assert PipelineConfig.from_file(path).verbatim_mode is True
        path.write_text("verbatim_mode = maybe\n")
        with pytest.raises(ValueError, match="bool"):
            PipelineConfig.from_file(path)


class TestRunPipeline:
    def test_golden_file_byte_exact(self, tmp_path):
        result = run_pipeline(DATA / "golden_corpus.jsonl",
                              DATA / "golden_prior_art.jsonl",
                              tmp_path, compact_config(), seed=0)
        assert not result.failures
        got = result.report_path.read_bytes()
        expected = (DATA / "golden_report.jsonl").read_bytes()
        assert got == expected

    def test_rerun_byte_identical(self, tmp_path):
        corpus = synth_corpus(5, 15)
        write_corpus(tmp_path / "c.jsonl", corpus.records[:4])
        write_corpus(tmp_path / "p.jsonl", corpus.prior_art[:2])
        r1 = run_pipeline(tmp_path / "c.jsonl", tmp_path / "p.jsonl",
                          tmp_path / "run1", compact_config(), seed=0)
        r2 = run_pipeline(tmp_path / "c.jsonl", tmp_path / "p.jsonl",
                          tmp_path / "run2", compact_config(), seed=0)
        assert r1.report_path.read_bytes() == r2.report_path.read_bytes()

    def test_empty_prior_art_still_runs_stages_2_and_3(self, tmp_path):
        corpus = synth_corpus(6, 15)
        write_corpus(tmp_path / "c.jsonl", corpus.records[:2])
        result = run_pipeline(tmp_path / "c.jsonl", None, tmp_path / "out",
                              compact_config(), seed=0)
        assert not result.failures
        for report in result.reports:
            assert report["top_similarity"] == []
            assert report["generated_claims"]
            assert len(report["quality"]["aspect_scores"]) == 5

    def test_five_aspect_scores_in_unit_interval(self, tmp_path):
        corpus = synth_corpus(7, 15)
        write_corpus(tmp_path / "c.jsonl", corpus.records[:3])
        write_corpus(tmp_path / "p.jsonl", corpus.prior_art[:1])
        result = run_pipeline(tmp_path / "c.jsonl", tmp_path / "p.jsonl",
                              tmp_path / "out", compact_config(), seed=0)
        for report in result.reports:
            scores = report["quality"]["aspect_scores"]
            assert len(scores) == 5
            assert all(0.0 < v < 1.0 for v in scores.values())

    def test_stage_timestamps_monotone(self, tmp_path):
        corpus = synth_corpus(8, 15)
        write_corpus(tmp_path / "c.jsonl", corpus.records[:3])
        write_corpus(tmp_path / "p.jsonl", corpus.prior_art[:1])
        result = run_pipeline(tmp_path / "c.jsonl", tmp_path / "p.jsonl",
                              tmp_path / "out", compact_config(), seed=0)
        rows = [json.loads(line)
                for line in result.timings_path.read_text().splitlines()]
        assert len(rows) == 3
        for row in rows:
            assert row["stage1_start"] < row["stage2_start"] < row["stage3_start"]
            assert all(row[f"stage{i}_seconds"] >= 0 for i in (1, 2, 3))

    def test_failure_isolation(self, tmp_path):
        records = read_corpus(DATA / "golden_corpus.jsonl")
        # structural corruption leaves every token count untouched, so the
        # corpus-derived vocabulary (and all other documents) are unchanged
        records[-1].figure_count = -1
        write_corpus(tmp_path / "c.jsonl", records)
        result = run_pipeline(tmp_path / "c.jsonl",
                              DATA / "golden_prior_art.jsonl",
                              tmp_path / "out", compact_config(), seed=0)
        assert [f["doc_id"] for f in result.failures] == [records[-1].id]
        golden_lines = (DATA / "golden_report.jsonl").read_text().splitlines()
        got_lines = result.report_path.read_text().splitlines()
        # clean documents match the golden run line for line
        assert got_lines[:len(records) - 1] == golden_lines[:len(records) - 1]
        skipped = json.loads(got_lines[-1])
        assert skipped["skipped"]["doc_id"] == records[-1].id

    def test_checkpoint_dimension_mismatch(self, tmp_path):
        from claimforge.numerics import save_checkpoint
        save_checkpoint(tmp_path / "m.ckpt", {"enc/embed": np.zeros((10, 32))})
        with pytest.raises(ValueError, match="32.*16|16.*32"):
            corpus = synth_corpus(9, 15)
            write_corpus(tmp_path / "c.jsonl", corpus.records[:1])
            run_pipeline(tmp_path / "c.jsonl", None, tmp_path / "out",
                         compact_config(), seed=0,
                         checkpoint_path=tmp_path / "m.ckpt")


class TestCli:
    def test_no_arguments_usage_exit_1(self, capsys):
        assert cli_main([]) == 1

    def test_unknown_subcommand_exit_1(self):
        assert cli_main(["frobnicate"]) == 1

    def test_missing_input_exit_1(self, tmp_path):
        assert cli_main(["--out", str(tmp_path), "chunk",
                         "--corpus", str(tmp_path / "missing.jsonl")]) == 1

    def test_synth_then_metrics_roundtrip(self, tmp_path):
        out = tmp_path / "out"
        assert cli_main(["--seed", "0", "--out", str(out),
                         "synth", "--size", "15"]) == 0
        assert (out / "corpus.jsonl").exists()
        pairs = tmp_path / "pairs.jsonl"
        pairs.write_text(json.dumps({"reference": "a b c d",
                                     "generated": "a b c d"}) + "\n")
        assert cli_main(["--out", str(out), "metrics",
                         "--pairs", str(pairs)]) == 0
        row = json.loads((out / "metrics.jsonl").read_text())
        assert row["bleu"] == pytest.approx(1.0)

    def test_config_checkpoint_mismatch_names_both_values(self, tmp_path, capsys):
        from claimforge.numerics import save_checkpoint
        corpus = synth_corpus(0, 15)
        write_corpus(tmp_path / "c.jsonl", corpus.records[:1])
        save_checkpoint(tmp_path / "m.ckpt", {"enc/embed": np.zeros((10, 32))})
        cfg = tmp_path / "p.cfg"
        compact_config().to_file(cfg)
        code = cli_main(["--config", str(cfg), "--out", str(tmp_path / "o"),
                         "generate", "--corpus", str(tmp_path / "c.jsonl"),
                         "--checkpoint", str(tmp_path / "m.ckpt")])
        assert code == 1
        err = capsys.readouterr().err
        assert "32" in err and "16" in err

    def test_env_seed_matches_flag_seed(self, tmp_path, monkeypatch):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert cli_main(["--seed", "4", "--out", str(out_a),
                         "synth", "--size", "15"]) == 0
        monkeypatch.setenv("CLAIMFORGE_SEED", "4")
        assert cli_main(["--out", str(out_b), "synth", "--size", "15"]) == 0
        assert (out_a / "corpus.jsonl").read_bytes() == \
            (out_b / "corpus.jsonl").read_bytes()
