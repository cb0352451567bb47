"""Tests for the batch pipeline and the forge command line."""

import gc
import hashlib
import json
import os
from pathlib import Path

import pytest

from corpus import make_corpus
from genqa.cli import main
from genqa.gedcom import ParseError
from genqa.graph import UnknownPerson
from genqa.pipeline import (
    CONFIG_KEYS,
    ConfigError,
    IoError,
    PipelineConfig,
    build_config,
    load_dataset_file,
    load_predictions_file,
    parse_config_text,
    resolve_inputs,
    run_context,
    run_generate,
    run_score,
    run_verify,
)
from genqa.qa import TYPE_ORDER, count_items, deserialize_dataset, iter_items, verify_answers

BAD_GEDCOM = "this is not\na gedcom file\n"


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus")
    make_corpus(d, 3, seed=11)
    return d


def base_config(corpus_dir, outdir, **extra) -> PipelineConfig:
    cfg = PipelineConfig(
        inputs=[str(corpus_dir)],
        output_dir=str(outdir),
        depths=[0, 1],
        global_seed=42,
        workers=1,
    )
    for key, value in extra.items():
        setattr(cfg, key, value)
    return cfg


@pytest.fixture(scope="module")
def gen_run(corpus_dir, tmp_path_factory):
    """One full generation run shared by the read-only assertions."""
    outdir = tmp_path_factory.mktemp("out")
    cfg = base_config(corpus_dir, outdir)
    manifest = run_generate(cfg)
    return cfg, manifest, outdir


class TestConfigText:
    def test_key_values(self):
        values = parse_config_text("global_seed = 9\ndepths = 0 1 2\n")
        assert values == {"global_seed": "9", "depths": "0 1 2"}

    def test_comments_and_blanks(self):
        text = "# a comment\n\nworkers = 2  # inline\n   \n"
        assert parse_config_text(text) == {"workers": "2"}

    def test_empty_text(self):
        assert parse_config_text("") == {}

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("workers = 1\njust words\n")

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError, match="line 3.*frobnicate"):
            parse_config_text("# hi\nworkers = 1\nfrobnicate = yes\n")

    def test_every_documented_key_parses(self):
        text = "\n".join(f"{key} = 1" for key in ("depths", "global_seed",
                                                  "workers", "sample_n"))
        assert len(parse_config_text(text)) == 4


class TestBuildConfig:
    def test_defaults(self):
        cfg = build_config({"input": "a.ged"}, env={})
        assert cfg.depths == [0, 1, 2]
        assert cfg.global_seed == 0
        assert cfg.degree_strict is True
        assert abs(cfg.unanswerable_ratio - 1.0 / 3.0) < 1e-12

    def test_file_values_applied(self):
        cfg = build_config(
            {"input": "a.ged b.ged", "depths": "0,2", "global_seed": "7",
             "degree_strict": "no", "split_ratios": "0.5 0.25 0.25"},
            env={})
        assert cfg.inputs == ["a.ged", "b.ged"]
        assert cfg.depths == [0, 2]
        assert cfg.global_seed == 7
        assert cfg.degree_strict is False
        assert cfg.split_ratios == (0.5, 0.25, 0.25)

    def test_env_seed_beats_file(self):
        cfg = build_config({"input": "a.ged", "global_seed": "7"},
                           env={"FORGE_SEED": "99"})
        assert cfg.global_seed == 99

    def test_override_beats_env(self):
        cfg = build_config({"input": "a.ged"},
                           overrides={"global_seed": "5"},
                           env={"FORGE_SEED": "99"})
        assert cfg.global_seed == 5

    def test_hex_seed(self):
        cfg = build_config({"input": "a.ged", "global_seed": "0x10"}, env={})
        assert cfg.global_seed == 16

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="bad value for workers"):
            build_config({"input": "a.ged", "workers": "many"}, env={})

    def test_unknown_override(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            build_config({"input": "a.ged"}, overrides={"nope": "1"}, env={})

    @pytest.mark.parametrize("field,value", [
        ("depths", [-1]),
        ("split_ratios", (0.5, 0.4, 0.2)),
        ("unanswerable_ratio", 1.0),
        ("unanswerable_ratio", -0.1),
        ("min_variants", 0),
        ("max_variants", 1),
    ])
    def test_validate_rejects(self, field, value):
        cfg = PipelineConfig(inputs=["a.ged"])
        if field == "max_variants":
            cfg.min_variants = 2
        setattr(cfg, field, value)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_validate_requires_inputs(self):
        with pytest.raises(ConfigError, match="input"):
            PipelineConfig().validate()

    def test_effective_workers(self):
        assert PipelineConfig(workers=3).effective_workers() == 3
        assert PipelineConfig(workers=0).effective_workers() == 1
        assert PipelineConfig().effective_workers() >= 1


class TestResolveInputs:
    def test_directory(self, corpus_dir):
        paths = resolve_inputs([str(corpus_dir)])
        assert len(paths) == 3
        assert paths == sorted(paths)
        assert all(p.endswith(".ged") for p in paths)

    def test_glob(self, corpus_dir):
        paths = resolve_inputs([str(corpus_dir / "tree*.ged")])
        assert len(paths) == 3

    def test_single_file_and_dedup(self, corpus_dir):
        one = str(corpus_dir / "tree0000.ged")
        assert resolve_inputs([one, one, str(corpus_dir)]) == resolve_inputs(
            [str(corpus_dir)])

    def test_missing_input(self, tmp_path):
        with pytest.raises(IoError, match="not found"):
            resolve_inputs([str(tmp_path / "nowhere.ged")])

    def test_empty_glob(self, tmp_path):
        with pytest.raises(IoError, match="no input files"):
            resolve_inputs([str(tmp_path / "*.ged")])


class TestGenerateOutputs:
    def test_files_written(self, gen_run):
        _cfg, _manifest, outdir = gen_run
        names = {p.name for p in outdir.iterdir()}
        expected = {"stats.tsv", "manifest.json"}
        for d in (0, 1):
            expected.add(f"gen-squad-{d}.json")
            for part in ("train", "test", "eval"):
                expected.add(f"gen-squad-{d}-{part}.json")
        assert names == expected

    def test_datasets_verify_clean(self, gen_run):
        _cfg, _manifest, outdir = gen_run
        for d in (0, 1):
            ds = deserialize_dataset((outdir / f"gen-squad-{d}.json").read_bytes())
            assert verify_answers(ds).clean
            assert count_items(ds) > 0

    def test_titles_carry_tree_ids(self, gen_run):
        _cfg, _manifest, outdir = gen_run
        ds = deserialize_dataset((outdir / "gen-squad-0.json").read_bytes())
        trees = {g.title.split(":", 1)[0] for g in ds.data}
        assert trees == {"tree0000", "tree0001", "tree0002"}

    def test_manifest_digests_match_disk(self, gen_run):
        _cfg, manifest, outdir = gen_run
        assert set(manifest.digests) == {
            p.name for p in outdir.iterdir() if p.name != "manifest.json"}
        for name, digest in manifest.digests.items():
            on_disk = hashlib.sha256((outdir / name).read_bytes()).hexdigest()
            assert on_disk == digest, name

    def test_manifest_file_outcomes(self, gen_run):
        _cfg, manifest, _outdir = gen_run
        assert len(manifest.files) == 3
        for outcome in manifest.files:
            assert outcome.status == "ok"
            assert outcome.persons == 6
            assert outcome.families == 2

    def test_manifest_json_structure(self, gen_run):
        _cfg, _manifest, outdir = gen_run
        obj = json.loads((outdir / "manifest.json").read_text(encoding="utf-8"))
        assert set(obj) == {"config", "files", "depths", "digests"}
        assert obj["config"]["global_seed"] == 42
        assert obj["config"]["workers"] == 1
        assert set(obj["depths"]) == {"0", "1"}
        for stats in obj["depths"].values():
            assert stats["subgraphs"] == 18
            assert stats["total_questions"] == sum(
                stats["questions_by_type"].values())

    def test_depth_stats_match_dataset(self, gen_run):
        _cfg, manifest, outdir = gen_run
        for d in (0, 1):
            ds = deserialize_dataset((outdir / f"gen-squad-{d}.json").read_bytes())
            stats = manifest.depth_stats[d]
            assert stats.paragraphs == sum(len(g.paragraphs) for g in ds.data)
            assert stats.total_questions == count_items(ds)

    def test_stats_tsv_layout(self, gen_run):
        _cfg, manifest, outdir = gen_run
        lines = (outdir / "stats.tsv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "depth\ttype\tcount"
        assert len(lines) == 1 + 2 * len(TYPE_ORDER)
        type_names = [t.value for t in TYPE_ORDER]
        for d, start in ((0, 1), (1, 1 + len(TYPE_ORDER))):
            block = lines[start:start + len(TYPE_ORDER)]
            assert [row.split("\t")[1] for row in block] == type_names
            assert all(row.split("\t")[0] == str(d) for row in block)
            counted = {row.split("\t")[1]: int(row.split("\t")[2])
                       for row in block}
            assert counted == manifest.depth_stats[d].questions_by_type

    def test_split_files_partition_dataset(self, gen_run):
        _cfg, _manifest, outdir = gen_run
        for d in (0, 1):
            full = deserialize_dataset(
                (outdir / f"gen-squad-{d}.json").read_bytes())
            full_ids = {item.id for _p, item in iter_items(full)}
            part_ids: list[set] = []
            for part in ("train", "test", "eval"):
                ds = deserialize_dataset(
                    (outdir / f"gen-squad-{d}-{part}.json").read_bytes())
                part_ids.append({item.id for _p, item in iter_items(ds)})
            assert part_ids[0] | part_ids[1] | part_ids[2] == full_ids
            assert not (part_ids[0] & part_ids[1])
            assert not (part_ids[0] & part_ids[2])
            assert not (part_ids[1] & part_ids[2])


class TestGenerateModes:
    def test_bytes_do_not_depend_on_workers(self, gen_run, corpus_dir, tmp_path):
        _cfg, first, _outdir = gen_run
        cfg = base_config(corpus_dir, tmp_path / "out2", workers=2)
        second = run_generate(cfg)
        assert second.digests == first.digests

    def test_rerun_is_byte_identical(self, gen_run, corpus_dir, tmp_path):
        _cfg, first, outdir = gen_run
        cfg = base_config(corpus_dir, tmp_path / "out3")
        run_generate(cfg)
        blob_a = (outdir / "gen-squad-1.json").read_bytes()
        blob_b = (tmp_path / "out3" / "gen-squad-1.json").read_bytes()
        assert blob_a == blob_b

    def test_seed_changes_output(self, gen_run, corpus_dir, tmp_path):
        _cfg, first, _outdir = gen_run
        cfg = base_config(corpus_dir, tmp_path / "out4", global_seed=43)
        second = run_generate(cfg)
        assert second.digests["gen-squad-1.json"] != first.digests["gen-squad-1.json"]

    def test_cutoff_year_prunes_persons(self, gen_run, corpus_dir, tmp_path):
        cfg = base_config(corpus_dir, tmp_path / "out5",
                          cutoff_year=1800, depths=[0])
        manifest = run_generate(cfg)
        kept = sum(f.persons for f in manifest.files)
        assert 0 < kept < 18
        ds = deserialize_dataset(
            (tmp_path / "out5" / "gen-squad-0.json").read_bytes())
        assert verify_answers(ds).clean

    def test_sample_n(self, corpus_dir, tmp_path):
        cfg = base_config(corpus_dir, tmp_path / "out6",
                          sample_n=10, depths=[0])
        manifest = run_generate(cfg)
        ds = deserialize_dataset(
            (tmp_path / "out6" / "gen-squad-0.json").read_bytes())
        assert count_items(ds) == 10
        assert manifest.depth_stats[0].total_questions == 10
        parts = [deserialize_dataset(
            (tmp_path / "out6" / f"gen-squad-0-{p}.json").read_bytes())
            for p in ("train", "test", "eval")]
        assert sum(count_items(p) for p in parts) == 10

    def test_gc_state_survives_run(self, corpus_dir, tmp_path):
        cfg = base_config(corpus_dir, tmp_path / "outgc", depths=[0])
        assert gc.isenabled()
        run_generate(cfg)
        assert gc.isenabled()
        gc.disable()
        try:
            cfg = base_config(corpus_dir, tmp_path / "outgc2", depths=[0])
            run_generate(cfg)
            assert not gc.isenabled()
        finally:
            gc.enable()

    def test_missing_template_library_fails_before_writing(
            self, corpus_dir, tmp_path):
        outdir = tmp_path / "out7"
        cfg = base_config(corpus_dir, outdir,
                          template_library=str(tmp_path / "absent.tsv"))
        with pytest.raises(OSError):
            run_generate(cfg)
        assert not outdir.exists() or not any(outdir.iterdir())

    def test_parse_error_names_the_file(self, tmp_path):
        bad = tmp_path / "broken.ged"
        bad.write_text(BAD_GEDCOM, encoding="utf-8")
        cfg = base_config(tmp_path, tmp_path / "out8", depths=[0])
        with pytest.raises(ParseError, match="broken.ged"):
            run_generate(cfg)

    def test_tree_id_collision_gets_suffix(self, tmp_path):
        for sub in ("a", "b"):
            d = tmp_path / sub
            make_corpus(d, 1, seed=3 if sub == "a" else 5)
        cfg = PipelineConfig(
            inputs=[str(tmp_path / "a"), str(tmp_path / "b")],
            output_dir=str(tmp_path / "out"), depths=[0],
            global_seed=1, workers=1)
        manifest = run_generate(cfg)
        assert [f.tree_id for f in manifest.files] == ["tree0000", "tree0000-2"]
        ds = deserialize_dataset(
            (tmp_path / "out" / "gen-squad-0.json").read_bytes())
        trees = {g.title.split(":", 1)[0] for g in ds.data}
        assert trees == {"tree0000", "tree0000-2"}


class TestRunContext:
    def test_returns_passage_text(self, demo_file):
        text = run_context(str(demo_file), "@I3@", 1, seed=4)
        assert "Emily" in text
        assert text.endswith(".")

    def test_deterministic_per_seed(self, demo_file):
        a = run_context(str(demo_file), "@I3@", 1, seed=4)
        b = run_context(str(demo_file), "@I3@", 1, seed=4)
        assert a == b

    def test_seed_changes_text(self, demo_file):
        texts = {run_context(str(demo_file), "@I3@", 1, seed=s)
                 for s in range(8)}
        assert len(texts) > 1

    def test_unknown_person(self, demo_file):
        with pytest.raises(UnknownPerson):
            run_context(str(demo_file), "@I99@", 1)


@pytest.fixture(scope="module")
def dataset_path(gen_run):
    _cfg, _manifest, outdir = gen_run
    return outdir / "gen-squad-0.json"


@pytest.fixture(scope="module")
def perfect_predictions(dataset_path, tmp_path_factory):
    ds = deserialize_dataset(dataset_path.read_bytes())
    preds = {}
    for _para, item in iter_items(ds):
        preds[item.id] = "" if item.is_impossible else item.answers[0].text
    path = tmp_path_factory.mktemp("preds") / "preds.json"
    path.write_text(json.dumps(preds), encoding="utf-8")
    return path


class TestScoreAndVerify:
    def test_score_writes_default_report(self, dataset_path,
                                         perfect_predictions):
        report, tsv = run_score(str(dataset_path), str(perfect_predictions))
        assert report.overall.f1 == pytest.approx(100.0)
        assert report.overall.exact_match == pytest.approx(100.0)
        side_file = Path(str(dataset_path) + ".scores.tsv")
        assert side_file.read_text(encoding="utf-8") == tsv

    def test_score_honours_out_path(self, dataset_path, perfect_predictions,
                                    tmp_path):
        target = tmp_path / "report.tsv"
        _report, tsv = run_score(str(dataset_path), str(perfect_predictions),
                                 out_path=str(target))
        assert target.read_text(encoding="utf-8") == tsv
        assert tsv.splitlines()[0] == "type\tn\tEM\tF1"

    def test_verify_clean(self, dataset_path):
        assert run_verify(str(dataset_path)).clean

    def test_load_dataset_missing(self, tmp_path):
        with pytest.raises(IoError):
            load_dataset_file(str(tmp_path / "nope.json"))

    def test_load_dataset_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json", encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset_file(str(p))

    def test_load_dataset_wrong_shape(self, tmp_path):
        p = tmp_path / "shape.json"
        p.write_text(json.dumps({"version": "v2.0", "data": 5}),
                     encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset_file(str(p))

    def test_load_predictions_not_a_map(self, tmp_path):
        p = tmp_path / "preds.json"
        p.write_text(json.dumps(["a", "b"]), encoding="utf-8")
        with pytest.raises(ParseError, match="id -> answer"):
            load_predictions_file(str(p))

    def test_load_predictions_non_string_values(self, tmp_path):
        p = tmp_path / "preds.json"
        p.write_text(json.dumps({"x:1": 7}), encoding="utf-8")
        with pytest.raises(ParseError):
            load_predictions_file(str(p))


def write_config(tmp_path, corpus_dir, outdir, extra="") -> Path:
    text = (f"input = {corpus_dir}\n"
            f"output_dir = {outdir}\n"
            "depths = 0\n"
            "workers = 1\n"
            "global_seed = 3\n" + extra)
    path = tmp_path / "forge.cfg"
    path.write_text(text, encoding="utf-8")
    return path


class TestCliExitCodes:
    @pytest.fixture(autouse=True)
    def no_ambient_seed(self, monkeypatch):
        monkeypatch.delenv("FORGE_SEED", raising=False)

    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_unknown_flag(self, capsys):
        assert main(["verify", "--dataset", "x", "--bogus"]) == 1

    def test_generate_ok(self, tmp_path, corpus_dir, capsys):
        outdir = tmp_path / "out"
        cfg = write_config(tmp_path, corpus_dir, outdir)
        assert main(["generate", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "depth 0:" in out
        assert (outdir / "gen-squad-0.json").exists()

    def test_generate_cli_override_beats_config(self, tmp_path, corpus_dir):
        outdir = tmp_path / "out"
        cfg = write_config(tmp_path, corpus_dir, outdir)
        assert main(["generate", "--config", str(cfg),
                     "--sample_n", "5"]) == 0
        ds = deserialize_dataset((outdir / "gen-squad-0.json").read_bytes())
        assert count_items(ds) == 5

    def test_generate_env_seed(self, tmp_path, corpus_dir, monkeypatch):
        outdir = tmp_path / "out"
        cfg = write_config(tmp_path, corpus_dir, outdir)
        monkeypatch.setenv("FORGE_SEED", "77")
        assert main(["generate", "--config", str(cfg)]) == 0
        obj = json.loads((outdir / "manifest.json").read_text(encoding="utf-8"))
        assert obj["config"]["global_seed"] == 77

    def test_generate_bad_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "forge.cfg"
        cfg.write_text("nonsense = 1\n", encoding="utf-8")
        assert main(["generate", "--config", str(cfg)]) == 1
        assert "config error" in capsys.readouterr().err

    def test_generate_missing_input_dir(self, tmp_path, capsys):
        assert main(["generate", "--input", str(tmp_path / "void"),
                     "--output_dir", str(tmp_path / "out"),
                     "--depths", "0"]) == 3

    def test_generate_corrupt_gedcom(self, tmp_path, capsys):
        bad = tmp_path / "broken.ged"
        bad.write_text(BAD_GEDCOM, encoding="utf-8")
        assert main(["generate", "--input", str(bad),
                     "--output_dir", str(tmp_path / "out"),
                     "--depths", "0", "--workers", "1"]) == 2

    def test_context_ok(self, demo_file, capsys):
        assert main(["context", "--tree", str(demo_file),
                     "--person", "@I3@", "--depth", "1"]) == 0
        assert "Emily" in capsys.readouterr().out

    def test_context_unknown_person(self, demo_file, capsys):
        assert main(["context", "--tree", str(demo_file),
                     "--person", "@I77@"]) == 2

    def test_context_missing_file(self, tmp_path, capsys):
        assert main(["context", "--tree", str(tmp_path / "void.ged"),
                     "--person", "@I1@"]) == 3

    def test_context_empty_passage(self, tmp_path, capsys):
        bare = tmp_path / "bare.ged"
        bare.write_text("0 HEAD\n0 @I1@ INDI\n0 TRLR\n", encoding="utf-8")
        assert main(["context", "--tree", str(bare),
                     "--person", "@I1@", "--depth", "0"]) == 2

    def test_parse_ok(self, demo_file, capsys):
        assert main(["parse", "--input", str(demo_file)]) == 0
        out = capsys.readouterr().out
        assert "3 person(s)" in out
        assert "1 family(ies)" in out

    def test_parse_corrupt(self, tmp_path, capsys):
        bad = tmp_path / "broken.ged"
        bad.write_text(BAD_GEDCOM, encoding="utf-8")
        assert main(["parse", "--input", str(bad)]) == 2

    def test_parse_missing(self, tmp_path):
        assert main(["parse", "--input", str(tmp_path / "void.ged")]) == 3


@pytest.fixture(scope="module")
def squad_file(gen_run):
    _cfg, _manifest, outdir = gen_run
    return outdir / "gen-squad-1.json"


@pytest.fixture(scope="module")
def preds_file(squad_file, tmp_path_factory):
    ds = deserialize_dataset(squad_file.read_bytes())
    preds = {item.id: "" if item.is_impossible else item.answers[0].text
             for _p, item in iter_items(ds)}
    path = tmp_path_factory.mktemp("cli-preds") / "preds.json"
    path.write_text(json.dumps(preds), encoding="utf-8")
    return path


class TestCliScoreVerify:
    def test_score_ok(self, squad_file, preds_file, tmp_path, capsys):
        out = tmp_path / "scores.tsv"
        code = main(["score", "--dataset", str(squad_file),
                     "--predictions", str(preds_file), "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        assert captured.splitlines()[0] == "type\tn\tEM\tF1"
        assert "Overall" in captured
        assert out.exists()

    def test_score_warns_on_extra_ids(self, squad_file, preds_file,
                                      tmp_path, capsys):
        preds = json.loads(preds_file.read_text(encoding="utf-8"))
        preds["ghost:tree:Name:0"] = "boo"
        path = tmp_path / "preds-extra.json"
        path.write_text(json.dumps(preds), encoding="utf-8")
        code = main(["score", "--dataset", str(squad_file),
                     "--predictions", str(path),
                     "--out", str(tmp_path / "s.tsv")])
        assert code == 0
        assert "not in" in capsys.readouterr().err

    def test_score_missing_predictions(self, squad_file, tmp_path):
        assert main(["score", "--dataset", str(squad_file),
                     "--predictions", str(tmp_path / "void.json")]) == 3

    def test_score_bad_predictions_json(self, squad_file, tmp_path):
        path = tmp_path / "preds.json"
        path.write_text("{oops", encoding="utf-8")
        assert main(["score", "--dataset", str(squad_file),
                     "--predictions", str(path)]) == 2

    def test_verify_ok(self, squad_file, capsys):
        assert main(["verify", "--dataset", str(squad_file)]) == 0
        assert "OK" in capsys.readouterr().out

    def test_verify_tampered_dataset(self, squad_file, tmp_path, capsys):
        obj = json.loads(squad_file.read_text(encoding="utf-8"))
        moved = None
        for group in obj["data"]:
            for para in group["paragraphs"]:
                for qa in para["qas"]:
                    if not qa["is_impossible"]:
                        qa["answers"][0]["answer_start"] += 1
                        moved = qa["id"]
                        break
                if moved:
                    break
            if moved:
                break
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(obj), encoding="utf-8")
        assert main(["verify", "--dataset", str(path)]) == 2
        assert moved in capsys.readouterr().out

    def test_verify_missing_file(self, tmp_path):
        assert main(["verify", "--dataset", str(tmp_path / "void.json")]) == 3
