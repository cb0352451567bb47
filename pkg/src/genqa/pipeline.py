"""End-to-end dataset generation and the batch entry points.

Wires the stages together: parse GEDCOM files, build graphs, extract
depth-scoped sub-graphs per focus person, render passages, generate
questions, verify offsets, then sample/split/serialize per depth.
Generation is parallel per (tree, depth) with seeds derived from the
global seed, so output bytes do not depend on the worker count.
"""

from __future__ import annotations

import gc
import glob
import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from .cidoc import build_cidoc_graph
from .evaluate import HarnessConfig, ScoreReport, report_tsv, score
from .gedcom import GedcomDocument, ParseError, filter_living, parse_file
from .graph import UnknownPerson, build_family_tree_graph
from .qa import (
    Paragraph,
    QAGenConfig,
    SquadDataset,
    assemble_dataset,
    count_by_type,
    deserialize_dataset,
    generate_qa,
    sample_questions,
    split,
    verify_answers,
    write_datasets_shared,
)
from .rng import derive_seed
from .templates import load_library_file
from .traversal import MODE_DEGREE_STRICT, MODE_RAW, gen_subgraph
from .verbalize import (
    EmptyPassage,
    VerbalizerConfig,
    build_membership,
    facts_from_subgraph,
    render_passage,
)

log = logging.getLogger("genqa")


class ConfigError(ValueError):
    """Bad pipeline configuration (unknown key, unparsable value)."""


class IoError(Exception):
    """Input unreadable or output unwritable."""


class VerificationFailed(Exception):
    """Generated dataset failed the answer-offset re-check."""

    def __init__(self, ids: list[str]):
        self.ids = ids
        shown = ", ".join(ids[:20])
        more = f" (+{len(ids) - 20} more)" if len(ids) > 20 else ""
        super().__init__(f"answer verification failed for: {shown}{more}")


@dataclass
class PipelineConfig:
    inputs: list[str] = field(default_factory=list)
    output_dir: str = "out"
    depths: list[int] = field(default_factory=lambda: [0, 1, 2])
    global_seed: int = 0
    degree_strict: bool = True
    unanswerable_ratio: float = 1.0 / 3.0
    sample_n: int | None = None
    split_ratios: tuple[float, float, float] = (0.6, 0.2, 0.2)
    cutoff_year: int | None = None
    template_library: str | None = None
    workers: int | None = None
    min_variants: int = 2
    max_variants: int = 3

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("no input files configured")
        if any(d < 0 for d in self.depths):
            raise ConfigError("depths must be non-negative")
        if abs(sum(self.split_ratios) - 1.0) > 1e-9:
            raise ConfigError("split_ratios must sum to 1")
        if not 0 <= self.unanswerable_ratio < 1:
            raise ConfigError("unanswerable_ratio must be in [0, 1)")
        if self.min_variants < 1 or self.max_variants < self.min_variants:
            raise ConfigError("need 1 <= min_variants <= max_variants")

    def effective_workers(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        return max(1, os.cpu_count() or 1)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.replace(",", " ").split()]


def _parse_float_tuple(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.replace(",", " ").split())


# config-file/CLI key -> setter
_KEY_PARSERS = {
    "input": lambda cfg, v: setattr(
        cfg, "inputs", [p for p in v.replace(",", " ").split() if p]),
    "output_dir": lambda cfg, v: setattr(cfg, "output_dir", v.strip()),
    "depths": lambda cfg, v: setattr(cfg, "depths", _parse_int_list(v)),
    "global_seed": lambda cfg, v: setattr(cfg, "global_seed", int(v, 0)),
    "degree_strict": lambda cfg, v: setattr(cfg, "degree_strict", _parse_bool(v)),
    "unanswerable_ratio": lambda cfg, v: setattr(
        cfg, "unanswerable_ratio", float(v)),
    "sample_n": lambda cfg, v: setattr(
        cfg, "sample_n", int(v) if v.strip().lower() not in ("", "none") else None),
    "split_ratios": lambda cfg, v: setattr(
        cfg, "split_ratios", _parse_float_tuple(v)),
    "cutoff_year": lambda cfg, v: setattr(
        cfg, "cutoff_year", int(v) if v.strip().lower() not in ("", "none") else None),
    "template_library": lambda cfg, v: setattr(
        cfg, "template_library", v.strip() or None),
    "workers": lambda cfg, v: setattr(cfg, "workers", int(v)),
    "min_variants": lambda cfg, v: setattr(cfg, "min_variants", int(v)),
    "max_variants": lambda cfg, v: setattr(cfg, "max_variants", int(v)),
}

CONFIG_KEYS = tuple(_KEY_PARSERS)


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key=value lines; # starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key = key.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_config(
    file_values: dict[str, str] | None = None,
    overrides: dict[str, str] | None = None,
    env: dict[str, str] | None = None,
) -> PipelineConfig:
    """Precedence: defaults < config file < FORGE_SEED < CLI overrides."""
    cfg = PipelineConfig()
    env = os.environ if env is None else env
    for source in (file_values or {},):
        for key, value in source.items():
            _apply_key(cfg, key, value)
    if "FORGE_SEED" in env:
        _apply_key(cfg, "global_seed", env["FORGE_SEED"])
    for key, value in (overrides or {}).items():
        _apply_key(cfg, key, value)
    cfg.validate()
    return cfg


def _apply_key(cfg: PipelineConfig, key: str, value: str) -> None:
    parser = _KEY_PARSERS.get(key)
    if parser is None:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        parser(cfg, value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc


@dataclass
class FileOutcome:
    path: str
    tree_id: str
    status: str           # "ok" or the error text
    persons: int = 0
    families: int = 0
    warnings: int = 0


@dataclass
class DepthStats:
    subgraphs: int = 0
    paragraphs: int = 0
    questions_by_type: dict[str, int] = field(default_factory=dict)

    @property
    def total_questions(self) -> int:
        return sum(self.questions_by_type.values())


@dataclass
class RunManifest:
    config: dict
    files: list[FileOutcome] = field(default_factory=list)
    depth_stats: dict[int, DepthStats] = field(default_factory=dict)
    digests: dict[str, str] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "config": self.config,
            "files": [vars(f) for f in self.files],
            "depths": {
                str(d): {
                    "subgraphs": s.subgraphs,
                    "paragraphs": s.paragraphs,
                    "questions_by_type": s.questions_by_type,
                    "total_questions": s.total_questions,
                }
                for d, s in sorted(self.depth_stats.items())
            },
            "digests": self.digests,
        }


def resolve_inputs(patterns: list[str]) -> list[str]:
    """Expand globs and directories into a sorted file list."""
    found: list[str] = []
    for pattern in patterns:
        path = Path(pattern)
        if path.is_dir():
            found.extend(str(p) for p in sorted(path.glob("*.ged")))
        elif glob.has_magic(pattern):
            found.extend(sorted(glob.glob(pattern)))
        elif path.is_file():
            found.append(str(path))
        else:
            raise IoError(f"input not found: {pattern}")
    if not found:
        raise IoError(f"no input files matched {patterns!r}")
    deduped = sorted(dict.fromkeys(found))
    return deduped


def _tree_ids(paths: list[str]) -> dict[str, str]:
    """path -> unique tree id (file stem, suffixed on collision)."""
    ids: dict[str, str] = {}
    used: set[str] = set()
    for path in paths:
        stem = Path(path).stem
        candidate = stem
        n = 2
        while candidate in used:
            candidate = f"{stem}-{n}"
            n += 1
        used.add(candidate)
        ids[path] = candidate
    return ids


def _task_options(config: PipelineConfig) -> dict:
    return {
        "global_seed": config.global_seed,
        "degree_strict": config.degree_strict,
        "unanswerable_ratio": config.unanswerable_ratio,
        "template_library": config.template_library,
        "min_variants": config.min_variants,
        "max_variants": config.max_variants,
    }


def _tree_task(args) -> tuple[int, str, list[Paragraph], int]:
    """Generate all paragraphs of one (tree, depth); runs in a worker."""
    tree_id, doc, depth, opts = args
    g = build_family_tree_graph(doc)
    kg = build_cidoc_graph(doc)
    membership = build_membership(kg)
    library = None
    if opts["template_library"]:
        library = load_library_file(opts["template_library"])
    vconf = VerbalizerConfig(
        min_variants=opts["min_variants"],
        max_variants=opts["max_variants"],
        library=library,
    )
    qconf = QAGenConfig(
        tree_id=tree_id, unanswerable_ratio=opts["unanswerable_ratio"])
    mode = MODE_DEGREE_STRICT if opts["degree_strict"] else MODE_RAW

    paragraphs: list[Paragraph] = []
    subgraphs = 0
    # passages of one tree overlap heavily, so share rendered sentences
    sentence_cache: dict = {}
    for sp in sorted(g.person_nodes):
        subgraphs += 1
        sub = gen_subgraph(g, sp, depth, mode)
        facts = facts_from_subgraph(sub, kg, doc, membership)
        try:
            passage = render_passage(
                sub, facts, vconf,
                derive_seed(opts["global_seed"], tree_id, sp, str(depth), "render"),
                sentence_cache=sentence_cache)
        except EmptyPassage:
            continue
        qas = generate_qa(
            passage, sub, qconf,
            derive_seed(opts["global_seed"], tree_id, sp, str(depth), "qa"))
        if not qas:
            continue
        paragraphs.append(Paragraph(
            context=passage.text, qas=qas, sp=sp, depth=depth))
    return depth, tree_id, paragraphs, subgraphs


def _write(path: Path, data: bytes, manifest: RunManifest) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    manifest.digests[path.name] = hashlib.sha256(data).hexdigest()


@contextmanager
def _paused_gc():
    """Pause cyclic garbage collection for the duration of a run.

    A corpus run keeps millions of small acyclic objects alive at once,
    and generational scans over them dominate wall time while reclaiming
    nothing that reference counting does not already reclaim.  Cycles
    made during the pause are collected on exit; a caller that disabled
    collection itself is left alone.
    """
    if not gc.isenabled():
        yield
        return
    gc.disable()
    try:
        yield
    finally:
        gc.enable()
        gc.collect()


@_paused_gc()
def run_generate(config: PipelineConfig) -> RunManifest:
    """The full corpus-to-datasets run; returns the written manifest."""
    config.validate()
    if config.template_library:
        load_library_file(config.template_library)  # fail fast on bad path
    paths = resolve_inputs(config.inputs)
    outdir = Path(config.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output dir {outdir}: {exc}") from exc

    manifest = RunManifest(config={
        "inputs": config.inputs,
        "output_dir": config.output_dir,
        "depths": config.depths,
        "global_seed": config.global_seed,
        "degree_strict": config.degree_strict,
        "unanswerable_ratio": config.unanswerable_ratio,
        "sample_n": config.sample_n,
        "split_ratios": list(config.split_ratios),
        "cutoff_year": config.cutoff_year,
        "template_library": config.template_library,
        "workers": config.effective_workers(),
        "min_variants": config.min_variants,
        "max_variants": config.max_variants,
    })

    tree_ids = _tree_ids(paths)
    docs: dict[str, GedcomDocument] = {}
    for path in paths:
        tree = tree_ids[path]
        try:
            doc = parse_file(path)
        except ParseError as exc:
            manifest.files.append(FileOutcome(
                path=path, tree_id=tree, status=str(exc)))
            raise ParseError(f"{path}: {exc}") from exc
        if config.cutoff_year is not None:
            doc = filter_living(doc, config.cutoff_year)
        docs[tree] = doc
        manifest.files.append(FileOutcome(
            path=path, tree_id=tree, status="ok",
            persons=len(doc.individuals), families=len(doc.families),
            warnings=len(doc.warnings)))
    log.info("parsed %d file(s), %d person(s)",
             len(docs), sum(f.persons for f in manifest.files))

    opts = _task_options(config)
    workers = config.effective_workers()
    stats_rows: list[tuple[int, str, int]] = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for depth in config.depths:
            tasks = [(tree, docs[tree], depth, opts) for tree in sorted(docs)]
            results: dict[str, tuple[list[Paragraph], int]] = {}
            if pool is None:
                for task in tasks:
                    _d, tree, paragraphs, nsub = _tree_task(task)
                    results[tree] = (paragraphs, nsub)
            else:
                futures = {pool.submit(_tree_task, task): task[0] for task in tasks}
                for future, tree in futures.items():
                    _d, _tree, paragraphs, nsub = future.result()
                    results[tree] = (paragraphs, nsub)

            all_paragraphs: list[Paragraph] = []
            subgraphs = 0
            for tree in sorted(results):
                paragraphs, nsub = results[tree]
                all_paragraphs.extend(paragraphs)
                subgraphs += nsub

            ds = assemble_dataset(all_paragraphs)
            report = verify_answers(ds)
            if not report.clean:
                raise VerificationFailed([mid for mid, _ in report.mismatches])
            if config.sample_n is not None:
                ds = sample_questions(
                    ds, config.sample_n,
                    derive_seed(config.global_seed, "sample", str(depth)))

            stats = DepthStats(subgraphs=subgraphs)
            stats.paragraphs = sum(len(g.paragraphs) for g in ds.data)
            for qtype, n in count_by_type(ds).items():
                stats.questions_by_type[qtype.value] = n
                stats_rows.append((depth, qtype.value, n))
            manifest.depth_stats[depth] = stats

            train, test, eval_ds = split(
                ds, config.split_ratios,
                derive_seed(config.global_seed, "split", str(depth)))
            # the split files repeat the full file's groups; stream each
            # group once to every file holding it, so corpus-scale runs
            # never keep a whole serialized file in memory
            names = [f"gen-squad-{depth}.json"] + [
                f"gen-squad-{depth}-{part}.json"
                for part in ("train", "test", "eval")]
            try:
                digests = write_datasets_shared(
                    [ds, train, test, eval_ds],
                    [outdir / name for name in names])
            except OSError as exc:
                raise IoError(f"cannot write datasets: {exc}") from exc
            manifest.digests.update(zip(names, digests))
            log.info("depth %d: %d paragraphs, %d questions",
                     depth, stats.paragraphs, stats.total_questions)
            # drop this depth's objects before the next depth renders
            del ds, train, test, eval_ds, results, all_paragraphs
    finally:
        if pool is not None:
            pool.shutdown()

    stats_lines = ["depth\ttype\tcount"]
    for depth, type_name, n in stats_rows:
        stats_lines.append(f"{depth}\t{type_name}\t{n}")
    _write(outdir / "stats.tsv", ("\n".join(stats_lines) + "\n").encode("utf-8"),
           manifest)

    manifest_blob = json.dumps(
        manifest.to_json_obj(), indent=2, ensure_ascii=False).encode("utf-8")
    try:
        (outdir / "manifest.json").write_bytes(manifest_blob)
    except OSError as exc:
        raise IoError(f"cannot write manifest: {exc}") from exc
    return manifest


def run_context(
    tree: str,
    sp: str,
    depth: int,
    seed: int = 0,
    degree_strict: bool = True,
    template_library: str | None = None,
) -> str:
    """Passage text for one focus person, for model inference."""
    doc = parse_file(tree)
    g = build_family_tree_graph(doc)
    if sp not in g.person_nodes:
        raise UnknownPerson(sp)
    kg = build_cidoc_graph(doc)
    mode = MODE_DEGREE_STRICT if degree_strict else MODE_RAW
    sub = gen_subgraph(g, sp, depth, mode)
    facts = facts_from_subgraph(sub, kg, doc)
    library = load_library_file(template_library) if template_library else None
    vconf = VerbalizerConfig(library=library)
    tree_id = Path(tree).stem
    passage = render_passage(
        sub, facts, vconf, derive_seed(seed, tree_id, sp, str(depth), "render"))
    return passage.text


def load_dataset_file(path: str) -> SquadDataset:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        return deserialize_dataset(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{path}: not a SQuAD 2.0 dataset ({exc})") from exc


def load_predictions_file(path: str) -> dict[str, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(data)
    except ValueError as exc:
        raise ParseError(f"{path}: bad JSON ({exc})") from exc
    if not isinstance(obj, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in obj.items()):
        raise ParseError(f"{path}: predictions must map id -> answer string")
    return obj


def run_score(
    dataset_path: str,
    predictions_path: str,
    out_path: str | None = None,
    config: HarnessConfig | None = None,
) -> tuple[ScoreReport, str]:
    """Score a predictions file; returns (report, TSV text) and writes
    the TSV next to the dataset unless out_path says otherwise."""
    ds = load_dataset_file(dataset_path)
    preds = load_predictions_file(predictions_path)
    report = score(ds, preds, config)
    tsv = report_tsv(report)
    target = Path(out_path) if out_path else Path(
        str(dataset_path) + ".scores.tsv")
    try:
        target.write_text(tsv, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc
    return report, tsv


def run_verify(dataset_path: str):
    ds = load_dataset_file(dataset_path)
    return verify_answers(ds)
