"""HTTP service exposing the tree-to-dataset toolchain.

Trees are uploaded once and kept in an in-memory registry; context
rendering, question generation, kinship lookup, scoring, offset
verification, and window splitting are then available per request.
State is per-process and non-persistent by design; batch jobs should
use the command line instead.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .cidoc import KnowledgeGraph, build_cidoc_graph
from .evaluate import (
    ConfigError,
    HarnessConfig,
    normalize_and_tokenize,
    score,
    window_split,
)
from .gedcom import GedcomDocument, ParseError, parse
from .graph import FamilyTreeGraph, UnknownPerson, build_family_tree_graph, kinship
from .qa import QAGenConfig, deserialize_dataset, generate_qa, verify_answers
from .rng import derive_seed
from .traversal import MODE_DEGREE_STRICT, MODE_RAW, gen_subgraph
from .verbalize import (
    EmptyPassage,
    Membership,
    VerbalizerConfig,
    build_membership,
    facts_from_subgraph,
    render_passage,
)


@dataclass
class _TreeEntry:
    doc: GedcomDocument
    graph: FamilyTreeGraph
    kg: KnowledgeGraph
    membership: Membership


class _Registry:
    def __init__(self):
        self._lock = threading.Lock()
        self._trees: dict[str, _TreeEntry] = {}
        self._counter = 0

    def add(self, tree_id: str | None, doc: GedcomDocument) -> str:
        kg = build_cidoc_graph(doc)
        entry = _TreeEntry(
            doc=doc,
            graph=build_family_tree_graph(doc),
            kg=kg,
            membership=build_membership(kg),
        )
        with self._lock:
            if tree_id is None:
                self._counter += 1
                tree_id = f"tree-{self._counter}"
            self._trees[tree_id] = entry
        return tree_id

    def get(self, tree_id: str) -> _TreeEntry:
        with self._lock:
            entry = self._trees.get(tree_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown tree {tree_id!r}")
        return entry

    def list_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._trees)


class HealthResponse(BaseModel):
    status: str
    version: str


class TreeUpload(BaseModel):
    content: str = Field(description="GEDCOM file text")
    tree_id: str | None = None


class TreeInfo(BaseModel):
    tree_id: str
    persons: int
    families: int
    warnings: list[str] = []


class PersonInfo(BaseModel):
    id: str
    name: str
    birth_year: int | None = None


class ContextRequest(BaseModel):
    tree_id: str
    person_id: str
    depth: int = Field(default=1, ge=0)
    seed: int = 0
    degree_strict: bool = True
    min_variants: int = Field(default=2, ge=1)
    max_variants: int = Field(default=3, ge=1)


class ContextResponse(BaseModel):
    tree_id: str
    person_id: str
    depth: int
    context: str
    persons_in_scope: list[str]


class AnswerModel(BaseModel):
    text: str
    answer_start: int


class QAItemModel(BaseModel):
    question: str
    id: str
    answers: list[AnswerModel]
    plausible_answers: list[AnswerModel] = []
    is_impossible: bool
    question_type: str | None = None


class QuestionsRequest(ContextRequest):
    unanswerable_ratio: float = Field(default=1.0 / 3.0, ge=0.0, lt=1.0)


class QuestionsResponse(BaseModel):
    tree_id: str
    person_id: str
    depth: int
    context: str
    qas: list[QAItemModel]


class KinshipRequest(BaseModel):
    tree_id: str
    person_a: str
    person_b: str


class KinshipResponse(BaseModel):
    term: str
    degree: float


class ScoreRequest(BaseModel):
    dataset: dict
    predictions: dict[str, str]
    lowercase: bool = True
    strip_articles: bool = False


class TypeScoreModel(BaseModel):
    n: int
    exact_match: float
    f1: float


class ScoreResponse(BaseModel):
    overall: TypeScoreModel
    per_type: dict[str, TypeScoreModel]
    unknown_ids: list[str]
    missing_ids: list[str]


class VerifyRequest(BaseModel):
    dataset: dict


class VerifyResponse(BaseModel):
    clean: bool
    mismatches: list[dict]


class WindowsRequest(BaseModel):
    question: str
    context: str
    max_question_tokens: int = 64
    max_sequence_tokens: int = 512
    max_answer_tokens: int = 30
    doc_stride: int = 128
    lowercase: bool = True
    answer_span: tuple[int, int] | None = None


class WindowModel(BaseModel):
    token_start: int
    token_end: int
    is_answerable: bool
    local_span: tuple[int, int] | None = None


class WindowsResponse(BaseModel):
    window_length: int
    question_tokens: list[str]
    context_tokens: list[str]
    windows: list[WindowModel]


def create_app() -> FastAPI:
    app = FastAPI(title="genqa", version=__version__)
    registry = _Registry()

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/trees", response_model=TreeInfo)
    def upload_tree(payload: TreeUpload) -> TreeInfo:
        try:
            doc = parse(payload.content, source_path=payload.tree_id or "upload")
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        tree_id = registry.add(payload.tree_id, doc)
        return TreeInfo(
            tree_id=tree_id,
            persons=len(doc.individuals),
            families=len(doc.families),
            warnings=doc.warning_lines(),
        )

    @app.get("/trees", response_model=list[TreeInfo])
    def list_trees() -> list[TreeInfo]:
        out = []
        for tree_id in registry.list_ids():
            entry = registry.get(tree_id)
            out.append(TreeInfo(
                tree_id=tree_id,
                persons=len(entry.doc.individuals),
                families=len(entry.doc.families),
            ))
        return out

    @app.get("/trees/{tree_id}/persons", response_model=list[PersonInfo])
    def list_persons(tree_id: str) -> list[PersonInfo]:
        entry = registry.get(tree_id)
        return [
            PersonInfo(id=pid, name=rec.full_name(), birth_year=rec.birth_year())
            for pid, rec in sorted(entry.doc.individuals.items())
        ]

    def _render(req: ContextRequest):
        entry = registry.get(req.tree_id)
        if req.person_id not in entry.graph.person_nodes:
            raise HTTPException(
                status_code=404,
                detail=f"unknown person {req.person_id!r} in {req.tree_id!r}")
        mode = MODE_DEGREE_STRICT if req.degree_strict else MODE_RAW
        sub = gen_subgraph(entry.graph, req.person_id, req.depth, mode)
        facts = facts_from_subgraph(sub, entry.kg, entry.doc, entry.membership)
        vconf = VerbalizerConfig(
            min_variants=req.min_variants, max_variants=req.max_variants)
        seed = derive_seed(
            req.seed, req.tree_id, req.person_id, str(req.depth), "render")
        try:
            passage = render_passage(sub, facts, vconf, seed)
        except EmptyPassage as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return entry, sub, passage

    @app.post("/context", response_model=ContextResponse)
    def context(req: ContextRequest) -> ContextResponse:
        _entry, sub, passage = _render(req)
        return ContextResponse(
            tree_id=req.tree_id, person_id=req.person_id, depth=req.depth,
            context=passage.text, persons_in_scope=sub.person_ids())

    @app.post("/questions", response_model=QuestionsResponse)
    def questions(req: QuestionsRequest) -> QuestionsResponse:
        _entry, sub, passage = _render(req)
        qconf = QAGenConfig(
            tree_id=req.tree_id, unanswerable_ratio=req.unanswerable_ratio)
        seed = derive_seed(
            req.seed, req.tree_id, req.person_id, str(req.depth), "qa")
        items = generate_qa(passage, sub, qconf, seed)
        return QuestionsResponse(
            tree_id=req.tree_id, person_id=req.person_id, depth=req.depth,
            context=passage.text,
            qas=[QAItemModel(
                question=i.question, id=i.id,
                answers=[AnswerModel(text=a.text, answer_start=a.answer_start)
                         for a in i.answers],
                plausible_answers=[
                    AnswerModel(text=a.text, answer_start=a.answer_start)
                    for a in i.plausible_answers],
                is_impossible=i.is_impossible,
                question_type=i.question_type.value if i.question_type else None,
            ) for i in items])

    @app.post("/kinship", response_model=KinshipResponse)
    def kinship_lookup(req: KinshipRequest) -> KinshipResponse:
        entry = registry.get(req.tree_id)
        try:
            result = kinship(entry.graph, req.person_a, req.person_b)
        except UnknownPerson as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return KinshipResponse(term=result.term, degree=float(result.degree))

    @app.post("/score", response_model=ScoreResponse)
    def score_predictions(req: ScoreRequest) -> ScoreResponse:
        try:
            ds = deserialize_dataset(req.dataset)
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        config = HarnessConfig(
            lowercase=req.lowercase, strip_articles=req.strip_articles)
        report = score(ds, req.predictions, config)
        return ScoreResponse(
            overall=TypeScoreModel(**vars(report.overall)),
            per_type={t.value: TypeScoreModel(**vars(ts))
                      for t, ts in report.per_type.items()},
            unknown_ids=report.unknown_ids,
            missing_ids=report.missing_ids,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        try:
            ds = deserialize_dataset(req.dataset)
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        report = verify_answers(ds)
        return VerifyResponse(
            clean=report.clean,
            mismatches=[{"id": mid, "reason": reason}
                        for mid, reason in report.mismatches])

    @app.post("/windows", response_model=WindowsResponse)
    def windows(req: WindowsRequest) -> WindowsResponse:
        config = HarnessConfig(
            max_question_tokens=req.max_question_tokens,
            max_sequence_tokens=req.max_sequence_tokens,
            max_answer_tokens=req.max_answer_tokens,
            doc_stride=req.doc_stride,
            lowercase=req.lowercase,
        )
        question_tokens = normalize_and_tokenize(req.question, config)
        context_tokens = normalize_and_tokenize(req.context, config)
        try:
            result = window_split(
                question_tokens, context_tokens, config, req.answer_span)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return WindowsResponse(
            window_length=result.window_length,
            question_tokens=question_tokens,
            context_tokens=context_tokens,
            windows=[WindowModel(**vars(w)) for w in result.windows],
        )

    return app
