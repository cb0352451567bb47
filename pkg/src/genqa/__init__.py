"""GEDCOM family trees to SQuAD 2.0 question-answering datasets.

The toolchain: parse lineage-linked GEDCOM, build person/family graphs
and an event-centric knowledge graph, cut depth-scoped sub-graphs
around a focus person, verbalize facts into passages with tracked
answer spans, generate typed questions, and assemble/score SQuAD 2.0
datasets.  The `forge` command and the FastAPI service in
genqa.service wrap the same functions.
"""

__version__ = "0.1.0"

from .cidoc import KnowledgeGraph, NodeClass, PropertyCode, SchemaViolation, build_cidoc_graph
from .evaluate import (
    HarnessConfig,
    ScoreReport,
    WindowSplit,
    exact_match,
    format_model_input,
    normalize_and_tokenize,
    report_tsv,
    score,
    token_f1,
    window_split,
)
from .gedcom import (
    GedcomDocument,
    IndividualRecord,
    FamilyRecord,
    ParseError,
    StructuralError,
    EmptyInput,
    filter_living,
    parse,
    parse_file,
)
from .graph import (
    FamilyTreeGraph,
    KinshipTerm,
    UnknownPerson,
    build_family_tree_graph,
    kinship,
    kinship_profile,
)
from .qa import (
    Answer,
    DuplicateId,
    InsufficientQuestions,
    Paragraph,
    QAGenConfig,
    QAItem,
    QuestionType,
    SquadDataset,
    assemble_and_serialize,
    classify_question,
    deserialize_dataset,
    generate_qa,
    sample_questions,
    serialize_dataset,
    split,
    verify_answers,
    write_datasets_shared,
)
from .pipeline import PipelineConfig, RunManifest, build_config, run_generate
from .templates import SentenceTemplate, builtin_library, parse_library
from .traversal import ScopedSubgraph, enumerate_subgraphs, gen_subgraph, traverse
from .verbalize import (
    EmptyPassage,
    Fact,
    FactSpan,
    VerbalizedPassage,
    VerbalizerConfig,
    facts_from_subgraph,
    render_passage,
)

__all__ = [
    "__version__",
    "Answer",
    "DuplicateId",
    "EmptyInput",
    "EmptyPassage",
    "Fact",
    "FactSpan",
    "FamilyRecord",
    "FamilyTreeGraph",
    "GedcomDocument",
    "HarnessConfig",
    "IndividualRecord",
    "InsufficientQuestions",
    "KinshipTerm",
    "KnowledgeGraph",
    "NodeClass",
    "Paragraph",
    "ParseError",
    "PipelineConfig",
    "PropertyCode",
    "QAGenConfig",
    "QAItem",
    "QuestionType",
    "RunManifest",
    "SchemaViolation",
    "ScopedSubgraph",
    "ScoreReport",
    "SentenceTemplate",
    "SquadDataset",
    "StructuralError",
    "UnknownPerson",
    "VerbalizedPassage",
    "VerbalizerConfig",
    "WindowSplit",
    "assemble_and_serialize",
    "build_cidoc_graph",
    "build_config",
    "build_family_tree_graph",
    "builtin_library",
    "classify_question",
    "deserialize_dataset",
    "enumerate_subgraphs",
    "exact_match",
    "facts_from_subgraph",
    "filter_living",
    "format_model_input",
    "gen_subgraph",
    "generate_qa",
    "kinship",
    "kinship_profile",
    "normalize_and_tokenize",
    "parse",
    "parse_file",
    "parse_library",
    "render_passage",
    "report_tsv",
    "run_generate",
    "sample_questions",
    "score",
    "serialize_dataset",
    "split",
    "token_f1",
    "traverse",
    "verify_answers",
    "write_datasets_shared",
    "window_split",
]
