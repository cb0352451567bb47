"""Scoring and model-side preprocessing for extractive QA.

Token-level F1 and exact match over normalized tokens, per-question-type
score reports, sliding-window splitting of long contexts, and the
"[CLS] question [SEP] context [CLS]" input format.  No model is run
here; these are the dataset-side halves of training and evaluation.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field

from .qa import (
    QuestionType,
    SquadDataset,
    TYPE_ORDER,
    classify_question,
    iter_items,
)


class ConfigError(ValueError):
    """Window arithmetic impossible under this configuration."""


@dataclass
class HarnessConfig:
    max_question_tokens: int = 64
    max_sequence_tokens: int = 512
    max_answer_tokens: int = 30
    doc_stride: int = 128
    lowercase: bool = True
    # articles are kept: "in Poland" vs "Poland" stays a partial match
    strip_articles: bool = False
    # marker tokens ([CLS]/[SEP]) live outside the window budget
    count_marker_tokens: bool = False


_ARTICLES = {"a", "an", "the"}
_STRIP_CHARS = string.punctuation


def normalize_and_tokenize(text: str, config: HarnessConfig) -> list[str]:
    """Whitespace tokens with edge punctuation stripped; pure and total."""
    if config.lowercase:
        text = text.lower()
    tokens = []
    for raw in text.split():
        token = raw.strip(_STRIP_CHARS)
        if not token:
            continue
        if config.strip_articles and token in _ARTICLES:
            continue
        tokens.append(token)
    return tokens


def token_f1(pred: str, gold: str, config: HarnessConfig) -> float:
    """2PR/(P+R) over token multisets; two empties agree perfectly."""
    pred_tokens = normalize_and_tokenize(pred, config)
    gold_tokens = normalize_and_tokenize(gold, config)
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def exact_match(pred: str, gold: str, config: HarnessConfig) -> bool:
    return normalize_and_tokenize(pred, config) == normalize_and_tokenize(
        gold, config)


@dataclass
class TypeScore:
    n: int = 0
    exact_match: float = 0.0  # percent
    f1: float = 0.0           # percent


@dataclass
class ScoreReport:
    overall: TypeScore
    per_type: dict[QuestionType, TypeScore]
    unknown_ids: list[str] = field(default_factory=list)
    missing_ids: list[str] = field(default_factory=list)


def _item_type(item) -> QuestionType:
    if item.question_type is not None:
        return item.question_type
    return classify_question(item, 0)


def score(
    ds: SquadDataset,
    preds: dict[str, str],
    config: HarnessConfig | None = None,
) -> ScoreReport:
    """Mean F1/EM x100, overall and per type.

    Items without a prediction are scored as abstentions ("") and
    listed under missing_ids; prediction ids absent from the dataset
    are listed under unknown_ids.  Unanswerable gold is the empty
    string, so abstaining scores 1 and anything else scores 0.
    """
    config = config or HarnessConfig()
    sums: dict[QuestionType, list[float]] = {t: [0.0, 0.0, 0] for t in TYPE_ORDER}
    missing: list[str] = []
    seen_ids: set[str] = set()

    for _para, item in iter_items(ds):
        seen_ids.add(item.id)
        if item.id in preds:
            pred = preds[item.id]
        else:
            pred = ""
            missing.append(item.id)
        golds = [""] if item.is_impossible else [a.text for a in item.answers]
        f1 = max(token_f1(pred, g, config) for g in golds)
        em = any(exact_match(pred, g, config) for g in golds)
        bucket = sums.setdefault(_item_type(item), [0.0, 0.0, 0])
        bucket[0] += f1
        bucket[1] += 1.0 if em else 0.0
        bucket[2] += 1

    per_type: dict[QuestionType, TypeScore] = {}
    total_f1 = total_em = 0.0
    total_n = 0
    for qtype in TYPE_ORDER:
        f1_sum, em_sum, n = sums[qtype]
        per_type[qtype] = TypeScore(
            n=n,
            exact_match=100.0 * em_sum / n if n else 0.0,
            f1=100.0 * f1_sum / n if n else 0.0,
        )
        total_f1 += f1_sum
        total_em += em_sum
        total_n += n
    overall = TypeScore(
        n=total_n,
        exact_match=100.0 * total_em / total_n if total_n else 0.0,
        f1=100.0 * total_f1 / total_n if total_n else 0.0,
    )
    unknown = sorted(set(preds) - seen_ids)
    return ScoreReport(overall=overall, per_type=per_type,
                       unknown_ids=unknown, missing_ids=missing)


def report_tsv(report: ScoreReport) -> str:
    """One row per question type in the fixed report order, then
    Overall; columns are n, EM, F1."""
    lines = ["type\tn\tEM\tF1"]
    for qtype in TYPE_ORDER:
        ts = report.per_type.get(qtype, TypeScore())
        lines.append(f"{qtype.value}\t{ts.n}\t{ts.exact_match:.2f}\t{ts.f1:.2f}")
    ov = report.overall
    lines.append(f"Overall\t{ov.n}\t{ov.exact_match:.2f}\t{ov.f1:.2f}")
    return "\n".join(lines) + "\n"


@dataclass
class Window:
    token_start: int
    token_end: int  # exclusive
    is_answerable: bool
    local_span: tuple[int, int] | None = None


@dataclass
class WindowSplit:
    windows: list[Window]
    window_length: int


def window_split(
    question_tokens: list[str],
    context_tokens: list[str],
    config: HarnessConfig,
    answer_span: tuple[int, int] | None = None,
) -> WindowSplit:
    """Slide a fixed-length token window over the context.

    Window length is the sequence budget minus the (possibly trimmed)
    question; consecutive windows overlap by exactly doc_stride tokens.
    A window is answerable only when the whole gold span (token
    interval, end exclusive) lies inside it and fits max_answer_tokens.
    """
    qlen = min(len(question_tokens), config.max_question_tokens)
    markers = 3 if config.count_marker_tokens else 0
    window_length = config.max_sequence_tokens - qlen - markers
    if window_length <= 0:
        raise ConfigError(
            f"no room for context: sequence budget {config.max_sequence_tokens}"
            f" cannot fit a {qlen}-token question")
    if config.doc_stride >= window_length:
        raise ConfigError(
            f"doc_stride {config.doc_stride} must be smaller than the"
            f" window length {window_length}")
    advance = window_length - config.doc_stride

    n = len(context_tokens)
    windows: list[Window] = []
    start = 0
    while True:
        end = min(start + window_length, n)
        answerable = False
        local = None
        if answer_span is not None:
            s, e = answer_span
            fits = start <= s and e <= end and s < e
            if fits and (e - s) <= config.max_answer_tokens:
                answerable = True
                local = (s - start, e - start)
        windows.append(Window(start, end, answerable, local))
        if end >= n:
            break
        start += advance
    return WindowSplit(windows=windows, window_length=window_length)


def format_model_input(
    question: str, context: str, trailing_marker: str = "[CLS]"
) -> str:
    """"[CLS] question [SEP] context [CLS]"; pass "[SEP]" as the
    trailing marker for the conventional encoder form."""
    return f"[CLS] {question} [SEP] {context} {trailing_marker}"


def parse_model_input(text: str) -> tuple[str, str]:
    """Inverse of format_model_input; recovers (question, context)."""
    if not text.startswith("[CLS] "):
        raise ValueError("missing leading marker")
    body = text[len("[CLS] "):]
    for marker in (" [CLS]", " [SEP]"):
        if body.endswith(marker):
            body = body[:-len(marker)]
            break
    else:
        raise ValueError("missing trailing marker")
    question, sep, context = body.partition(" [SEP] ")
    if not sep:
        raise ValueError("missing separator")
    return question, context
