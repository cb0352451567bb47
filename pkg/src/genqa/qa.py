"""Typed question generation and SQuAD 2.0 dataset assembly.

Questions are generated from the verified character spans of a rendered
passage, so every answerable item's answer_start points at text that
provably exists.  Unanswerable items are built from facts the passage
provably lacks.  Datasets serialize to the SQuAD 2.0 JSON layout
(version/data/title/paragraphs/qas) and support seeded splitting and
question sampling.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .rng import SplitMix64
from .traversal import PERSON, ScopedSubgraph
from .verbalize import VerbalizedPassage


class DuplicateId(ValueError):
    """Two QA items share an id within one dataset."""


class InsufficientQuestions(ValueError):
    """Requested sample size exceeds the question count."""


class QuestionType(str, Enum):
    Name = "Name"
    Date = "Date"
    Place = "Place"
    InfoNamedEntity = "InfoNamedEntity"
    FirstDegreeRelation = "FirstDegreeRelation"
    SecondDegreeRelation = "SecondDegreeRelation"
    FirstDegreeDate = "FirstDegreeDate"
    FirstDegreePlace = "FirstDegreePlace"
    FirstDegreeInfo = "FirstDegreeInfo"
    SecondDegreeDate = "SecondDegreeDate"
    SecondDegreePlace = "SecondDegreePlace"
    SecondDegreeInfo = "SecondDegreeInfo"


# report row order used by the scoring report
TYPE_ORDER: tuple[QuestionType, ...] = (
    QuestionType.Name,
    QuestionType.Date,
    QuestionType.Place,
    QuestionType.InfoNamedEntity,
    QuestionType.FirstDegreeRelation,
    QuestionType.SecondDegreeRelation,
    QuestionType.FirstDegreeDate,
    QuestionType.FirstDegreePlace,
    QuestionType.FirstDegreeInfo,
    QuestionType.SecondDegreeDate,
    QuestionType.SecondDegreePlace,
    QuestionType.SecondDegreeInfo,
)

SOURCE_RULE = "RuleTemplate"
SOURCE_WH = "WhTemplate"
SOURCE_QUANT = "Quantitative"
SOURCE_YESNO = "YesNo"
SOURCE_UNANSWERABLE = "Unanswerable"

_DATE_BY_BUCKET = {
    0: QuestionType.Date,
    1: QuestionType.FirstDegreeDate,
    2: QuestionType.SecondDegreeDate,
}
_PLACE_BY_BUCKET = {
    0: QuestionType.Place,
    1: QuestionType.FirstDegreePlace,
    2: QuestionType.SecondDegreePlace,
}
_INFO_BY_BUCKET = {
    0: QuestionType.InfoNamedEntity,
    1: QuestionType.FirstDegreeInfo,
    2: QuestionType.SecondDegreeInfo,
}
_RELATION_BY_BUCKET = {
    0: QuestionType.FirstDegreeRelation,  # spouses count as first degree
    1: QuestionType.FirstDegreeRelation,
    2: QuestionType.SecondDegreeRelation,
}


# slots keep per-item memory flat on corpus-scale datasets
@dataclass(slots=True)
class Answer:
    text: str
    answer_start: int


@dataclass(slots=True)
class QAItem:
    question: str
    id: str
    answers: list[Answer]
    is_impossible: bool
    plausible_answers: list[Answer] = field(default_factory=list)
    question_type: QuestionType | None = None
    # generation-side metadata, not serialized
    source: str = field(default=SOURCE_RULE, compare=False)
    subject: str | None = field(default=None, compare=False)
    predicate: str | None = field(default=None, compare=False)


@dataclass(slots=True)
class Paragraph:
    context: str
    qas: list[QAItem]
    sp: str = field(default="", compare=False)
    depth: int = field(default=-1, compare=False)


@dataclass(slots=True)
class TitleGroup:
    title: str
    paragraphs: list[Paragraph]


@dataclass(slots=True)
class SquadDataset:
    data: list[TitleGroup]
    version: str = "v2.0"


@dataclass
class QAGenConfig:
    tree_id: str = "tree"
    unanswerable_ratio: float = 1.0 / 3.0


def _bucket(sub: ScopedSubgraph, pid: str) -> int:
    """Question-degree bucket: the focus person is 0, spouses and other
    first-degree relatives are 1, everything farther is 2."""
    if pid == sub.sp:
        return 0
    degree = sub.degree_of(pid)
    if degree is None or degree == math.inf or degree >= 2:
        return 2
    return 1


_EVENT_VERBS = {
    "Birth": ("When was {nm} born?", "Where was {nm} born?"),
    "Death": ("When did {nm} die?", "Where did {nm} die?"),
    "Burial": ("When was {nm} buried?", "Where was {nm} buried?"),
    "Baptism": ("When was {nm} baptized?", "Where was {nm} baptized?"),
    "Endowment": (
        "When did {nm} receive the endowment?",
        "Where did {nm} receive the endowment?",
    ),
    "SealingChild": (
        "When was {nm} sealed to parents?",
        "Where was {nm} sealed to parents?",
    ),
    "Marriage": ("When did {nm} get married?", "Where did {nm} get married?"),
}


class _Emitter:
    """Collects QA items with per-type id counters and question dedup."""

    def __init__(self, tree_id: str, sp: str):
        self.tree_id = tree_id
        self.sp = sp
        self.items: list[QAItem] = []
        self.counters: dict[str, int] = {}
        self.seen: set[str] = set()

    def emit(
        self,
        question: str,
        qtype: QuestionType,
        source: str,
        answers: list[Answer],
        plausible: list[Answer] | None = None,
        impossible: bool = False,
        subject: str | None = None,
        predicate: str | None = None,
    ) -> None:
        if question in self.seen:
            return
        if not impossible and not answers:
            return
        self.seen.add(question)
        type_name = qtype.value
        n = self.counters.get(type_name, 0)
        self.counters[type_name] = n + 1
        self.items.append(QAItem(
            question=question,
            id=f"{self.tree_id}:{self.sp}:{type_name}:{n}",
            answers=[] if impossible else answers,
            is_impossible=impossible,
            plausible_answers=list(plausible or []),
            question_type=qtype,
            source=source,
            subject=subject,
            predicate=predicate,
        ))


def generate_qa(
    passage: VerbalizedPassage,
    sub: ScopedSubgraph,
    config: QAGenConfig,
    seed: int,
) -> list[QAItem]:
    """Typed questions whose golds are passage spans.

    Every answer offset comes straight from a rendered span.  Questions
    use both plain-name and relation-phrase references.  Unanswerable
    items ask about predicates missing from the passage's facts, at
    config.unanswerable_ratio of the final item count.
    """
    rng = SplitMix64(seed)
    out = _Emitter(config.tree_id, sub.sp)

    spans_by_fact: dict[int, dict[str, list[Answer]]] = {}
    for span in passage.fact_spans:
        by_label = spans_by_fact.setdefault(span.fact_index, {})
        by_label.setdefault(span.label, []).append(
            Answer(text=span.text, answer_start=span.start))

    terms = {n.id: n.term for n in sub.nodes if n.kind == PERSON}

    def display_name(fact) -> str | None:
        first = fact.extras.get("subject_first")
        last = fact.extras.get("subject_last")
        if first and last:
            return f"{first} {last}"
        return first or last

    for i, fact in enumerate(passage.facts):
        spans = spans_by_fact.get(i, {})
        nm = display_name(fact)
        if nm is None:
            continue
        bucket = _bucket(sub, fact.subject)
        phrase = fact.extras.get("relation_phrase")
        date_answers = spans.get("date", [])
        place_answers = spans.get("place", [])

        if fact.predicate in _EVENT_VERBS:
            when_form, where_form = _EVENT_VERBS[fact.predicate]
            if date_answers:
                out.emit(when_form.format(nm=nm),
                         _DATE_BY_BUCKET[bucket], SOURCE_WH, date_answers,
                         subject=fact.subject, predicate=fact.predicate)
                if phrase:
                    out.emit(when_form.format(nm=phrase),
                             _DATE_BY_BUCKET[bucket], SOURCE_WH, date_answers,
                             subject=fact.subject, predicate=fact.predicate)
            if place_answers:
                out.emit(where_form.format(nm=nm),
                         _PLACE_BY_BUCKET[bucket], SOURCE_WH, place_answers,
                         subject=fact.subject, predicate=fact.predicate)
                if phrase:
                    out.emit(where_form.format(nm=phrase),
                             _PLACE_BY_BUCKET[bucket], SOURCE_WH, place_answers,
                             subject=fact.subject, predicate=fact.predicate)
            first = fact.extras.get("subject_first")
            if fact.predicate == "Birth" and place_answers and first:
                out.emit(
                    f"Was {place_answers[0].text} {first}'s birthplace?",
                    _PLACE_BY_BUCKET[bucket], SOURCE_YESNO, place_answers,
                    subject=fact.subject, predicate=fact.predicate)
            if fact.predicate == "Death" and date_answers:
                out.emit(
                    f"Did {nm} die in {date_answers[0].text}?",
                    _DATE_BY_BUCKET[bucket], SOURCE_YESNO, date_answers,
                    subject=fact.subject, predicate=fact.predicate)
            if fact.predicate == "Marriage":
                partner_first = fact.extras.get("partner_first")
                partner_last = fact.extras.get("partner_last")
                if partner_first and partner_last and date_answers:
                    out.emit(
                        f"When did {nm} marry {partner_first} {partner_last}?",
                        _DATE_BY_BUCKET[bucket], SOURCE_WH, date_answers,
                        subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate == "OtherEvent":
            kind = fact.extras.get("event_kind", "event")
            if date_answers:
                out.emit(f"When did the {kind} event of {nm} occur?",
                         _DATE_BY_BUCKET[bucket], SOURCE_WH, date_answers,
                         subject=fact.subject, predicate=fact.predicate)
            if place_answers:
                out.emit(f"Where did the {kind} event of {nm} occur?",
                         _PLACE_BY_BUCKET[bucket], SOURCE_WH, place_answers,
                         subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate == "Residence" and place_answers:
            out.emit(f"Where did {nm} live?",
                     _PLACE_BY_BUCKET[bucket], SOURCE_WH, place_answers,
                     subject=fact.subject, predicate=fact.predicate)
            if phrase:
                out.emit(f"Where did {phrase} live?",
                         _PLACE_BY_BUCKET[bucket], SOURCE_WH, place_answers,
                         subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate == "Sex":
            sex_answers = spans.get("sex", [])
            if sex_answers:
                out.emit(f"What was {nm}'s sex?",
                         _INFO_BY_BUCKET[bucket], SOURCE_WH, sex_answers,
                         subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate == "Occupation":
            occ_answers = spans.get("info:occupation", [])
            if occ_answers:
                out.emit(f"What was {nm}'s occupation?",
                         _INFO_BY_BUCKET[bucket], SOURCE_WH, occ_answers,
                         subject=fact.subject, predicate=fact.predicate)
                if phrase:
                    out.emit(f"What was {phrase}'s occupation?",
                             _INFO_BY_BUCKET[bucket], SOURCE_WH, occ_answers,
                             subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate in ("ChildCount", "SpouseCount", "SiblingCount"):
            count_answers = spans.get("count", [])
            noun = fact.extras.get("noun_plural") or fact.extras.get("noun")
            if count_answers and noun:
                qtype = (QuestionType.SecondDegreeRelation
                         if fact.predicate == "SiblingCount" or bucket >= 1
                         else QuestionType.FirstDegreeRelation)
                out.emit(f"How many {noun} did {nm} have?",
                         qtype, SOURCE_QUANT, count_answers,
                         subject=fact.subject, predicate=fact.predicate)
                if phrase:
                    out.emit(f"How many {noun} did {nm} ({phrase}) have?",
                             qtype, SOURCE_QUANT, count_answers,
                             subject=fact.subject, predicate=fact.predicate)

        elif fact.predicate == "NoteText":
            info_forms = {
                "occupation": "What did {nm} work as?",
                "illness": "What was {nm}'s illness?",
                "military_rank": "What was {nm}'s rank in the military?",
            }
            for label, form in info_forms.items():
                info_answers = spans.get(f"info:{label}", [])
                if not info_answers:
                    continue
                out.emit(form.format(nm=nm),
                         _INFO_BY_BUCKET[bucket], SOURCE_WH, info_answers,
                         subject=fact.subject, predicate=fact.predicate)
                if phrase:
                    out.emit(form.format(nm=phrase),
                             _INFO_BY_BUCKET[bucket], SOURCE_WH, info_answers,
                             subject=fact.subject, predicate=fact.predicate)

    # focus-person name questions
    sp_first = None
    sp_full_spans: list[Answer] = []
    sp_last_spans: list[Answer] = []
    for i, fact in enumerate(passage.facts):
        if fact.subject != sub.sp:
            continue
        if sp_first is None:
            sp_first = fact.extras.get("subject_first")
        spans = spans_by_fact.get(i, {})
        sp_full_spans.extend(spans.get("full_name", []))
        sp_last_spans.extend(spans.get("last_name", []))
    if sp_first and sp_full_spans:
        out.emit(f"What is {sp_first}'s full name?",
                 QuestionType.Name, SOURCE_RULE, sp_full_spans,
                 subject=sub.sp, predicate="Name")
    if sp_first and sp_last_spans:
        out.emit(f"What is {sp_first}'s last name?",
                 QuestionType.Name, SOURCE_RULE, sp_last_spans,
                 subject=sub.sp, predicate="Name")

    # "Who was <SP first>'s <term>?" over every kinship term in the scope
    if sp_first:
        by_term: dict[str, list[Answer]] = {}
        term_bucket: dict[str, int] = {}
        for i, fact in enumerate(passage.facts):
            pid = fact.subject
            term = terms.get(pid, "")
            if pid == sub.sp or term in ("", "self", "relative"):
                continue
            full = spans_by_fact.get(i, {}).get("full_name", [])
            if full:
                by_term.setdefault(term, []).extend(full)
                term_bucket[term] = _bucket(sub, pid)
        for term in sorted(by_term):
            out.emit(f"Who was {sp_first}'s {term}?",
                     _RELATION_BY_BUCKET[term_bucket[term]], SOURCE_WH,
                     by_term[term], subject=None, predicate="Relation")

    # "Who was <full name>?" answered by a relation phrase
    person_phrase_spans: dict[str, list[Answer]] = {}
    person_names: dict[str, str | None] = {}
    for i, fact in enumerate(passage.facts):
        pid = fact.subject
        if pid == sub.sp:
            continue
        phrases = spans_by_fact.get(i, {}).get("relation_phrase", [])
        if phrases:
            person_phrase_spans.setdefault(pid, []).extend(phrases)
            person_names.setdefault(pid, display_name(fact))
    for pid in sorted(person_phrase_spans):
        nm = person_names.get(pid)
        if not nm:
            continue
        out.emit(f"Who was {nm}?",
                 _RELATION_BY_BUCKET[_bucket(sub, pid)], SOURCE_WH,
                 person_phrase_spans[pid], subject=pid, predicate="Relation")

    n_answerable = len(out.items)
    _add_unanswerable(out, passage, sub, config, rng, n_answerable)
    return out.items


def _first_span_answer(
    passage: VerbalizedPassage, labels: tuple[str, ...]
) -> list[Answer]:
    """Earliest passage span with one of the labels; used as the
    plausible answer attached to unanswerable items."""
    exact = frozenset(p for p in labels if not p.endswith(":"))
    prefixes = tuple(p for p in labels if p.endswith(":"))
    best = None
    for span in passage.fact_spans:
        if span.label in exact or (prefixes and span.label.startswith(prefixes)):
            if best is None or span.start < best.start:
                best = span
    if best is None:
        return []
    return [Answer(text=best.text, answer_start=best.start)]


def _add_unanswerable(
    out: _Emitter,
    passage: VerbalizedPassage,
    sub: ScopedSubgraph,
    config: QAGenConfig,
    rng: SplitMix64,
    n_answerable: int,
) -> None:
    ratio = config.unanswerable_ratio
    if ratio <= 0 or n_answerable == 0:
        return
    if ratio >= 1:
        raise ValueError("unanswerable_ratio must be in [0, 1)")
    target = round(n_answerable * ratio / (1.0 - ratio))
    if target == 0:
        return

    present: dict[str, set[str]] = {}
    note_labels: dict[str, set[str]] = {}
    names: dict[str, str] = {}
    for fact in passage.facts:
        pid = fact.subject
        present.setdefault(pid, set()).add(fact.predicate)
        if fact.predicate == "Marriage":
            partner = fact.extras.get("partner_id")
            if partner:
                present.setdefault(partner, set()).add("Marriage")
        if fact.predicate == "NoteText":
            for label, _value, _off in fact.extras.get("extractions", ()):
                note_labels.setdefault(pid, set()).add(label)
        if pid not in names:
            first = fact.extras.get("subject_first")
            last = fact.extras.get("subject_last")
            if first and last:
                names[pid] = f"{first} {last}"
            elif first or last:
                names[pid] = first or last

    date_p = _first_span_answer(passage, ("date",))
    place_p = _first_span_answer(passage, ("place",))
    count_p = _first_span_answer(passage, ("count",))
    info_p = _first_span_answer(passage, ("info:", "sex"))

    pool: list[tuple[str, QuestionType, list[Answer], str, str]] = []
    for pid in sorted(names):
        nm = names[pid]
        have = present.get(pid, set())
        bucket = _bucket(sub, pid)
        if "Birth" not in have:
            pool.append((f"When was {nm} born?",
                         _DATE_BY_BUCKET[bucket], date_p, pid, "Birth"))
            pool.append((f"Where was {nm} born?",
                         _PLACE_BY_BUCKET[bucket], place_p, pid, "Birth"))
        if "Death" not in have:
            pool.append((f"When did {nm} die?",
                         _DATE_BY_BUCKET[bucket], date_p, pid, "Death"))
            pool.append((f"Where did {nm} die?",
                         _PLACE_BY_BUCKET[bucket], place_p, pid, "Death"))
        if "Burial" not in have:
            pool.append((f"Where was {nm} buried?",
                         _PLACE_BY_BUCKET[bucket], place_p, pid, "Burial"))
        if "Marriage" not in have:
            pool.append((f"When did {nm} get married?",
                         _DATE_BY_BUCKET[bucket], date_p, pid, "Marriage"))
        if "Occupation" not in have and "occupation" not in note_labels.get(pid, ()):
            pool.append((f"What was {nm}'s occupation?",
                         _INFO_BY_BUCKET[bucket], info_p, pid, "Occupation"))
        if "ChildCount" not in have:
            pool.append((f"How many children did {nm} have?",
                         QuestionType.FirstDegreeRelation if bucket == 0
                         else QuestionType.SecondDegreeRelation,
                         count_p, pid, "ChildCount"))
        if "SiblingCount" not in have:
            pool.append((f"How many siblings did {nm} have?",
                         QuestionType.SecondDegreeRelation,
                         count_p, pid, "SiblingCount"))

    if len(pool) > target:
        keep = rng.sample_indices(len(pool), target)
        pool = [pool[i] for i in keep]
    for question, qtype, plausible, pid, predicate in pool:
        out.emit(question, qtype, SOURCE_UNANSWERABLE, [],
                 plausible=plausible, impossible=True,
                 subject=pid, predicate=predicate)


def classify_question(item: QAItem, subject_degree: int) -> QuestionType:
    """Type of an item: generated items keep their declared type; typed
    imports fall back to the leading WH word at the subject's degree."""
    if item.question_type is not None:
        return item.question_type
    bucket = 0 if subject_degree <= 0 else (1 if subject_degree == 1 else 2)
    lowered = item.question.strip().lower()
    if lowered.startswith("when"):
        return _DATE_BY_BUCKET[bucket]
    if lowered.startswith("where"):
        return _PLACE_BY_BUCKET[bucket]
    return _INFO_BY_BUCKET[bucket]


@dataclass
class VerificationReport:
    mismatches: list[tuple[str, str]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.mismatches


def verify_answers(ds: SquadDataset) -> VerificationReport:
    """Re-check every answer offset against its context substring."""
    report = VerificationReport()
    for group in ds.data:
        for para in group.paragraphs:
            for item in para.qas:
                if item.is_impossible:
                    if item.answers:
                        report.mismatches.append(
                            (item.id, "impossible item has answers"))
                    continue
                if not item.answers:
                    report.mismatches.append((item.id, "no answers"))
                    continue
                for ans in item.answers:
                    got = para.context[
                        ans.answer_start:ans.answer_start + len(ans.text)]
                    if got != ans.text:
                        report.mismatches.append((
                            item.id,
                            f"expected {ans.text!r} at {ans.answer_start}, "
                            f"found {got!r}",
                        ))
    return report


def _item_obj(item: QAItem) -> dict:
    # impossible items lead with plausible_answers, answerable items
    # omit the key entirely
    obj: dict = {}
    if item.is_impossible:
        obj["plausible_answers"] = [
            {"text": a.text, "answer_start": a.answer_start}
            for a in item.plausible_answers]
    obj["question"] = item.question
    obj["id"] = item.id
    obj["answers"] = [{"text": a.text, "answer_start": a.answer_start}
                      for a in item.answers]
    obj["is_impossible"] = item.is_impossible
    return obj


def group_json_obj(group: TitleGroup) -> dict:
    """Serializable object for one title group; callers that write the
    same groups into several files can build these once and share them."""
    return {
        "title": group.title,
        "paragraphs": [
            {
                "qas": [_item_obj(item) for item in para.qas],
                "context": para.context,
            }
            for para in group.paragraphs
        ],
    }


def to_json_obj(ds: SquadDataset) -> dict:
    return {
        "version": ds.version,
        "data": [group_json_obj(group) for group in ds.data],
    }


def serialize_dataset(ds: SquadDataset) -> bytes:
    # no indent: compact output keeps json on its C encoder, which is
    # what makes serializing corpus-scale datasets affordable
    return json.dumps(to_json_obj(ds), ensure_ascii=False).encode("utf-8")


def write_datasets_shared(
    parts: list[SquadDataset],
    paths: list,
) -> list[str]:
    """Stream several datasets that share TitleGroup objects to disk
    and return each file's sha256 hex digest.

    Meant for a dataset plus its splits: every group of parts[1:] must
    also appear in parts[0].  Each group is encoded once and the bytes
    go straight to every file holding that group, so no whole file is
    ever held in memory.  File contents equal serialize_dataset(part).
    """
    if len(parts) != len(paths):
        raise ValueError("parts and paths differ in length")
    member: dict[int, list[int]] = {}
    for pi, part in enumerate(parts[1:], start=1):
        for group in part.data:
            member.setdefault(id(group), []).append(pi)

    handles = [open(p, "wb") for p in paths]
    try:
        hashers = [hashlib.sha256() for _ in parts]
        counts = [0] * len(parts)

        def emit(pi: int, chunk: bytes) -> None:
            handles[pi].write(chunk)
            hashers[pi].update(chunk)

        for pi, part in enumerate(parts):
            emit(pi, b'{"version": '
                 + json.dumps(part.version).encode("utf-8") + b', "data": [')
        for group in parts[0].data:
            blob = json.dumps(
                group_json_obj(group), ensure_ascii=False).encode("utf-8")
            for pi in (0, *member.get(id(group), ())):
                if counts[pi]:
                    emit(pi, b", ")
                emit(pi, blob)
                counts[pi] += 1
        for pi in range(len(parts)):
            emit(pi, b"]}")
    finally:
        for handle in handles:
            handle.close()
    bad = [str(paths[pi]) for pi, part in enumerate(parts)
           if counts[pi] != len(part.data)]
    if bad:
        raise ValueError(f"groups missing from parts[0] for: {', '.join(bad)}")
    return [h.hexdigest() for h in hashers]


def _type_from_id(item_id: str) -> QuestionType | None:
    parts = item_id.split(":")
    if len(parts) >= 4:
        try:
            return QuestionType(parts[-2])
        except ValueError:
            return None
    return None


def deserialize_dataset(data: bytes | str | dict) -> SquadDataset:
    obj = json.loads(data) if isinstance(data, (bytes, str)) else data
    if not isinstance(obj, dict) or obj.get("version") != "v2.0":
        raise ValueError("not a v2.0 dataset")
    groups = []
    for g in obj.get("data", []):
        title = g.get("title", "")
        sp = title.rsplit(":", 1)[-1] if ":" in title else ""
        paragraphs = []
        for p in g.get("paragraphs", []):
            qas = []
            for q in p.get("qas", []):
                qas.append(QAItem(
                    question=q["question"],
                    id=q["id"],
                    answers=[Answer(a["text"], a["answer_start"])
                             for a in q.get("answers", [])],
                    is_impossible=bool(q.get("is_impossible", False)),
                    plausible_answers=[Answer(a["text"], a["answer_start"])
                                       for a in q.get("plausible_answers", [])],
                    question_type=_type_from_id(q["id"]),
                ))
            paragraphs.append(Paragraph(context=p.get("context", ""),
                                        qas=qas, sp=sp))
        groups.append(TitleGroup(title=title, paragraphs=paragraphs))
    return SquadDataset(data=groups)


def assemble_dataset(
    paragraphs: list[Paragraph],
    meta: dict | None = None,
) -> SquadDataset:
    """One title group per paragraph; the title is "<tree>:<sp>" with
    the tree id taken from the first item id.  Rejects duplicate ids."""
    meta = meta or {}
    default_tree = meta.get("tree_id", "tree")
    seen_ids: set[str] = set()
    groups: list[TitleGroup] = []
    for para in paragraphs:
        for item in para.qas:
            if item.id in seen_ids:
                raise DuplicateId(item.id)
            seen_ids.add(item.id)
        tree = default_tree
        if para.qas:
            head = para.qas[0].id.split(":")
            if len(head) >= 4:
                tree = head[0]
        groups.append(TitleGroup(
            title=f"{tree}:{para.sp}", paragraphs=[para]))
    return SquadDataset(data=groups)


def assemble_and_serialize(
    paragraphs: list[Paragraph],
    meta: dict | None = None,
) -> tuple[SquadDataset, bytes]:
    ds = assemble_dataset(paragraphs, meta)
    return ds, serialize_dataset(ds)


def iter_items(ds: SquadDataset):
    for group in ds.data:
        for para in group.paragraphs:
            for item in para.qas:
                yield para, item


def count_items(ds: SquadDataset) -> int:
    return sum(1 for _ in iter_items(ds))


def count_by_type(ds: SquadDataset) -> dict[QuestionType, int]:
    counts: dict[QuestionType, int] = {t: 0 for t in TYPE_ORDER}
    for _para, item in iter_items(ds):
        qtype = item.question_type or _type_from_id(item.id)
        if qtype is None:
            qtype = classify_question(item, 0)
        counts[qtype] = counts.get(qtype, 0) + 1
    return counts


def _largest_remainder(total: int, ratios: tuple[float, ...]) -> list[int]:
    raw = [total * r for r in ratios]
    floors = [int(x) for x in raw]
    short = total - sum(floors)
    order = sorted(range(len(ratios)),
                   key=lambda i: (-(raw[i] - floors[i]), i))
    for i in order[:short]:
        floors[i] += 1
    return floors


def split(
    ds: SquadDataset,
    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2),
    seed: int = 0,
) -> tuple[SquadDataset, SquadDataset, SquadDataset]:
    """Seeded train/test/eval partition of title groups.

    Whole title groups move together, so a focus person never appears
    in two splits.  Paragraph counts land within one of the exact
    ratios whenever groups hold one paragraph each.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("split ratios must sum to 1")
    indexed = list(enumerate(ds.data))
    rng = SplitMix64(seed)
    rng.shuffle(indexed)
    total = sum(len(g.paragraphs) for g in ds.data)
    targets = _largest_remainder(total, ratios)
    buckets: list[list[tuple[int, TitleGroup]]] = [[], [], []]
    filled = [0, 0, 0]
    pos = 0
    for original, group in indexed:
        while pos < 2 and filled[pos] >= targets[pos]:
            pos += 1
        buckets[pos].append((original, group))
        filled[pos] += len(group.paragraphs)
    out = []
    for bucket in buckets:
        bucket.sort()
        out.append(SquadDataset(data=[g for _, g in bucket]))
    return out[0], out[1], out[2]


def sample_questions(ds: SquadDataset, n: int, seed: int = 0) -> SquadDataset:
    """Uniform n-item subsample, preserving paragraph order and
    dropping paragraphs and title groups left empty."""
    total = count_items(ds)
    if n > total:
        raise InsufficientQuestions(f"asked for {n} of {total}")
    chosen = set(SplitMix64(seed).sample_indices(total, n))
    groups: list[TitleGroup] = []
    idx = 0
    for group in ds.data:
        paragraphs = []
        for para in group.paragraphs:
            kept = []
            for item in para.qas:
                if idx in chosen:
                    kept.append(item)
                idx += 1
            if kept:
                paragraphs.append(Paragraph(
                    context=para.context, qas=kept,
                    sp=para.sp, depth=para.depth))
        if paragraphs:
            groups.append(TitleGroup(title=group.title, paragraphs=paragraphs))
    return SquadDataset(data=groups, version=ds.version)
