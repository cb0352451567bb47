"""Sentence template library.

Templates are one-per-line ``predicate<TAB>style<TAB>pattern`` with
``[Slot Name]`` placeholders; ``#`` starts a comment.  The built-in
library below is the default; an external file in the same format can
replace it.  Within a predicate the line order matters: the first
usable template of each style class acts as the mandatory pick during
rendering, so the leading lines are the canonical phrasings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DIRECT = "Direct"
PARTIAL = "Partial"
MULTI_HOP = "MultiHopEncapsulation"

_STYLES = {DIRECT, PARTIAL, MULTI_HOP}

_SLOT_RE = re.compile(r"\[([^\]]+)\]")


class TemplateError(ValueError):
    """Malformed template line or unknown style/slot."""


# slot display name -> (resolver key, recorded span label or None)
SLOT_SPECS: dict[str, tuple[str, str | None]] = {
    "First Name": ("subject_first", "first_name"),
    "Last Name": ("subject_last", "last_name"),
    "Relative First Name": ("subject_first", "first_name"),
    "Relative Last Name": ("subject_last", "last_name"),
    "Name relative of SP": ("relation_phrase", "relation_phrase"),
    "Relation to SP": ("relation_phrase", "relation_phrase"),
    "Relation Phrase": ("relation_phrase", "relation_phrase"),
    "Birth Year": ("date", "date"),
    "Death Year": ("date", "date"),
    "Burial Year": ("date", "date"),
    "Marriage Year": ("date", "date"),
    "Baptism Year": ("date", "date"),
    "Endowment Year": ("date", "date"),
    "Sealing Year": ("date", "date"),
    "Event Year": ("date", "date"),
    "Birthplace": ("place", "place"),
    "Death Place": ("place", "place"),
    "Burial Place": ("place", "place"),
    "Marriage Place": ("place", "place"),
    "Baptism Place": ("place", "place"),
    "Place": ("place", "place"),
    "Sex": ("sex", "sex"),
    "Count": ("count", "count"),
    "Noun": ("noun", None),
    "Occupation": ("occupation", "info:occupation"),
    "Note": ("note", "note"),
    "Event Kind": ("event_kind", None),
    "Spouse First Name": ("partner_first", None),
    "Spouse Last Name": ("partner_last", None),
}


@dataclass(frozen=True)
class SentenceTemplate:
    id: str
    predicate: str
    style: str
    pattern: str
    # parsed pattern: ("lit", text) and ("slot", display name) pieces
    segments: tuple[tuple[str, str], ...]
    slots: tuple[str, ...]
    # segment index pairs of adjacent "[First Name] [Last Name]" slots,
    # found once at parse time so rendering need not rescan
    name_pairs: tuple[tuple[int, int], ...] = ()


def _name_pairs(
    segments: tuple[tuple[str, str], ...],
) -> tuple[tuple[int, int], ...]:
    pairs = []
    for i in range(len(segments) - 2):
        if (
            segments[i][0] == "slot"
            and SLOT_SPECS[segments[i][1]][1] == "first_name"
            and segments[i + 1] == ("lit", " ")
            and segments[i + 2][0] == "slot"
            and SLOT_SPECS[segments[i + 2][1]][1] == "last_name"
        ):
            pairs.append((i, i + 2))
    return tuple(pairs)


def _parse_pattern(pattern: str) -> tuple[tuple[tuple[str, str], ...], tuple[str, ...]]:
    segments: list[tuple[str, str]] = []
    slots: list[str] = []
    pos = 0
    for m in _SLOT_RE.finditer(pattern):
        if m.start() > pos:
            segments.append(("lit", pattern[pos:m.start()]))
        name = m.group(1)
        if name not in SLOT_SPECS:
            raise TemplateError(f"unknown slot [{name}] in pattern: {pattern!r}")
        segments.append(("slot", name))
        slots.append(name)
        pos = m.end()
    if pos < len(pattern):
        segments.append(("lit", pattern[pos:]))
    return tuple(segments), tuple(slots)


def parse_library(text: str) -> dict[str, list[SentenceTemplate]]:
    library: dict[str, list[SentenceTemplate]] = {}
    counters: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TemplateError(f"line {lineno}: expected 3 tab-separated fields")
        predicate, style, pattern = parts
        if style not in _STYLES:
            raise TemplateError(f"line {lineno}: unknown style {style!r}")
        segments, slots = _parse_pattern(pattern)
        n = counters.get(predicate, 0)
        counters[predicate] = n + 1
        library.setdefault(predicate, []).append(SentenceTemplate(
            id=f"{predicate}.{n}",
            predicate=predicate,
            style=style,
            pattern=pattern,
            segments=segments,
            slots=slots,
            name_pairs=_name_pairs(segments),
        ))
    return library


def load_library_file(path: str) -> dict[str, list[SentenceTemplate]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_library(fh.read())


BUILTIN_LIBRARY_TEXT = """\
# predicate<TAB>style<TAB>pattern
Birth\tDirect\t[First Name] [Last Name] was born in [Birth Year] in [Birthplace]
Birth\tPartial\t[First Name] was born in [Birth Year] in [Birthplace]
Birth\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was born in [Birth Year] in [Birthplace]
Birth\tPartial\t[First Name] was born in [Birthplace] in [Birth Year]
Birth\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) was born in [Birth Year] in [Birthplace]
Birth\tPartial\tIn [Birth Year] [First Name] was born
Birth\tPartial\t[Birthplace] was [First Name] 's birthplace
Birth\tDirect\t[First Name] [Last Name] was born in [Birth Year]
Birth\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was born in [Birth Year]
Birth\tDirect\t[First Name] [Last Name] was born in [Birthplace]
Birth\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was born in [Birthplace]
Birth\tPartial\t[First Name] was born in [Birth Year]
Death\tDirect\t[First Name] [Last Name] died in [Death Year] in [Death Place]
Death\tPartial\t[First Name] died in [Death Year] in [Death Place]
Death\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) died in [Death Year] in [Death Place]
Death\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) died in [Death Year] in [Death Place]
Death\tPartial\tIn [Death Year] [First Name] died
Death\tDirect\t[First Name] [Last Name] died in [Death Year]
Death\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) died in [Death Year]
Death\tDirect\t[First Name] [Last Name] died in [Death Place]
Death\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) died in [Death Place]
Death\tPartial\t[First Name] died in [Death Place]
Burial\tDirect\t[First Name] [Last Name] was buried in [Burial Place]
Burial\tDirect\t[First Name] [Last Name] was buried in [Burial Year] in [Burial Place]
Burial\tPartial\t[First Name] was buried in [Burial Year] in [Burial Place]
Burial\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was buried in [Burial Year] in [Burial Place]
Burial\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was buried in [Burial Place]
Burial\tPartial\t[Burial Place] was [First Name] 's burial place
Burial\tDirect\t[First Name] [Last Name] was buried in [Burial Year]
Burial\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was buried in [Burial Year]
Burial\tPartial\t[First Name] was buried in [Burial Place]
Baptism\tDirect\t[First Name] [Last Name] was baptized in [Baptism Year]
Baptism\tPartial\t[First Name] was baptized in [Baptism Year]
Baptism\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was baptized in [Baptism Year]
Baptism\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) was baptized in [Baptism Year]
Baptism\tDirect\t[First Name] [Last Name] was baptized in [Baptism Year] in [Baptism Place]
Baptism\tPartial\t[First Name] was baptized in [Baptism Place]
Endowment\tDirect\t[First Name] [Last Name] was endowed in [Endowment Year]
Endowment\tPartial\t[First Name] was endowed in [Endowment Year]
Endowment\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was endowed in [Endowment Year]
Endowment\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) was endowed in [Endowment Year]
SealingChild\tDirect\t[First Name] [Last Name] was sealed to parents in [Sealing Year]
SealingChild\tPartial\t[First Name] was sealed to parents in [Sealing Year]
SealingChild\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was sealed to parents in [Sealing Year]
SealingChild\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) was sealed to parents in [Sealing Year]
Marriage\tDirect\t[First Name] [Last Name] married [Spouse First Name] [Spouse Last Name] in [Marriage Place]
Marriage\tDirect\t[First Name] [Last Name] married [Spouse First Name] [Spouse Last Name] in [Marriage Year]
Marriage\tDirect\t[First Name] [Last Name] got married in [Marriage Year] in [Marriage Place]
Marriage\tPartial\t[First Name] got married in [Marriage Year]
Marriage\tPartial\t[First Name] got married in [Marriage Place]
Marriage\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) got married in [Marriage Year]
Marriage\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) got married in [Marriage Place]
Marriage\tDirect\t[First Name] [Last Name] got married in [Marriage Year]
Sex\tDirect\t[First Name] [Last Name] was a [Sex]
Sex\tPartial\t[First Name] was a [Sex]
Sex\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) was a [Sex]
Sex\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) was a [Sex]
Occupation\tDirect\t[First Name] [Last Name] worked as a(n) [Occupation]
Occupation\tPartial\t[First Name] worked as a(n) [Occupation]
Occupation\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) worked as a(n) [Occupation]
Occupation\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) worked as a(n) [Occupation]
Occupation\tPartial\t[First Name] 's occupation was [Occupation]
Residence\tDirect\t[First Name] [Last Name] lived in [Place]
Residence\tPartial\t[First Name] lived in [Place]
Residence\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) lived in [Place]
Residence\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) lived in [Place]
ChildCount\tDirect\t[First Name] [Last Name] had [Count] [Noun]
ChildCount\tPartial\t[First Name] had [Count] [Noun]
ChildCount\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) had [Count] [Noun]
ChildCount\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) had [Count] [Noun]
SpouseCount\tDirect\t[First Name] [Last Name] had [Count] [Noun]
SpouseCount\tPartial\t[First Name] had [Count] [Noun]
SpouseCount\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) had [Count] [Noun]
SpouseCount\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) had [Count] [Noun]
SiblingCount\tDirect\t[First Name] [Last Name] had [Count] [Noun]
SiblingCount\tPartial\t[First Name] had [Count] [Noun]
SiblingCount\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) had [Count] [Noun]
SiblingCount\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) had [Count] [Noun]
RelationAssertion\tDirect\t[First Name] [Last Name] is [Relation Phrase]
RelationAssertion\tDirect\t[First Name] [Last Name] was [Relation Phrase]
RelationAssertion\tMultiHopEncapsulation\t[Relation Phrase] was [First Name] [Last Name]
RelationAssertion\tMultiHopEncapsulation\t[Relation Phrase] is [First Name] [Last Name]
NoteText\tDirect\t[First Name] [Last Name]: [Note]
NoteText\tPartial\t[First Name]: [Note]
NoteText\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]): [Note]
NoteText\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]): [Note]
OtherEvent\tDirect\t[First Name] [Last Name] had a [Event Kind] record in [Event Year]
OtherEvent\tPartial\t[First Name] had a [Event Kind] record in [Event Year]
OtherEvent\tMultiHopEncapsulation\t[Name relative of SP] ([First Name] [Last Name]) had a [Event Kind] record in [Event Year]
OtherEvent\tMultiHopEncapsulation\t[Relative First Name] [Relative Last Name] ([Relation to SP]) had a [Event Kind] record in [Event Year]
"""

_BUILTIN: dict[str, list[SentenceTemplate]] | None = None


def builtin_library() -> dict[str, list[SentenceTemplate]]:
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = parse_library(BUILTIN_LIBRARY_TEXT)
    return _BUILTIN


def get_library(path: str | None = None) -> dict[str, list[SentenceTemplate]]:
    if path is None:
        return builtin_library()
    return load_library_file(path)
