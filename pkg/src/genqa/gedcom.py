"""GEDCOM 5.5.1 lineage-linked parser.

Produces plain record objects (individuals, families, events, dates)
from decoded GEDCOM text.  Character encoding is the caller's problem;
``parse`` takes a str.  Structural violations (level jumps, malformed
record headers) reject the whole file with StructuralError; everything
recoverable (dangling pointers, asymmetric links, unknown tags) is
repaired or preserved and reported as a warning on the document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ParseError(Exception):
    """Base class for GEDCOM parsing failures."""


class StructuralError(ParseError):
    """Level nesting violated or a record header is malformed."""


class EmptyInput(ParseError):
    """No individual or family records in the input."""


# level, optional @xref@, tag, optional value (value keeps inner spaces)
GEDCOM_LINE_RE = re.compile(
    r"^(?P<level>\d+)\s+(?:(?P<xref>@[^@\s]+@)\s+)?(?P<tag>[A-Za-z0-9_]+)(?: (?P<value>.*))?$"
)

XREF_RE = re.compile(r"@([^@\s]+)@")

MONTHS = {
    "JAN": 1, "FEB": 2, "MAR": 3, "APR": 4, "MAY": 5, "JUN": 6,
    "JUL": 7, "AUG": 8, "SEP": 9, "OCT": 10, "NOV": 11, "DEC": 12,
}
MONTH_NAMES = {v: k for k, v in MONTHS.items()}

# Date qualifiers
EXACT = "Exact"
ABOUT = "About"
BEFORE = "Before"
AFTER = "After"
BETWEEN = "Between"
UNPARSED = "Unparsed"

# Individual/family event tags -> canonical kind names.  Tags that are
# structurally events but not modelled keep their raw tag as the kind.
EVENT_KINDS = {
    "BIRT": "Birth",
    "DEAT": "Death",
    "BURI": "Burial",
    "BAPL": "Baptism",
    "ENDL": "Endowment",
    "SLGC": "SealingChild",
    "MARR": "Marriage",
}

_GENERIC_EVENT_TAGS = {
    "CHR", "CREM", "ADOP", "BAPM", "BARM", "BASM", "BLES", "CONF",
    "FCOM", "ORDN", "NATU", "EMIG", "IMMI", "CENS", "PROB", "WILL",
    "GRAD", "RETI", "EVEN", "CONL", "SLGS", "DIV", "ENGA",
}

# Individual attribute tags carrying a value payload (occupation etc.).
_ATTRIBUTE_TAGS = {
    "OCCU", "RESI", "TITL", "EDUC", "RELI", "NATI", "CAST", "DSCR",
    "IDNO", "NCHI", "NMR", "PROP", "SSN", "FACT",
}

SEX_MALE = "Male"
SEX_FEMALE = "Female"
SEX_UNKNOWN = "Unknown"

_SEX_CODES = {"M": SEX_MALE, "F": SEX_FEMALE}


@dataclass
class RawLine:
    level: int
    xref: str | None
    tag: str
    value: str | None
    lineno: int


@dataclass
class GedcomDate:
    """Parsed date parts; ``raw`` always preserves the input verbatim."""

    raw: str
    day: int | None = None
    month: int | None = None
    year: int | None = None
    qualifier: str = UNPARSED


@dataclass
class EventDetail:
    kind: str
    date: GedcomDate | None = None
    place: str | None = None
    notes: list[str] = field(default_factory=list)
    # subordinate tags we do not model (TEMP, AGNC, ...) survive here
    attributes: dict[str, list[str]] = field(default_factory=dict)


@dataclass
class IndividualRecord:
    id: str
    name_given: str | None = None
    name_surname: str | None = None
    sex: str = SEX_UNKNOWN
    events: list[EventDetail] = field(default_factory=list)
    famc: list[str] = field(default_factory=list)
    fams: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    attributes: dict[str, list[str]] = field(default_factory=dict)

    def full_name(self) -> str:
        parts = [p for p in (self.name_given, self.name_surname) if p]
        return " ".join(parts)

    def events_of(self, kind: str) -> list[EventDetail]:
        return [e for e in self.events if e.kind == kind]

    def first_event(self, kind: str) -> EventDetail | None:
        for e in self.events:
            if e.kind == kind:
                return e
        return None

    def birth_year(self) -> int | None:
        ev = self.first_event("Birth")
        if ev is not None and ev.date is not None:
            return ev.date.year
        return None


@dataclass
class FamilyRecord:
    id: str
    husband: str | None = None
    wife: str | None = None
    children: list[str] = field(default_factory=list)
    events: list[EventDetail] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    attributes: dict[str, list[str]] = field(default_factory=dict)

    def parents(self) -> list[str]:
        return [p for p in (self.husband, self.wife) if p]

    def members(self) -> list[str]:
        return self.parents() + list(self.children)


@dataclass
class ParseWarning:
    lineno: int
    message: str


@dataclass
class GedcomDocument:
    source_path: str
    individuals: dict[str, IndividualRecord] = field(default_factory=dict)
    families: dict[str, FamilyRecord] = field(default_factory=dict)
    warnings: list[ParseWarning] = field(default_factory=list)

    def warning_lines(self) -> list[str]:
        """Diagnostics in the ``WARN <file>:<line> <message>`` format."""
        return [
            f"WARN {self.source_path}:{w.lineno} {w.message}"
            for w in self.warnings
        ]


def tokenize_line(line: str, lineno: int) -> RawLine:
    m = GEDCOM_LINE_RE.match(line.rstrip("\r\n"))
    if m is None:
        raise StructuralError(f"line {lineno}: not a GEDCOM line: {line!r}")
    return RawLine(
        level=int(m.group("level")),
        xref=m.group("xref"),
        tag=m.group("tag").upper(),
        value=m.group("value"),
        lineno=lineno,
    )


def tokenize(text: str) -> list[RawLine]:
    """Tokenize text into RawLines, enforcing the level-nesting rule."""
    lines: list[RawLine] = []
    prev_level = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if lineno == 1:
            raw = raw.lstrip("﻿")
        if not raw.strip():
            continue
        tok = tokenize_line(raw, lineno)
        if prev_level < 0 and tok.level != 0:
            raise StructuralError(
                f"line {lineno}: level {tok.level} before any record"
            )
        if prev_level >= 0 and tok.level > prev_level + 1:
            raise StructuralError(
                f"line {lineno}: level jumps from {prev_level} to {tok.level}"
            )
        if tok.level == 0 and tok.xref is None and tok.tag not in (
            "HEAD", "TRLR", "NOTE", "SUBM", "SUBN", "SOUR", "REPO", "OBJE"
        ):
            raise StructuralError(
                f"line {lineno}: malformed record header {raw!r}"
            )
        lines.append(tok)
        prev_level = tok.level
    return lines


def parse_date(raw: str) -> GedcomDate:
    """Parse a GEDCOM DATE payload.  Total: never raises.

    Handles the exact forms (``28 MAY 1816``, ``MAY 1816``, ``1816``)
    and the ABT/EST/CAL, BEF, AFT and BET..AND qualifiers.  Anything
    else comes back with qualifier Unparsed and the raw text intact.
    """
    date = GedcomDate(raw=raw)
    text = raw.strip().upper()
    if not text:
        return date

    qualifier = EXACT
    if text.startswith(("ABT ", "ABOUT ")):
        qualifier = ABOUT
        text = text.split(" ", 1)[1]
    elif text.startswith(("EST ", "CAL ")):
        qualifier = ABOUT
        text = text.split(" ", 1)[1]
    elif text.startswith(("BEF ", "BEFORE ")):
        qualifier = BEFORE
        text = text.split(" ", 1)[1]
    elif text.startswith(("AFT ", "AFTER ")):
        qualifier = AFTER
        text = text.split(" ", 1)[1]
    elif text.startswith("BET "):
        qualifier = BETWEEN
        # parts come from the lower bound
        text = text[4:].split(" AND ", 1)[0]

    parts = text.strip().split()
    day = month = year = None
    ok = False
    if len(parts) == 3 and parts[0].isdigit() and parts[1] in MONTHS:
        day, month = int(parts[0]), MONTHS[parts[1]]
        year, ok = _parse_year(parts[2])
        ok = ok and 1 <= day <= 31
    elif len(parts) == 2 and parts[0] in MONTHS:
        month = MONTHS[parts[0]]
        year, ok = _parse_year(parts[1])
    elif len(parts) == 1:
        year, ok = _parse_year(parts[0])

    if not ok:
        return date  # qualifier stays Unparsed, raw preserved
    date.day, date.month, date.year = day, month, year
    date.qualifier = qualifier
    return date


def _parse_year(token: str) -> tuple[int | None, bool]:
    # allow the dual-year form 1721/22
    m = re.fullmatch(r"(\d{1,4})(?:/\d{2})?", token)
    if m is None:
        return None, False
    return int(m.group(1)), True


def format_date_exact(date: GedcomDate) -> str:
    """Serialize parsed parts back to the canonical exact form."""
    if date.year is None:
        return date.raw
    parts = []
    if date.day is not None and date.month is not None:
        parts.append(str(date.day))
    if date.month is not None:
        parts.append(MONTH_NAMES[date.month])
    parts.append(str(date.year))
    return " ".join(parts)


def _extract_xref(value: str | None) -> str | None:
    if not value:
        return None
    m = XREF_RE.search(value)
    return f"@{m.group(1)}@" if m else None


def _parse_name(value: str) -> tuple[str | None, str | None]:
    value = value.strip()
    if not value:
        return None, None
    if "/" in value:
        before, _, rest = value.partition("/")
        surname, _, _ = rest.partition("/")
        given = before.strip() or None
        return given, surname.strip() or None
    tokens = value.split()
    if len(tokens) == 1:
        return tokens[0], None
    return " ".join(tokens[:-1]), tokens[-1]


class _RecordBuilder:
    """Shared substructure handling for INDI and FAM record bodies."""

    def __init__(self, doc: GedcomDocument):
        self.doc = doc
        self.current_event: EventDetail | None = None
        # target list for CONT/CONC continuation, plus its owner
        self._note_target: list[str] | None = None

    def warn(self, lineno: int, message: str) -> None:
        self.doc.warnings.append(ParseWarning(lineno, message))

    def add_note(self, notes: list[str], value: str | None) -> None:
        notes.append(value or "")
        self._note_target = notes

    def continue_note(self, line: RawLine) -> None:
        if self._note_target is None or not self._note_target:
            self.warn(line.lineno, f"{line.tag} with no preceding text value")
            return
        joiner = "\n" if line.tag == "CONT" else ""
        self._note_target[-1] += joiner + (line.value or "")

    def handle_event_sub(self, line: RawLine) -> None:
        ev = self.current_event
        if ev is None:
            return
        if line.tag == "DATE":
            ev.date = parse_date(line.value or "")
        elif line.tag == "PLAC":
            ev.place = (line.value or "").strip() or None
        elif line.tag == "NOTE":
            self.add_note(ev.notes, line.value)
        elif line.tag in ("CONT", "CONC"):
            self.continue_note(line)
        else:
            ev.attributes.setdefault(line.tag, []).append(line.value or "")


def _parse_individual(rec_lines: list[RawLine], doc: GedcomDocument) -> IndividualRecord:
    head = rec_lines[0]
    indi = IndividualRecord(id=head.xref)
    b = _RecordBuilder(doc)
    for line in rec_lines[1:]:
        if line.level == 1:
            b.current_event = None
            b._note_target = None
            tag, value = line.tag, line.value
            if tag == "NAME":
                if indi.name_given is None and indi.name_surname is None:
                    indi.name_given, indi.name_surname = _parse_name(value or "")
                else:
                    indi.attributes.setdefault("NAME", []).append(value or "")
            elif tag == "SEX":
                indi.sex = _SEX_CODES.get((value or "").strip().upper(), SEX_UNKNOWN)
            elif tag == "FAMC":
                ref = _extract_xref(value)
                if ref:
                    if ref not in indi.famc:
                        indi.famc.append(ref)
                else:
                    b.warn(line.lineno, f"FAMC without pointer: {value!r}")
            elif tag == "FAMS":
                ref = _extract_xref(value)
                if ref:
                    if ref not in indi.fams:
                        indi.fams.append(ref)
                else:
                    b.warn(line.lineno, f"FAMS without pointer: {value!r}")
            elif tag == "NOTE":
                b.add_note(indi.notes, value)
            elif tag in EVENT_KINDS or tag in _GENERIC_EVENT_TAGS:
                kind = EVENT_KINDS.get(tag, tag)
                b.current_event = EventDetail(kind=kind)
                indi.events.append(b.current_event)
            elif tag in ("CONT", "CONC"):
                b.continue_note(line)
            else:
                # attribute tags and anything unknown: preserved, never dropped
                indi.attributes.setdefault(tag, []).append(value or "")
                if tag in _ATTRIBUTE_TAGS:
                    b._note_target = None
        elif line.level >= 2:
            if line.tag in ("CONT", "CONC") and b.current_event is None:
                b.continue_note(line)
            elif b.current_event is not None:
                b.handle_event_sub(line)
            elif line.tag == "PLAC" and "RESI" in indi.attributes and not indi.attributes["RESI"][-1]:
                # bare RESI with a PLAC substructure: place is the value
                indi.attributes["RESI"][-1] = (line.value or "").strip()
            # other deep substructure under non-events is ignored
    return indi


def _parse_family(rec_lines: list[RawLine], doc: GedcomDocument) -> FamilyRecord:
    head = rec_lines[0]
    fam = FamilyRecord(id=head.xref)
    b = _RecordBuilder(doc)
    for line in rec_lines[1:]:
        if line.level == 1:
            b.current_event = None
            b._note_target = None
            tag, value = line.tag, line.value
            if tag == "HUSB":
                fam.husband = _extract_xref(value)
            elif tag == "WIFE":
                fam.wife = _extract_xref(value)
            elif tag == "CHIL":
                ref = _extract_xref(value)
                if ref:
                    if ref not in fam.children:
                        fam.children.append(ref)
                else:
                    b.warn(line.lineno, f"CHIL without pointer: {value!r}")
            elif tag == "NOTE":
                b.add_note(fam.notes, value)
            elif tag in EVENT_KINDS or tag in _GENERIC_EVENT_TAGS:
                b.current_event = EventDetail(kind=EVENT_KINDS.get(tag, tag))
                fam.events.append(b.current_event)
            elif tag in ("CONT", "CONC"):
                b.continue_note(line)
            else:
                fam.attributes.setdefault(tag, []).append(value or "")
        elif line.level >= 2:
            if line.tag in ("CONT", "CONC") and b.current_event is None:
                b.continue_note(line)
            elif b.current_event is not None:
                b.handle_event_sub(line)
    return fam


def parse(text: str, source_path: str = "<string>") -> GedcomDocument:
    """Parse decoded GEDCOM text into a document.

    Raises StructuralError for level/header violations and EmptyInput
    when the file holds no individual or family records.  All softer
    anomalies land in ``doc.warnings``.
    """
    lines = tokenize(text)
    doc = GedcomDocument(source_path=source_path)

    # split into records at level-0 lines
    records: list[list[RawLine]] = []
    for line in lines:
        if line.level == 0:
            records.append([line])
        else:
            records[-1].append(line)

    for rec in records:
        head = rec[0]
        if head.tag == "INDI":
            indi = _parse_individual(rec, doc)
            if indi.id in doc.individuals:
                doc.warnings.append(ParseWarning(
                    head.lineno, f"duplicate individual id {indi.id}; keeping first"))
            else:
                doc.individuals[indi.id] = indi
        elif head.tag == "FAM":
            fam = _parse_family(rec, doc)
            if fam.id in doc.families:
                doc.warnings.append(ParseWarning(
                    head.lineno, f"duplicate family id {fam.id}; keeping first"))
            else:
                doc.families[fam.id] = fam
        elif head.tag in ("HEAD", "TRLR"):
            continue
        else:
            doc.warnings.append(ParseWarning(
                head.lineno, f"unhandled record type {head.tag}"))

    if not doc.individuals and not doc.families:
        raise EmptyInput(f"{source_path}: no individual or family records")

    _reconcile_links(doc)
    return doc


def parse_file(path: str) -> GedcomDocument:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError:
        text = data.decode("latin-1")
    return parse(text, source_path=str(path))


def _warn(doc: GedcomDocument, message: str) -> None:
    doc.warnings.append(ParseWarning(0, message))


def _reconcile_links(doc: GedcomDocument) -> None:
    """Union FAMC/FAMS with HUSB/WIFE/CHIL; warn on every asymmetry.

    Dangling pointers stay on the record (the graph builder skips
    them); one-sided links are added to the other side.
    """
    for pid, indi in doc.individuals.items():
        for fid in indi.famc:
            fam = doc.families.get(fid)
            if fam is None:
                _warn(doc, f"{pid} FAMC {fid} does not resolve")
            elif pid not in fam.children:
                fam.children.append(pid)
                _warn(doc, f"{pid} FAMC {fid} missing from CHIL; added")
        for fid in indi.fams:
            fam = doc.families.get(fid)
            if fam is None:
                _warn(doc, f"{pid} FAMS {fid} does not resolve")
            elif pid not in (fam.husband, fam.wife):
                # attach in the parent role, slot by sex when free
                if indi.sex == SEX_MALE and fam.husband is None:
                    fam.husband = pid
                elif indi.sex == SEX_FEMALE and fam.wife is None:
                    fam.wife = pid
                elif fam.husband is None:
                    fam.husband = pid
                elif fam.wife is None:
                    fam.wife = pid
                else:
                    _warn(doc, f"{pid} FAMS {fid} but both parent slots taken")
                    continue
                _warn(doc, f"{pid} FAMS {fid} missing from HUSB/WIFE; added")

    for fid, fam in doc.families.items():
        for role, pid in (("HUSB", fam.husband), ("WIFE", fam.wife)):
            if pid is None:
                continue
            indi = doc.individuals.get(pid)
            if indi is None:
                _warn(doc, f"{fid} {role} {pid} does not resolve")
            elif fid not in indi.fams:
                indi.fams.append(fid)
                _warn(doc, f"{fid} {role} {pid} missing FAMS; added")
        for pid in fam.children:
            indi = doc.individuals.get(pid)
            if indi is None:
                _warn(doc, f"{fid} CHIL {pid} does not resolve")
            elif fid not in indi.famc:
                indi.famc.append(fid)
                _warn(doc, f"{fid} CHIL {pid} missing FAMC; added")


def filter_living(doc: GedcomDocument, cutoff_year: int) -> GedcomDocument:
    """Drop probably-living persons; returns a new document.

    A person is removed when they have no Death and no Burial event and
    their birth year is unknown or later than ``cutoff_year``.  Families
    left with no members are dropped, and surviving records only point
    at surviving records.  Idempotent; the input is not modified.
    """
    keep: dict[str, IndividualRecord] = {}
    for pid, indi in doc.individuals.items():
        has_death = any(e.kind in ("Death", "Burial") for e in indi.events)
        birth_year = indi.birth_year()
        if has_death or (birth_year is not None and birth_year <= cutoff_year):
            keep[pid] = indi

    families: dict[str, FamilyRecord] = {}
    for fid, fam in doc.families.items():
        husband = fam.husband if fam.husband in keep else None
        wife = fam.wife if fam.wife in keep else None
        children = [c for c in fam.children if c in keep]
        if husband is None and wife is None and not children:
            continue
        families[fid] = FamilyRecord(
            id=fam.id, husband=husband, wife=wife, children=children,
            events=fam.events, notes=fam.notes, attributes=fam.attributes,
        )

    individuals: dict[str, IndividualRecord] = {}
    for pid, indi in keep.items():
        famc = [f for f in indi.famc if f in families]
        fams = [f for f in indi.fams if f in families]
        individuals[pid] = IndividualRecord(
            id=indi.id, name_given=indi.name_given,
            name_surname=indi.name_surname, sex=indi.sex,
            events=indi.events, famc=famc, fams=fams,
            notes=indi.notes, attributes=indi.attributes,
        )

    return GedcomDocument(
        source_path=doc.source_path,
        individuals=individuals,
        families=families,
        warnings=list(doc.warnings),
    )
