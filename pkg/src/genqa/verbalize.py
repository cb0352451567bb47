"""Fact extraction and passage rendering.

Each sub-graph member contributes standalone single-fact sentences
(events, sex, occupation, residence, counts, relation assertions,
notes).  Sentences are rendered from the template library in several
reference styles, shuffled with a seeded PRNG, and joined into one
passage; every answer-bearing slot is recorded as a character span into
the final text, which downstream question generation treats as ground
truth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cidoc import KnowledgeGraph, PropertyCode
from .gedcom import SEX_FEMALE, SEX_MALE, GedcomDocument
from .graph import RELATIVE
from .rng import SplitMix64
from .templates import DIRECT, MULTI_HOP, PARTIAL, SLOT_SPECS, SentenceTemplate, builtin_library
from .traversal import FAMILY, PERSON, ScopedSubgraph


class MissingSlot(KeyError):
    """Template slot has no value for this fact."""


class EmptyPassage(ValueError):
    """No renderable facts for this sub-graph."""


@dataclass(slots=True)
class Fact:
    subject: str              # person id the fact is about
    predicate: str            # Birth/Death/.../RelationAssertion/NoteText/OtherEvent
    object_value: str
    object_kind: str          # date/place/count/name/relation/free_text
    secondary_object: str | None = None
    extras: dict = field(default_factory=dict)


@dataclass(slots=True)
class FactSpan:
    fact_index: int
    label: str                # date/place/count/sex/full_name/... see SLOT_SPECS
    start: int
    end: int
    text: str


@dataclass
class VerbalizedPassage:
    sp: str
    text: str
    facts: list[Fact]
    fact_spans: list[FactSpan]
    sentence_order_seed: int


@dataclass
class VerbalizerConfig:
    min_variants: int = 2
    max_variants: int = 3
    library: dict[str, list[SentenceTemplate]] | None = None

    def resolved_library(self) -> dict[str, list[SentenceTemplate]]:
        return self.library if self.library is not None else builtin_library()


_COUNT_WORDS = [
    "zero", "one", "two", "three", "four", "five", "six",
    "seven", "eight", "nine", "ten", "eleven", "twelve",
]


def count_word(n: int) -> str:
    """Counts up to twelve as words, larger ones as digits."""
    return _COUNT_WORDS[n] if 0 <= n < len(_COUNT_WORDS) else str(n)


_NOTE_PATTERNS: list[tuple[str, re.Pattern]] = [
    ("occupation", re.compile(r"\bworked as an? ([^.,;\n]+)", re.IGNORECASE)),
    ("occupation", re.compile(r"\bwas an? ([^.,;\n]+?) by (?:profession|trade)", re.IGNORECASE)),
    ("illness", re.compile(r"\bsuffered from ([^.,;\n]+)", re.IGNORECASE)),
    ("illness", re.compile(r"\bdiagnosed with ([^.,;\n]+)", re.IGNORECASE)),
    ("military_rank", re.compile(
        r"\bheld the rank of ([^.,;\n]+?) in the (?:military|army)", re.IGNORECASE)),
    ("military_rank", re.compile(
        r"\bserved as an? ([^.,;\n]+?) in the (?:military|army)", re.IGNORECASE)),
]


def extract_note_values(text: str) -> list[tuple[str, str, int]]:
    """Named values mined from free-text notes: (label, value, offset)."""
    found: list[tuple[str, str, int]] = []
    for label, pattern in _NOTE_PATTERNS:
        for m in pattern.finditer(text):
            value = m.group(1).strip()
            if value:
                found.append((label, value, m.start(1)))
    return found


_EVENT_PREDICATES = {
    "Birth", "Death", "Burial", "Baptism", "Endowment", "SealingChild",
}


def _event_date_text(event) -> str | None:
    if event.date is None:
        return None
    if event.date.year is not None:
        return str(event.date.year)
    raw = event.date.raw.strip()
    return raw or None


@dataclass
class Membership:
    """Family membership index over the knowledge graph."""

    parent_groups: dict[str, list[str]] = field(default_factory=dict)
    child_groups: dict[str, list[str]] = field(default_factory=dict)
    group_parents: dict[str, list[str]] = field(default_factory=dict)
    group_children: dict[str, list[str]] = field(default_factory=dict)


def build_membership(kg: KnowledgeGraph) -> Membership:
    m = Membership()
    for e in kg.edges:
        if e.property is PropertyCode.MemberAsParent:
            m.parent_groups.setdefault(e.source, []).append(e.target)
            m.group_parents.setdefault(e.target, []).append(e.source)
        elif e.property is PropertyCode.MemberAsChild:
            m.child_groups.setdefault(e.source, []).append(e.target)
            m.group_children.setdefault(e.target, []).append(e.source)
    return m


def _children_of(m: Membership, pid: str) -> list[str]:
    out: list[str] = []
    for gid in m.parent_groups.get(pid, ()):
        for c in m.group_children.get(gid, ()):
            if c not in out:
                out.append(c)
    return out


def _spouses_of(m: Membership, pid: str) -> list[str]:
    out: list[str] = []
    for gid in m.parent_groups.get(pid, ()):
        for p in m.group_parents.get(gid, ()):
            if p != pid and p not in out:
                out.append(p)
    return out


def _siblings_of(m: Membership, pid: str) -> list[str]:
    out: list[str] = []
    for gid in m.child_groups.get(pid, ()):
        for c in m.group_children.get(gid, ()):
            if c != pid and c not in out:
                out.append(c)
    return out


def _noun(n: int, singular: str, plural: str) -> str:
    return singular if n == 1 else plural


def _sp_anchor_phrase(sub: ScopedSubgraph, doc: GedcomDocument, sp_sex: str) -> str | None:
    """Relation phrase for facts about the starting person, anchored on
    a parent when one is present, otherwise on a spouse."""
    parents = []
    spouses = []
    for node in sub.nodes:
        if node.kind != PERSON or node.id == sub.sp:
            continue
        rec = doc.individuals.get(node.id)
        if rec is None or not rec.name_given:
            continue
        if node.term in ("father", "mother", "parent"):
            parents.append((node.id, rec.name_given))
        elif node.term in ("husband", "wife", "spouse"):
            spouses.append((node.id, rec.name_given))
    if parents:
        anchor = min(parents)[1]
        term = {SEX_MALE: "son", SEX_FEMALE: "daughter"}.get(sp_sex, "child")
        return f"{anchor}'s {term}"
    if spouses:
        anchor = min(spouses)[1]
        term = {SEX_MALE: "husband", SEX_FEMALE: "wife"}.get(sp_sex, "spouse")
        return f"{anchor}'s {term}"
    return None


def facts_from_subgraph(
    sub: ScopedSubgraph,
    kg: KnowledgeGraph,
    doc: GedcomDocument,
    membership: Membership | None = None,
) -> list[Fact]:
    """One fact per member attribute, in (person id, declaration) order.

    ``membership`` may be passed in when the caller processes many
    sub-graphs of the same document, to avoid re-indexing the graph.
    """
    m = membership if membership is not None else build_membership(kg)
    facts: list[Fact] = []

    terms = {n.id: n.term for n in sub.nodes if n.kind == PERSON}
    persons = sorted(terms)
    sp_rec = doc.individuals.get(sub.sp)
    sp_first = sp_rec.name_given if sp_rec is not None else None

    refs: dict[str, dict] = {}
    for pid in persons:
        rec = doc.individuals.get(pid)
        if rec is None:
            continue
        if pid == sub.sp:
            phrase = _sp_anchor_phrase(sub, doc, rec.sex)
        elif sp_first and terms[pid] != "self":
            phrase = f"{sp_first}'s {terms[pid]}"
        else:
            phrase = None
        refs[pid] = {
            "subject_first": rec.name_given,
            "subject_last": rec.name_surname,
            "relation_phrase": phrase,
        }

    for pid in persons:
        rec = doc.individuals.get(pid)
        if rec is None:
            continue
        ref = refs[pid]

        for event in rec.events:
            date_text = _event_date_text(event)
            if date_text is None and not event.place:
                continue
            if event.kind in _EVENT_PREDICATES:
                predicate, extras = event.kind, ref
            else:
                predicate = "OtherEvent"
                extras = {**ref, "event_kind": event.kind}
            facts.append(Fact(
                subject=pid, predicate=predicate,
                object_value=date_text or "", object_kind="date",
                secondary_object=event.place, extras=extras,
            ))
            for note in event.notes:
                text = " ".join(note.split())
                if text:
                    facts.append(Fact(
                        subject=pid, predicate="NoteText",
                        object_value=text, object_kind="free_text",
                        extras={**ref, "extractions": extract_note_values(text)},
                    ))

        if rec.sex in (SEX_MALE, SEX_FEMALE):
            facts.append(Fact(
                subject=pid, predicate="Sex",
                object_value=rec.sex.lower(), object_kind="free_text",
                extras=ref,
            ))

        for value in rec.attributes.get("OCCU", ()):
            value = value.strip()
            if value:
                facts.append(Fact(
                    subject=pid, predicate="Occupation",
                    object_value=value, object_kind="free_text", extras=ref,
                ))

        for value in rec.attributes.get("RESI", ()):
            value = value.strip()
            if value:
                facts.append(Fact(
                    subject=pid, predicate="Residence",
                    object_value=value, object_kind="place", extras=ref,
                ))

        children = _children_of(m, pid)
        if children:
            n = len(children)
            facts.append(Fact(
                subject=pid, predicate="ChildCount",
                object_value=count_word(n), object_kind="count",
                extras={**ref, "noun": _noun(n, "child", "children"),
                        "noun_plural": "children", "count": n},
            ))
        spouses = _spouses_of(m, pid)
        if spouses:
            n = len(spouses)
            sexes = {doc.individuals[s].sex for s in spouses if s in doc.individuals}
            if sexes == {SEX_MALE}:
                noun, plural = _noun(n, "husband", "husbands"), "husbands"
            elif sexes == {SEX_FEMALE}:
                noun, plural = _noun(n, "wife", "wives"), "wives"
            else:
                noun, plural = _noun(n, "spouse", "spouses"), "spouses"
            facts.append(Fact(
                subject=pid, predicate="SpouseCount",
                object_value=count_word(n), object_kind="count",
                extras={**ref, "noun": noun, "noun_plural": plural, "count": n},
            ))
        siblings = _siblings_of(m, pid)
        if siblings:
            groups = [(siblings, "sibling", "siblings")]
            brothers = [s for s in siblings
                        if doc.individuals.get(s) is not None
                        and doc.individuals[s].sex == SEX_MALE]
            sisters = [s for s in siblings
                       if doc.individuals.get(s) is not None
                       and doc.individuals[s].sex == SEX_FEMALE]
            if brothers:
                groups.append((brothers, "brother", "brothers"))
            if sisters:
                groups.append((sisters, "sister", "sisters"))
            for members, singular, plural in groups:
                n = len(members)
                facts.append(Fact(
                    subject=pid, predicate="SiblingCount",
                    object_value=count_word(n), object_kind="count",
                    extras={**ref, "noun": _noun(n, singular, plural),
                            "noun_plural": plural, "count": n},
                ))

        if pid != sub.sp and terms[pid] not in ("self", RELATIVE) and ref["relation_phrase"]:
            facts.append(Fact(
                subject=pid, predicate="RelationAssertion",
                object_value=rec.full_name(), object_kind="name", extras=ref,
            ))

        for note in rec.notes:
            text = " ".join(note.split())
            if text:
                facts.append(Fact(
                    subject=pid, predicate="NoteText",
                    object_value=text, object_kind="free_text",
                    extras={**ref, "extractions": extract_note_values(text)},
                ))

    # family-level marriages, subject = first named parent in the result
    for fid in sorted(n.id for n in sub.nodes if n.kind == FAMILY):
        fam = doc.families.get(fid)
        if fam is None:
            continue
        for event in fam.events:
            if event.kind != "Marriage":
                continue
            date_text = _event_date_text(event)
            if date_text is None and not event.place:
                continue
            named = [p for p in sorted(fam.parents())
                     if p in refs and refs[p]["subject_first"]]
            if not named:
                continue
            subject = named[0]
            partner = next((p for p in sorted(fam.parents()) if p != subject), None)
            partner_rec = doc.individuals.get(partner) if partner else None
            extras = {
                **refs[subject],
                "partner_id": partner,
                "partner_first": partner_rec.name_given if partner_rec else None,
                "partner_last": partner_rec.name_surname if partner_rec else None,
            }
            facts.append(Fact(
                subject=subject, predicate="Marriage",
                object_value=date_text or "", object_kind="date",
                secondary_object=event.place, extras=extras,
            ))

    return facts


def _resolve(fact: Fact, slot_name: str) -> str | None:
    key = SLOT_SPECS[slot_name][0]
    if key == "date":
        return fact.object_value or None if fact.object_kind == "date" else None
    if key == "place":
        if fact.secondary_object:
            return fact.secondary_object
        return fact.object_value or None if fact.object_kind == "place" else None
    if key in ("sex", "count", "occupation", "note"):
        return fact.object_value or None
    return fact.extras.get(key) or None


_VOWELS = "aeiouAEIOU"
_TERMINALS = (".", "!", "?")


def render_sentence(
    template: SentenceTemplate,
    fact: Fact,
    resolved_values: dict[str, str | None] | None = None,
) -> tuple[str, list[tuple[str, int, int]]]:
    """Render one sentence; returns (text, [(label, start, end), ...]).

    Raises MissingSlot when the fact cannot fill the pattern.  The
    pattern quirks handled here: a literal " 's" attaches to the
    preceding slot ("John's"), and "a(n)" resolves against the next
    slot's first letter.  ``resolved_values`` lets a caller that has
    already resolved this fact's slots skip doing it again.
    """
    segments = template.segments
    parts: list[str] = []
    pos = 0
    seg_pos: list[tuple[int, int]] = []
    spans: list[tuple[str, int, int]] = []

    if resolved_values is not None:
        get = resolved_values.get
        values = [get(p) if k == "slot" else None for k, p in segments]
    else:
        values = [_resolve(fact, p) if k == "slot" else None
                  for k, p in segments]

    for i, (kind, payload) in enumerate(segments):
        if kind == "lit":
            lit = payload
            if lit.startswith(" 's"):
                lit = lit[1:]
            if "a(n)" in lit:
                nxt = next((v for v in values[i + 1:] if v is not None), "")
                article = "an" if nxt[:1] in _VOWELS else "a"
                lit = lit.replace("a(n)", article)
            seg_pos.append((pos, pos + len(lit)))
            parts.append(lit)
            pos += len(lit)
        else:
            value = values[i]
            if not value:
                raise MissingSlot(f"{template.id}: no value for [{payload}]")
            start = pos
            parts.append(value)
            pos += len(value)
            seg_pos.append((start, pos))
            label = SLOT_SPECS[payload][1]
            if label:
                spans.append((label, start, pos))

    # adjacent "[First Name] [Last Name]" also yields a full-name span
    for i, j in template.name_pairs:
        spans.append(("full_name", seg_pos[i][0], seg_pos[j][1]))

    text = "".join(parts)

    if fact.predicate == "NoteText":
        note_start = next(
            (seg_pos[i][0] for i, seg in enumerate(segments)
             if seg == ("slot", "Note")), None)
        if note_start is not None:
            for label, value, offset in fact.extras.get("extractions", ()):
                spans.append((
                    f"info:{label}",
                    note_start + offset,
                    note_start + offset + len(value),
                ))

    return text, spans


def render_passage(
    sub: ScopedSubgraph,
    facts: list[Fact],
    config: VerbalizerConfig,
    seed: int,
    sentence_cache: dict | None = None,
) -> VerbalizedPassage:
    """Render min..max seeded template variants per fact and shuffle.

    Every fact gets at least one Direct or Partial sentence; facts about
    persons other than the starting person also get a relation-mediated
    sentence, so both name-based and relation-based questions can be
    answered from a single sentence.

    ``sentence_cache`` may be shared across calls whose facts come from
    the same tree: a sentence depends only on the template and its slot
    values, so passages with overlapping scopes reuse renders.
    """
    if config.min_variants < 1 or config.max_variants < config.min_variants:
        raise ValueError("variant bounds must satisfy 1 <= min <= max")
    if not facts:
        raise EmptyPassage(f"no facts for {sub.sp}")

    library = config.resolved_library()
    rng = SplitMix64(seed)
    rendered: list[tuple[str, int, list[tuple[str, int, int]]]] = []

    # facts of one predicate mostly share the same filled-slot shape,
    # so the usable-template list is cached per (predicate, shape)
    slot_universe: dict[str, tuple[str, ...]] = {}
    avail_cache: dict[tuple, tuple] = {}

    for idx, fact in enumerate(facts):
        # draw unconditionally so the stream only depends on fact count
        k_draw = config.min_variants + rng.below(
            config.max_variants - config.min_variants + 1)
        templates = library.get(fact.predicate, ())
        if not templates:
            continue
        universe = slot_universe.get(fact.predicate)
        if universe is None:
            universe = tuple(dict.fromkeys(
                s for t in templates for s in t.slots))
            slot_universe[fact.predicate] = universe
        resolved = {s: _resolve(fact, s) for s in universe}
        shape = (fact.predicate,) + tuple(
            bool(resolved[s]) for s in universe)
        cached = avail_cache.get(shape)
        if cached is None:
            available = [t for t in templates
                         if all(resolved[s] for s in t.slots)]
            plain = next(
                (t for t in available if t.style in (DIRECT, PARTIAL)), None)
            hop = next((t for t in available if t.style == MULTI_HOP), None)
            cached = (available, plain, hop)
            avail_cache[shape] = cached
        available, plain, hop = cached
        if not available:
            continue
        mandatory = []
        if plain is not None:
            mandatory.append(plain)
        if fact.subject != sub.sp and hop is not None and hop is not plain:
            mandatory.append(hop)
        k = min(max(k_draw, len(mandatory)), len(available))
        chosen = list(mandatory)
        # drop already-chosen templates by identity; field-wise
        # comparison is needless here and shows up at corpus scale
        chosen_ids = {id(t) for t in chosen}
        remaining = [t for t in available if id(t) not in chosen_ids]
        while len(chosen) < k and remaining:
            chosen.append(remaining.pop(rng.below(len(remaining))))
        if sentence_cache is None or fact.predicate == "NoteText":
            # NoteText spans also depend on per-fact extractions, so
            # slot values alone are not a sound cache key for them
            for t in chosen:
                text, spans = render_sentence(t, fact, resolved)
                rendered.append((text, idx, spans))
        else:
            for t in chosen:
                key = (id(t),) + tuple(resolved[s] for s in t.slots)
                hit = sentence_cache.get(key)
                if hit is None:
                    hit = sentence_cache[key] = render_sentence(
                        t, fact, resolved)
                rendered.append((hit[0], idx, hit[1]))

    if not rendered:
        raise EmptyPassage(f"no renderable facts for {sub.sp}")

    rng.shuffle(rendered)

    chunks: list[str] = []
    out_spans: list[FactSpan] = []
    pos = 0
    for text, fact_idx, spans in rendered:
        if not text.endswith(_TERMINALS):
            text += "."
        for label, s, e in spans:
            out_spans.append(
                FactSpan(fact_idx, label, pos + s, pos + e, text[s:e]))
        chunks.append(text)
        pos += len(text) + 1  # single space joins sentences

    return VerbalizedPassage(
        sp=sub.sp,
        text=" ".join(chunks),
        facts=facts,
        fact_spans=out_spans,
        sentence_order_seed=seed,
    )
