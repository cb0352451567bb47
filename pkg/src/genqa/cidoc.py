"""Event-centric knowledge graph over a parsed GEDCOM document.

Persons and families become typed nodes; each life event becomes an
event node connected to its place and time-span.  The class set is
closed; every edge must match the schema table, which keeps downstream
consumers (verbalization, debugging exports) on a fixed contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .gedcom import GedcomDocument


class SchemaViolation(ValueError):
    """Edge (source class, property, target class) not in the schema."""


class NodeClass(str, Enum):
    PersonE21 = "PersonE21"
    GroupE74 = "GroupE74"
    EventE5 = "EventE5"
    BirthE67 = "BirthE67"
    DeathE69 = "DeathE69"
    PlaceE53 = "PlaceE53"
    TimeSpanE52 = "TimeSpanE52"


class PropertyCode(str, Enum):
    P98_broughtIntoLife = "P98_broughtIntoLife"
    P100_wasDeathOf = "P100_wasDeathOf"
    P12_occurredInPresenceOf = "P12_occurredInPresenceOf"
    P7_tookPlaceAt = "P7_tookPlaceAt"
    P4_hasTimeSpan = "P4_hasTimeSpan"
    P152_isParentOf = "P152_isParentOf"
    MemberAsParent = "MemberAsParent"
    MemberAsChild = "MemberAsChild"


_EVENT_CLASSES = (NodeClass.BirthE67, NodeClass.DeathE69, NodeClass.EventE5)

SCHEMA: frozenset[tuple[NodeClass, PropertyCode, NodeClass]] = frozenset(
    [
        (NodeClass.PersonE21, PropertyCode.P98_broughtIntoLife, NodeClass.BirthE67),
        (NodeClass.PersonE21, PropertyCode.P100_wasDeathOf, NodeClass.DeathE69),
        (NodeClass.PersonE21, PropertyCode.P12_occurredInPresenceOf, NodeClass.EventE5),
        (NodeClass.GroupE74, PropertyCode.P12_occurredInPresenceOf, NodeClass.EventE5),
        (NodeClass.PersonE21, PropertyCode.P152_isParentOf, NodeClass.PersonE21),
        (NodeClass.PersonE21, PropertyCode.MemberAsParent, NodeClass.GroupE74),
        (NodeClass.PersonE21, PropertyCode.MemberAsChild, NodeClass.GroupE74),
    ]
    + [(ec, PropertyCode.P7_tookPlaceAt, NodeClass.PlaceE53) for ec in _EVENT_CLASSES]
    + [(ec, PropertyCode.P4_hasTimeSpan, NodeClass.TimeSpanE52) for ec in _EVENT_CLASSES]
)

# person-event kinds that get their own node class; everything else
# (burial, baptism, marriage, unknown tags) is a generic EventE5
_KIND_CLASSES = {
    "Birth": (NodeClass.BirthE67, PropertyCode.P98_broughtIntoLife),
    "Death": (NodeClass.DeathE69, PropertyCode.P100_wasDeathOf),
}


@dataclass
class KGNode:
    id: str
    node_class: NodeClass
    literal: str | None = None


@dataclass
class KGEdge:
    source: str
    property: PropertyCode
    target: str


@dataclass
class KnowledgeGraph:
    nodes: dict[str, KGNode] = field(default_factory=dict)
    edges: list[KGEdge] = field(default_factory=list)

    def add_node(self, node_id: str, node_class: NodeClass,
                 literal: str | None = None) -> KGNode:
        existing = self.nodes.get(node_id)
        if existing is not None:
            return existing
        node = KGNode(id=node_id, node_class=node_class, literal=literal)
        self.nodes[node_id] = node
        return node

    def add_edge(self, source: str, prop: PropertyCode, target: str) -> None:
        src = self.nodes.get(source)
        tgt = self.nodes.get(target)
        if src is None or tgt is None:
            raise SchemaViolation(f"edge references unknown node: {source} -> {target}")
        triple = (src.node_class, prop, tgt.node_class)
        if triple not in SCHEMA:
            raise SchemaViolation(f"disallowed edge {triple}")
        self.edges.append(KGEdge(source=source, property=prop, target=target))

    def out_edges(self, source: str, prop: PropertyCode | None = None) -> list[KGEdge]:
        return [
            e for e in self.edges
            if e.source == source and (prop is None or e.property == prop)
        ]

    def validate(self) -> None:
        """Re-check every edge against the schema; raises on violation."""
        for e in self.edges:
            triple = (
                self.nodes[e.source].node_class,
                e.property,
                self.nodes[e.target].node_class,
            )
            if triple not in SCHEMA:
                raise SchemaViolation(f"disallowed edge {triple}")


def _place_id(text: str) -> str:
    return f"place:{text}"


def _time_id(raw: str) -> str:
    return f"time:{raw}"


def build_cidoc_graph(doc: GedcomDocument) -> KnowledgeGraph:
    kg = KnowledgeGraph()
    for pid, indi in doc.individuals.items():
        kg.add_node(pid, NodeClass.PersonE21, literal=indi.full_name() or None)
    for fid in doc.families:
        kg.add_node(fid, NodeClass.GroupE74)

    def attach_event(owner_id: str, kind: str, ordinal: int, event) -> None:
        node_class, prop = _KIND_CLASSES.get(
            kind, (NodeClass.EventE5, PropertyCode.P12_occurredInPresenceOf))
        ev_id = f"{owner_id}/{kind}/{ordinal}"
        kg.add_node(ev_id, node_class, literal=kind)
        kg.add_edge(owner_id, prop, ev_id)
        if event.place:
            kg.add_node(_place_id(event.place), NodeClass.PlaceE53, literal=event.place)
            kg.add_edge(ev_id, PropertyCode.P7_tookPlaceAt, _place_id(event.place))
        if event.date is not None and event.date.raw:
            kg.add_node(_time_id(event.date.raw), NodeClass.TimeSpanE52,
                        literal=event.date.raw)
            kg.add_edge(ev_id, PropertyCode.P4_hasTimeSpan, _time_id(event.date.raw))

    for pid, indi in doc.individuals.items():
        for i, event in enumerate(indi.events):
            attach_event(pid, event.kind, i, event)

    for fid, fam in doc.families.items():
        for i, event in enumerate(fam.events):
            attach_event(fid, event.kind, i, event)
        for parent in fam.parents():
            if parent not in doc.individuals:
                continue
            kg.add_edge(parent, PropertyCode.MemberAsParent, fid)
            for child in fam.children:
                if child in doc.individuals:
                    kg.add_edge(parent, PropertyCode.P152_isParentOf, child)
        for child in fam.children:
            if child in doc.individuals:
                kg.add_edge(child, PropertyCode.MemberAsChild, fid)

    return kg


def export_debug_tsv(kg: KnowledgeGraph) -> str:
    """One edge per line: ``<source>\\t<property>\\t<target>``."""
    return "\n".join(
        f"{e.source}\t{e.property.value}\t{e.target}" for e in kg.edges
    )
