"""Bipartite person/family graph and consanguinity computation.

The graph alternates person and family nodes: a person points at the
families they are a child of (``fam_child``) and a parent/spouse of
(``fam_parent``); families hold the mirror lists.  Consanguinity degree
counts parent-child hops on shortest paths, with spouse hops free, so a
spouse is degree 0, parents and children are 1, siblings and
grandparents are 2.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .gedcom import SEX_FEMALE, SEX_MALE, GedcomDocument


class UnknownPerson(KeyError):
    """Referenced person id is not a person node of the graph."""


@dataclass
class PersonNode:
    id: str
    fam_child: list[str] = field(default_factory=list)
    fam_parent: list[str] = field(default_factory=list)


@dataclass
class FamilyNode:
    id: str
    parent_fam: list[str] = field(default_factory=list)
    child_fam: list[str] = field(default_factory=list)


@dataclass
class FamilyTreeGraph:
    person_nodes: dict[str, PersonNode] = field(default_factory=dict)
    family_nodes: dict[str, FamilyNode] = field(default_factory=dict)
    # person id -> Male/Female/Unknown; kinship needs it to pick terms
    sex: dict[str, str] = field(default_factory=dict)

    def is_person(self, node_id: str) -> bool:
        return node_id in self.person_nodes

    def neighbors(self, node_id: str) -> list[str]:
        """Adjacent nodes, child-side lists first, each sorted by id."""
        p = self.person_nodes.get(node_id)
        if p is not None:
            return p.fam_child + p.fam_parent
        f = self.family_nodes.get(node_id)
        if f is None:
            raise KeyError(node_id)
        return f.child_fam + f.parent_fam


def build_family_tree_graph(doc: GedcomDocument) -> FamilyTreeGraph:
    """Build the bipartite graph; unresolvable links are skipped."""
    g = FamilyTreeGraph()
    for pid in doc.individuals:
        g.person_nodes[pid] = PersonNode(id=pid)
        g.sex[pid] = doc.individuals[pid].sex
    for fid, fam in doc.families.items():
        node = FamilyNode(id=fid)
        g.family_nodes[fid] = node
        for pid in fam.parents():
            if pid in g.person_nodes and pid not in node.parent_fam:
                node.parent_fam.append(pid)
                g.person_nodes[pid].fam_parent.append(fid)
        for pid in fam.children:
            if pid in g.person_nodes and pid not in node.child_fam:
                node.child_fam.append(pid)
                g.person_nodes[pid].fam_child.append(fid)
    # deterministic adjacency order everywhere
    for p in g.person_nodes.values():
        p.fam_child.sort()
        p.fam_parent.sort()
    for f in g.family_nodes.values():
        f.parent_fam.sort()
        f.child_fam.sort()
    return g


@dataclass
class KinshipTerm:
    term: str
    degree: int | float  # math.inf when unreachable


# Move letters along a person-to-person path: S spouse (cost 0),
# U to a parent (cost 1), D to a child (cost 1).
_TERMS: dict[tuple[str, ...], tuple[str, str, str | None]] = {
    (): ("self", "self", "self"),
    ("S",): ("husband", "wife", "spouse"),
    ("U",): ("father", "mother", "parent"),
    ("D",): ("son", "daughter", "child"),
    ("U", "U"): ("grandfather", "grandmother", "grandparent"),
    ("D", "D"): ("grandson", "granddaughter", "grandchild"),
    ("U", "D"): ("brother", "sister", "sibling"),
    # the vocabulary has no neutral in-law words, so unknown sex falls
    # back to "relative" for these two shapes
    ("D", "S"): ("son-in-law", "daughter-in-law", None),
    ("S", "U"): ("father-in-law", "mother-in-law", None),
}

RELATIVE = "relative"


def term_for_shape(shape: tuple[str, ...] | None, sex: str) -> str:
    if shape is None:
        return RELATIVE
    entry = _TERMS.get(shape)
    if entry is None:
        return RELATIVE
    male, female, neutral = entry
    if sex == SEX_MALE:
        return male
    if sex == SEX_FEMALE:
        return female
    return neutral if neutral is not None else RELATIVE


def _person_moves(g: FamilyTreeGraph, pid: str):
    """Yield (other person, move letter, cost); deterministic order."""
    node = g.person_nodes[pid]
    for fid in node.fam_child:
        fam = g.family_nodes[fid]
        for parent in fam.parent_fam:
            yield parent, "U", 1
    for fid in node.fam_parent:
        fam = g.family_nodes[fid]
        for child in fam.child_fam:
            yield child, "D", 1
        for other in fam.parent_fam:
            if other != pid:
                yield other, "S", 0


def kinship_profile(
    g: FamilyTreeGraph,
    sp: str,
    targets: set[str] | None = None,
    max_cost: int | None = None,
) -> dict[str, tuple[int, tuple[str, ...]]]:
    """Degrees and canonical path shapes from ``sp``.

    Dijkstra over (cost, move string): among minimum-cost paths the
    lexicographically smallest move sequence wins, which makes the
    resulting kinship terms deterministic.  Stops early once every
    target is settled or cost exceeds ``max_cost``.
    """
    if sp not in g.person_nodes:
        raise UnknownPerson(sp)
    pending = set(targets) if targets is not None else None
    if pending is not None:
        pending.discard(sp)
    result: dict[str, tuple[int, tuple[str, ...]]] = {}
    heap: list[tuple[int, tuple[str, ...], str]] = [(0, (), sp)]
    while heap:
        cost, shape, pid = heapq.heappop(heap)
        if pid in result:
            continue
        result[pid] = (cost, shape)
        if pending is not None:
            pending.discard(pid)
            if not pending:
                break
        for other, move, step in _person_moves(g, pid):
            if other in result:
                continue
            ncost = cost + step
            if max_cost is not None and ncost > max_cost:
                continue
            heapq.heappush(heap, (ncost, shape + (move,), other))
    return result


def kinship(g: FamilyTreeGraph, sp: str, other: str) -> KinshipTerm:
    """Kinship of ``other`` relative to ``sp`` ("other is sp's <term>")."""
    if sp not in g.person_nodes:
        raise UnknownPerson(sp)
    if other not in g.person_nodes:
        raise UnknownPerson(other)
    profile = kinship_profile(g, sp, targets={other})
    entry = profile.get(other)
    if entry is None:
        return KinshipTerm(term=RELATIVE, degree=math.inf)
    degree, shape = entry
    return KinshipTerm(
        term=term_for_shape(shape, g.sex.get(other, "Unknown")),
        degree=degree,
    )
