"""Depth-scoped breadth-first extraction of per-person sub-graphs.

``traverse`` walks the bipartite graph outward from a starting person,
tracking how many person levels have been exhausted, and stops once the
walk would pass the requested depth.  A completion phase then appends
the co-parents (children's spouses and the like) of every drained
person, so families in the result are never missing a parent that the
drained members share children with.

Two usage modes: the raw traversal keeps every node it drained, which
places siblings at depth 1 because they sit one family hop away just
like parents; ``consanguinity_filter`` tightens a result to persons
whose parent-child hop degree is within the depth (spouse hops free),
which drops those siblings.  The sub-graph generator defaults to the
filtered form.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .graph import RELATIVE, FamilyTreeGraph, UnknownPerson, kinship_profile, term_for_shape

PERSON = "person"
FAMILY = "family"


@dataclass
class AnnotatedNode:
    id: str
    kind: str                 # "person" | "family"
    degree: int | float       # consanguinity degree; families: min over adjacent members
    term: str = ""            # kinship term for persons, "" for families


@dataclass
class ScopedSubgraph:
    sp: str
    depth: int
    nodes: list[AnnotatedNode] = field(default_factory=list)
    trace: list[str] | None = None   # drain order of the first phase

    def person_ids(self) -> list[str]:
        return [n.id for n in self.nodes if n.kind == PERSON]

    def family_ids(self) -> list[str]:
        return [n.id for n in self.nodes if n.kind == FAMILY]

    def degree_of(self, node_id: str) -> int | float:
        for n in self.nodes:
            if n.id == node_id:
                return n.degree
        raise KeyError(node_id)


def traverse(g: FamilyTreeGraph, sp: str, depth: int) -> ScopedSubgraph:
    """Raw depth-scoped BFS from ``sp``; result order is the output queue.

    Level accounting: ``to_do`` counts nodes left in the current level,
    ``next_to_do`` counts newly discovered ones.  When a level is
    exhausted on a person node the depth counter advances; exhausting
    two levels in a row without a person also advances it, so malformed
    (non-alternating) graphs still terminate.
    """
    if sp not in g.person_nodes:
        raise UnknownPerson(sp)
    if depth < 0:
        raise ValueError("depth must be >= 0")

    queue: deque[str] = deque([sp])
    enqueued = {sp}          # ever-enqueued; deduplication is permanent
    drained: list[str] = []
    current_depth = 0
    to_do = 1
    next_to_do = 0
    prev_exhaust_person = True

    while queue:
        node = queue.popleft()
        drained.append(node)
        neighbors = g.neighbors(node)
        next_to_do += sum(1 for k in neighbors if k not in enqueued)
        to_do -= 1
        if to_do == 0:
            if g.is_person(node):
                current_depth += 1
                prev_exhaust_person = True
                if current_depth > depth:
                    break
            else:
                if not prev_exhaust_person:
                    current_depth += 1
                    if current_depth > depth:
                        break
                prev_exhaust_person = False
            to_do = next_to_do
            next_to_do = 0
        for k in neighbors:
            if k not in enqueued:
                enqueued.add(k)
                queue.append(k)

    # completion phase: keep drain order, append unseen co-parents of
    # each drained person's own families
    out: list[str] = []
    seen = set(drained)
    for node in drained:
        out.append(node)
        person = g.person_nodes.get(node)
        if person is None:
            continue
        for fid in person.fam_parent:
            for parent in g.family_nodes[fid].parent_fam:
                if parent not in seen:
                    seen.add(parent)
                    out.append(parent)

    return _annotate(g, sp, depth, out, drained)


def _annotate(
    g: FamilyTreeGraph, sp: str, depth: int, out: list[str], drained: list[str]
) -> ScopedSubgraph:
    persons = [n for n in out if g.is_person(n)]
    profile = kinship_profile(g, sp, targets=set(persons))
    annotated: list[AnnotatedNode] = []
    degree_by_person: dict[str, int | float] = {}
    for node in out:
        if g.is_person(node):
            entry = profile.get(node)
            if entry is None:
                degree: int | float = math.inf
                term = RELATIVE
            else:
                degree = entry[0]
                term = term_for_shape(entry[1], g.sex.get(node, "Unknown"))
            degree_by_person[node] = degree
            annotated.append(AnnotatedNode(node, PERSON, degree, term))
        else:
            annotated.append(AnnotatedNode(node, FAMILY, math.inf))
    # family degree = min over adjacent persons that are in the result
    for ann in annotated:
        if ann.kind == FAMILY:
            fam = g.family_nodes[ann.id]
            degrees = [
                degree_by_person[p]
                for p in fam.child_fam + fam.parent_fam
                if p in degree_by_person
            ]
            ann.degree = min(degrees) if degrees else math.inf
    return ScopedSubgraph(sp=sp, depth=depth, nodes=annotated, trace=drained)


def consanguinity_filter(
    g: FamilyTreeGraph, sub: ScopedSubgraph, max_degree: int | None = None
) -> ScopedSubgraph:
    """Drop persons beyond ``max_degree`` (default: the sub-graph depth)
    and any family left without an adjacent person; order is preserved."""
    limit = sub.depth if max_degree is None else max_degree
    kept_persons = {
        n.id for n in sub.nodes if n.kind == PERSON and n.degree <= limit
    }
    nodes: list[AnnotatedNode] = []
    for n in sub.nodes:
        if n.kind == PERSON:
            if n.id in kept_persons:
                nodes.append(n)
            continue
        fam = g.family_nodes[n.id]
        adjacent = [
            p for p in fam.child_fam + fam.parent_fam if p in kept_persons
        ]
        if adjacent:
            degrees = [
                next(m.degree for m in sub.nodes if m.id == p) for p in adjacent
            ]
            nodes.append(AnnotatedNode(n.id, FAMILY, min(degrees)))
    return ScopedSubgraph(sp=sub.sp, depth=sub.depth, nodes=nodes, trace=sub.trace)


MODE_RAW = "faithful"
MODE_DEGREE_STRICT = "degree-strict"


def gen_subgraph(
    g: FamilyTreeGraph, sp: str, depth: int, mode: str = MODE_DEGREE_STRICT
) -> ScopedSubgraph:
    sub = traverse(g, sp, depth)
    if mode == MODE_RAW:
        return sub
    if mode == MODE_DEGREE_STRICT:
        return consanguinity_filter(g, sub, depth)
    raise ValueError(f"unknown traversal mode: {mode!r}")


def enumerate_subgraphs(
    g: FamilyTreeGraph, depth: int, mode: str = MODE_DEGREE_STRICT
):
    """One sub-graph per person node, in sorted person-id order."""
    for sp in sorted(g.person_nodes):
        yield gen_subgraph(g, sp, depth, mode=mode)


def format_trace(sub: ScopedSubgraph) -> str:
    """Debug listing of the result queue: index, id, kind, degree."""
    lines = []
    for i, n in enumerate(sub.nodes):
        degree = "inf" if math.isinf(n.degree) else str(n.degree)
        lines.append(f"{i}\t{n.id}\t{n.kind}\t{degree}")
    return "\n".join(lines)
