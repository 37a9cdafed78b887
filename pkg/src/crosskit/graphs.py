"""Abstract multipartite graphs, edge-class selectors and graph builders.

Vertices are stable text labels.  A :class:`MultipartiteGraph` remembers the
complete-multipartite base it was built from plus any edges added or removed
afterwards, so that derived graphs (twins, deletions, pipeline outputs) stay
serializable.  All builders return fresh immutable values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GraphError, SpecParseError

# Prefix per part index; singleton parts drop the numeric suffix (o, x, y1..).
PART_PREFIXES = "oxyzpqrstuvw"

Edge = tuple[str, str]


def norm_edge(a: str, b: str) -> Edge:
    """Unordered edge as a sorted tuple."""
    if a == b:
        raise GraphError(f"self-loop at {a!r}", code="SELF_LOOP")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class MultipartiteGraph:
    """A labeled graph with an optional complete-multipartite base.

    ``parts`` lists the base independent sets in order; vertices introduced
    later (e.g. twins) appear in ``vertices`` but in no part.
    """

    parts: tuple[tuple[str, ...], ...]
    vertices: tuple[str, ...]
    edges: frozenset[Edge]
    base_sizes: tuple[int, ...] = ()
    extra_edges: tuple[Edge, ...] = ()
    removed_edges: tuple[Edge, ...] = ()
    _part_of: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for idx, part in enumerate(self.parts):
            for v in part:
                lookup[v] = idx
        object.__setattr__(self, "_part_of", lookup)

    # -- basic queries ----------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in set(self.vertices)

    def check_vertices(self, vs) -> None:
        known = set(self.vertices)
        for v in vs:
            if v not in known:
                raise GraphError(f"unknown vertex {v!r}", code="UNKNOWN_VERTEX")

    def neighbors(self, v: str) -> set[str]:
        self.check_vertices([v])
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def part_of(self, v: str) -> int | None:
        return self._part_of.get(v)

    def part_named(self, name: str) -> tuple[str, ...]:
        """Resolve a part by its label prefix ('O', 'Y', ...), case-insensitive."""
        name = name.lower()
        for idx, part in enumerate(self.parts):
            if idx < len(PART_PREFIXES) and PART_PREFIXES[idx] == name:
                return part
        raise GraphError(f"no part named {name!r}", code="UNKNOWN_PART")

    @property
    def spec_string(self) -> str | None:
        if not self.base_sizes:
            return None
        return "K=" + ",".join(str(s) for s in self.base_sizes)

    # -- derived graphs ----------------------------------------------------

    def with_edges_removed(self, edges) -> "MultipartiteGraph":
        doomed = {norm_edge(*e) for e in edges}
        missing = doomed - self.edges
        if missing:
            raise GraphError(f"unknown edge {sorted(missing)[0]}", code="UNKNOWN_EDGE")
        extra = tuple(e for e in self.extra_edges if e not in doomed)
        newly_removed = tuple(sorted(doomed - set(self.extra_edges)))
        return MultipartiteGraph(
            parts=self.parts,
            vertices=self.vertices,
            edges=self.edges - doomed,
            base_sizes=self.base_sizes,
            extra_edges=extra,
            removed_edges=tuple(sorted(set(self.removed_edges) | set(newly_removed))),
        )

    def with_edges_added(self, edges, new_vertices=()) -> "MultipartiteGraph":
        added = {norm_edge(*e) for e in edges}
        clash = added & self.edges
        if clash:
            raise GraphError(f"duplicate edge {sorted(clash)[0]}", code="DUPLICATE_EDGE")
        verts = list(self.vertices)
        known = set(verts)
        for v in new_vertices:
            if v in known:
                raise GraphError(f"label {v!r} already used", code="DUPLICATE_LABEL")
            verts.append(v)
            known.add(v)
        for a, b in added:
            for v in (a, b):
                if v not in known:
                    verts.append(v)
                    known.add(v)
        restored = {e for e in added if e in set(self.removed_edges)}
        return MultipartiteGraph(
            parts=self.parts,
            vertices=tuple(verts),
            edges=self.edges | added,
            base_sizes=self.base_sizes,
            extra_edges=self.extra_edges + tuple(sorted(added - restored)),
            removed_edges=tuple(e for e in self.removed_edges if e not in restored),
        )


@dataclass(frozen=True)
class EdgeClass:
    """A named set of edges used in crossing bookkeeping."""

    name: str
    members: frozenset[Edge]

    def __len__(self):
        return len(self.members)

    def __or__(self, other: "EdgeClass") -> "EdgeClass":
        return EdgeClass(f"{self.name}+{other.name}", self.members | other.members)

    def __sub__(self, other: "EdgeClass") -> "EdgeClass":
        return EdgeClass(f"{self.name}-{other.name}", self.members - other.members)


def part_labels(sizes) -> list[list[str]]:
    labels = []
    for idx, size in enumerate(sizes):
        prefix = PART_PREFIXES[idx] if idx < len(PART_PREFIXES) else f"p{idx}_"
        if size == 1:
            labels.append([prefix])
        else:
            labels.append([f"{prefix}{i}" for i in range(1, size + 1)])
    return labels


def complete_multipartite(part_sizes) -> MultipartiteGraph:
    """Build K_{x1,...,xn} with part-indexed labels (o, x, y1.., z1.. for 4 parts)."""
    sizes = list(part_sizes)
    if not sizes:
        raise GraphError("need at least one part", code="INVALID_PARTS")
    if any((not isinstance(s, int)) or s < 1 for s in sizes):
        raise GraphError("part sizes must be positive integers", code="INVALID_PARTS")
    labels = part_labels(sizes)
    vertices = tuple(v for part in labels for v in part)
    edges = set()
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            for a in labels[i]:
                for b in labels[j]:
                    edges.add(norm_edge(a, b))
    return MultipartiteGraph(
        parts=tuple(tuple(p) for p in labels),
        vertices=vertices,
        edges=frozenset(edges),
        base_sizes=tuple(sizes),
    )


def edge_class(G: MultipartiteGraph, V1, V2, name: str | None = None) -> EdgeClass:
    """Edges of G with one end in V1 and the other in V2."""
    V1, V2 = set(V1), set(V2)
    G.check_vertices(V1 | V2)
    members = frozenset(
        e for e in G.edges
        if (e[0] in V1 and e[1] in V2) or (e[0] in V2 and e[1] in V1)
    )
    return EdgeClass(name or "E", members)


def class_by_parts(G: MultipartiteGraph, p1: str, p2: str) -> EdgeClass:
    """E(P1,P2) selected by part prefix names, e.g. ('O','X')."""
    return edge_class(G, G.part_named(p1), G.part_named(p2),
                      name=f"E({p1.upper()},{p2.upper()})")


def twin_via_template(G: MultipartiteGraph, v: str, new_label: str) -> MultipartiteGraph:
    """Add a twin adjacent to exactly N(v)."""
    G.check_vertices([v])
    if new_label in set(G.vertices):
        raise GraphError(f"label {new_label!r} already used", code="DUPLICATE_LABEL")
    return G.with_edges_added(
        [norm_edge(new_label, u) for u in G.neighbors(v)],
        new_vertices=[new_label],
    )


_SPEC_RE = re.compile(r"^K=")


def parse_graph_spec(text: str) -> MultipartiteGraph:
    """Parse ``K=<n1>,<n2>[,...]`` into a complete multipartite graph."""
    if not _SPEC_RE.match(text):
        raise SpecParseError("expected 'K=' prefix", offset=0)
    body = text[2:]
    sizes = []
    pos = 2
    for token in body.split(","):
        if not token.isdigit():
            raise SpecParseError(f"expected positive integer, got {token!r}", offset=pos)
        value = int(token)
        if value < 1:
            raise SpecParseError("part size must be >= 1", offset=pos)
        sizes.append(value)
        pos += len(token) + 1
    if not sizes:
        raise SpecParseError("no part sizes given", offset=2)
    return complete_multipartite(sizes)
