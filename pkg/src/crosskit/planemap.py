"""Combinatorial plane maps for good drawings.

A drawing is stored as a rotation system over *nodes* = real vertices plus
degree-4 crossing nodes.  Each edge records the ordered list of crossing
nodes along it; an edge with t crossings has t+1 segments, numbered from its
first stored endpoint.  A rotation entry ``(edge, seg)`` is the end of that
segment incident to the node, and rotations are read counterclockwise.

Validation checks the good-drawing axioms structurally and the planarity of
the map via Euler's relation on face orbits of the rotation system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CrosskitError, GraphError
from .graphs import EdgeClass, MultipartiteGraph, norm_edge

RotEntry = tuple[int, int]            # (edge index, segment index)
Dart = tuple[int, int, int]           # (edge index, segment index, direction +1/-1)


@dataclass(frozen=True)
class PlaneMapDrawing:
    graph: MultipartiteGraph
    edges: tuple[tuple[str, str], ...]           # stored orientations
    crossings: dict                              # cid -> (edge i, edge j)
    edge_paths: tuple[tuple[str, ...], ...]      # per edge, cids in order
    rotations: dict                              # node id -> tuple of RotEntry

    # -- indexing helpers --------------------------------------------------

    def edge_index(self, a: str, b: str) -> int:
        want = norm_edge(a, b)
        idx = self._edge_lookup.get(want)
        if idx is None:
            raise GraphError(f"unknown edge {want}", code="UNKNOWN_EDGE")
        return idx

    @property
    def _edge_lookup(self):
        cache = getattr(self, "_lookup_cache", None)
        if cache is None:
            cache = {norm_edge(*e): i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_lookup_cache", cache)
        return cache

    def seg_nodes(self, e: int, s: int) -> tuple[str, str]:
        """Endpoints of segment s of edge e, in path direction."""
        a, b = self.edges[e]
        path = self.edge_paths[e]
        start = a if s == 0 else path[s - 1]
        end = b if s == len(path) else path[s]
        return start, end

    def entry_node_is_far_end(self, node: str, e: int, s: int) -> bool:
        start, end = self.seg_nodes(e, s)
        if node == end:
            return True
        if node == start:
            return False
        raise CrosskitError(f"segment ({e},{s}) not incident to {node}", code="BAD_SEGMENT")

    # -- darts and faces ---------------------------------------------------

    def dart_head(self, d: Dart) -> str:
        e, s, direction = d
        start, end = self.seg_nodes(e, s)
        return end if direction > 0 else start

    def dart_into(self, node: str, e: int, s: int) -> Dart:
        """The dart along (e, s) whose head is ``node``."""
        return (e, s, 1) if self.entry_node_is_far_end(node, e, s) else (e, s, -1)

    def all_darts(self):
        for e in range(len(self.edges)):
            for s in range(len(self.edge_paths[e]) + 1):
                yield (e, s, 1)
                yield (e, s, -1)

    def next_dart(self, d: Dart) -> Dart:
        """Face-traversal successor: reverse, then rotation successor."""
        e, s, direction = d
        head = self.dart_head(d)
        rot = self.rotations[head]
        idx = rot.index((e, s))
        ne, ns = rot[(idx + 1) % len(rot)]
        # outgoing dart along (ne, ns), i.e. pointing away from head
        into = self.dart_into(head, ne, ns)
        return (into[0], into[1], -into[2])

    def face_orbits(self) -> list[list[Dart]]:
        heads = {}
        out_dart = {}
        for e in range(len(self.edges)):
            a, b = self.edges[e]
            nodes = [a, *self.edge_paths[e], b]
            for s in range(len(nodes) - 1):
                start, end = nodes[s], nodes[s + 1]
                heads[(e, s, 1)] = end
                heads[(e, s, -1)] = start
                out_dart[(start, e, s)] = (e, s, 1)
                out_dart[(end, e, s)] = (e, s, -1)
        succ = {}
        for node, rot in self.rotations.items():
            L = len(rot)
            for i, ent in enumerate(rot):
                succ[(node,) + ent] = rot[(i + 1) % L]
        seen = set()
        orbits = []
        for d in heads:
            if d in seen:
                continue
            orbit = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                h = heads[cur]
                ne, ns = succ[(h, cur[0], cur[1])]
                cur = out_dart[(h, ne, ns)]
            orbits.append(orbit)
        return orbits

    def segment_components(self) -> dict:
        """node -> component id, over the segment graph (isolated nodes included)."""
        parent = {n: n for n in self.rotations}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for e in range(len(self.edges)):
            for s in range(len(self.edge_paths[e]) + 1):
                a, b = self.seg_nodes(e, s)
                union(a, b)
        return {n: find(n) for n in parent}

    # -- crossing counts ---------------------------------------------------

    def crossings_total(self) -> int:
        return len(self.crossings)

    def edge_ids_of_class(self, cls: EdgeClass) -> set[int]:
        out = set()
        for e in cls.members:
            out.add(self.edge_index(*e))
        return out

    def crossings_between(self, A: EdgeClass, B: EdgeClass) -> int:
        ia = self.edge_ids_of_class(A)
        ib = self.edge_ids_of_class(B)
        count = 0
        for e, f in self.crossings.values():
            if (e in ia and f in ib) or (f in ia and e in ib):
                count += 1
        return count

    def crossings_on_edges(self, ids: set[int]) -> int:
        """Crossing nodes with at least one edge in ``ids``."""
        return sum(1 for e, f in self.crossings.values() if e in ids or f in ids)

    def vertex_crossings(self, v: str) -> int:
        self.graph.check_vertices([v])
        inc = {i for i, e in enumerate(self.edges) if v in e}
        return self.crossings_on_edges(inc)

    def vertex_pair_crossings(self, u: str, v: str) -> int:
        self.graph.check_vertices([u, v])
        if u == v:
            raise GraphError("vertices must be distinct", code="SAME_VERTEX")
        iu = {i for i, e in enumerate(self.edges) if u in e}
        iv = {i for i, e in enumerate(self.edges) if v in e}
        count = 0
        for e, f in self.crossings.values():
            if (e in iu and f in iv) or (f in iu and e in iv):
                count += 1
        return count

    # -- rotations ---------------------------------------------------------

    def rotation_view(self, v: str) -> "RotationView":
        self.graph.check_vertices([v])
        neighbors = []
        for e, s in self.rotations[v]:
            a, b = self.edges[e]
            neighbors.append(b if a == v else a)
        return RotationView(v, tuple(neighbors))

    def subrotation_interval(self, v: str, a: str, b: str) -> tuple[str, ...]:
        view = self.rotation_view(v)
        return view.interval(a, b)


@dataclass(frozen=True)
class RotationView:
    """Cyclic neighbor order around a vertex."""

    vertex: str
    neighbors: tuple[str, ...]

    def interval(self, a: str, b: str) -> tuple[str, ...]:
        """Neighbors strictly between a and b in rotation direction."""
        if a not in self.neighbors or b not in self.neighbors:
            raise GraphError(f"{a!r} or {b!r} is not a neighbor of {self.vertex!r}",
                             code="NOT_A_NEIGHBOR")
        n = len(self.neighbors)
        i = self.neighbors.index(a)
        out = []
        j = (i + 1) % n
        while self.neighbors[j] != b:
            out.append(self.neighbors[j])
            j = (j + 1) % n
        return tuple(out)

    def restricted(self, subset) -> tuple[str, ...]:
        subset = set(subset)
        return tuple(v for v in self.neighbors if v in subset)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, axiom: str, detail: str, witness=None):
        self.violations.append({"axiom": axiom, "detail": detail, "witness": witness})

    def __str__(self):
        if self.passed:
            return "PASS"
        lines = [f"FAIL({v['axiom']}): {v['detail']}" for v in self.violations]
        return "\n".join(lines)


def validate(D: PlaneMapDrawing) -> ValidationReport:
    """Check every good-drawing axiom plus planarity of the map."""
    report = ValidationReport()
    n_edges = len(D.edges)

    # edge list consistency with the graph
    drawn = {norm_edge(*e) for e in D.edges}
    if drawn != set(D.graph.edges):
        report.add("GRAPH_MISMATCH", "drawn edges differ from graph edge set")
        return report
    if len(drawn) != n_edges:
        report.add("GRAPH_MISMATCH", "duplicate edges in drawing")
        return report

    # crossing records vs edge paths
    appearances = {cid: 0 for cid in D.crossings}
    for e in range(n_edges):
        path = D.edge_paths[e]
        seen_here = set()
        for cid in path:
            if cid not in D.crossings:
                report.add("PATH_MISMATCH", f"edge {e} lists unknown crossing {cid}")
                return report
            if cid in seen_here:
                report.add("SELF_CROSSING", f"edge {e} meets crossing {cid} twice",
                           witness=cid)
            seen_here.add(cid)
            if e not in D.crossings[cid]:
                report.add("PATH_MISMATCH",
                           f"crossing {cid} on edge {e} but records {D.crossings[cid]}")
            appearances[cid] += 1

    pair_seen = {}
    for cid, (e, f) in D.crossings.items():
        if e == f:
            report.add("SELF_CROSSING", f"crossing {cid} pairs edge {e} with itself",
                       witness=cid)
            continue
        if appearances.get(cid) != 2:
            report.add("PATH_MISMATCH",
                       f"crossing {cid} appears {appearances.get(cid)} times in paths")
        ea, eb = D.edges[e], D.edges[f]
        if set(ea) & set(eb):
            report.add("ADJACENT_CROSSING",
                       f"crossing {cid} joins adjacent edges {ea} and {eb}", witness=cid)
        key = (min(e, f), max(e, f))
        if key in pair_seen:
            report.add("DOUBLE_CROSSING",
                       f"edges {key} cross at both {pair_seen[key]} and {cid}",
                       witness=(pair_seen[key], cid))
        pair_seen[key] = cid

    if report.violations:
        return report

    # rotations: domain, degrees, entry multisets, alternation
    expected_nodes = set(D.graph.vertices) | set(D.crossings)
    if set(D.rotations) != expected_nodes:
        report.add("ROTATION_DOMAIN", "rotation nodes differ from vertices + crossings")
        return report

    pos_in_path = {}
    for e in range(n_edges):
        for i, cid in enumerate(D.edge_paths[e]):
            pos_in_path[(cid, e)] = i

    for v in D.graph.vertices:
        expected = []
        for e in range(n_edges):
            a, b = D.edges[e]
            if a == v:
                expected.append((e, 0))
            if b == v:
                expected.append((e, len(D.edge_paths[e])))
        if sorted(D.rotations[v]) != sorted(expected):
            report.add("ROTATION_ENTRIES", f"vertex {v} rotation entries wrong")

    for cid, (e, f) in D.crossings.items():
        rot = D.rotations[cid]
        if len(rot) != 4:
            report.add("BAD_CROSSING_DEGREE", f"{cid} has degree {len(rot)}", witness=cid)
            continue
        i = pos_in_path[(cid, e)]
        j = pos_in_path[(cid, f)]
        expected = {(e, i), (e, i + 1), (f, j), (f, j + 1)}
        if set(rot) != expected:
            report.add("ROTATION_ENTRIES", f"{cid} rotation entries wrong", witness=cid)
            continue
        if rot[0][0] == rot[1][0] or rot[1][0] == rot[2][0]:
            report.add("NON_ALTERNATING", f"{cid} rotation does not alternate edges",
                       witness=cid)

    if report.violations:
        return report

    # Euler relation per component of the segment graph
    comp = D.segment_components()
    orbits = D.face_orbits()
    comp_ids = set(comp.values())
    v_count = {c: 0 for c in comp_ids}
    e_count = {c: 0 for c in comp_ids}
    f_count = {c: 0 for c in comp_ids}
    for n, c in comp.items():
        v_count[c] += 1
    for e in range(n_edges):
        for s in range(len(D.edge_paths[e]) + 1):
            e_count[comp[D.seg_nodes(e, s)[0]]] += 1
    for orbit in orbits:
        head = D.dart_head(orbit[0])
        f_count[comp[head]] += 1
    for c in comp_ids:
        if e_count[c] == 0:
            f_count[c] = 1  # isolated node: one face by convention
        euler = v_count[c] - e_count[c] + f_count[c]
        if euler != 2:
            report.add("NONPLANAR_MAP",
                       f"component of {c!r}: V-E+F = {v_count[c]}-{e_count[c]}+{f_count[c]}"
                       f" = {euler}, expected 2",
                       witness=c)
    return report


def euler_summary(D: PlaneMapDrawing) -> dict:
    """V* - E* + F with the shared outer face counted once: equals 1 + #components."""
    comp = D.segment_components()
    n_components = len(set(comp.values()))
    v_star = len(D.rotations)
    e_star = sum(len(p) + 1 for p in D.edge_paths)
    orbit_faces = len(D.face_orbits())
    # components with no segments still bound one face each
    isolated = sum(1 for n in D.rotations if not D.rotations[n])
    orbit_faces += isolated
    plane_faces = orbit_faces - (n_components - 1)
    return {
        "V": v_star,
        "E": e_star,
        "F": plane_faces,
        "components": n_components,
        "euler": v_star - e_star + plane_faces,
        "expected": 1 + n_components,
    }


# ---------------------------------------------------------------------------
# Edge-class ledger for K_{1,1,m,n}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingLedger:
    """Named crossing tallies plus the drawing total."""

    terms: tuple            # tuple of (name, value)
    total: int

    def __getitem__(self, name: str) -> int:
        for k, v in self.terms:
            if k == name:
                return v
        raise KeyError(name)

    @property
    def sum_of_terms(self) -> int:
        return sum(v for _, v in self.terms)

    def as_dict(self) -> dict:
        return {"terms": {k: v for k, v in self.terms}, "total": self.total}


def k11mn_classes(G: MultipartiteGraph) -> dict:
    """The six edge classes of K_{1,1,m,n}; raises WRONG_FAMILY otherwise."""
    if len(G.parts) != 4 or len(G.parts[0]) != 1 or len(G.parts[1]) != 1:
        raise GraphError("graph is not K_{1,1,m,n}", code="WRONG_FAMILY")
    O, X, Y, Z = G.parts
    expected = None
    try:
        from .graphs import complete_multipartite
        expected = complete_multipartite([1, 1, len(Y), len(Z)])
    except Exception:  # pragma: no cover
        pass
    if expected is not None and len(G.edges) != len(expected.edges):
        raise GraphError("graph is not a complete K_{1,1,m,n}", code="WRONG_FAMILY")

    def cls(v1, v2, name):
        members = frozenset(
            e for e in G.edges
            if (e[0] in v1 and e[1] in v2) or (e[0] in v2 and e[1] in v1)
        )
        return EdgeClass(name, members)

    return {
        "OX": cls(O, X, "E(O,X)"),
        "OY": cls(O, Y, "E(O,Y)"),
        "OZ": cls(O, Z, "E(O,Z)"),
        "XY": cls(X, Y, "E(X,Y)"),
        "XZ": cls(X, Z, "E(X,Z)"),
        "YZ": cls(Y, Z, "E(Y,Z)"),
    }


def seven_term_decomposition(D: PlaneMapDrawing) -> CrossingLedger:
    """The seven-term split of cr(D) for drawings of K_{1,1,m,n}.

    The omitted class pairs are adjacent everywhere, so these terms partition
    all crossings; the sum is asserted against the drawing total.
    """
    c = k11mn_classes(D.graph)
    terms = (
        ("cr(E(Y,Z))", D.crossings_between(c["YZ"], c["YZ"])),
        ("cr(E(O,X),E(Y,Z))", D.crossings_between(c["OX"], c["YZ"])),
        ("cr(E(X,Y),E(Y,Z))", D.crossings_between(c["XY"], c["YZ"])),
        ("cr(E(O,Z),E(X,Y)+E(Y,Z))", D.crossings_between(c["OZ"], c["XY"] | c["YZ"])),
        ("cr(E(O,Y),E(X,Z))", D.crossings_between(c["OY"], c["XZ"])),
        ("cr(E(O,Y),E(X,Y)+E(Y,Z))", D.crossings_between(c["OY"], c["XY"] | c["YZ"])),
        ("cr(E(X,Z),E(O,Z)+E(Y,Z))", D.crossings_between(c["XZ"], c["OZ"] | c["YZ"])),
    )
    ledger = CrossingLedger(terms=terms, total=D.crossings_total())
    if ledger.sum_of_terms != ledger.total:
        raise CrosskitError(
            f"ledger terms sum to {ledger.sum_of_terms}, drawing has {ledger.total}",
            code="LEDGER_MISMATCH")
    return ledger


def whole_graph_class(D: PlaneMapDrawing, name: str = "E(G)") -> EdgeClass:
    return EdgeClass(name, frozenset(norm_edge(*e) for e in D.edges))
