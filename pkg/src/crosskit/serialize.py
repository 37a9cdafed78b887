"""Canonical JSON serialization of drawings (.crdraw.json).

``encode`` is deterministic: edges are sorted, crossing ids renumbered in
sorted edge-pair order, and every cyclic rotation list is rotated to start
at its smallest entry, so structurally equal drawings encode identically.
"""

from __future__ import annotations

import hashlib
import json

from .errors import SchemaError
from .graphs import MultipartiteGraph, norm_edge, parse_graph_spec
from .planemap import PlaneMapDrawing, validate

FORMAT_EXTENSION = ".crdraw.json"


def encode(D: PlaneMapDrawing) -> str:
    G = D.graph
    if not G.base_sizes:
        raise SchemaError("graph has no multipartite base", path="graph.spec")

    order = sorted(range(len(D.edges)), key=lambda i: norm_edge(*D.edges[i]))
    remap = {old: new for new, old in enumerate(order)}
    edges_out = [list(norm_edge(*D.edges[i])) for i in order]

    cross_sorted = sorted(
        D.crossings.items(),
        key=lambda kv: (min(remap[kv[1][0]], remap[kv[1][1]]),
                        max(remap[kv[1][0]], remap[kv[1][1]])),
    )
    cid_map = {old: f"c{i + 1}" for i, (old, _) in enumerate(cross_sorted)}
    crossings_out = [
        {"id": cid_map[old], "edges": [min(remap[p], remap[q]), max(remap[p], remap[q])]}
        for old, (p, q) in cross_sorted
    ]

    paths_out = [[cid_map[c] for c in D.edge_paths[i]] for i in order]

    def rot_key(entry):
        return entry

    rotations_out = {}
    node_order = [v for v in G.vertices] + sorted(
        cid_map.values(), key=lambda c: int(c[1:]))
    reverse_cid = {v: k for k, v in cid_map.items()}
    for node in node_order:
        src = node if node in D.rotations else reverse_cid.get(node)
        rot = D.rotations[src]
        mapped = [(remap[e], s) for (e, s) in rot]
        if mapped:
            k = mapped.index(min(mapped, key=rot_key))
            mapped = mapped[k:] + mapped[:k]
        rotations_out[node] = [{"edge": e, "seg": s} for (e, s) in mapped]

    doc = {
        "graph": {
            "spec": G.spec_string,
            "labels": [list(p) for p in G.parts],
            "extra_edges": [list(e) for e in sorted(G.extra_edges)],
            "removed_edges": [list(e) for e in sorted(G.removed_edges)],
        },
        "edges": edges_out,
        "crossings": crossings_out,
        "edge_paths": paths_out,
        "rotations": rotations_out,
    }
    return json.dumps(doc, indent=1, sort_keys=False)


def drawing_digest(D: PlaneMapDrawing) -> str:
    """Digest of the canonical structure (cheaper than hashing the JSON)."""
    order = sorted(range(len(D.edges)), key=lambda i: norm_edge(*D.edges[i]))
    remap = {old: new for new, old in enumerate(order)}
    cross = sorted((min(remap[p], remap[q]), max(remap[p], remap[q]))
                   for (p, q) in D.crossings.values())
    cid_rank = {}
    for cid, (p, q) in D.crossings.items():
        cid_rank[cid] = cross.index((min(remap[p], remap[q]), max(remap[p], remap[q])))
    parts = [tuple(norm_edge(*D.edges[i]) for i in order), tuple(cross)]
    for i in order:
        parts.append(tuple(cid_rank[c] for c in D.edge_paths[i]))
    nodes = list(D.graph.vertices) + sorted(D.crossings, key=lambda c: cid_rank[c])
    for node in nodes:
        rot = [(remap[e], s) for (e, s) in D.rotations[node]]
        if rot:
            k = rot.index(min(rot))
            rot = rot[k:] + rot[:k]
        parts.append((node if node in D.graph.vertices else cid_rank[node],
                      tuple(rot)))
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:16]


def _need(obj, key, kind, path):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing key {key!r}", path=path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"expected {kind.__name__}", path=f"{path}.{key}")
    return val


def decode(text: str) -> PlaneMapDrawing:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as ex:
        raise SchemaError(f"not valid JSON: {ex}", path="$")

    gdoc = _need(doc, "graph", dict, "$")
    spec = _need(gdoc, "spec", str, "graph")
    labels = _need(gdoc, "labels", list, "graph")
    extra = _need(gdoc, "extra_edges", list, "graph")
    removed = _need(gdoc, "removed_edges", list, "graph")

    base = parse_graph_spec(spec)
    if [len(p) for p in labels] != list(base.base_sizes):
        raise SchemaError("label part sizes disagree with spec", path="graph.labels")
    parts = tuple(tuple(p) for p in labels)
    vertices = [v for p in parts for v in p]
    if len(set(vertices)) != len(vertices):
        raise SchemaError("duplicate vertex labels", path="graph.labels")
    edges = set()
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            for a in parts[i]:
                for b in parts[j]:
                    edges.add(norm_edge(a, b))
    G = MultipartiteGraph(parts=parts, vertices=tuple(vertices),
                          edges=frozenset(edges), base_sizes=base.base_sizes)
    if removed:
        G = G.with_edges_removed([tuple(e) for e in removed])
    if extra:
        G = G.with_edges_added([tuple(e) for e in extra])

    edges_doc = _need(doc, "edges", list, "$")
    drawn = []
    for i, e in enumerate(edges_doc):
        if not (isinstance(e, list) and len(e) == 2):
            raise SchemaError("edge must be a pair", path=f"edges[{i}]")
        drawn.append((e[0], e[1]))
    if sorted(norm_edge(*e) for e in drawn) != sorted(G.edges):
        raise SchemaError("edge list disagrees with graph", path="edges")

    cr_doc = _need(doc, "crossings", list, "$")
    crossings = {}
    for i, rec in enumerate(cr_doc):
        cid = _need(rec, "id", str, f"crossings[{i}]")
        pair = _need(rec, "edges", list, f"crossings[{i}]")
        if len(pair) != 2 or not all(isinstance(p, int) for p in pair):
            raise SchemaError("edges must be two indices", path=f"crossings[{i}].edges")
        if not all(0 <= p < len(drawn) for p in pair):
            raise SchemaError("edge index out of range", path=f"crossings[{i}].edges")
        if cid in crossings:
            raise SchemaError(f"duplicate crossing id {cid}", path=f"crossings[{i}].id")
        crossings[cid] = (pair[0], pair[1])

    paths_doc = _need(doc, "edge_paths", list, "$")
    if len(paths_doc) != len(drawn):
        raise SchemaError("edge_paths length disagrees with edges", path="edge_paths")
    edge_paths = []
    for i, p in enumerate(paths_doc):
        if not isinstance(p, list):
            raise SchemaError("path must be a list", path=f"edge_paths[{i}]")
        for c in p:
            if c not in crossings:
                raise SchemaError(f"unknown crossing {c}", path=f"edge_paths[{i}]")
        edge_paths.append(tuple(p))

    rot_doc = _need(doc, "rotations", dict, "$")
    rotations = {}
    for node, entries in rot_doc.items():
        if not isinstance(entries, list):
            raise SchemaError("rotation must be a list", path=f"rotations.{node}")
        rot = []
        for k, ent in enumerate(entries):
            e = _need(ent, "edge", int, f"rotations.{node}[{k}]")
            s = _need(ent, "seg", int, f"rotations.{node}[{k}]")
            rot.append((e, s))
        rotations[node] = tuple(rot)

    for cid, (p, q) in crossings.items():
        if cid not in rotations or len(rotations[cid]) != 4:
            raise SchemaError(f"crossing {cid} must have rotation degree 4",
                              path=f"rotations.{cid}")
        r = rotations[cid]
        if r[0][0] == r[1][0] or r[1][0] == r[2][0] or r[0][0] != r[2][0]:
            raise SchemaError(f"crossing {cid} rotation does not alternate",
                              path=f"rotations.{cid}")

    D = PlaneMapDrawing(
        graph=G,
        edges=tuple(drawn),
        crossings=crossings,
        edge_paths=tuple(edge_paths),
        rotations=rotations,
    )
    report = validate(D)
    if not report.passed:
        raise SchemaError(f"drawing fails validation: {report}", path="$")
    return D


def save(D: PlaneMapDrawing, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(encode(D))


def load(path: str) -> PlaneMapDrawing:
    with open(path) as fh:
        return decode(fh.read())
