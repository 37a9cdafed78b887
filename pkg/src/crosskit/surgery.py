"""Drawing surgeries: edge deletion, spoke subdivision, parallel-edge
routing, and in-disk rerouting.

All operations return fresh validated drawings; an instruction that cannot
be realized as a good drawing raises ``SurgeryError`` (GOODNESS_VIOLATION /
BAD_INTERVAL) instead of producing a broken map.

Conventions: rotations are counterclockwise.  For ``add_parallel_edge``,
side='after' inserts the new edge immediately after the template in the
start vertex's rotation, which puts it on the template's left; the induced
disk traversal at the far end then runs clockwise.  side='before' mirrors.
"""

from __future__ import annotations

from .errors import GraphError, SurgeryError
from .graphs import MultipartiteGraph, norm_edge
from .planemap import PlaneMapDrawing, validate


class _Builder:
    """Mutable copy of a drawing supporting incremental surgery."""

    def __init__(self, D: PlaneMapDrawing):
        self.graph = D.graph
        self.edges = list(D.edges)
        self.paths = [list(p) for p in D.edge_paths]
        self.crossings = dict(D.crossings)
        self.rotations = {n: list(r) for n, r in D.rotations.items()}
        used = [int(c[1:]) for c in D.crossings if c.startswith("c") and c[1:].isdigit()]
        self._next_cid = max(used, default=0) + 1

    # -- small queries ------------------------------------------------------

    def edge_index(self, a, b) -> int:
        want = norm_edge(a, b)
        for i, e in enumerate(self.edges):
            if norm_edge(*e) == want:
                return i
        raise GraphError(f"unknown edge {want}", code="UNKNOWN_EDGE")

    def end_entry(self, e: int, vertex: str):
        a, b = self.edges[e]
        if vertex == a:
            return (e, 0)
        if vertex == b:
            return (e, len(self.paths[e]))
        raise GraphError(f"edge {e} not incident to {vertex}", code="UNKNOWN_VERTEX")

    def seg_nodes(self, e: int, s: int):
        a, b = self.edges[e]
        path = self.paths[e]
        start = a if s == 0 else path[s - 1]
        end = b if s == len(path) else path[s]
        return start, end

    def new_cid(self) -> str:
        cid = f"c{self._next_cid}"
        self._next_cid += 1
        return cid

    def other_edge(self, cid: str, e: int) -> int:
        p, q = self.crossings[cid]
        return q if p == e else p

    def incident_ids(self, v: str) -> set[int]:
        return {i for i, e in enumerate(self.edges) if v in e}

    # -- structural edits ----------------------------------------------------

    def reverse_edge(self, e: int) -> None:
        a, b = self.edges[e]
        L = len(self.paths[e])
        self.edges[e] = (b, a)
        self.paths[e].reverse()
        for node, rot in self.rotations.items():
            for k, (ee, ss) in enumerate(rot):
                if ee == e:
                    rot[k] = (e, L - ss)

    def insert_crossing(self, e: int, pos: int, cid: str) -> None:
        """Split segment ``pos`` of edge ``e`` at a new crossing node.

        Rotation entries for the far half of the split segment and for all
        later segments are shifted; the caller adds the new node's rotation.
        """
        start, end = self.seg_nodes(e, pos)
        for node, rot in self.rotations.items():
            for k, (ee, ss) in enumerate(rot):
                if ee != e:
                    continue
                if ss > pos or (ss == pos and node == end):
                    rot[k] = (e, ss + 1)
        self.paths[e].insert(pos, cid)

    def remove_crossing(self, cid: str) -> None:
        e, f = self.crossings.pop(cid)
        for g in (e, f):
            pos = self.paths[g].index(cid)
            del self.paths[g][pos]
            for node, rot in self.rotations.items():
                if node == cid:
                    continue
                for k, (ee, ss) in enumerate(rot):
                    if ee == g and ss > pos:
                        rot[k] = (g, ss - 1)
        del self.rotations[cid]

    def drop_edges(self, doomed: set[int]) -> None:
        """Remove edges whose crossings were already removed; renumbers ids."""
        for e in doomed:
            if self.paths[e]:
                raise SurgeryError(f"edge {e} still has crossings",
                                   code="GOODNESS_VIOLATION")
        remap = {}
        new_edges, new_paths = [], []
        for i, e in enumerate(self.edges):
            if i in doomed:
                continue
            remap[i] = len(new_edges)
            new_edges.append(e)
            new_paths.append(self.paths[i])
        self.edges = new_edges
        self.paths = new_paths
        self.crossings = {cid: (remap[p], remap[q])
                          for cid, (p, q) in self.crossings.items()}
        for node in self.rotations:
            self.rotations[node] = [(remap[e], s) for (e, s) in self.rotations[node]
                                    if e not in doomed]

    def freeze(self, graph: MultipartiteGraph, context: str) -> PlaneMapDrawing:
        drawn = sorted(norm_edge(*e) for e in self.edges)
        if drawn != sorted(graph.edges):
            raise SurgeryError(f"{context}: edge bookkeeping out of sync",
                               code="GOODNESS_VIOLATION")
        D = PlaneMapDrawing(
            graph=graph,
            edges=tuple(self.edges),
            crossings=dict(self.crossings),
            edge_paths=tuple(tuple(p) for p in self.paths),
            rotations={n: tuple(r) for n, r in self.rotations.items()},
        )
        report = validate(D)
        if not report.passed:
            raise SurgeryError(f"{context} produced an invalid drawing:\n{report}",
                               code="GOODNESS_VIOLATION")
        return D


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def mirror_drawing(D: PlaneMapDrawing) -> PlaneMapDrawing:
    """The reflected drawing: every rotation reversed, same crossings."""
    b = _Builder(D)
    for node in b.rotations:
        b.rotations[node] = list(reversed(b.rotations[node]))
    return b.freeze(D.graph, "mirror")


def delete_edges(D: PlaneMapDrawing, edges) -> PlaneMapDrawing:
    """Remove a set of edges together with every crossing they carry."""
    pairs = {norm_edge(*e) for e in edges}
    b = _Builder(D)
    doomed = {b.edge_index(*e) for e in pairs}
    for cid in [c for c, (p, q) in D.crossings.items()
                if p in doomed or q in doomed]:
        b.remove_crossing(cid)
    b.drop_edges(doomed)
    return b.freeze(D.graph.with_edges_removed(pairs), "delete_edges")


def subdivide_on_spoke(D: PlaneMapDrawing, v: str, u: str,
                       new_label: str) -> PlaneMapDrawing:
    """Place a degree-2 node on edge vu, on the segment incident to v.

    The new node's edge to v is crossing-free; the edge to u inherits all
    of vu's crossings in order.
    """
    if new_label in set(D.graph.vertices):
        raise GraphError(f"label {new_label!r} already used", code="DUPLICATE_LABEL")
    b = _Builder(D)
    e = b.edge_index(v, u)
    if b.edges[e][0] != v:
        b.reverse_edge(e)
    old_path = b.paths[e]

    e1 = e                     # becomes (v, new_label), empty path
    e2 = len(b.edges)          # (new_label, u), inherits the path
    b.edges[e1] = (v, new_label)
    b.edges.append((new_label, u))
    b.paths.append(old_path)
    b.paths[e1] = []
    for cid, (p, q) in list(b.crossings.items()):
        if p == e1 or q == e1:
            b.crossings[cid] = (e2 if p == e1 else p, e2 if q == e1 else q)
    for node, rot in b.rotations.items():
        for k, (ee, ss) in enumerate(rot):
            if ee == e1:
                rot[k] = (e1, 0) if node == v else (e2, ss)
    b.rotations[new_label] = [(e1, 0), (e2, 0)]

    graph = D.graph.with_edges_removed([(v, u)]).with_edges_added(
        [(v, new_label), (new_label, u)], new_vertices=[new_label])
    return b.freeze(graph, "subdivide_on_spoke")


def _ccw_between(rot, start_entry, stop_entry):
    """Entries strictly between start and stop, counterclockwise."""
    i = rot.index(start_entry)
    out = []
    j = (i + 1) % len(rot)
    while rot[j] != stop_entry:
        out.append(rot[j])
        j = (j + 1) % len(rot)
    return out


def add_parallel_edge(D: PlaneMapDrawing, a: str, t: str, template,
                      side: str, disk_spec) -> PlaneMapDrawing:
    """Route a new edge a-t alongside ``template`` (an edge a-w).

    Outside w's disk the new edge crosses exactly what the template crosses,
    except crossings with edges incident to t (which must form a suffix of
    the template's path); inside the disk it crosses the spokes of w listed
    in ``disk_spec``, which must be the rotation interval between the
    template and the crossing-free spoke w-t on the circling side implied
    by ``side``.  ``disk_spec`` entries are vertex-label pairs.
    """
    if side not in ("before", "after"):
        raise SurgeryError(f"side must be 'before' or 'after', got {side!r}",
                           code="BAD_INTERVAL")
    b = _Builder(D)
    T = b.edge_index(*template)
    ta, tb = b.edges[T]
    if a not in (ta, tb):
        raise SurgeryError("template not incident to start vertex",
                           code="GOODNESS_VIOLATION")
    if b.edges[T][0] != a:
        b.reverse_edge(T)
    w = b.edges[T][1]
    if t == a or t == w:
        raise SurgeryError("new edge endpoints degenerate", code="GOODNESS_VIOLATION")
    try:
        stub = b.edge_index(w, t)
    except GraphError:
        raise SurgeryError(f"no spoke {w}-{t} to guide the disk exit",
                           code="GOODNESS_VIOLATION")
    if b.paths[stub]:
        raise SurgeryError(f"guide spoke {w}-{t} is not crossing-free",
                           code="GOODNESS_VIOLATION")
    if norm_edge(a, t) in {norm_edge(*e) for e in b.edges}:
        raise GraphError(f"edge {a}-{t} already present", code="DUPLICATE_EDGE")

    # crossings with t-incident edges are skipped and must trail the path
    t_ids = b.incident_ids(t)
    path_T = list(b.paths[T])
    shadow = [cid for cid in path_T if b.other_edge(cid, T) not in t_ids]
    if path_T[:len(shadow)] != shadow:
        raise SurgeryError(
            "template's crossings with edges at the target do not form a "
            "suffix; the parallel edge cannot peel off", code="GOODNESS_VIOLATION")

    cw = (side == "after")
    rot_w = b.rotations[w]
    tmpl_entry = b.end_entry(T, w)
    stub_entry = b.end_entry(stub, w)
    if cw:
        between = list(reversed(_ccw_between(rot_w, stub_entry, tmpl_entry)))
    else:
        between = _ccw_between(rot_w, tmpl_entry, stub_entry)
    want = [norm_edge(*p) for p in disk_spec]
    got = [norm_edge(*b.edges[e]) for (e, _) in between]
    if want != got:
        raise SurgeryError(
            f"disk_spec does not match the {'clockwise' if cw else 'counterclockwise'}"
            f" rotation interval at {w}: expected {got}, got {want}",
            code="BAD_INTERVAL")

    N = len(b.edges)
    b.edges.append((a, t))
    b.paths.append([])

    # start-vertex rotation: new edge beside the template
    rot_a = b.rotations[a]
    ia = rot_a.index(b.end_entry(T, a))
    rot_a.insert(ia + 1 if side == "after" else ia, (N, 0))

    # shadow phase: one crossing beside each template crossing
    for idx, cid in enumerate(shadow):
        f = b.other_edge(cid, T)
        j = b.paths[f].index(cid)
        rot_c = b.rotations[cid]
        pos_fwd = rot_c.index((T, idx + 1))
        f_fwd_left = rot_c[(pos_fwd + 1) % 4] == (f, j + 1)
        ins = j + 1 if f_fwd_left == cw else j
        pN = len(b.paths[N])
        x2 = b.new_cid()
        b.insert_crossing(f, ins, x2)
        b.paths[N].append(x2)
        b.crossings[x2] = (min(N, f), max(N, f))
        if f_fwd_left:
            b.rotations[x2] = [(N, pN + 1), (f, ins + 1), (N, pN), (f, ins)]
        else:
            b.rotations[x2] = [(N, pN + 1), (f, ins), (N, pN), (f, ins + 1)]

    # disk phase: cross the listed spokes nearest to w
    for (g, _) in between:
        if b.edges[g][0] != w:
            b.reverse_edge(g)
        pN = len(b.paths[N])
        x2 = b.new_cid()
        b.insert_crossing(g, 0, x2)
        b.paths[N].append(x2)
        b.crossings[x2] = (min(N, g), max(N, g))
        if cw:
            b.rotations[x2] = [(g, 1), (N, pN), (g, 0), (N, pN + 1)]
        else:
            b.rotations[x2] = [(g, 1), (N, pN + 1), (g, 0), (N, pN)]

    # target rotation: beside the guide spoke, on the circling side
    rot_t = b.rotations[t]
    it = rot_t.index(b.end_entry(stub, t))
    rot_t.insert(it if cw else it + 1, (N, len(b.paths[N])))

    graph = D.graph.with_edges_added([(a, t)])
    return b.freeze(graph, "add_parallel_edge")


def reroute_in_disk(D: PlaneMapDrawing, edge, v: str, new_interval,
                    disk_end: str) -> PlaneMapDrawing:
    """Change which spokes of v an edge crosses on its final approach.

    ``edge`` must end at ``disk_end``, a vertex joined to v by a
    crossing-free spoke; its trailing run of crossings with v's spokes is
    replaced by crossings with ``new_interval`` (a rotation interval of v's
    spokes reachable from the same entry gap).
    """
    b = _Builder(D)
    e = b.edge_index(*edge)
    if b.edges[e][1] != disk_end:
        if b.edges[e][0] != disk_end:
            raise GraphError(f"{disk_end} is not an endpoint of {edge}",
                             code="UNKNOWN_VERTEX")
        b.reverse_edge(e)
    try:
        stub = b.edge_index(v, disk_end)
    except GraphError:
        raise SurgeryError(f"no crossing-free spoke {v}-{disk_end}",
                           code="GOODNESS_VIOLATION")
    if b.paths[stub]:
        raise SurgeryError(f"spoke {v}-{disk_end} is not crossing-free",
                           code="GOODNESS_VIOLATION")

    v_ids = b.incident_ids(v)
    path_e = list(b.paths[e])
    suffix = []
    for cid in reversed(path_e):
        if b.other_edge(cid, e) in v_ids:
            suffix.append(cid)
        else:
            break
    suffix.reverse()
    old_spokes = [b.other_edge(cid, e) for cid in suffix]

    rot_v = b.rotations[v]
    deg = len(rot_v)
    stub_entry_v = b.end_entry(stub, v)

    def entry_of(g):
        return b.end_entry(g, v)

    # locate the entry gap (A, B): B is the ccw successor of A
    if len(old_spokes) >= 1:
        g1 = entry_of(old_spokes[0])
        i1 = rot_v.index(g1)
        succ = rot_v[(i1 + 1) % deg]
        pred = rot_v[(i1 - 1) % deg]
        if len(old_spokes) >= 2:
            g2 = entry_of(old_spokes[1])
            if succ == g2:
                direction = "ccw"
            elif pred == g2:
                direction = "cw"
            else:
                raise SurgeryError("existing disk crossings are not a rotation arc",
                                   code="GOODNESS_VIOLATION")
            walk = i1
            step = 1 if direction == "ccw" else -1
            for g in old_spokes[1:]:
                walk = (walk + step) % deg
                if rot_v[walk] != entry_of(g):
                    raise SurgeryError("existing disk crossings are not a rotation arc",
                                       code="GOODNESS_VIOLATION")
        else:
            if succ == stub_entry_v:
                direction = "ccw"
            elif pred == stub_entry_v:
                direction = "cw"
            else:
                raise SurgeryError("disk crossing is not beside the guide spoke",
                                   code="GOODNESS_VIOLATION")
        if direction == "ccw":
            gap = (rot_v[(i1 - 1) % deg], g1)
        else:
            gap = (g1, rot_v[(i1 + 1) % deg])
    else:
        rot_t = b.rotations[disk_end]
        e_entry = b.end_entry(e, disk_end)
        stub_entry_t = b.end_entry(stub, disk_end)
        ii = rot_t.index(stub_entry_t)
        if rot_t[(ii - 1) % len(rot_t)] == e_entry:
            # arrived circling clockwise: entered just ccw of the stub
            gap = (stub_entry_v, rot_v[(rot_v.index(stub_entry_v) + 1) % deg])
        elif rot_t[(ii + 1) % len(rot_t)] == e_entry:
            gap = (rot_v[(rot_v.index(stub_entry_v) - 1) % deg], stub_entry_v)
        else:
            raise SurgeryError("edge does not end beside the guide spoke",
                               code="GOODNESS_VIOLATION")

    A, B = gap
    ccw_candidate = [B] if B != stub_entry_v else []
    if ccw_candidate:
        ccw_candidate += _ccw_between(rot_v, B, stub_entry_v)
    cw_candidate = [A] if A != stub_entry_v else []
    if cw_candidate:
        cw_candidate += list(reversed(_ccw_between(rot_v, stub_entry_v, A)))

    want = [norm_edge(*p) for p in new_interval]

    def names(entries):
        return [norm_edge(*b.edges[g]) for (g, _) in entries]

    if want == names(ccw_candidate):
        new_dir = "ccw"
        chosen = ccw_candidate
    elif want == names(cw_candidate):
        new_dir = "cw"
        chosen = cw_candidate
    else:
        raise SurgeryError(
            f"new_interval is not a rotation interval from the entry gap: "
            f"ccw option {names(ccw_candidate)}, cw option {names(cw_candidate)}",
            code="BAD_INTERVAL")

    for cid in suffix:
        b.remove_crossing(cid)
    rot_t = b.rotations[disk_end]
    rot_t.remove(b.end_entry(e, disk_end))

    for (g, _) in chosen:
        if b.edges[g][0] != v:
            b.reverse_edge(g)
        p = len(b.paths[e])
        cid = b.new_cid()
        b.insert_crossing(g, 0, cid)
        b.paths[e].append(cid)
        b.crossings[cid] = (min(e, g), max(e, g))
        if new_dir == "cw":
            b.rotations[cid] = [(g, 1), (e, p), (g, 0), (e, p + 1)]
        else:
            b.rotations[cid] = [(g, 1), (e, p + 1), (g, 0), (e, p)]

    it = rot_t.index(b.end_entry(stub, disk_end))
    rot_t.insert(it if new_dir == "cw" else it + 1, (e, len(b.paths[e])))
    return b.freeze(D.graph, "reroute_in_disk")
