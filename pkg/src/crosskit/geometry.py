"""Exact straight-line layouts and their conversion to plane maps.

All predicates use rational arithmetic; there is no epsilon anywhere.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateLayoutError
from .graphs import MultipartiteGraph
from .planemap import PlaneMapDrawing, validate

Point = tuple[Fraction, Fraction]


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _between(a: Point, b: Point, p: Point) -> bool:
    """p strictly inside segment ab (collinearity assumed checked by caller)."""
    if cross(a, b, p) != 0:
        return False
    lo_x, hi_x = min(a[0], b[0]), max(a[0], b[0])
    lo_y, hi_y = min(a[1], b[1]), max(a[1], b[1])
    inside = lo_x <= p[0] <= hi_x and lo_y <= p[1] <= hi_y
    return inside and p != a and p != b


def proper_intersection(p1: Point, p2: Point, p3: Point, p4: Point) -> Point | None:
    """Interior crossing point of segments p1p2 and p3p4, or None."""
    d1 = cross(p3, p4, p1)
    d2 = cross(p3, p4, p2)
    d3 = cross(p1, p2, p3)
    d4 = cross(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        t = d1 / (d1 - d2)
        return (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
    return None


def segments_overlap(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """True if the two segments are collinear and share more than a point."""
    if cross(p1, p2, p3) != 0 or cross(p1, p2, p4) != 0:
        return False
    xs1 = sorted([p1, p2])
    xs2 = sorted([p3, p4])
    lo = max(xs1[0], xs2[0])
    hi = min(xs1[1], xs2[1])
    return lo < hi


def angle_sort_key():
    """Comparator for exact counterclockwise angular order from the +x axis."""

    def half(v):
        x, y = v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(u, w):
        hu, hw = half(u), half(w)
        if hu != hw:
            return -1 if hu < hw else 1
        c = u[0] * w[1] - u[1] * w[0]
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return functools.cmp_to_key(cmp)


@dataclass(frozen=True)
class GeometricLayout:
    """Vertex positions with straight-segment edges."""

    coordinates: dict            # vertex -> Point

    def point(self, v: str) -> Point:
        return self.coordinates[v]

    @staticmethod
    def from_raw(coords: dict) -> "GeometricLayout":
        return GeometricLayout({v: _pt(p) for v, p in coords.items()})


def check_layout(L: GeometricLayout, G: MultipartiteGraph) -> None:
    """Raise DEGENERATE_LAYOUT on any general-position violation."""
    pts = {v: L.point(v) for v in G.vertices}
    by_point = {}
    for v, p in pts.items():
        if p in by_point:
            raise DegenerateLayoutError(
                f"vertices {by_point[p]} and {v} coincide", witness=(by_point[p], v))
        by_point[p] = v

    edges = sorted(G.edges)
    for (a, b) in edges:
        pa, pb = pts[a], pts[b]
        for v in G.vertices:
            if v in (a, b):
                continue
            if _between(pa, pb, pts[v]):
                raise DegenerateLayoutError(
                    f"vertex {v} lies on segment {a}-{b}", witness=(v, a, b))

    # collinear overlaps and concurrent interior points
    hits = {}
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if segments_overlap(pts[a], pts[b], pts[c], pts[d]):
                raise DegenerateLayoutError(
                    f"segments {edges[i]} and {edges[j]} overlap",
                    witness=(edges[i], edges[j]))
            if set(edges[i]) & set(edges[j]):
                continue
            p = proper_intersection(pts[a], pts[b], pts[c], pts[d])
            if p is not None:
                for e in (i, j):
                    key = (e, p)
                    if key in hits:
                        raise DegenerateLayoutError(
                            f"three segments concurrent at {p}",
                            witness=(edges[hits[key]], edges[e], p))
                    hits[key] = j if e == i else i


def from_geometric(L: GeometricLayout, G: MultipartiteGraph) -> PlaneMapDrawing:
    """Build the plane map induced by a straight-line layout."""
    check_layout(L, G)
    pts = {v: L.point(v) for v in G.vertices}
    edges = tuple(sorted(G.edges))
    n = len(edges)

    raw = []  # (i, j, point) with i < j
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            if set(edges[i]) & set(edges[j]):
                continue
            p = proper_intersection(pts[a], pts[b], pts[c], pts[d])
            if p is not None:
                raw.append((i, j, p))
    raw.sort(key=lambda t: (t[0], t[1]))

    crossings = {}
    location = {}
    on_edge = {e: [] for e in range(n)}
    for k, (i, j, p) in enumerate(raw):
        cid = f"c{k + 1}"
        crossings[cid] = (i, j)
        location[cid] = p
        on_edge[i].append(cid)
        on_edge[j].append(cid)

    def param(e: int, p: Point) -> Fraction:
        a, b = edges[e]
        pa, pb = pts[a], pts[b]
        if pb[0] != pa[0]:
            return (p[0] - pa[0]) / (pb[0] - pa[0])
        return (p[1] - pa[1]) / (pb[1] - pa[1])

    edge_paths = []
    for e in range(n):
        cids = sorted(on_edge[e], key=lambda cid: param(e, location[cid]))
        edge_paths.append(tuple(cids))
    edge_paths = tuple(edge_paths)

    # rotations: straight edges have constant direction
    key = angle_sort_key()
    rotations = {}
    for v in G.vertices:
        entries = []
        for e in range(n):
            a, b = edges[e]
            if v == a:
                other = pts[b]
                seg = 0
            elif v == b:
                other = pts[a]
                seg = len(edge_paths[e])
            else:
                continue
            direction = (other[0] - pts[v][0], other[1] - pts[v][1])
            entries.append((direction, (e, seg)))
        entries.sort(key=lambda t: key(t[0]))
        rotations[v] = tuple(ent for _, ent in entries)

    for cid, (i, j) in crossings.items():
        p = location[cid]
        ends = []
        for e in (i, j):
            a, b = edges[e]
            d = (pts[b][0] - pts[a][0], pts[b][1] - pts[a][1])
            pos = edge_paths[e].index(cid)
            ends.append(((-d[0], -d[1]), (e, pos)))      # back toward start
            ends.append((d, (e, pos + 1)))               # onward toward end
        ends.sort(key=lambda t: key(t[0]))
        rotations[cid] = tuple(ent for _, ent in ends)

    D = PlaneMapDrawing(
        graph=G,
        edges=edges,
        crossings=crossings,
        edge_paths=edge_paths,
        rotations=rotations,
    )
    report = validate(D)
    if not report.passed:
        raise DegenerateLayoutError(f"layout produced invalid map:\n{report}")
    return D


def brute_force_crossing_count(L: GeometricLayout, G: MultipartiteGraph) -> int:
    """Independent pairwise intersection count, for cross-checking."""
    pts = {v: L.point(v) for v in G.vertices}
    edges = sorted(G.edges)
    total = 0
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if set(edges[i]) & set(edges[j]):
                continue
            a, b = edges[i]
            c, d = edges[j]
            if proper_intersection(pts[a], pts[b], pts[c], pts[d]) is not None:
                total += 1
    return total


# ---------------------------------------------------------------------------
# Polyline layouts (bent edges; used by the cylinder generator)
# ---------------------------------------------------------------------------

def from_polylines(G: MultipartiteGraph, paths: dict) -> PlaneMapDrawing:
    """Build the plane map of a polyline layout.

    ``paths`` maps each normalized edge to its waypoint list, oriented from
    the smaller to the larger endpoint label; endpoints must match the
    vertex coordinates implied by the first/last waypoints.  Non-adjacent
    edges may only meet in proper interior crossings of their segments,
    and adjacent edges may not meet at all outside the shared vertex.
    """
    edges = tuple(sorted(G.edges))
    for e in edges:
        if e not in paths:
            raise DegenerateLayoutError(f"no polyline for edge {e}")
    coords = {}
    for (a, b), pts in paths.items():
        pts = [_pt(p) for p in pts]
        if len(pts) < 2:
            raise DegenerateLayoutError(f"edge {(a, b)} has fewer than 2 waypoints")
        for v, p in ((a, pts[0]), (b, pts[-1])):
            if v in coords and coords[v] != p:
                raise DegenerateLayoutError(f"vertex {v} placed at two points")
            coords[v] = p

    segs = {}   # edge -> list of (p, q)
    for e in edges:
        pts = [_pt(p) for p in paths[e]]
        for k in range(len(pts) - 1):
            if pts[k] == pts[k + 1]:
                raise DegenerateLayoutError(f"zero-length segment on edge {e}")
        segs[e] = [(pts[k], pts[k + 1]) for k in range(len(pts) - 1)]

    pos = {v: coords[v] for v in G.vertices}
    vertex_points = set(pos.values())
    if len(vertex_points) != len(G.vertices):
        raise DegenerateLayoutError("coincident vertices")

    # no vertex interior to any segment; no waypoint on a foreign edge
    for e in edges:
        for (p, q) in segs[e]:
            for v, vp in pos.items():
                if vp != p and vp != q and cross(p, q, vp) == 0 and _between(p, q, vp):
                    raise DegenerateLayoutError(
                        f"vertex {v} lies on a segment of edge {e}", witness=(v, e))

    # self-intersection within one edge
    for e in edges:
        ss = segs[e]
        for a_i in range(len(ss)):
            for b_i in range(a_i + 1, len(ss)):
                p1, p2 = ss[a_i]
                p3, p4 = ss[b_i]
                if b_i == a_i + 1:
                    if segments_overlap(p1, p2, p3, p4):
                        raise DegenerateLayoutError(f"edge {e} doubles back on itself")
                    continue
                if proper_intersection(p1, p2, p3, p4) is not None or \
                        segments_overlap(p1, p2, p3, p4) or \
                        _between(p1, p2, p3) or _between(p3, p4, p2):
                    raise DegenerateLayoutError(f"edge {e} crosses itself")

    def touches(p, q, r):
        """r on closed segment pq."""
        return cross(p, q, r) == 0 and \
            min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and \
            min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    raw = []   # (edge index i, edge index j, point)
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            e1, e2 = edges[i], edges[j]
            shared = set(e1) & set(e2)
            found = []
            for (p1, p2) in segs[e1]:
                for (p3, p4) in segs[e2]:
                    if segments_overlap(p1, p2, p3, p4):
                        raise DegenerateLayoutError(
                            f"edges {e1} and {e2} overlap", witness=(e1, e2))
                    x = proper_intersection(p1, p2, p3, p4)
                    if x is not None:
                        found.append(x)
                        continue
                    # endpoint touchings other than at a shared vertex
                    for r in (p3, p4):
                        if touches(p1, p2, r) and r not in (p1, p2):
                            raise DegenerateLayoutError(
                                f"edge {e2} touches edge {e1}", witness=(e1, e2, r))
                    for r in (p1, p2):
                        if touches(p3, p4, r) and r not in (p3, p4):
                            raise DegenerateLayoutError(
                                f"edge {e1} touches edge {e2}", witness=(e1, e2, r))
            if shared and found:
                raise DegenerateLayoutError(
                    f"adjacent edges {e1}, {e2} cross", witness=(e1, e2))
            if len(found) > 1:
                raise DegenerateLayoutError(
                    f"edges {e1}, {e2} cross {len(found)} times", witness=(e1, e2))
            for x in found:
                raw.append((i, j, x))

    points_seen = {}
    for i, j, p in raw:
        if p in points_seen:
            raise DegenerateLayoutError(f"three edges concurrent at {p}",
                                        witness=(points_seen[p], (i, j), p))
        points_seen[p] = (i, j)

    raw.sort(key=lambda t: (t[0], t[1]))
    crossings = {}
    location = {}
    on_edge = {e: [] for e in range(n)}
    for k, (i, j, p) in enumerate(raw):
        cid = f"c{k + 1}"
        crossings[cid] = (i, j)
        location[cid] = p
        on_edge[i].append(cid)
        on_edge[j].append(cid)

    def along(e: int, p: Point):
        """Sort key along edge e: (segment index, parameter)."""
        for k, (a, b) in enumerate(segs[edges[e]]):
            if touches(a, b, p):
                if b[0] != a[0]:
                    t = (p[0] - a[0]) / (b[0] - a[0])
                else:
                    t = (p[1] - a[1]) / (b[1] - a[1])
                if 0 < t < 1:
                    return (k, t)
        raise DegenerateLayoutError(f"crossing point {p} not interior to edge {edges[e]}")

    edge_paths = []
    seg_of = {}
    for e in range(n):
        keyed = sorted(((along(e, location[cid]), cid) for cid in on_edge[e]))
        edge_paths.append(tuple(cid for _, cid in keyed))
        for (sk, _), cid in keyed:
            seg_of[(e, cid)] = sk
    edge_paths = tuple(edge_paths)

    key = angle_sort_key()
    rotations = {}
    for v in G.vertices:
        entries = []
        for e in range(n):
            a, b = edges[e]
            if v == a:
                p0, p1 = segs[edges[e]][0]
                direction = (p1[0] - p0[0], p1[1] - p0[1])
                entries.append((direction, (e, 0)))
            elif v == b:
                p0, p1 = segs[edges[e]][-1]
                direction = (p0[0] - p1[0], p0[1] - p1[1])
                entries.append((direction, (e, len(edge_paths[e]))))
        entries.sort(key=lambda t: key(t[0]))
        rotations[v] = tuple(ent for _, ent in entries)

    for cid, (i, j) in crossings.items():
        ends = []
        for e in (i, j):
            a, b = segs[edges[e]][seg_of[(e, cid)]]
            d = (b[0] - a[0], b[1] - a[1])
            p = edge_paths[e].index(cid)
            ends.append(((-d[0], -d[1]), (e, p)))
            ends.append((d, (e, p + 1)))
        ends.sort(key=lambda t: key(t[0]))
        rotations[cid] = tuple(ent for _, ent in ends)

    D = PlaneMapDrawing(
        graph=G,
        edges=edges,
        crossings=crossings,
        edge_paths=edge_paths,
        rotations=rotations,
    )
    report = validate(D)
    if not report.passed:
        raise DegenerateLayoutError(f"polyline layout produced invalid map:\n{report}")
    return D
