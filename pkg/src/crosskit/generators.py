"""Drawing generators: axis drawings of K_{m,n}, cylinder drawings of
K_{1,1,m,n}, and seeded random straight-line drawings for property testing.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import CrosskitError, DegenerateLayoutError
from .geometry import GeometricLayout, from_geometric
from .graphs import MultipartiteGraph, complete_multipartite
from .cylinder import build_cylinder_drawing, cylinder_supported
from .planemap import PlaneMapDrawing

DEFAULT_SEED = 20240917


def axis_positions(count: int):
    """Zarankiewicz split: floor(count/2) negative slots, the rest positive."""
    neg = count // 2
    pos = count - neg
    return [Fraction(-k) for k in range(neg, 0, -1)] + [Fraction(k) for k in range(1, pos + 1)]


def zarankiewicz_drawing(m: int, n: int) -> PlaneMapDrawing:
    """Axis drawing of K_{m,n}: one part on each axis, all edges straight."""
    if m < 1 or n < 1:
        raise CrosskitError("parts must be nonempty", code="INVALID_PARTS")
    G = complete_multipartite([m, n])
    xs = axis_positions(m)
    ys = axis_positions(n)
    coords = {}
    for label, x in zip(G.parts[0], xs):
        coords[label] = (x, Fraction(0))
    for label, y in zip(G.parts[1], ys):
        coords[label] = (Fraction(0), y)
    return from_geometric(GeometricLayout(coords), G)


def cylinder_k11mn(m: int, n: int) -> PlaneMapDrawing:
    """Annulus-style good drawing of K_{1,1,m,n} meeting the closed-form count.

    The Y part sits on an outer circle, Z on an inner circle, with one apex
    vertex inside and the other outside; the construction is exact and
    combinatorial.  Raises UNSUPPORTED_SIZE outside the verified range.
    """
    if m < 2 or n < 2:
        raise CrosskitError(f"cylinder drawing needs m,n >= 2, got ({m},{n})",
                            code="UNSUPPORTED_SIZE")
    if not cylinder_supported(m, n):
        raise CrosskitError(f"cylinder drawing not verified for ({m},{n})",
                            code="UNSUPPORTED_SIZE")
    return build_cylinder_drawing(m, n)


def random_geometric_drawing(G: MultipartiteGraph, seed: int) -> PlaneMapDrawing:
    """Deterministic random straight-line drawing in general position.

    Straight-line drawings of simple graphs are automatically good; degenerate
    samples are redrawn with a derived sub-seed.
    """
    span = 2 ** 31
    for attempt in range(64):
        rng = random.Random((seed * 1_000_003 + attempt) & 0xFFFFFFFFFFFF)
        coords = {}
        for v in sorted(G.vertices):
            coords[v] = (Fraction(rng.randrange(span)), Fraction(rng.randrange(span)))
        try:
            return from_geometric(GeometricLayout(coords), G)
        except DegenerateLayoutError:
            continue
    raise CrosskitError("could not reach general position (seed exhausted)",
                        code="DEGENERATE_LAYOUT")
