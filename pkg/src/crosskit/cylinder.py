"""Annulus-style drawings of K_{1,1,m,n} hitting the closed-form count.

Layout: the Y x Z complete-bipartite fabric is drawn as the standard axis
drawing (Y split on the horizontal axis, Z on the vertical).  One apex
vertex ``o`` sits at the origin, the other apex ``x`` outside everything on
the positive horizontal axis.  Edges from the apexes hug the axes in narrow
lanes, dodging interposed vertices; edges from ``x`` to far targets wrap
around the drawing on nested rings.  The apex-apex edge wraps underneath,
crossing exactly the down-edges of the left Y vertices.

Total crossings: Z(m,n) fabric + floor(n/2)*T_m + ceil(n/2)*T_m
+ floor(m/2)*T_n + ceil(m/2)*T_n + floor(m/2)*floor(n/2), which equals
Z(m+2,n+2) - mn + floor(m/2)*floor(n/2) for all m, n >= 2
(T_k = C(ceil(k/2),2) + C(floor(k/2),2)).  The builder asserts the count.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CrosskitError
from .geometry import from_polylines
from .graphs import complete_multipartite, norm_edge
from .planemap import PlaneMapDrawing

SUPPORTED_RANGE = 10


def cylinder_supported(m: int, n: int) -> bool:
    return 2 <= m <= SUPPORTED_RANGE and 2 <= n <= SUPPORTED_RANGE


def closed_form_count(m: int, n: int) -> int:
    def z(a, b):
        return (a // 2) * ((a - 1) // 2) * (b // 2) * ((b - 1) // 2)

    return z(m + 2, n + 2) - m * n + (m // 2) * (n // 2)


def build_cylinder_drawing(m: int, n: int) -> PlaneMapDrawing:
    G = complete_multipartite([1, 1, m, n])
    o, x = "o", "x"
    Y, Z = list(G.parts[2]), list(G.parts[3])
    r, l = (m + 1) // 2, m // 2
    u, d = (n + 1) // 2, n // 2

    F = Fraction
    X0 = F(r + 3)

    # coordinate tables: Y[0..r-1] right at 1..r, Y[r..] left at -1..-l
    ypos = {}
    for i in range(r):
        ypos[Y[i]] = (F(i + 1), F(0))
    for i in range(l):
        ypos[Y[r + i]] = (F(-(i + 1)), F(0))
    zpos = {}
    for i in range(u):
        zpos[Z[i]] = (F(0), F(i + 1))
    for i in range(d):
        zpos[Z[u + i]] = (F(0), F(-(i + 1)))

    # scale ladder: lane depths EPS*k, fan offsets EPS2*(BIGK-k), micro offsets EPS3*k
    total_levels = 4 * (m + n) + 16
    BIGK = 4 * total_levels
    EPS = F(1, 16 * total_levels)
    EPS2 = EPS / (2 * BIGK)
    EPS3 = EPS2 / (4 * BIGK)

    level_counter = [0]

    def next_level() -> int:
        level_counter[0] += 1
        if level_counter[0] >= total_levels:
            raise CrosskitError("level budget exceeded", code="UNSUPPORTED_SIZE")
        return level_counter[0]

    paths = {}

    def add(a: str, b: str, pts) -> None:
        e = norm_edge(a, b)
        if e[0] != a:
            pts = list(reversed(pts))
        paths[e] = pts

    # fabric: straight Y-Z segments
    for yv in Y:
        for zv in Z:
            add(yv, zv, [ypos[yv], zpos[zv]])

    def hub_strand(hub, target, sign_main, sign_side, horizontal: bool):
        """Axis-hugging lane from a hub at the origin-like corner.

        ``horizontal``: lane parallel to the x-axis (for o->Y) vs the
        y-axis (o->Z).  ``sign_main`` is the direction toward the target
        along the axis; ``sign_side`` the dodging side.
        """
        lv = next_level()
        if horizontal:
            D = EPS * lv
            q = EPS2 * (BIGK - lv)
            c = abs(target[0])
            s = 2 * c * D
            return [
                (F(0), F(0)),
                (sign_main * q, sign_side * D),
                (sign_main * (c - s), sign_side * D),
                target,
            ]
        lam = EPS3 * lv
        qz = EPS2 * (BIGK - lv)
        c = abs(target[1])
        sz = 2 * c * lam
        return [
            (F(0), F(0)),
            (sign_side * lam, sign_main * qz),
            (sign_side * lam, sign_main * (c - sz)),
            target,
        ]

    # o -> Y: below-axis lanes; o -> Z: lanes left of the vertical axis
    for i in range(r):
        add(o, Y[i], hub_strand(o, ypos[Y[i]], F(1), F(-1), True))
    for i in range(l):
        add(o, Y[r + i], hub_strand(o, ypos[Y[r + i]], F(-1), F(-1), True))
    for i in range(u):
        add(o, Z[i], hub_strand(o, zpos[Z[i]], F(1), F(-1), False))
    for i in range(d):
        add(o, Z[u + i], hub_strand(o, zpos[Z[u + i]], F(-1), F(-1), False))

    # x -> right Y: lanes above the axis, inner targets on higher lanes
    for j in range(r - 1, -1, -1):
        lv = next_level()
        nu = EPS * lv
        qx = EPS2 * (BIGK - lv)
        c = F(j + 1)
        sx = EPS3
        add(x, Y[j], [
            (X0, F(0)),
            (X0 - qx, nu),
            (c + sx, nu),
            (c, F(0)),
        ])

    # Rings over the top.  Departure offsets rho: the whole left-Y band must
    # sit closer to x than the up-Z band (rho_y < rho_z for every pair), and
    # within each family the inner target takes the larger rho.
    rho_y_top = [EPS3 * (l - j) for j in range(l)]            # j=0 largest
    rho_z_top = [EPS3 * (l + u - j) for j in range(u)]        # all above y band

    # x -> up Z: descend at +mu (east of the vertical axis); inner targets
    # use larger mu and smaller rings (lower T).
    mu_levels = sorted((EPS3 * (2 * (l + u) + k + 1) for k in range(u)), reverse=True)
    Tz = [F(u + 2) + EPS * (j + 1) for j in range(u)]
    for j in range(u):
        mu = mu_levels[j]
        T = Tz[j]
        rho = rho_z_top[j]
        lat = F(j + 1)
        szx = 2 * lat * mu
        add(x, Z[j], [
            (X0, F(0)),
            (X0 - rho, F(1, 2)),
            (X0 - rho, T),
            (mu, T),
            (mu, lat + szx),
            (F(0), lat),
        ])

    # x -> left Y: rings above the z-band.  Inner target (j=0): lowest ring,
    # easternmost drop (smallest xi), largest departure offset, highest lane.
    base_T = F(u + 2) + EPS * (u + 2)
    lane_levels = sorted((next_level() for _ in range(l)), reverse=True)
    for j in range(l):
        nu2 = EPS * lane_levels[j]               # decreasing in j
        T = base_T + EPS * (j + 1)
        rho = rho_y_top[j]
        xi = EPS * (j + 1)
        c = F(j + 1)
        sx2 = EPS3
        add(x, Y[r + j], [
            (X0, F(0)),
            (X0 - rho, F(1, 2)),
            (X0 - rho, T),
            (F(-(l + 1)) - xi, T),
            (F(-(l + 1)) - xi, nu2),
            (-c - sx2, nu2),
            (-c, F(0)),
        ])

    # x -> down Z: rings underneath, mirrored from the up-Z family
    mu2_levels = sorted((EPS3 * (3 * (l + u) + d + k + 1) for k in range(d)),
                        reverse=True)
    rho_zd = [EPS3 * (d - j) + EPS3 * F(1, 2) for j in range(d)]
    Bz = [F(d + 2) + EPS * (j + 1) for j in range(d)]
    for j in range(d):
        mu = mu2_levels[j]
        B = Bz[j]
        rho = rho_zd[j]
        lat = F(j + 1)
        szx = 2 * lat * mu
        add(x, Z[u + j], [
            (X0, F(0)),
            (X0 - rho, F(-1, 2)),
            (X0 - rho, -B),
            (mu, -B),
            (mu, -(lat + szx)),
            (F(0), -lat),
        ])

    # o -> x: below-left lane past all left Y, then wrap deep underneath
    lv = next_level()
    D_ox = EPS * lv
    q_ox = EPS2 * (BIGK - lv)
    BOT = F(d + 3)
    tiny = EPS3
    add(o, x, [
        (F(0), F(0)),
        (-q_ox, -D_ox),
        (F(-(l + 1)), -D_ox),
        (F(-(l + 2)), -BOT),
        (X0 + 2, -BOT),
        (X0 + 2, -tiny),
        (X0, F(0)),
    ])

    coords = {o: (F(0), F(0)), x: (X0, F(0))}
    coords.update(ypos)
    coords.update(zpos)

    D = from_polylines(G, paths)
    want = closed_form_count(m, n)
    got = D.crossings_total()
    if got != want:
        raise CrosskitError(
            f"cylinder construction for ({m},{n}) gave {got} crossings, "
            f"expected {want}", code="UNSUPPORTED_SIZE")
    return D


def cylinder_layout_coordinates(m: int, n: int) -> dict:
    """Float vertex coordinates of the cylinder layout, for plotting only."""
    G = complete_multipartite([1, 1, m, n])
    Y, Z = list(G.parts[2]), list(G.parts[3])
    r, l = (m + 1) // 2, m // 2
    u, d = (n + 1) // 2, n // 2
    out = {"o": (0.0, 0.0), "x": (float(r + 3), 0.0)}
    for i in range(r):
        out[Y[i]] = (float(i + 1), 0.0)
    for i in range(l):
        out[Y[r + i]] = (float(-(i + 1)), 0.0)
    for i in range(u):
        out[Z[i]] = (0.0, float(i + 1))
    for i in range(d):
        out[Z[u + i]] = (0.0, float(-(i + 1)))
    return out
