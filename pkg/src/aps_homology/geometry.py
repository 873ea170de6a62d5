"""Build diagrams from closed polylines in the plane.

Curves are given as vertex lists (implicitly closed) in general position.
Crossings are found by exact segment intersection; over/under comes from
per-segment heights, or from alternation along the curves when no heights
are given.  Punctures are points; each lands in the smallest bounded face
containing it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from .diagram import Diagram, build_diagram, check_diagram
from .surface import PlanarSurface, PlaneMap

Point = tuple[Fraction, Fraction]


def _frac(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _intersect(p, q, r, s):
    """Parameters (t, u) of the proper intersection of segments pq and rs, or None."""
    dx1, dy1 = q[0] - p[0], q[1] - p[1]
    dx2, dy2 = s[0] - r[0], s[1] - r[1]
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        return None
    ex, ey = r[0] - p[0], r[1] - p[1]
    t = (ex * dy2 - ey * dx2) / den
    u = (ex * dy1 - ey * dx1) / den
    if 0 < t < 1 and 0 < u < 1:
        return t, u
    if 0 <= t <= 1 and 0 <= u <= 1:
        raise ValueError(f"curves not in general position near {p}")
    return None


def _signed_area(poly):
    a = 0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        a += x1 * y2 - x2 * y1
    return a / 2


def _inside(q, poly):
    x, y = q
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def diagram_from_curves(curves: Sequence[Sequence], punctures: Mapping[str, Sequence] | None = None,
                        heights: Sequence[Sequence] | None = None) -> Diagram:
    curves = [[_frac(p) for p in c] for c in curves]
    punctures = {k: _frac(v) for k, v in (punctures or {}).items()}
    segs = []  # (curve, index, start, end)
    for ci, c in enumerate(curves):
        if len(c) < 3:
            raise ValueError(f"curve {ci} needs at least 3 points")
        for j in range(len(c)):
            segs.append((ci, j, c[j], c[(j + 1) % len(c)]))

    # events[curve] = list of (segment, t, crossing id, pass id)
    events: list[list] = [[] for _ in curves]
    xings = []  # point, [(curve, seg), (curve, seg)]
    for a in range(len(segs)):
        ca, ja, p, q = segs[a]
        for b in range(a + 1, len(segs)):
            cb, jb, r, s = segs[b]
            if ca == cb:
                n = len(curves[ca])
                if jb == ja + 1 or (ja == 0 and jb == n - 1):
                    continue
            if max(p[0], q[0]) < min(r[0], s[0]) or max(r[0], s[0]) < min(p[0], q[0]):
                continue
            if max(p[1], q[1]) < min(r[1], s[1]) or max(r[1], s[1]) < min(p[1], q[1]):
                continue
            hit = _intersect(p, q, r, s)
            if hit is None:
                continue
            t, u = hit
            x = len(xings)
            pt = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            xings.append((pt, [(ca, ja), (cb, jb)]))
            events[ca].append((ja, t, x, 0))
            events[cb].append((jb, u, x, 1))
    for ev in events:
        ev.sort()

    over = _assign_over(curves, events, xings, heights)

    # darts: for each event an "in" dart and an "out" dart
    next_dart = 0
    dart_dir = {}     # dart -> direction vector (for rotation order)
    dart_path = {}    # dart -> polyline from its vertex to the far vertex
    vertex_darts: dict[int, list[int]] = {x: [] for x in range(len(xings))}
    pass_in_dart = {}
    inv = {}
    forward = set()
    loops = []
    for ci, c in enumerate(curves):
        ev = events[ci]
        n = len(c)
        if not ev:
            x, y = next_dart, next_dart + 1
            next_dart += 2
            inv[x], inv[y] = y, x
            forward.add(x)
            path = list(c) + [c[0]]
            dart_path[x] = path
            dart_path[y] = path[::-1]
            loops.append((x, y))
            continue
        outs, ins = [], []
        for (j, t, x, pid) in ev:
            p, q = c[j], c[(j + 1) % n]
            d = (q[0] - p[0], q[1] - p[1])
            din, dout = next_dart, next_dart + 1
            next_dart += 2
            dart_dir[dout] = d
            dart_dir[din] = (-d[0], -d[1])
            vertex_darts[x] += [din, dout]
            pass_in_dart[(x, pid)] = din
            ins.append(din)
            outs.append(dout)
        m = len(ev)
        for i in range(m):
            a_out = outs[i]
            b_in = ins[(i + 1) % m]
            inv[a_out], inv[b_in] = b_in, a_out
            forward.add(a_out)
            j0, t0, x0, _ = ev[i]
            j1, t1, x1, _ = ev[(i + 1) % m]
            path = [xings[x0][0]]
            k = j0
            # polyline vertices j0+1 .. j1 lie between the two events
            steps = (j1 - j0) % n
            if steps == 0 and t1 <= t0:
                steps = n
            for _ in range(steps):
                k = (k + 1) % n
                path.append(c[k])
            path.append(xings[x1][0])
            dart_path[a_out] = path
            dart_path[b_in] = path[::-1]

    crossings = []
    for x in range(len(xings)):
        ds = vertex_darts[x]
        ds.sort(key=lambda dd: math.atan2(float(dart_dir[dd][1]), float(dart_dir[dd][0])))
        under_pass = 1 - over[x]
        crossings.append((tuple(ds), pass_in_dart[(x, under_pass)]))

    rotations = tuple(r for r, _ in crossings) + tuple(loops)
    m = PlaneMap(inv, rotations)
    faces = m.faces
    polys = []
    for f in faces:
        poly = []
        for dd in f:
            poly.extend(dart_path[dd][:-1])
        polys.append(poly)
    areas = [_signed_area(p) for p in polys]
    comp_of_face = [m.component_of_dart(f[0]) for f in faces]
    ncomp = len(m.components)
    outer_face_of = {}
    for fi, a in enumerate(areas):
        if a > 0:
            outer_face_of[comp_of_face[fi]] = fi
    if len(outer_face_of) != ncomp:
        raise ValueError("could not identify the unbounded face of every component")

    def containing_face(q, exclude):
        best = None
        for fi, a in enumerate(areas):
            if a >= 0 or comp_of_face[fi] == exclude:
                continue
            if _inside(q, polys[fi]) and (best is None or -a < -areas[best]):
                best = fi
        return best

    comp_point = {}
    for fi, f in enumerate(faces):
        comp_point.setdefault(comp_of_face[fi], dart_path[f[0]][0])
    hosts = {}
    for c in range(ncomp):
        hosts[c] = containing_face(comp_point[c], c)
    top = [c for c in range(ncomp) if hosts[c] is None]
    root = top[0]
    outer = faces[outer_face_of[root]][0]
    nesting = []
    for c in range(ncomp):
        if c == root:
            continue
        host = hosts[c] if hosts[c] is not None else outer_face_of[root]
        nesting.append((faces[outer_face_of[c]][0], faces[host][0]))
    pdarts = {}
    for name, q in punctures.items():
        fi = containing_face(q, None)
        if fi is None:
            raise ValueError(f"puncture {name} at {q} lies in the outer face")
        pdarts[name] = faces[fi][0]

    surface = PlanarSurface(tuple(punctures))
    d = build_diagram(surface, inv, crossings, loops, outer, pdarts, nesting, forward=forward)
    return check_diagram(d)


def _assign_over(curves, events, xings, heights):
    """Crossing id -> pass id (0 or 1) that goes over."""
    over = {}
    if heights is not None:
        for x, (_, passes) in enumerate(xings):
            h = [heights[c][j] for c, j in passes]
            if h[0] == h[1]:
                raise ValueError(f"equal heights at crossing {xings[x][0]}")
            over[x] = 0 if h[0] > h[1] else 1
        return over
    for ev in events:
        if not ev:
            continue
        parity = 0
        for i, (_, _, x, pid) in enumerate(ev):
            if x in over:
                is_over = over[x] == pid
                parity = (0 if is_over else 1) - i
                break
        for i, (_, _, x, pid) in enumerate(ev):
            want_over = (i + parity) % 2 == 0
            if x in over:
                if (over[x] == pid) != want_over:
                    raise ValueError("curves admit no consistent alternating crossing assignment")
            else:
                over[x] = pid if want_over else 1 - pid
    return over


def sample_curve(fn, n, scale=1000, t0=0.0):
    """Closed polyline with ``n`` samples of ``fn(t)`` for t in [0, 2 pi), rounded to 1/scale."""
    pts = []
    for i in range(n):
        t = t0 + 2 * math.pi * i / n
        x, y = fn(t)
        pts.append((Fraction(round(x * scale), scale), Fraction(round(y * scale), scale)))
    return pts


def regular_polygon(cx, cy, r, n=8, phase=0.1):
    return sample_curve(lambda t: (cx + r * math.cos(t), cy + r * math.sin(t)), n, t0=phase)
