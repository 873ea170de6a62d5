"""Reidemeister moves on diagrams in a punctured disk.

Moves are local rewrites of the plane map.  Face references (outer face,
punctures, nesting) are darts; when a referenced dart disappears it is
replaced by a surviving dart of the same old face, which lands in the region
that old face became.  A move whose supporting disk contains a puncture, a
nested component or the outer boundary is refused with PunctureObstruction.

After every move, marker vertices on components that carry crossings are
removed, so a crossingless loop is the only place a marker survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diagram import Diagram, build_diagram, check_diagram, reorder_crossings
from .errors import PatternMismatch, PunctureObstruction
from .surface import PlaneMap

KINDS = ("R1", "R2", "R3", "R1_inverse", "R2_inverse", "reorder")


@dataclass(frozen=True)
class MoveSite:
    """Where and how to apply a move.

    R1: location (x,) is a dart of the edge that gets the kink; ``branch`` 0 puts
    the new monogon in the face of x, 1 in the face of the opposite dart;
    ``over`` says whether the strand's first pass through the kink is on top.
    R2: location (x1, x2), both darts on the face the finger crosses (x1 == x2
    pushes an edge over itself); ``over`` says whether the x1 strand is on top;
    ``branch`` picks which half of a split outer face stays outer.
    R1_inverse / R2_inverse / R3: location (t,) is a dart on the monogon,
    bigon or triangle face.
    reorder: location is a 1-based permutation of the crossings.
    """

    kind: str
    location: tuple[int, ...]
    over: bool = True
    branch: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")


class _Edit:
    """Mutable working copy of a diagram."""

    def __init__(self, d: Diagram):
        self.d = d
        self.surface = d.surface
        self.inv = dict(d.involution)
        # crossing slot -> [rotation, under dart]; slots keep the crossing order
        self.xings: list[list | None] = [[tuple(r), r[0]] for r in d.crossings]
        self.loops = [tuple(l) for l in d.loops]
        self.forward = set(d.forward)
        self.outer = d.outer
        self.punct = dict(d.puncture_darts)
        self.nesting = [list(p) for p in d.nesting]
        self.next = max(d.involution, default=-1) + 1
        self.old_map = d.map

    def new_darts(self, n):
        out = list(range(self.next, self.next + n))
        self.next += n
        return out

    def link(self, a, b):
        self.inv[a] = b
        self.inv[b] = a

    def refs(self):
        yield ("outer", None, self.outer)
        for p, x in self.punct.items():
            yield ("punct", p, x)
        for i, (a, b) in enumerate(self.nesting):
            yield ("nest", (i, 0), a)
            yield ("nest", (i, 1), b)

    def set_ref(self, kind, key, dart):
        if kind == "outer":
            self.outer = dart
        elif kind == "punct":
            self.punct[key] = dart
        else:
            self.nesting[key[0]][key[1]] = dart

    def face_refs(self, face_darts):
        """References into the old face(s) containing any of ``face_darts``."""
        fo = self.old_map.face_of
        faces = {fo[x] for x in face_darts}
        return [(k, key, x) for k, key, x in self.refs() if fo[x] in faces]

    def obstruct(self, face_darts, what):
        hits = self.face_refs(face_darts)
        if hits:
            names = [key if k == "punct" else k for k, key, _ in hits]
            raise PunctureObstruction(f"{what} contains {names}")

    def delete(self, darts):
        darts = set(darts)
        for x in darts:
            self.inv.pop(x, None)
            self.forward.discard(x)
        for i, slot in enumerate(self.xings):
            if slot is not None and slot[0][0] in darts:
                self.xings[i] = None
        self.loops = [l for l in self.loops if l[0] not in darts]

    def remap_refs(self, deleted, fallback=None):
        """Move references off deleted darts onto surviving darts of the same old face."""
        m = self.old_map
        for kind, key, x in list(self.refs()):
            if x not in deleted:
                continue
            y = m.phi(x)
            while y != x and y in deleted:
                y = m.phi(y)
            if y in deleted or y == x:
                if fallback is not None and x in fallback:
                    y = fallback[x]
                else:
                    y = self.follow_strand(x, deleted)
            self.set_ref(kind, key, y)

    def follow_strand(self, x, deleted):
        """Dart of the face on the right of x once the deleted crossings are gone.

        Walks along the strand from x to the first surviving vertex; the face
        right of the strand there is the one that absorbs the face of x.
        """
        inv, straight, sigma = self.d.involution, self.d.straight, self.old_map.sigma
        w = x
        for _ in range(len(inv)):
            y = inv[w]
            if y not in deleted:
                return sigma[y]
            w = straight[y]
        raise PunctureObstruction(f"face of d{x} vanishes under the move")

    def finish(self) -> Diagram:
        crossings = [(r, u) for slot in self.xings if slot is not None for r, u in [slot]]
        d = build_diagram(self.surface, self.inv, crossings, self.loops, self.outer,
                          self.punct, [tuple(p) for p in self.nesting], forward=self.forward)
        d = _drop_markers(d)
        if d.outer is not None:
            outer = d.face_regions[d.map.face_of[d.outer]]
            for p, x in d.puncture_darts:
                if d.face_regions[d.map.face_of[x]] == outer:
                    raise PunctureObstruction(f"move would merge puncture {p} into the outer face")
        return check_diagram(d)


def _drop_markers(d: Diagram) -> Diagram:
    """Remove bivalent markers from components that have another vertex."""
    while True:
        m = d.map
        victim = None
        for li, (a, b) in enumerate(d.loops):
            comp = m.components[m.component_of_dart(a)]
            if len(comp) > 1:
                victim = li
                break
        if victim is None:
            return d
        m0, m1 = d.loops[victim]
        inv = dict(d.involution)
        a, b = inv[m0], inv[m1]
        remap = {m0: b, m1: a}
        del inv[m0], inv[m1]
        inv[a], inv[b] = b, a
        fwd = set(d.forward) - {m0, m1}

        def fix(x):
            return remap.get(x, x)

        loops = tuple(l for i, l in enumerate(d.loops) if i != victim)
        d = Diagram(d.surface, inv, d.crossings, loops, fix(d.outer),
                    tuple((p, fix(x)) for p, x in d.puncture_darts),
                    tuple((fix(x), fix(y)) for x, y in d.nesting), frozenset(fwd))


def _orient_path(e: _Edit, edges, reverse: bool):
    """Link a chain of (a, b) dart pairs and mark forward darts along it."""
    for a, b in edges:
        e.link(a, b)
        e.forward.discard(a)
        e.forward.discard(b)
        e.forward.add(b if reverse else a)


# -- R1 -------------------------------------------------------------------

def _r1(d: Diagram, site: MoveSite):
    (x,) = site.location
    if x not in d.involution:
        raise PatternMismatch(f"dart d{x} does not exist")
    e = _Edit(d)
    y = e.inv[x]
    k0, k1, k2, k3 = e.new_darts(4)
    rev = x not in d.forward
    if site.branch == 0:
        path = [(x, k0), (k2, k1), (k3, y)]
        loop_dart = k2
    else:
        path = [(x, k0), (k2, k3), (k1, y)]
        loop_dart = k2
    _orient_path(e, path, rev)
    under = k1 if site.over else k0
    e.xings.append([(k0, k1, k2, k3), under])
    out = e.finish()
    return out, MoveSite("R1_inverse", (loop_dart,))


def _r1_inverse(d: Diagram, site: MoveSite):
    (p,) = site.location
    if p not in d.involution:
        raise PatternMismatch(f"dart d{p} does not exist")
    m = d.map
    q = d.involution[p]
    ci = next((i for i, r in enumerate(d.crossings) if p in r), None)
    if ci is None or q not in d.crossings[ci]:
        raise PatternMismatch(f"dart d{p} is not on a kink loop")
    r = d.crossings[ci]
    if m.sigma[q] == p:
        p, q = q, p
    if m.sigma[p] != q:
        raise PatternMismatch(f"loop at d{p} does not bound a monogon")
    e = _Edit(d)
    e.obstruct([q], "the kink's monogon")
    i = r.index(p)
    s, t = r[(i + 2) % 4], r[(i + 3) % 4]
    under = r[0]
    first_over = s not in (r[0], r[2])
    es = d.involution[s]
    deleted = set(r)
    fallback = _reconnect(e, deleted)
    e.remap_refs(deleted, fallback)
    e.delete(deleted)
    inv_site = MoveSite("R1", (es,), over=first_over, branch=1) if es not in deleted else None
    return e.finish(), inv_site


def _reconnect(e: _Edit, deleted) -> dict:
    """Join the strands that ran through the deleted crossings.

    Returns a reference fallback for faces that lose every dart (only when a
    whole component shrinks to a crossingless loop, which gets a new marker).
    """
    straight = e.d.straight
    inv = e.d.involution
    done = set()
    for z in sorted(inv):
        if z in deleted or inv[z] not in deleted or z in done:
            continue
        w = inv[z]
        while True:
            w2 = inv[straight[w]]
            if w2 not in deleted:
                break
            w = w2
        done.add(z)
        done.add(w2)
        e.link(z, w2)
    fallback = {}
    # strands made only of deleted darts become free loops
    seen = set()
    for start in sorted(deleted):
        if start in seen or start not in e.d.forward:
            continue
        cyc = []
        x = start
        ok = True
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            y = inv[x]
            if y not in deleted:
                ok = False
                break
            x = straight[y]
        if not ok or x != start:
            continue
        m0, m1 = e.new_darts(2)
        e.link(m0, m1)
        e.forward.add(m0)
        e.loops.append((m0, m1))
        m = e.old_map
        for a in cyc:
            fallback.setdefault(a, m0)          # right of the strand
            fallback.setdefault(inv[a], m1)     # left of the strand
    for x, tgt in list(fallback.items()):
        for y in e.old_map.faces[e.old_map.face_of[x]]:
            fallback.setdefault(y, tgt)
    return fallback


# -- R2 -------------------------------------------------------------------

def _r2(d: Diagram, site: MoveSite):
    x1, x2 = site.location
    for x in (x1, x2):
        if x not in d.involution:
            raise PatternMismatch(f"dart d{x} does not exist")
    m = d.map
    if m.face_of[x1] != m.face_of[x2]:
        raise PatternMismatch(f"darts d{x1} and d{x2} do not border the same face")
    e = _Edit(d)
    refs = e.face_refs([x1])
    blocking = [r for r in refs if r[0] != "outer"]
    if blocking:
        names = [key if k == "punct" else k for k, key, _ in blocking]
        raise PunctureObstruction(f"R2 across a face holding {names}")
    is_outer = bool(refs)
    if x1 == x2:
        # subdivide the edge so the finger runs from one half to the other
        y = e.inv[x1]
        m0, m1 = e.new_darts(2)
        _orient_path(e, [(x1, m0), (m1, y)], x1 not in d.forward)
        e.loops.append((m0, m1))
        x2 = m1
        fwd2 = x1 in d.forward
    else:
        fwd2 = x2 in d.forward
    fwd1 = x1 in d.forward
    y1, y2 = e.inv[x1], e.inv[x2]
    PE, PN, PW, PS, QE, QN, QW, QS = e.new_darts(8)
    _orient_path(e, [(x1, PS), (PN, QN), (QS, y1)], not fwd1)
    _orient_path(e, [(x2, QW), (QE, PW), (PE, y2)], not fwd2)
    e.xings.append([(PE, PN, PW, PS), PE if site.over else PS])
    e.xings.append([(QE, QN, QW, QS), QE if site.over else QS])
    if is_outer:
        e.outer = x1 if site.branch == 0 else x2
    return e.finish(), MoveSite("R2_inverse", (PW,))


def _r2_inverse(d: Diagram, site: MoveSite):
    (b,) = site.location
    if b not in d.involution:
        raise PatternMismatch(f"dart d{b} does not exist")
    m = d.map
    face = m.faces[m.face_of[b]]
    if len(face) != 2:
        raise PatternMismatch(f"dart d{b} is not on a bigon")
    where = {x: i for i, r in enumerate(d.crossings) for x in r}
    b1, b2 = face
    if b1 not in where or b2 not in where or where[b1] == where[b2]:
        raise PatternMismatch("bigon is not bounded by two distinct crossings")
    inv = d.involution
    # strand of edge {b1, inv(b1)} and strand of edge {b2, inv(b2)}
    P, Q = where[b1], where[b2]
    if where.get(inv[b1]) != Q or where.get(inv[b2]) != P:
        raise PatternMismatch("bigon edges do not join its two crossings")

    def over_at(ci, dart):
        r = d.crossings[ci]
        return dart not in (r[0], r[2])

    if over_at(P, b1) != over_at(Q, inv[b1]):
        raise PatternMismatch("bigon strands alternate; this is not an R2 bigon")
    e = _Edit(d)
    e.obstruct([b1], "the bigon")
    deleted = set(d.crossings[P]) | set(d.crossings[Q])
    ncomp = len(m.components)
    fallback = _reconnect(e, deleted)
    e.remap_refs(deleted, fallback)
    e.delete(deleted)
    crossings = [(r, u) for slot in e.xings if slot is not None for r, u in [slot]]
    probe = PlaneMap(e.inv, tuple(r for r, _ in crossings) + tuple(e.loops))
    if len(probe.components) > ncomp:
        raise PatternMismatch("removing this bigon would split a component (unsupported)")
    return e.finish(), None


# -- R3 -------------------------------------------------------------------

# New tangle for the disk around a triangle.  Boundary points sit at 60 degree
# steps; strand 0 runs 0 -> 3 below the centre, so walked from point 0 it meets
# strand 2 before strand 1 (the mirror of the configuration it replaces).
_C = Fraction(995, 1000)
_H = Fraction(1, 10)
_CHORDS = {
    0: ((_C, -_H), (-_C, -_H)),
    1: ((Fraction(1, 2), Fraction(866, 1000)), (Fraction(-1, 2), Fraction(-866, 1000))),
    2: ((Fraction(-1, 2), Fraction(866, 1000)), (Fraction(1, 2), Fraction(-866, 1000))),
}
_STRANDS = ((0, 3), (1, 4), (2, 5))


def _chord_hit(a, b):
    (p, q), (r, s) = _CHORDS[a], _CHORDS[b]
    dx1, dy1 = q[0] - p[0], q[1] - p[1]
    dx2, dy2 = s[0] - r[0], s[1] - r[1]
    den = dx1 * dy2 - dy1 * dx2
    ex, ey = r[0] - p[0], r[1] - p[1]
    return (ex * dy2 - ey * dx2) / den, (ex * dy1 - ey * dx1) / den


def _r3(d: Diagram, site: MoveSite):
    (t,) = site.location
    if t not in d.involution:
        raise PatternMismatch(f"dart d{t} does not exist")
    m = d.map
    tri = m.faces[m.face_of[t]]
    where = {x: i for i, r in enumerate(d.crossings) for x in r}
    if len(tri) != 3 or any(x not in where for x in tri) or len({where[x] for x in tri}) != 3:
        raise PatternMismatch(f"dart d{t} is not on a triangle of three crossings")
    inv, sigma, straight = d.involution, m.sigma, d.straight
    V = [where[x] for x in tri]
    # boundary of the supporting disk, counter-clockwise: V0, V2, V1
    boundary = []
    for j in (0, 2, 1):
        e1 = sigma[tri[j]]
        boundary += [e1, sigma[e1]]
    for a, b in _STRANDS:
        if straight[inv[straight[boundary[a]]]] != boundary[b]:
            raise PatternMismatch("triangle strands are not arranged as in R3")
    strand_of_pos = {0: 0, 3: 0, 1: 1, 4: 1, 2: 2, 5: 2}
    # crossings by strand pair, and which strand is on top there
    pairs = {}
    top = {}
    for ci, (i, j) in zip((V[0], V[2], V[1]), ((0, 1), (2, 3), (4, 5))):
        r = d.crossings[ci]
        si, sj = strand_of_pos[i], strand_of_pos[j]
        key = (min(si, sj), max(si, sj))
        pairs[key] = ci
        top[key] = si if boundary[i] not in (r[0], r[2]) else sj
    if not any(len({top[p] == s for p in top if s in p}) == 1 for s in range(3)):
        raise PatternMismatch("no strand passes over (or under) both others")
    e = _Edit(d)
    e.obstruct([tri[0]], "the triangle")
    deleted = {x for ci in V for x in d.crossings[ci]}
    enters = {s: inv[boundary[a]] in d.forward for s, (a, _) in enumerate(_STRANDS)}
    for ci in V:
        e.xings[ci] = None
    for x in deleted:
        e.inv.pop(x, None)
        e.forward.discard(x)

    hits = {0: [], 1: [], 2: []}
    for key in pairs:
        ta, tb = _chord_hit(*key)
        hits[key[0]].append((ta, key))
        hits[key[1]].append((tb, key))
    at = {key: [] for key in pairs}
    direction = {}
    under = {}
    new_boundary = {}
    for s, (a_pos, b_pos) in enumerate(_STRANDS):
        p, q = _CHORDS[s]
        vec = (float(q[0] - p[0]), float(q[1] - p[1]))
        prev = None
        for n, (_, key) in enumerate(sorted(hits[s])):
            back, fwd = e.new_darts(2)
            direction[back] = (-vec[0], -vec[1])
            direction[fwd] = vec
            at[key] += [back, fwd]
            e.forward.add(fwd if enters[s] else back)
            if top[key] != s:
                under[key] = back
            if n == 0:
                new_boundary[a_pos] = back
            else:
                e.link(prev, back)
            prev = fwd
        new_boundary[b_pos] = prev
    old_to_new = {boundary[i]: new_boundary[i] for i in range(6)}
    for i in range(6):
        outside = inv[boundary[i]]
        e.link(new_boundary[i], old_to_new.get(outside, outside))
    new_sigma = {}
    for key, ci in pairs.items():
        rot = sorted(at[key], key=lambda x: math.atan2(direction[x][1], direction[x][0]))
        e.xings[ci] = [tuple(rot), under[key]]
        for i, x in enumerate(rot):
            new_sigma[x] = rot[(i + 1) % 4]
    # the region outside boundary arc i (between points i and i+1) keeps its identity
    arc_face = {}
    for i in range(6):
        arc_face.setdefault(m.face_of[sigma[boundary[i]]], new_sigma[new_boundary[i]])
    for kind, key, x in list(e.refs()):
        if x in deleted and m.face_of[x] in arc_face:
            e.set_ref(kind, key, arc_face[m.face_of[x]])
    e.remap_refs(deleted)
    out = e.finish()
    inv_site = None
    for f in out.map.faces:
        if len(f) == 3 and all(x in direction for x in f):
            inv_site = MoveSite("R3", (f[0],))
    return out, inv_site


# -- dispatch -------------------------------------------------------------

_MOVES = {"R1": _r1, "R1_inverse": _r1_inverse, "R2": _r2, "R2_inverse": _r2_inverse, "R3": _r3}


def apply_move_with_inverse(d: Diagram, site: MoveSite):
    """(new diagram, site of the move that undoes this one, or None)."""
    if site.kind == "reorder":
        perm = list(site.location)
        inverse = [0] * len(perm)
        for i, p in enumerate(perm):
            if 1 <= p <= len(perm):
                inverse[p - 1] = i + 1
        return reorder_crossings(d, perm), MoveSite("reorder", tuple(inverse))
    return _MOVES[site.kind](d, site)


def apply_move(d: Diagram, site: MoveSite) -> Diagram:
    return apply_move_with_inverse(d, site)[0]


# -- site search ----------------------------------------------------------

def _candidates(d: Diagram, kind: str):
    m = d.map
    if kind == "R1":
        for x in sorted(d.involution):
            for branch in (0, 1):
                for over in (True, False):
                    yield MoveSite("R1", (x,), over, branch)
    elif kind == "R1_inverse":
        for r in d.crossings:
            for i in range(4):
                if d.involution[r[i]] == r[(i + 1) % 4]:
                    yield MoveSite("R1_inverse", (r[i],))
    elif kind == "R2":
        outer = m.face_of[d.outer] if d.outer is not None else None
        for fi, f in enumerate(m.faces):
            branches = (0, 1) if fi == outer else (0,)
            for i, x1 in enumerate(f):
                for x2 in f[i:]:
                    for over in (True, False):
                        for b in branches:
                            yield MoveSite("R2", (x1, x2), over, b)
    elif kind in ("R2_inverse", "R3"):
        size = 2 if kind == "R2_inverse" else 3
        for f in m.faces:
            if len(f) == size:
                yield MoveSite(kind, (f[0],))
    else:
        raise ValueError(f"no site search for {kind!r}")


def find_sites(d: Diagram, kind: str) -> list[MoveSite]:
    """Every site of the given kind where the move actually applies."""
    out = []
    for site in _candidates(d, kind):
        try:
            apply_move(d, site)
        except (PatternMismatch, PunctureObstruction):
            continue
        out.append(site)
    return out


# -- isomorphism ----------------------------------------------------------

def _dart_labels(d: Diagram) -> dict:
    m = d.map
    tags: dict[int, list] = {}
    if d.outer is not None:
        tags.setdefault(m.face_of[d.outer], []).append(("outer",))
    for p, x in d.puncture_darts:
        tags.setdefault(m.face_of[x], []).append(("p", p))
    for a, b in d.nesting:
        tags.setdefault(m.face_of[a], []).append(("inner",))
        tags.setdefault(m.face_of[b], []).append(("host",))
    labels = {}
    for ci, r in enumerate(d.crossings):
        for pos, x in enumerate(r):
            labels[x] = (ci, pos)
    for a, b in d.loops:
        labels[a] = labels[b] = (-1, -1)
    return {x: (labels[x], x in d.forward, tuple(sorted(tags.get(m.face_of[x], ()))))
            for x in d.involution}


def canonical_form(d: Diagram):
    """A value equal for two diagrams iff they agree up to renaming darts."""
    m = d.map
    inv, sigma = d.involution, m.sigma
    labels = _dart_labels(d)
    codes = []
    for comp in m.components:
        darts = [x for v in comp for x in m.rotations[v]]
        best = None
        for root in darts:
            order, idx = [root], {root: 0}
            for x in order:
                for y in (inv[x], sigma[x]):
                    if y not in idx:
                        idx[y] = len(order)
                        order.append(y)
            code = tuple((idx[inv[x]], idx[sigma[x]], labels[x]) for x in order)
            if best is None or code < best:
                best = code
        codes.append(best)
    return (d.surface.punctures, tuple(sorted(codes)))


def isomorphic(d1: Diagram, d2: Diagram) -> bool:
    return canonical_form(d1) == canonical_form(d2)
