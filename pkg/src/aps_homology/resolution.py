"""The cube of resolutions.

Smoothing never creates faces, it only opens channels between them: the
0-smoothing at a crossing (a, b, c, d) joins arcs a-b and c-d and connects the
faces of c and a; the 1-smoothing joins a-d and b-c and connects the faces of
b and d.  Every plane region of a resolved diagram is therefore a union of
diagram faces, and punctures are located through that correspondence.  The
regions and circles of a resolution form a tree (each circle separates the
plane); rooting it at the outer region tells which punctures each circle
encloses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .diagram import Diagram
from .surface import PlaneMap


@dataclass(frozen=True)
class Circle:
    cycle: tuple[int, ...]
    enclosed: frozenset[str]

    @property
    def canonical_id(self) -> int:
        return self.cycle[0]

    @property
    def contractible(self) -> bool:
        return not self.enclosed

    @property
    def key(self) -> frozenset[str]:
        """Isotopy key: parallel essential circles have equal keys."""
        return self.enclosed


def classify(circle: Circle):
    """('contractible', None) or ('essential', key)."""
    if circle.contractible:
        return ("contractible", None)
    return ("essential", circle.key)


@dataclass(frozen=True)
class ResolvedState:
    v: tuple[int, ...]
    circles: tuple[Circle, ...]
    diagram: Diagram

    @property
    def weight(self) -> int:
        return sum(self.v)

    @cached_property
    def circle_of_dart(self) -> dict[int, int]:
        return {x: i for i, c in enumerate(self.circles) for x in c.cycle}

    @cached_property
    def resolved_map(self) -> PlaneMap:
        """The smoothed diagram as a plane map of bivalent vertices."""
        rots = []
        for bit, (a, b, c, d) in zip(self.v, self.diagram.crossings):
            rots += [(a, b), (c, d)] if bit == 0 else [(d, a), (b, c)]
        rots += list(self.diagram.loops)
        return PlaneMap(self.diagram.involution, tuple(rots), self.diagram.outer)


def enclosed_punctures(state: ResolvedState, circle: Circle) -> frozenset[str]:
    return circle.enclosed


class CubeContext:
    """Per-diagram data reused by every resolution."""

    def __init__(self, d: Diagram):
        self.diagram = d
        m = d.map
        self.inv = d.involution
        self.face_of = m.face_of
        regions = d.face_regions
        self.base_region = regions
        self.nfaces = len(m.faces)
        self.outer_face = m.face_of[d.outer] if d.outer is not None else None
        self.punct_in_face: dict[int, list[str]] = {}
        for p, f in d.puncture_faces.items():
            self.punct_in_face.setdefault(f, []).append(p)
        self.loop_partner = {}
        for a, b in d.loops:
            self.loop_partner[a] = b
            self.loop_partner[b] = a
        self.crossing_of = {x: i for i, r in enumerate(d.crossings) for x in r}

    def partner(self, v) -> dict[int, int]:
        part = dict(self.loop_partner)
        for bit, (a, b, c, d) in zip(v, self.diagram.crossings):
            if bit == 0:
                part[a], part[b], part[c], part[d] = b, a, d, c
            else:
                part[a], part[d], part[b], part[c] = d, a, c, b
        return part

    def resolve(self, v: Sequence[int]) -> ResolvedState:
        d = self.diagram
        v = tuple(v)
        if len(v) != d.k:
            raise ValueError(f"resolution vector has length {len(v)}, diagram has {d.k} crossings")
        inv = self.inv
        if not inv:
            return ResolvedState(v, (), d)
        part = self.partner(v)
        seen = set()
        cycles = []
        for start in sorted(inv):
            if start in seen:
                continue
            cyc = []
            x = start
            while x not in seen:
                y = inv[x]
                seen.add(x)
                seen.add(y)
                cyc += [x, y]
                x = part[y]
            cycles.append(tuple(cyc))

        parent = list(self.base_region)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        fo = self.face_of

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for bit, (a, b, c, dd) in zip(v, d.crossings):
            if bit == 0:
                union(fo[c], fo[a])
            else:
                union(fo[b], fo[dd])

        # region tree: circles are edges between the regions on their two sides
        adj: dict[int, list[tuple[int, int]]] = {}
        for ci, cyc in enumerate(cycles):
            r1, r2 = find(fo[cyc[0]]), find(fo[inv[cyc[0]]])
            if r1 == r2:
                raise AssertionError(f"circle {cyc} has the same region on both sides")
            adj.setdefault(r1, []).append((r2, ci))
            adj.setdefault(r2, []).append((r1, ci))
        nregions = len({find(f) for f in range(self.nfaces)})
        if nregions != len(cycles) + 1:
            raise AssertionError(f"{len(cycles)} circles but {nregions} regions")

        region_punct: dict[int, list[str]] = {}
        for f, ps in self.punct_in_face.items():
            region_punct.setdefault(find(f), []).extend(ps)

        root = find(self.outer_face)
        enclosed: list[frozenset[str] | None] = [None] * len(cycles)
        order = [root]
        via = {root: (None, None)}  # region -> (parent region, circle to parent)
        for r in order:
            for r2, ci in adj.get(r, ()):
                if r2 not in via:
                    via[r2] = (r, ci)
                    order.append(r2)
        below = {r: set(region_punct.get(r, ())) for r in order}
        for r in reversed(order):
            up, ci = via[r]
            if up is not None:
                enclosed[ci] = frozenset(below[r])
                below[up] |= below[r]
        circles = tuple(Circle(cyc, enclosed[i]) for i, cyc in enumerate(cycles))
        return ResolvedState(v, circles, d)


def resolve(d: Diagram, v: Sequence[int]) -> ResolvedState:
    return CubeContext(d).resolve(v)


def all_vectors(k: int) -> Iterator[tuple[int, ...]]:
    """Resolution vectors in lexicographic order."""
    return product((0, 1), repeat=k)


@dataclass(frozen=True)
class EdgeDescriptor:
    v: tuple[int, ...]
    u: tuple[int, ...]
    i: int  # 0-based flipped crossing
    kind: str  # "merge" | "split"
    active_v: tuple[int, ...]  # circle indices in state v
    active_u: tuple[int, ...]
    passive: tuple[tuple[int, int], ...]  # (index in v, index in u)


def edge_descriptor(sv: ResolvedState, su: ResolvedState, i: int) -> EdgeDescriptor:
    d = sv.diagram
    darts = d.crossings[i]
    cv, cu = sv.circle_of_dart, su.circle_of_dart
    act_v = tuple(sorted({cv[x] for x in darts}))
    act_u = tuple(sorted({cu[x] for x in darts}))
    if len(act_v) + len(act_u) != 3:
        raise AssertionError(f"edge at crossing {i}: {len(act_v)} -> {len(act_u)} active circles")
    ids_u = {c.canonical_id: j for j, c in enumerate(su.circles)}
    passive = []
    for j, c in enumerate(sv.circles):
        if j in act_v:
            continue
        ju = ids_u[c.canonical_id]
        if su.circles[ju].cycle != c.cycle or su.circles[ju].enclosed != c.enclosed:
            raise AssertionError(f"passive circle {c.canonical_id} changed across edge {i}")
        passive.append((j, ju))
    kind = "merge" if len(act_v) == 2 else "split"
    return EdgeDescriptor(sv.v, su.v, i, kind, act_v, act_u, tuple(passive))


def cube_states(d: Diagram) -> list[ResolvedState]:
    ctx = CubeContext(d)
    return [ctx.resolve(v) for v in all_vectors(d.k)]


def cube_edges(d: Diagram, states: list[ResolvedState] | None = None) -> Iterator[EdgeDescriptor]:
    """Every cube edge v -> v + e_i, ordered by (v, i)."""
    if states is None:
        states = cube_states(d)
    k = d.k
    for idx, sv in enumerate(states):
        for i in range(k):
            if sv.v[i] == 0:
                yield edge_descriptor(sv, states[idx | (1 << (k - 1 - i))], i)
