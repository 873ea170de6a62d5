"""Plane combinatorial maps and the genus-zero surface model.

A map is a set of darts (half-edges) with two permutations: the edge
involution ``alpha`` and the vertex rotation ``sigma`` (counter-clockwise
successor around a vertex).  Faces are the orbits of ``phi = sigma o alpha``;
with this choice the face traced from a dart lies on the right of that dart,
and the sector between ``p`` and ``sigma(p)`` belongs to the face of
``sigma(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import MalformedMap


@dataclass(frozen=True)
class PlanarSurface:
    """A disk with ``len(punctures)`` inner holes.

    The outer boundary is implicit: it is the unbounded face of the diagram.
    """

    punctures: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.punctures)) != len(self.punctures):
            raise ValueError(f"duplicate puncture identifiers in {self.punctures}")

    @property
    def is_disk(self):
        return not self.punctures


@dataclass(frozen=True, eq=False)
class PlaneMap:
    involution: Mapping[int, int]
    rotations: tuple[tuple[int, ...], ...]
    outer: int | None = None  # a dart on the outer face

    def __eq__(self, other):
        if not isinstance(other, PlaneMap):
            return NotImplemented
        return (dict(self.involution) == dict(other.involution)
                and self.rotations == other.rotations
                and self.outer == other.outer)

    def __hash__(self):
        return hash((tuple(sorted(self.involution.items())), self.rotations, self.outer))

    @property
    def darts(self):
        return sorted(self.involution)

    @cached_property
    def sigma(self) -> dict[int, int]:
        nxt = {}
        for rot in self.rotations:
            for i, d in enumerate(rot):
                nxt[d] = rot[(i + 1) % len(rot)]
        return nxt

    @cached_property
    def vertex_of(self) -> dict[int, int]:
        return {d: v for v, rot in enumerate(self.rotations) for d in rot}

    def phi(self, d):
        return self.sigma[self.involution[d]]

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        return trace_faces(self)

    @cached_property
    def face_of(self) -> dict[int, int]:
        """Dart -> face index (faces numbered by minimal dart)."""
        return {d: i for i, f in enumerate(self.faces) for d in f}

    def face_index(self, dart):
        return self.face_of[dart]

    @cached_property
    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex-index lists, ordered by minimal dart."""
        parent = list(range(len(self.rotations)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        vof = self.vertex_of
        for d, e in self.involution.items():
            a, b = find(vof[d]), find(vof[e])
            if a != b:
                parent[a] = b
        groups: dict[int, list[int]] = {}
        for v in range(len(self.rotations)):
            groups.setdefault(find(v), []).append(v)
        comps = list(groups.values())
        comps.sort(key=lambda vs: min(min(self.rotations[v]) for v in vs))
        return comps

    @cached_property
    def component_of_vertex(self) -> dict[int, int]:
        return {v: i for i, vs in enumerate(self.components) for v in vs}

    def component_of_dart(self, d):
        return self.component_of_vertex[self.vertex_of[d]]


def _structural_violations(m: PlaneMap) -> list[str]:
    out = []
    inv = m.involution
    for d, e in sorted(inv.items()):
        if d == e:
            out.append(f"fixed-point dart d{d}")
        elif e not in inv:
            out.append(f"dart d{d} paired with unknown dart d{e}")
        elif inv[e] != d:
            out.append(f"involution not symmetric at d{d}")
    seen: dict[int, int] = {}
    for v, rot in enumerate(m.rotations):
        if not rot:
            out.append(f"vertex v{v} has no darts")
        for d in rot:
            if d in seen:
                out.append(f"dart d{d} in vertices v{seen[d]} and v{v}")
            elif d not in inv:
                out.append(f"vertex v{v} lists unknown dart d{d}")
            seen[d] = v
    for d in sorted(inv):
        if d not in seen:
            out.append(f"dart d{d} not assigned to any vertex")
    return out


def trace_faces(m: PlaneMap) -> list[tuple[int, ...]]:
    """Orbits of the face walk, each starting at its minimal dart, sorted by it."""
    bad = _structural_violations(m)
    if bad:
        raise MalformedMap("; ".join(bad))
    nxt = m.sigma
    inv = m.involution
    seen = set()
    faces = []
    for start in sorted(inv):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        d = nxt[inv[start]]
        while d != start:
            cyc.append(d)
            seen.add(d)
            d = nxt[inv[d]]
        faces.append(tuple(cyc))
    return faces


def validate_map(m: PlaneMap) -> list[str]:
    """Return every violated invariant; an empty list means the map is ok."""
    bad = _structural_violations(m)
    if bad:
        return bad
    faces = trace_faces(m)
    faces_per_comp: dict[int, int] = {}
    for f in faces:
        c = m.component_of_dart(f[0])
        faces_per_comp[c] = faces_per_comp.get(c, 0) + 1
    for c, verts in enumerate(m.components):
        nv = len(verts)
        ne = sum(len(m.rotations[v]) for v in verts) // 2
        nf = faces_per_comp.get(c, 0)
        if nv - ne + nf != 2:
            bad.append(f"component {c}: V - E + F = {nv} - {ne} + {nf} != 2 (not planar)")
    if m.outer is not None and m.outer not in m.involution:
        bad.append(f"outer face dart d{m.outer} does not exist")
    return bad


def make_map(edges: Iterable[tuple[int, int]], rotations: Iterable[Iterable[int]], outer=None) -> PlaneMap:
    inv = {}
    for a, b in edges:
        if a in inv or b in inv:
            raise MalformedMap(f"dart used by two edges: ({a}, {b})")
        inv[a] = b
        inv[b] = a
    return PlaneMap(inv, tuple(tuple(r) for r in rotations), outer)
