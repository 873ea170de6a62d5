"""Link diagrams on a punctured disk.

Crossings are 4-valent vertices whose darts are stored counter-clockwise,
starting at the incoming end of the under-strand.  Free loops carry one
bivalent marker vertex.  Faces are referred to internally by a dart on their
boundary, so references survive dart renumbering; the JSON format refers to
faces by index (faces ordered by minimal dart).

A diagram may be disconnected.  Each connected component other than the one
carrying the outer face is *nested*: one of its faces (its own unbounded face)
is glued to a face of another component.  Plane regions are the resulting
equivalence classes of faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import BadPermutation, InvalidDiagram, ParseError, SchemaError
from .surface import PlanarSurface, PlaneMap, validate_map

FORMAT = "aps-diagram/1"


@dataclass(frozen=True, eq=False)
class Diagram:
    surface: PlanarSurface
    involution: Mapping[int, int]
    crossings: tuple[tuple[int, int, int, int], ...]
    loops: tuple[tuple[int, int], ...]
    outer: int
    puncture_darts: tuple[tuple[str, int], ...]
    nesting: tuple[tuple[int, int], ...]
    forward: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.crossings)

    @cached_property
    def map(self) -> PlaneMap:
        return PlaneMap(self.involution, tuple(self.crossings) + tuple(self.loops), self.outer)

    @cached_property
    def straight(self) -> dict[int, int]:
        """Dart -> dart on the same strand through its vertex."""
        out = {}
        for r in self.crossings:
            for i in range(4):
                out[r[i]] = r[(i + 2) % 4]
        for a, b in self.loops:
            out[a] = b
            out[b] = a
        return out

    @cached_property
    def face_regions(self) -> list[int]:
        """Plane region id for every face index (regions numbered by first face)."""
        m = self.map
        parent = list(range(len(m.faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.nesting:
            ra, rb = find(m.face_of[a]), find(m.face_of[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        return [find(f) for f in range(len(m.faces))]

    @property
    def outer_region(self) -> int:
        return self.face_regions[self.map.face_of[self.outer]]

    @cached_property
    def puncture_faces(self) -> dict[str, int]:
        return {p: self.map.face_of[d] for p, d in self.puncture_darts}

    @cached_property
    def link_components(self) -> list[tuple[int, ...]]:
        """Each link component as its forward darts in traversal order."""
        seen = set()
        comps = []
        for d in sorted(self.forward):
            if d in seen:
                continue
            cyc = []
            x = d
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.straight[self.involution[x]]
            comps.append(tuple(cyc))
        return comps

    def crossing_sign(self, i) -> int:
        a, b, c, d = self.crossings[i]
        # over strand runs d -> b for a positive crossing
        return 1 if self.involution[d] in self.forward else -1

    @cached_property
    def n_minus(self) -> int:
        return sum(1 for i in range(self.k) if self.crossing_sign(i) < 0)

    @cached_property
    def n_plus(self) -> int:
        return self.k - self.n_minus

    def canonical_key(self):
        """Equality key: faces are compared by index, not by representative dart."""
        fo = self.map.face_of
        return (self.surface.punctures, tuple(sorted(self.involution.items())), self.crossings,
                self.loops, fo.get(self.outer),
                tuple((p, fo[d]) for p, d in self.puncture_darts),
                tuple(sorted((fo[a], fo[b]) for a, b in self.nesting)),
                tuple(sorted(self.forward)))

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return (f"Diagram(k={self.k}, loops={len(self.loops)}, "
                f"punctures={list(self.surface.punctures)})")


def _straight_of(crossings, loops):
    out = {}
    for r in crossings:
        for i in range(4):
            out[r[i]] = r[(i + 2) % 4]
    for a, b in loops:
        out[a] = b
        out[b] = a
    return out


def default_orientation(involution, crossings, loops, hints: Iterable[int] = ()) -> frozenset[int]:
    """Forward darts: each component runs out of its hinted dart, else its lowest dart."""
    straight = _straight_of(crossings, loops)
    forward = set()
    done = set()

    def walk(start):
        x = start
        while x not in done:
            done.add(x)
            done.add(involution[x])
            forward.add(x)
            x = straight[involution[x]]

    for h in hints:
        if h in done:
            continue
        walk(h)
    for d in sorted(involution):
        if d not in done:
            walk(d)
    return frozenset(forward)


def orient_crossing(rotation: Sequence[int], under: int, involution, forward) -> tuple[int, int, int, int]:
    """Rotate a CCW crossing so that it starts at the incoming end of the under-strand.

    ``under`` may be either end of the under-strand.
    """
    r = tuple(rotation)
    i = r.index(under)
    for j in (i, (i + 2) % 4):
        if involution[r[j]] in forward:
            return r[j:] + r[:j]
    raise InvalidDiagram([f"under-strand at crossing {r} has no incoming end"])


def build_diagram(surface: PlanarSurface, involution: Mapping[int, int],
                  crossings: Iterable[tuple[Sequence[int], int]],
                  loops: Iterable[Sequence[int]], outer: int,
                  puncture_darts: Mapping[str, int] | Iterable[tuple[str, int]],
                  nesting: Iterable[tuple[int, int]] = (),
                  forward: Iterable[int] | None = None,
                  orientation_hints: Iterable[int] = ()) -> Diagram:
    """Assemble a Diagram, deriving orientation and the crossing start darts.

    ``crossings`` holds (ccw rotation, any dart of the under-strand) pairs.
    """
    involution = dict(involution)
    crossings = [(tuple(r), u) for r, u in crossings]
    loops = tuple(tuple(l) for l in loops)
    raw = [r for r, _ in crossings]
    if forward is None:
        fwd = default_orientation(involution, raw, loops, orientation_hints)
    else:
        fwd = frozenset(forward)
    oriented = tuple(orient_crossing(r, u, involution, fwd) for r, u in crossings)
    if isinstance(puncture_darts, Mapping):
        pd = dict(puncture_darts)
    else:
        pd = dict(puncture_darts)
    pdarts = tuple((p, pd[p]) for p in surface.punctures if p in pd)
    pdarts += tuple((p, d) for p, d in pd.items() if p not in surface.punctures)
    return Diagram(surface, involution, oriented, loops, outer, pdarts,
                   tuple((a, b) for a, b in nesting), fwd)


# -- validation -----------------------------------------------------------

def validate_diagram(d: Diagram) -> list[str]:
    """All violations of the diagram invariants; empty means ok."""
    m = d.map
    bad = validate_map(m)
    if bad:
        return bad
    if not d.involution:
        # the empty link: one region, nothing to place
        if d.outer is not None:
            bad.append("empty diagram cannot name an outer face")
        if d.puncture_darts or d.nesting:
            bad.append("empty diagram has no faces to hold punctures or nesting")
        return bad
    for i, r in enumerate(d.crossings):
        if len(r) != 4:
            bad.append(f"crossing {i} has {len(r)} darts, expected 4")
    for r in d.loops:
        if len(r) != 2:
            bad.append(f"{len(r)}-valent vertex {r} is neither a crossing nor a loop marker")
    if bad:
        return bad
    inv = d.involution
    # orientation: one forward dart per edge, consistent through vertices
    for x, y in inv.items():
        if x < y and (x in d.forward) == (y in d.forward):
            bad.append(f"edge (d{x}, d{y}) needs exactly one forward dart")
    for x in d.forward:
        if x not in inv:
            bad.append(f"forward dart d{x} does not exist")
    if not bad:
        for x in inv:
            if inv[x] in d.forward and d.straight[x] not in d.forward:
                bad.append(f"orientation reverses at dart d{x}")
    for i, r in enumerate(d.crossings):
        if inv[r[0]] not in d.forward:
            bad.append(f"crossing {i} does not start at the incoming under-strand")
    # punctures
    names = [p for p, _ in d.puncture_darts]
    if sorted(names) != sorted(d.surface.punctures) or len(set(names)) != len(names):
        bad.append(f"puncture placement {sorted(names)} does not match surface punctures "
                   f"{sorted(d.surface.punctures)}")
    for p, x in d.puncture_darts:
        if x not in inv:
            bad.append(f"puncture {p} refers to unknown dart d{x}")
    for a, b in d.nesting:
        for x in (a, b):
            if x not in inv:
                bad.append(f"nesting refers to unknown dart d{x}")
    if bad:
        return bad
    bad.extend(_nesting_violations(d))
    if bad:
        return bad
    regions = d.face_regions
    outer_r = d.outer_region
    for p, x in d.puncture_darts:
        if regions[m.face_of[x]] == outer_r:
            bad.append(f"puncture {p} placed in the outer face")
    return bad


def _nesting_violations(d: Diagram) -> list[str]:
    m = d.map
    bad = []
    ncomp = len(m.components)
    root = m.component_of_dart(d.outer)
    host_of = {}
    for a, b in d.nesting:
        ca, cb = m.component_of_dart(a), m.component_of_dart(b)
        if ca == cb:
            bad.append(f"nesting ({a}, {b}) glues a component to itself")
        elif ca in host_of:
            bad.append(f"component {ca} nested twice")
        elif ca == root:
            bad.append("the component carrying the outer face cannot be nested")
        else:
            host_of[ca] = cb
    for c in range(ncomp):
        if c != root and c not in host_of:
            bad.append(f"component {c} (darts from d{min(m.rotations[m.components[c][0]])}) "
                       f"has no nesting entry")
    if bad:
        return bad
    for c in range(ncomp):
        seen = {c}
        x = c
        while x in host_of:
            x = host_of[x]
            if x in seen:
                bad.append(f"nesting cycle through component {c}")
                break
            seen.add(x)
    return bad


def check_diagram(d: Diagram) -> Diagram:
    bad = validate_diagram(d)
    if bad:
        raise InvalidDiagram(bad)
    return d


# -- crossing order -------------------------------------------------------

def reorder_crossings(d: Diagram, permutation: Sequence[int]) -> Diagram:
    """New crossing ``i`` is old crossing ``permutation[i]`` (1-based)."""
    perm = list(permutation)
    if sorted(perm) != list(range(1, d.k + 1)):
        raise BadPermutation(f"{perm} is not a permutation of 1..{d.k}")
    crossings = tuple(d.crossings[p - 1] for p in perm)
    return Diagram(d.surface, d.involution, crossings, d.loops, d.outer,
                   d.puncture_darts, d.nesting, d.forward)


# -- JSON -----------------------------------------------------------------

def _require(doc, key, kind, path):
    if key not in doc:
        raise SchemaError(f"missing field '{key}'", f"{path}/{key}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise SchemaError(f"expected {getattr(kind, '__name__', kind)}", f"{path}/{key}")
    return val


def _as_int(x, path):
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError("expected integer", path)
    return x


def diagram_from_dict(doc) -> Diagram:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise SchemaError(f"unsupported format {fmt!r}", "/format")
    surf = _require(doc, "surface", dict, "")
    punct = _require(surf, "punctures", list, "/surface")
    for i, p in enumerate(punct):
        if not isinstance(p, str):
            raise SchemaError("puncture identifiers must be strings", f"/surface/punctures/{i}")
    if len(set(punct)) != len(punct):
        raise SchemaError("duplicate puncture identifiers", "/surface/punctures")
    surface = PlanarSurface(tuple(punct))

    darts = [_as_int(x, f"/darts/{i}") for i, x in enumerate(_require(doc, "darts", list, ""))]
    if len(set(darts)) != len(darts):
        raise SchemaError("duplicate dart", "/darts")
    dartset = set(darts)
    inv = {}
    for i, e in enumerate(_require(doc, "edges", list, "")):
        if not isinstance(e, list) or len(e) != 2:
            raise SchemaError("edge must be a pair of darts", f"/edges/{i}")
        a, b = (_as_int(x, f"/edges/{i}") for x in e)
        for x in (a, b):
            if x not in dartset:
                raise SchemaError(f"unknown dart {x}", f"/edges/{i}")
            if x in inv:
                raise SchemaError(f"dart {x} used by two edges", f"/edges/{i}")
        if a == b:
            raise SchemaError(f"dart {a} paired with itself", f"/edges/{i}")
        inv[a] = b
        inv[b] = a
    missing = dartset - set(inv)
    if missing:
        raise SchemaError(f"darts without an edge: {sorted(missing)}", "/edges")

    crossings = []
    loops = []
    used = {}
    for i, v in enumerate(_require(doc, "vertices", list, "")):
        path = f"/vertices/{i}"
        if not isinstance(v, dict):
            raise SchemaError("vertex must be an object", path)
        kind = _require(v, "kind", str, path)
        rot = [_as_int(x, f"{path}/rotation") for x in _require(v, "rotation", list, path)]
        for x in rot:
            if x not in dartset:
                raise SchemaError(f"unknown dart {x}", f"{path}/rotation")
            if x in used:
                raise SchemaError(f"dart {x} referenced twice in rotations "
                                  f"(vertices {used[x]} and {i})", f"{path}/rotation")
            used[x] = i
        if kind == "crossing":
            if len(rot) != 4:
                raise SchemaError("crossing needs 4 darts", f"{path}/rotation")
            u = _as_int(_require(v, "under_in", int, path), f"{path}/under_in")
            if u not in rot:
                raise SchemaError("under_in is not a dart of this crossing", f"{path}/under_in")
            crossings.append((rot, u))
        elif kind == "loop":
            if len(rot) != 2:
                raise SchemaError("loop marker needs 2 darts", f"{path}/rotation")
            loops.append(rot)
        else:
            raise SchemaError(f"unknown vertex kind {kind!r}", f"{path}/kind")
    unplaced = dartset - set(used)
    if unplaced:
        raise SchemaError(f"darts not in any rotation: {sorted(unplaced)}", "/vertices")

    if not dartset:
        if doc.get("outer_face") is not None:
            raise SchemaError("empty diagram has no faces", "/outer_face")
        if doc.get("puncture_faces") or doc.get("nesting"):
            raise SchemaError("empty diagram has no faces", "/puncture_faces")
        return check_diagram(build_diagram(surface, {}, [], [], None, {}))

    m = PlaneMap(inv, tuple(tuple(r) for r, _ in crossings) + tuple(tuple(l) for l in loops))
    bad = validate_map(m)
    if bad:
        raise InvalidDiagram(bad)
    faces = m.faces

    def face_dart(idx, path):
        idx = _as_int(idx, path)
        if not 0 <= idx < len(faces):
            raise SchemaError(f"face index {idx} out of range (0..{len(faces) - 1})", path)
        return faces[idx][0]

    outer = face_dart(_require(doc, "outer_face", int, ""), "/outer_face")
    pf = doc.get("puncture_faces", {})
    if not isinstance(pf, dict):
        raise SchemaError("expected object", "/puncture_faces")
    pdarts = {}
    for p, idx in pf.items():
        if p not in surface.punctures:
            raise SchemaError(f"unknown puncture {p!r}", f"/puncture_faces/{p}")
        pdarts[p] = face_dart(idx, f"/puncture_faces/{p}")
    for p in surface.punctures:
        if p not in pdarts:
            raise SchemaError(f"puncture {p!r} has no face", "/puncture_faces")
    nesting = []
    for i, pair in enumerate(doc.get("nesting", [])):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("nesting entry must be [inner_face, host_face]", f"/nesting/{i}")
        nesting.append((face_dart(pair[0], f"/nesting/{i}/0"), face_dart(pair[1], f"/nesting/{i}/1")))

    hints = []
    orient = doc.get("orientations")
    if orient is not None:
        if not isinstance(orient, list):
            raise SchemaError("expected list of darts", "/orientations")
        for i, x in enumerate(orient):
            x = _as_int(x, f"/orientations/{i}")
            if x not in dartset:
                raise SchemaError(f"unknown dart {x}", f"/orientations/{i}")
            hints.append(x)
    d = build_diagram(surface, inv, crossings, loops, outer, pdarts, nesting,
                      orientation_hints=hints)
    if orient is not None:
        fwd = d.forward
        for i, x in enumerate(hints):
            if x not in fwd:
                raise SchemaError(f"orientation darts {hints} conflict on one component",
                                  f"/orientations/{i}")
    return check_diagram(d)


def parse_diagram(text: str) -> Diagram:
    """Parse an ``aps-diagram/1`` JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return diagram_from_dict(doc)


def load_diagram(path) -> Diagram:
    with open(path) as fh:
        return parse_diagram(fh.read())


def diagram_to_dict(d: Diagram) -> dict:
    m = d.map
    fo = m.face_of
    vertices = [{"kind": "crossing", "rotation": list(r), "under_in": r[0]} for r in d.crossings]
    vertices += [{"kind": "loop", "rotation": list(r)} for r in d.loops]
    edges = sorted([a, b] for a, b in d.involution.items() if a < b)
    doc = {
        "format": FORMAT,
        "surface": {"punctures": list(d.surface.punctures)},
        "darts": sorted(d.involution),
        "edges": edges,
        "vertices": vertices,
        "outer_face": fo[d.outer] if d.outer is not None else None,
        "puncture_faces": {p: fo[x] for p, x in d.puncture_darts},
        "orientations": [min(c) for c in d.link_components],
    }
    if d.nesting:
        doc["nesting"] = sorted([fo[a], fo[b]] for a, b in d.nesting)
    return doc


def serialize(d: Diagram) -> str:
    return json.dumps(diagram_to_dict(d), indent=1, sort_keys=True)
