"""The APS chain complex of a diagram on a punctured disk.

Circle labels are bits.  Contractible circle: 0 = v+, 1 = v-.  Essential
circle: 0 = w(ccw), 1 = w(cw).  Parallel essential circles are nested in the
plane and a push-off keeps counter-clockwise counter-clockwise, so orientations
are identified label-for-label.

A generator of V(D_v) is an integer whose bits are the circle labels, the
first circle (smallest canonical id) in the most significant position, so
integer order is lexicographic label order.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .diagram import Diagram
from .errors import InconsistentComplex, UnrealizableCase
from .linalg import BitMatrix, SparseIntegerMatrix
from .resolution import CubeContext, EdgeDescriptor, ResolvedState, all_vectors, edge_descriptor

VPLUS, VMINUS = 0, 1
WCCW, WCW = 0, 1
RINGS = ("Z", "Q", "F2")
DUMP_FORMAT = "aps-complex/1"


def label_name(essential: bool, bit: int) -> str:
    if essential:
        return "w_ccw" if bit == WCCW else "w_cw"
    return "v+" if bit == VPLUS else "v-"


# -- local maps -----------------------------------------------------------
# A circle class is its enclosed-puncture key; the empty key means contractible.

def local_merge(c1: frozenset, c2: frozenset, c: frozenset, l1: int, l2: int) -> list[tuple[int, int]]:
    """Image of l1 (x) l2 under the merge of circles of classes c1, c2 into class c."""
    e1, e2, e = bool(c1), bool(c2), bool(c)
    if not e1 and not e2:
        if e:
            raise UnrealizableCase("two contractible circles cannot merge into an essential one")
        if l1 == VMINUS and l2 == VMINUS:
            return []
        return [(VMINUS if VMINUS in (l1, l2) else VPLUS, 1)]
    if e1 != e2:
        key = c1 or c2
        if not e or c != key:
            raise UnrealizableCase(f"contractible + essential {set(key)} cannot merge into {set(c)}")
        lc, lw = (l1, l2) if not e1 else (l2, l1)
        return [(lw, 1)] if lc == VPLUS else []
    if not e:
        if c1 != c2:
            raise UnrealizableCase(f"non-parallel essential circles {set(c1)}, {set(c2)} "
                                   f"cannot merge into a contractible one")
        return [] if l1 == l2 else [(VMINUS, 1)]
    return []


def local_split(c: frozenset, c1: frozenset, c2: frozenset, l: int) -> list[tuple[tuple[int, int], int]]:
    """Image of l under the split of a circle of class c into classes c1, c2."""
    e, e1, e2 = bool(c), bool(c1), bool(c2)
    if not e1 and not e2:
        if e:
            raise UnrealizableCase("an essential circle cannot split into two contractible ones")
        if l == VPLUS:
            return [((VPLUS, VMINUS), 1), ((VMINUS, VPLUS), 1)]
        return [((VMINUS, VMINUS), 1)]
    if e1 != e2:
        key = c1 or c2
        if not e or c != key:
            raise UnrealizableCase(f"{set(c)} cannot split into contractible + essential {set(key)}")
        return [(((VMINUS, l) if e2 else (l, VMINUS)), 1)]
    if not e:
        if c1 != c2:
            raise UnrealizableCase(f"contractible circle cannot split into non-parallel "
                                   f"{set(c1)}, {set(c2)}")
        if l == VPLUS:
            return [((WCCW, WCW), 1), ((WCW, WCCW), 1)]
        return []
    return []


def edge_sign(v: Sequence[int], i: int) -> int:
    """(-1) ** (sum of v_j over j > i), i 0-based, for the edge flipping v_i."""
    if v[i]:
        raise ValueError(f"coordinate {i} of {tuple(v)} is already 1")
    return -1 if sum(v[i + 1:]) % 2 else 1


def generator_labels(state: ResolvedState, g: int) -> list[int]:
    n = len(state.circles)
    return [(g >> (n - 1 - j)) & 1 for j in range(n)]


def generator_basis(state: ResolvedState) -> list[tuple[int, ...]]:
    """Label tuples of V(D_v) in basis order."""
    n = len(state.circles)
    return [tuple(generator_labels(state, g)) for g in range(1 << n)]


def winding_grade(state: ResolvedState, g: int) -> int:
    w = 0
    for c, bit in zip(state.circles, generator_labels(state, g)):
        if not c.contractible:
            w += 1 if bit == WCCW else -1
    return w


def quantum_like_grade(state: ResolvedState, g: int) -> int:
    """#v+ - #v- + |v|.  Preserved by the differential; used only to split blocks."""
    q = state.weight
    for c, bit in zip(state.circles, generator_labels(state, g)):
        if c.contractible:
            q += 1 if bit == VPLUS else -1
    return q


def edge_images(sv: ResolvedState, su: ResolvedState, e: EdgeDescriptor, g: int) -> list[tuple[int, int]]:
    """d_vu applied to generator g of V(D_v): list of (generator of V(D_u), coefficient)."""
    nv, nu = len(sv.circles), len(su.circles)
    bit = [(g >> (nv - 1 - j)) & 1 for j in range(nv)]
    base = 0
    for jv, ju in e.passive:
        if bit[jv]:
            base |= 1 << (nu - 1 - ju)
    if e.kind == "merge":
        a, b = e.active_v
        (t,) = e.active_u
        terms = local_merge(sv.circles[a].key, sv.circles[b].key, su.circles[t].key, bit[a], bit[b])
        return [(base | (lab << (nu - 1 - t)), coef) for lab, coef in terms]
    (s,) = e.active_v
    a, b = e.active_u
    terms = local_split(sv.circles[s].key, su.circles[a].key, su.circles[b].key, bit[s])
    return [(base | (la << (nu - 1 - a)) | (lb << (nu - 1 - b)), coef) for (la, lb), coef in terms]


# -- assembly -------------------------------------------------------------

def _chunk_entries(d: Diagram, indices: Sequence[int], offsets, mod2: bool):
    """Differential entries (r, row, col, value) for the source states in ``indices``."""
    ctx = CubeContext(d)
    k = d.k
    cache: dict[int, ResolvedState] = {}

    def state(idx):
        s = cache.get(idx)
        if s is None:
            v = tuple((idx >> (k - 1 - i)) & 1 for i in range(k))
            s = cache[idx] = ctx.resolve(v)
        return s

    out = []
    for idx in indices:
        sv = state(idx)
        r = sv.weight
        ov = offsets[idx]
        for i in range(k):
            if sv.v[i]:
                continue
            uidx = idx | (1 << (k - 1 - i))
            su = state(uidx)
            e = edge_descriptor(sv, su, i)
            sign = edge_sign(sv.v, i)
            ou = offsets[uidx]
            for g in range(1 << len(sv.circles)):
                for h, coef in edge_images(sv, su, e, g):
                    if mod2:
                        if coef & 1:
                            out.append((r, ou + h, ov + g, 1))
                    else:
                        out.append((r, ou + h, ov + g, sign * coef))
    return out


@dataclass
class ApsComplex:
    diagram: Diagram
    ring: str
    states: list[ResolvedState]
    dims: list[int]                       # chain dimension per cube weight r = |v|
    basis: list[list[tuple[int, int]]]    # per weight: (state index, generator)
    grades: list[list[tuple[int, int]]]   # per weight: (quantum-like, winding) per generator
    differentials: list                   # d_r : C_r -> C_{r+1}; SparseIntegerMatrix or BitMatrix
    n_minus: int = 0
    _d2_ok: bool | None = field(default=None, repr=False)

    @property
    def degrees(self) -> list[int]:
        """Homological degrees h = |v| - n_minus."""
        return [r - self.n_minus for r in range(len(self.dims))]

    def winding(self, r: int, idx: int) -> int:
        return self.grades[r][idx][1]

    def verify_d_squared(self) -> bool:
        if self._d2_ok is None:
            ok = True
            for r in range(len(self.differentials) - 1):
                if not (self.differentials[r + 1] @ self.differentials[r]).is_zero():
                    ok = False
                    break
            self._d2_ok = ok
        return self._d2_ok

    def nonzero_entries(self):
        """Yield (r, row, col, value) for every stored differential entry."""
        for r, mat in enumerate(self.differentials):
            if isinstance(mat, BitMatrix):
                for j, c in enumerate(mat.columns):
                    while c:
                        low = c & -c
                        yield r, low.bit_length() - 1, j, 1
                        c ^= low
            else:
                for (i, j), x in mat.entries.items():
                    yield r, i, j, x

    def to_dump(self) -> dict:
        degrees = []
        for r, gens in enumerate(self.basis):
            labels = []
            for si, g in gens:
                st = self.states[si]
                lab = [label_name(not c.contractible, b)
                       for c, b in zip(st.circles, generator_labels(st, g))]
                labels.append(["".join(map(str, st.v)), lab])
            degrees.append({"degree": r - self.n_minus, "dim": self.dims[r], "basis": labels,
                            "winding": [w for _, w in self.grades[r]]})
        diffs = []
        for r, mat in enumerate(self.differentials):
            if isinstance(mat, BitMatrix):
                ent = sorted((i, j, 1) for rr, i, j, _ in self.nonzero_entries() if rr == r)
            else:
                ent = mat.triplets()
            diffs.append({"from": r - self.n_minus, "rows": mat.rows, "cols": mat.cols,
                          "entries": [list(t) for t in ent]})
        return {"format": DUMP_FORMAT, "ring": self.ring, "n_minus": self.n_minus,
                "degrees": degrees, "differentials": diffs}


def assemble(d: Diagram, ring: str = "Z", threads: int = 1, check: bool = True) -> ApsComplex:
    """Build the complex; over Q the integer matrices are kept (ranks are taken exactly)."""
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}; expected one of {RINGS}")
    k = d.k
    ctx = CubeContext(d)
    states = [ctx.resolve(v) for v in all_vectors(k)]
    dims = [0] * (k + 1)
    offsets = [0] * len(states)
    basis: list[list[tuple[int, int]]] = [[] for _ in range(k + 1)]
    grades: list[list[tuple[int, int]]] = [[] for _ in range(k + 1)]
    for idx, st in enumerate(states):
        r = st.weight
        offsets[idx] = dims[r]
        n = 1 << len(st.circles)
        dims[r] += n
        for g in range(n):
            basis[r].append((idx, g))
            grades[r].append((quantum_like_grade(st, g), winding_grade(st, g)))

    mod2 = ring == "F2"
    indices = list(range(len(states)))
    if threads > 1 and len(indices) > 1:
        step = max(1, -(-len(indices) // (threads * 4)))
        chunks = [indices[a:a + step] for a in range(0, len(indices), step)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_chunk_entries, [d] * len(chunks), chunks,
                                  [offsets] * len(chunks), [mod2] * len(chunks)))
        entries = [t for part in parts for t in part]
    else:
        entries = _chunk_entries(d, indices, offsets, mod2)

    diffs = []
    if mod2:
        cols = [[0] * dims[r] for r in range(k)]
        for r, row, col, _ in entries:
            cols[r][col] ^= 1 << row
        diffs = [BitMatrix(dims[r + 1], dims[r], cols[r]) for r in range(k)]
    else:
        per: list[dict] = [{} for _ in range(k)]
        for r, row, col, x in entries:
            key = (row, col)
            per[r][key] = per[r].get(key, 0) + x
        diffs = [SparseIntegerMatrix(dims[r + 1], dims[r], per[r]) for r in range(k)]
    c = ApsComplex(d, ring, states, dims, basis, grades, diffs, d.n_minus)
    if check and not c.verify_d_squared():
        raise InconsistentComplex("assembled differential does not square to zero")
    return c


def complex_from_dump(doc: dict) -> ApsComplex:
    """Rebuild matrices (and winding grades) from an aps-complex/1 dump.

    Only the linear-algebra part is restored; ``states`` is empty.
    """
    if doc.get("format") != DUMP_FORMAT:
        raise ValueError(f"not an {DUMP_FORMAT} document")
    ring = doc["ring"]
    dims = [deg["dim"] for deg in doc["degrees"]]
    grades = [[(0, w) for w in deg.get("winding", [0] * deg["dim"])] for deg in doc["degrees"]]
    diffs = []
    for dd in doc["differentials"]:
        trip = [tuple(t) for t in dd["entries"]]
        m = SparseIntegerMatrix.from_triplets(dd["rows"], dd["cols"], trip)
        diffs.append(m.mod2() if ring == "F2" else m)
    return ApsComplex(None, ring, [], dims, [[] for _ in dims], grades, diffs, doc.get("n_minus", 0))


def dump_complex(c: ApsComplex) -> str:
    return json.dumps(c.to_dump(), sort_keys=True)
