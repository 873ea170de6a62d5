"""Random diagrams for property testing.

Two geometric sources feed the generator: closures of random braids (with an
optional puncture on the braid axis, giving the annular picture) and random
self-intersecting polygons.  Extra punctures are dropped into random bounded
faces, and a few random Reidemeister moves are applied on top.  Everything is
driven by a seeded ``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .diagram import Diagram
from .errors import PatternMismatch, PunctureObstruction
from .geometry import diagram_from_curves
from .moves import KINDS, apply_move, find_sites


def braid_curves(word: Sequence[int], strands: int):
    """Closed polylines and segment heights for the closure of a braid word.

    Letter +i crosses strands i and i+1 (1-based) with the strand moving
    right on top; -i puts it underneath.
    """
    n, m = strands, len(word)
    for g in word:
        if not 1 <= abs(g) < n:
            raise ValueError(f"generator {g} out of range for {n} strands")
    # pos_path[s] = list of (x, y) with heights for strand starting at position s
    perm = list(range(n))  # perm[position] = strand id
    pts: dict[int, list] = {s: [(s, 0)] for s in range(n)}
    hts: dict[int, list] = {s: [] for s in range(n)}
    for level, g in enumerate(word):
        i = abs(g) - 1
        for p in range(n):
            s = perm[p]
            if p == i:
                pts[s].append((i + 1, level + 1))
                hts[s].append(1 if g > 0 else -1)
            elif p == i + 1:
                pts[s].append((i, level + 1))
                hts[s].append(-1 if g > 0 else 1)
            else:
                pts[s].append((p, level + 1))
                hts[s].append(0)
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # closure arc from top position p back to bottom position p, nested to the right
    end_pos = {perm[p]: p for p in range(n)}
    succ = {}
    closure = {}
    for s in range(n):
        p = end_pos[s]
        r = n - p
        closure[s] = [(p, m + r), (n - 1 + r, m + r), (n - 1 + r, -r), (p, -r)]
        succ[s] = p  # strand that starts at bottom position p
    curves, heights = [], []
    done = set()
    for s0 in range(n):
        if s0 in done:
            continue
        poly, h = [], []
        s = s0
        while s not in done:
            done.add(s)
            poly += pts[s][:-1] + [pts[s][-1]] + closure[s]
            h += hts[s] + [0] * (len(closure[s]) + 1)
            s = succ[s]
        poly, h = _merge_collinear(poly, h)
        curves.append(poly)
        heights.append(h)
    return curves, heights


def _merge_collinear(poly, h):
    """Drop vertices in the middle of straight runs (heights follow segments)."""
    out, oh = [], []
    n = len(poly)
    for i in range(n):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
        if (b[0] - a[0]) * (c[1] - b[1]) == (b[1] - a[1]) * (c[0] - b[0]) and h[i - 1] == 0 and h[i] == 0:
            continue
        out.append(b)
        oh.append(h[i])
    return out, oh


def braid_closure(word: Sequence[int], strands: int, axis: str | None = None,
                  punctures: dict | None = None) -> Diagram:
    """Diagram of a braid closure; ``axis`` names a puncture on the braid axis."""
    curves, heights = braid_curves(word, strands)
    pts = dict(punctures or {})
    if axis is not None:
        pts[axis] = (Fraction(2 * strands - 1, 2), Fraction(len(word), 2) + Fraction(1, 7))
    return diagram_from_curves(curves, pts, heights)


def _random_polygon_link(rng: random.Random, max_crossings: int):
    ncurves = rng.choice((1, 1, 2, 2, 3))
    curves, heights = [], []
    for _ in range(ncurves):
        nv = rng.randint(3, 6)
        cx, cy = rng.randint(20, 80), rng.randint(20, 80)
        poly = [(cx + rng.randint(-30, 30), cy + rng.randint(-30, 30)) for _ in range(nv)]
        curves.append(poly)
        heights.append([rng.random() for _ in range(nv)])
    return curves, heights


def _random_point(rng, curves):
    xs = [p[0] for c in curves for p in c]
    ys = [p[1] for c in curves for p in c]
    return (Fraction(rng.randint(min(xs) * 97, max(xs) * 97), 97),
            Fraction(rng.randint(min(ys) * 89, max(ys) * 89), 89))


def random_diagram(rng: random.Random, max_crossings: int = 8, max_punctures: int = 4,
                   moves: int = 2) -> Diagram:
    """One random diagram with at most the given numbers of crossings and punctures."""
    while True:
        want = rng.randint(0, max_punctures)
        axis = None
        if rng.random() < 0.5:
            strands = rng.randint(1, 3)
            length = rng.randint(0, max_crossings) if strands > 1 else 0
            word = [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)]
            curves, heights = braid_curves(word, strands)
            if want and rng.random() < 0.7:
                axis = (Fraction(2 * strands - 1, 2), Fraction(length, 2) + Fraction(1, 7))
        else:
            curves, heights = _random_polygon_link(rng, max_crossings)
        names = [f"p{i + 1}" for i in range(want)]
        pts = {}
        try:
            for name in names:
                if axis is not None and not pts:
                    pts[name] = axis
                    continue
                for _ in range(40):
                    q = _random_point(rng, curves)
                    try:
                        diagram_from_curves(curves, {name: q}, heights)
                    except ValueError:
                        continue
                    pts[name] = q
                    break
            d = diagram_from_curves(curves, pts, heights)
        except ValueError:
            continue
        if d.k > max_crossings:
            continue
        for _ in range(rng.randint(0, moves)):
            d = random_move(rng, d, max_crossings) or d
        return d


def random_move(rng: random.Random, d: Diagram, max_crossings: int = 8):
    """Apply one random applicable move that keeps the crossing budget, or None."""
    kinds = [k for k in KINDS if k != "reorder"]
    rng.shuffle(kinds)
    for kind in kinds:
        grow = {"R1": 1, "R2": 2}.get(kind, 0)
        if d.k + grow > max_crossings:
            continue
        sites = find_sites(d, kind)
        if sites:
            return apply_move(d, rng.choice(sites))
    return None


def fuzz_corpus(count: int, seed: int = 0, max_crossings: int = 8, max_punctures: int = 4,
                moves: int = 2) -> list[Diagram]:
    rng = random.Random(seed)
    return [random_diagram(rng, max_crossings, max_punctures, moves) for _ in range(count)]
