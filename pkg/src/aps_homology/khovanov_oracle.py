"""A deliberately small, separate Khovanov homology calculator.

Used only as a cross-check for diagrams without punctures.  It works from a
PD-style list of crossings (edge labels in counter-clockwise order starting
at the incoming under-strand) and shares nothing with the main complex code:
its own circle counting, its own Frobenius algebra and its own rank routine.
"""

from __future__ import annotations

from fractions import Fraction


def pd_code(d) -> tuple[list[tuple[int, int, int, int]], int]:
    """(crossing edge labels, number of crossingless loops) of a diagram."""
    inv = d.involution
    label = {}
    for x in sorted(inv):
        if x not in label:
            label[x] = label[inv[x]] = len(label) // 2
    return [tuple(label[x] for x in r) for r in d.crossings], len(d.loops)


def _circles(pd, state):
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(a, b):
        parent[find(a)] = find(b)

    for s, (a, b, c, d) in zip(state, pd):
        if s == 0:
            join(a, b)
            join(c, d)
        else:
            join(a, d)
            join(b, c)
    labels = sorted({e for x in pd for e in x})
    roots = sorted({find(e) for e in labels})
    index = {r: i for i, r in enumerate(roots)}
    return {e: index[find(e)] for e in labels}, len(roots)


def _rank(rows, p=None):
    """Rank of a list of sparse rows (dict col -> value) over Q, or over F_p."""
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        piv = rows.pop()
        if not piv:
            continue
        col = min(piv)
        a = piv[col]
        rank += 1
        rest = []
        for r in rows:
            b = r.get(col)
            if b:
                f = Fraction(b) / a if p is None else (b * pow(a, -1, p)) % p
                for cc, val in piv.items():
                    nv = r.get(cc, 0) - f * val
                    if p is not None:
                        nv %= p
                    if nv:
                        r[cc] = nv
                    else:
                        r.pop(cc, None)
            rest.append(r)
        rows = rest
    return rank


def khovanov_total_rank(pd, free_loops: int = 0, p: int | None = None) -> int:
    """Total rank of Khovanov homology over Q (p=None) or F_p."""
    k = len(pd)
    if k == 0:
        return 2 ** free_loops
    states = [tuple((s >> i) & 1 for i in range(k)) for s in range(1 << k)]
    info = {s: _circles(pd, s) for s in states}
    # generator = (state, labels tuple) with label 0 = 1, 1 = X
    index = {}
    for s in states:
        n = info[s][1]
        for g in range(1 << n):
            index[(s, g)] = len(index)
    dims = {}
    for s in states:
        h = sum(s)
        dims[h] = dims.get(h, 0) + (1 << info[s][1])
    ranks = {}
    for h in range(k):
        rows = []
        for s in states:
            if sum(s) != h:
                continue
            emap, n = info[s]
            for g in range(1 << n):
                img = {}
                for i in range(k):
                    if s[i]:
                        continue
                    t = s[:i] + (1,) + s[i + 1:]
                    sign = -1 if sum(s[:i]) % 2 else 1
                    fmap, m = info[t]
                    for tg, c in _edge(pd[i], emap, n, fmap, m, g):
                        key = index[(t, tg)]
                        img[key] = img.get(key, 0) + sign * c
                rows.append({c: v for c, v in img.items() if v})
        ranks[h] = _rank(rows, p)
    total = 0
    for h in range(k + 1):
        total += dims.get(h, 0) - ranks.get(h, 0) - ranks.get(h - 1, 0)
    return total * 2 ** free_loops


def _bit(g, i):
    return (g >> i) & 1


def _edge(x, emap, n, fmap, m, g):
    """Image of generator g under the elementary map at crossing x."""
    a, b, c, d = x
    src = {emap[e] for e in x}
    dst = {fmap[e] for e in x}
    # carry labels of untouched circles across
    corr = {}
    for e, i in emap.items():
        if i not in src:
            corr[i] = fmap[e]
    base = 0
    for i, j in corr.items():
        if _bit(g, i):
            base |= 1 << j
    if len(src) == 2:
        i1, i2 = sorted(src)
        (j,) = dst
        l1, l2 = _bit(g, i1), _bit(g, i2)
        if l1 and l2:
            return []
        return [(base | ((l1 | l2) << j), 1)]
    (i,) = src
    j1, j2 = sorted(dst)
    if _bit(g, i):
        return [(base | (1 << j1) | (1 << j2), 1)]
    return [(base | (1 << j1), 1), (base | (1 << j2), 1)]
