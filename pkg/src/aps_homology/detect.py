"""Detection verdicts, invariance drivers and cross-checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .aps_complex import ApsComplex, assemble
from .diagram import Diagram
from .linalg import HomologyReport, homology
from .moves import MoveSite, apply_move


class Verdict(str, enum.Enum):
    EMBEDDED_KNOT_CANDIDATE = "EmbeddedKnotCandidate"
    NOT_EMBEDDED_KNOT = "NotEmbeddedKnot"
    EMPTY_LINK = "EmptyLink"


def verdict_for_rank(rank: int) -> Verdict:
    if rank == 1:
        return Verdict.EMPTY_LINK
    if rank == 2:
        return Verdict.EMBEDDED_KNOT_CANDIDATE
    if rank > 2:
        return Verdict.NOT_EMBEDDED_KNOT
    raise ValueError(f"mod-2 rank {rank} is impossible for a link diagram")


@dataclass(frozen=True)
class DetectionVerdict:
    total_rank_mod2: int
    verdict: Verdict
    witness: HomologyReport


def detect(d: Diagram, threads: int = 1) -> DetectionVerdict:
    """Rank of mod-2 homology and what it says about embedded knots."""
    report = homology(assemble(d, "F2", threads=threads))
    return DetectionVerdict(report.total_rank, verdict_for_rank(report.total_rank), report)


def _circle_count(d: Diagram, v: Sequence[int]) -> int:
    part = {}
    for a, b in d.loops:
        part[a], part[b] = b, a
    for bit, (a, b, c, x) in zip(v, d.crossings):
        if bit == 0:
            part[a], part[b], part[c], part[x] = b, a, x, c
        else:
            part[a], part[x], part[b], part[c] = x, a, c, b
    inv = d.involution
    seen = set()
    count = 0
    for start in inv:
        if start in seen:
            continue
        count += 1
        x = start
        while x not in seen:
            seen.add(x)
            seen.add(inv[x])
            x = part[inv[x]]
    return count


def state_sum_euler(d: Diagram) -> int:
    """Sum over the cube of (-1)^(|v| - n_minus) 2^(number of circles); no matrices."""
    k = d.k
    total = 0
    for idx in range(1 << k):
        v = [(idx >> (k - 1 - i)) & 1 for i in range(k)]
        w = sum(v) - d.n_minus
        total += (-1) ** (w % 2) * (1 << _circle_count(d, v))
    return total


# -- invariance -----------------------------------------------------------

@dataclass
class InvarianceReport:
    profiles: list = field(default_factory=list)   # one per diagram in the chain
    diagrams: list = field(default_factory=list)
    divergence: int | None = None                   # index of the first differing diagram

    @property
    def ok(self) -> bool:
        return self.divergence is None


def invariance_suite(d: Diagram, moves: Sequence[MoveSite], ring: str = "Z") -> InvarianceReport:
    """Apply moves in turn and compare shifted Betti numbers and torsion along the chain."""
    rep = InvarianceReport()
    cur = d
    chain = [d]
    for site in moves:
        cur = apply_move(cur, site)
        chain.append(cur)
    for i, x in enumerate(chain):
        prof = homology(assemble(x, ring)).profile()
        rep.profiles.append(prof)
        rep.diagrams.append(x)
        if rep.divergence is None and prof != rep.profiles[0]:
            rep.divergence = i
    return rep


# -- properties of a computed complex -------------------------------------

def winding_homogeneous(c: ApsComplex) -> tuple[int, int]:
    """(entries checked, entries joining different winding grades)."""
    total = bad = 0
    for r, row, col, _ in c.nonzero_entries():
        total += 1
        if c.winding(r + 1, row) != c.winding(r, col):
            bad += 1
    return total, bad


def orientation_swap_symmetric(c: ApsComplex) -> bool:
    """Does swapping every essential label (ccw <-> cw) commute with the differential?"""
    flips = []
    for r, gens in enumerate(c.basis):
        pos = {g: i for i, g in enumerate(gens)}
        out = []
        for si, g in gens:
            st = c.states[si]
            n = len(st.circles)
            mask = 0
            for j, circ in enumerate(st.circles):
                if not circ.contractible:
                    mask |= 1 << (n - 1 - j)
            out.append(pos[(si, g ^ mask)])
        flips.append(out)
    entries = {}
    for r, row, col, x in c.nonzero_entries():
        entries[(r, row, col)] = x
    for (r, row, col), x in entries.items():
        if entries.get((r, flips[r + 1][row], flips[r][col])) != x:
            return False
    return True


def property_checks(d: Diagram, threads: int = 1) -> dict[str, bool]:
    """The verification battery for one diagram."""
    results = {}
    cz = assemble(d, "Z", threads=threads, check=False)
    c2 = assemble(d, "F2", threads=threads, check=False)
    results["d_squared_Z"] = cz.verify_d_squared()
    results["d_squared_F2"] = c2.verify_d_squared()
    if not (results["d_squared_Z"] and results["d_squared_F2"]):
        return results
    chi = state_sum_euler(d)
    rz, rq, r2 = homology(cz), homology(cz, "Q"), homology(c2)
    results["euler"] = all(r.euler_characteristic == chi for r in (rz, rq, r2))
    total, bad = winding_homogeneous(cz)
    results["winding"] = bad == 0
    results["universal_coefficients"] = r2.total_rank == rq.total_rank + 2 * rz.even_divisors
    results["mod2_parity"] = (r2.total_rank - chi) % 2 == 0
    results["rank_at_least_two"] = r2.total_rank >= 2 or not d.involution
    results["orientation_swap"] = orientation_swap_symmetric(cz)
    return results


def complex_checks(c: ApsComplex) -> dict[str, bool]:
    """Checks that need only the matrices (used for complex dumps)."""
    results = {"d_squared": c.verify_d_squared()}
    total, bad = winding_homogeneous(c)
    results["winding"] = bad == 0
    return results
