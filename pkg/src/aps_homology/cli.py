"""Command-line interface.

Exit codes: 0 ok, 2 bad input, 3 internal invariant breach, 4 a checked
property failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter

from . import __version__
from .aps_complex import assemble, complex_from_dump, dump_complex
from .detect import complex_checks, detect, property_checks, state_sum_euler
from .diagram import load_diagram, serialize, validate_diagram
from .errors import ApsError, InconsistentComplex, InvalidDiagram, ParseError, UnrealizableCase
from .fuzz import fuzz_corpus
from .linalg import homology
from .moves import MoveSite, apply_move
from .resolution import CubeContext, all_vectors, edge_descriptor

REPORT_FORMAT = "aps-report/1"
RING_NAMES = {"z": ("Z",), "q": ("Q",), "f2": ("F2",), "all": ("Z", "Q", "F2")}

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_PROPERTY = 0, 2, 3, 4


class PropertyFailure(Exception):
    pass


def _emit(args, doc: dict, human: list[str]):
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write("\n".join(human) + "\n")


def _diagram_summary(d) -> dict:
    return {"crossings": d.k, "punctures": list(d.surface.punctures), "n_minus": d.n_minus,
            "n_plus": d.n_plus, "components": len(d.link_components)}


def _human_report(ring: str, rep) -> list[str]:
    lines = [f"ring {ring}: total rank {rep.total_rank}, euler characteristic {rep.euler_characteristic}"]
    lines.append("   h  dim  betti  torsion")
    for h in sorted(rep.chain_dims):
        tor = rep.torsion.get(h, [])
        tor_s = " ".join(f"Z/{t}" for t in tor) if tor else "-"
        lines.append(f"{h:4d} {rep.chain_dims[h]:4d} {rep.betti.get(h, 0):6d}  {tor_s}")
    return lines


def cmd_compute(args) -> int:
    d = load_diagram(args.input)
    doc = {"format": REPORT_FORMAT, "command": "compute", "diagram": _diagram_summary(d),
           "homology": {}}
    human = [f"{args.input}: {d.k} crossings, punctures {list(d.surface.punctures)}, n- = {d.n_minus}"]
    timings = {}
    for ring in RING_NAMES[args.ring]:
        t0 = time.perf_counter()
        c = assemble(d, "F2" if ring == "F2" else "Z", threads=args.threads)
        rep = homology(c, ring)
        timings[ring] = round(time.perf_counter() - t0, 3)
        doc["homology"][ring] = rep.as_dict()
        human += _human_report(ring, rep)
        if args.dump_complex and ring == RING_NAMES[args.ring][0]:
            with open(args.dump_complex, "w") as fh:
                fh.write(dump_complex(c) + "\n")
    if len(RING_NAMES[args.ring]) == 1:
        doc["total_rank"] = doc["homology"][RING_NAMES[args.ring][0]]["total_rank"]
    if args.timings:
        doc["timings"] = timings
        human.append(f"timings (s): {timings}")
    _emit(args, doc, human)
    return EXIT_OK


def _verify_one(d, threads) -> dict[str, bool]:
    return property_checks(d, threads=threads)


def cmd_verify(args) -> int:
    results = []
    if args.fuzz:
        ds = fuzz_corpus(args.fuzz, seed=args.seed, max_crossings=args.max_crossings,
                         max_punctures=args.max_punctures)
        for i, d in enumerate(ds):
            results.append((f"fuzz[{i}]", _verify_one(d, args.threads)))
    if args.input:
        with open(args.input) as fh:
            text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc
        if isinstance(doc, dict) and doc.get("format") == "aps-complex/1":
            results.append((args.input, complex_checks(complex_from_dump(doc))))
        else:
            results.append((args.input, _verify_one(load_diagram(args.input), args.threads)))
    if not results:
        raise ParseError("nothing to verify: give an input file or --fuzz N")
    failed = [(name, [p for p, ok in res.items() if not ok]) for name, res in results]
    failed = [(n, ps) for n, ps in failed if ps]
    counts = Counter()
    for _, res in results:
        for p, ok in res.items():
            counts[(p, ok)] += 1
    props = sorted({p for _, res in results for p in res})
    doc = {"format": REPORT_FORMAT, "command": "verify", "checked": len(results),
           "properties": {p: {"pass": counts[(p, True)], "fail": counts[(p, False)]} for p in props},
           "failures": [{"input": n, "properties": ps} for n, ps in failed],
           "ok": not failed}
    human = [f"verified {len(results)} input(s)"]
    human += [f"  {p}: {counts[(p, True)]} pass, {counts[(p, False)]} fail" for p in props]
    human += [f"FAILED {n}: {', '.join(ps)}" for n, ps in failed]
    _emit(args, doc, human)
    return EXIT_OK if not failed else EXIT_PROPERTY


def cmd_detect(args) -> int:
    d = load_diagram(args.input)
    v = detect(d, threads=args.threads)
    doc = {"format": REPORT_FORMAT, "command": "detect", "diagram": _diagram_summary(d),
           "total_rank_mod2": v.total_rank_mod2, "verdict": v.verdict.value,
           "homology": {"F2": v.witness.as_dict()}}
    human = [f"{args.input}: mod-2 rank {v.total_rank_mod2} -> {v.verdict.value}"]
    human += _human_report("F2", v.witness)
    _emit(args, doc, human)
    return EXIT_OK


def _parse_darts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ParseError(f"bad dart list {text!r}") from exc


def cmd_move(args) -> int:
    d = load_diagram(args.input)
    site = MoveSite(args.kind, _parse_darts(args.at), over=not args.under, branch=args.branch)
    out = apply_move(d, site)
    text = serialize(out) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cube(args) -> int:
    d = load_diagram(args.input)
    ctx = CubeContext(d)
    k = d.k
    states = [ctx.resolve(v) for v in all_vectors(k)]
    rows = []
    kinds = Counter()
    for idx, st in enumerate(states):
        ess = Counter(tuple(sorted(c.key)) for c in st.circles if not c.contractible)
        rows.append({"v": "".join(map(str, st.v)), "circles": len(st.circles),
                     "contractible": sum(c.contractible for c in st.circles),
                     "essential": [{"encloses": list(key), "count": n} for key, n in sorted(ess.items())]})
        for i in range(k):
            if not st.v[i]:
                e = edge_descriptor(st, states[idx | (1 << (k - 1 - i))], i)
                kinds[e.kind] += 1
    doc = {"format": REPORT_FORMAT, "command": "cube", "diagram": _diagram_summary(d),
           "states": rows, "edges": {"merge": kinds["merge"], "split": kinds["split"]},
           "state_sum_euler": state_sum_euler(d)}
    human = [f"{args.input}: {len(states)} resolutions, {kinds['merge']} merges, {kinds['split']} splits"]
    for r in rows:
        ess = ", ".join(f"{e['count']}x{{{','.join(e['encloses'])}}}" for e in r["essential"])
        human.append(f"  {r['v'] or '-'}: {r['circles']} circles ({r['contractible']} contractible)"
                     + (f"; essential {ess}" if ess else ""))
    _emit(args, doc, human)
    return EXIT_OK


def cmd_validate(args) -> int:
    d = load_diagram(args.input)  # raises with diagnostics when invalid
    doc = {"format": REPORT_FORMAT, "command": "validate", "valid": True,
           "diagram": _diagram_summary(d), "violations": validate_diagram(d)}
    _emit(args, doc, [f"{args.input}: valid ({d.k} crossings)"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aps-homology",
                                 description="APS link homology for links in thickened punctured disks.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json"], default="human")
    common.add_argument("--threads", type=int, default=1, help="worker processes for cube assembly")
    common.add_argument("-v", "--verbose", action="store_true", help="print tracebacks on errors")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="homology of a diagram")
    p.add_argument("input")
    p.add_argument("--ring", choices=list(RING_NAMES), default="z")
    p.add_argument("--dump-complex", metavar="PATH", help="write the aps-complex/1 dump here")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="run the property checks")
    p.add_argument("input", nargs="?", help="aps-diagram/1 or aps-complex/1 file")
    p.add_argument("--fuzz", type=int, default=0, metavar="N", help="also check N random diagrams")
    p.add_argument("--max-crossings", type=int, default=8)
    p.add_argument("--max-punctures", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("detect", parents=[common], help="embedded-knot detection by mod-2 rank")
    p.add_argument("input")
    p.add_argument("--ring", choices=["f2"], default="f2")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("move", parents=[common], help="apply a Reidemeister move or reorder crossings")
    p.add_argument("input")
    p.add_argument("--kind", required=True,
                   choices=["R1", "R2", "R3", "R1_inverse", "R2_inverse", "reorder"])
    p.add_argument("--at", required=True, help="comma-separated darts (a permutation for reorder)")
    p.add_argument("--under", action="store_true", help="new strand passes under (R1, R2)")
    p.add_argument("--branch", type=int, default=0, help="R1 side / R2 outer-face choice")
    p.add_argument("-o", "--output", help="write the new diagram here instead of stdout")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("cube", parents=[common], help="resolution statistics")
    p.add_argument("input")
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a diagram")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InconsistentComplex, UnrealizableCase, AssertionError) as exc:
        if args.verbose:
            raise
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidDiagram as exc:
        print("invalid diagram:", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    except (ApsError, OSError) as exc:
        if args.verbose:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
