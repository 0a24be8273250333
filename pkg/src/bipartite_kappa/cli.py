"""Command-line front end.

Exit codes: 0 success, 1 a checker found violations, 2 bad input,
3 solver failure.  Rationals are always printed as ``p/q``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import continuous, idealgen, linrep, shannon, witness
from .core import Staircase, fmt_q, qualmap, staircase_from_points
from .errors import KappaError, SolverError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
OUTDIR_ENV = "BIPARTITE_KAPPA_OUTDIR"


@dataclass
class Output:
    doc: object
    header: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)
    text: str = ""
    code: int = EXIT_OK
    csv_text: str | None = None  # replaces header/rows when set


def _cell(x) -> str:
    if isinstance(x, Fraction):
        return fmt_q(x)
    if isinstance(x, (list, tuple)):
        return json.dumps(_jsonable(x))
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_q(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(out: Output, fmt: str, target: str | None) -> int:
    if fmt == "json":
        body = json.dumps(_jsonable(out.doc), indent=2) + "\n"
    elif fmt == "csv" and out.csv_text is not None:
        body = out.csv_text
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.header)
        w.writerows([[_cell(c) for c in r] for r in out.rows])
        body = buf.getvalue()
    else:
        body = out.text if out.text.endswith("\n") else out.text + "\n"
    if target:
        if not os.path.isabs(target) and os.environ.get(OUTDIR_ENV):
            target = os.path.join(os.environ[OUTDIR_ENV], target)
        with open(target, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return out.code


# input helpers

def parse_range(text: str) -> list[int]:
    """``"2..6"``, ``"1,3,4"`` or ``"5"``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def parse_ints(text: str) -> list[int]:
    return [int(x) for x in str(text).replace(" ", "").split(",") if x]


def _read_doc(args):
    if getattr(args, "file", None):
        with open(args.file) as fh:
            raw = fh.read()
    else:
        raw = sys.stdin.read()
    raw = raw.strip()
    if not raw:
        raise KappaError("no input given (use --points, --file or stdin)")
    return raw


def read_staircase(args) -> Staircase:
    if getattr(args, "points", None):
        pts = json.loads(args.points)
        base = staircase_from_points(pts)
    else:
        base = Staircase.from_json(json.loads(_read_doc(args)))
    n1 = args.n1 if getattr(args, "n1", None) is not None else base.n1
    n2 = args.n2 if getattr(args, "n2", None) is not None else base.n2
    return staircase_from_points(base.points, n1, n2)


# commands

def cmd_kappa(args) -> Output:
    s = read_staircase(args)
    r = shannon.kappa(s)
    doc = r.to_json(witness=args.witness)
    text = fmt_q(r.kappa)
    if args.witness:
        text += "\n" + r.witness.to_csv()
    return Output(doc, ["kappa", "n1", "n2", "H", "V"],
                  [[r.kappa, s.n1, s.n2, r.witness.H, r.witness.V]], text)


def bounds_report(s: Staircase) -> list[dict]:
    pts, ws, hs = s.points, s.widths, s.heights
    rows = []
    for k, (w, h) in enumerate(zip(ws, hs)):
        ok = w >= 2 and pts[k][0] != 0
        rows.append({"bound": "single_step", "step": k + 1,
                     "value": shannon.bound_single_step(w) if w >= 1 else None,
                     "hypotheses": ok,
                     "tight": ok and len(pts) == 2 and w >= h,
                     "note": "" if w >= h else "w < h: tightness needs w >= h"})
    h1 = bool(ws) and all(h == 1 for h in hs) and pts[0][0] >= 1 and all(w >= 2 for w in ws)
    if ws:
        k0 = shannon.bound_matus(ws) if all(w >= 2 for w in ws) else None
        rows.append({"bound": "matus", "step": "", "value": k0, "hypotheses": h1,
                     "tight": h1 and k0 is not None and all(w >= k0 for w in ws), "note": ""})
        imp = shannon.bound_matus_improved(ws) if k0 is not None else None
        rows.append({"bound": "matus_improved", "step": "", "value": imp, "hypotheses": h1,
                     "tight": False, "note": ""})
    return rows


def cmd_bounds(args) -> Output:
    if args.widths:
        ws = parse_ints(args.widths)
        s = witness.height1_staircase(ws, 1)
    elif args.w is not None:
        h = 1 if args.h is None else args.h
        s = staircase_from_points([(1, h), (1 + args.w, 0)])
    else:
        s = read_staircase(args)
    rows = bounds_report(s)
    lines = []
    for r in rows:
        val = "n/a" if r["value"] is None else fmt_q(r["value"])
        flag = "ok" if r["hypotheses"] else "hypotheses unmet"
        step = f"[{r['step']}]" if r["step"] != "" else ""
        note = f" ({r['note']})" if r["note"] else ""
        lines.append(f"{r['bound']}{step}: {val}  {flag}{' tight' if r['tight'] else ''}{note}")
    header = ["bound", "step", "value", "hypotheses", "tight", "note"]
    return Output({"staircase": s.to_json(), "bounds": rows}, header,
                  [[r[k] if r[k] is not None else "" for k in header] for r in rows],
                  "\n".join(lines))


def _edge_doc(e: witness.EdgeGrid) -> dict:
    return {"staircase": e.staircase.to_json() if e.staircase else None,
            "n1": e.n1, "n2": e.n2,
            "h": [[fmt_q(x) for x in col] for col in e.h],
            "v": [[fmt_q(x) for x in col] for col in e.v]}


def _edge_from_doc(doc) -> witness.EdgeGrid:
    s = Staircase.from_json(doc["staircase"]) if doc.get("staircase") else None
    h = tuple(tuple(Fraction(x) for x in col) for col in doc["h"])
    v = tuple(tuple(Fraction(x) for x in col) for col in doc["v"])
    return witness.EdgeGrid(int(doc["n1"]), int(doc["n2"]), h, v, s)


def cmd_witness(args) -> Output:
    if args.action == "build":
        fam = args.family
        if fam == "single":
            e = witness.construct_single_step(args.i1, args.j1, args.w, args.h)
        elif fam == "regular":
            e = witness.construct_regular_equal(args.w, args.ell, args.i1, args.j1)
        elif fam == "height1":
            e = witness.construct_height1(parse_ints(args.widths), args.i1, args.j_last)
        else:
            e = witness.fig6_edges()
        witness.edges_to_rankgrid(e)  # raises on inconsistent edges
        doc = _edge_doc(e)
        return Output(doc, text=json.dumps(doc), csv_text=e.to_csv())
    raw = _read_doc(args)
    if raw.startswith("{"):
        e = _edge_from_doc(json.loads(raw))
    else:
        e = witness.EdgeGrid.from_csv(raw)
    s = read_staircase(args) if args.points else e.staircase
    if s is None:
        raise KappaError("edge CSV input needs --points for the staircase")
    if (s.n1, s.n2) != (e.n1, e.n2):
        s = staircase_from_points(s.points, e.n1, e.n2)
    rep = witness.check_conditions(e, qualmap(s))
    doc = {"ok": rep.ok, "H": fmt_q(e.H), "V": fmt_q(e.V), "report": rep.to_json()}
    lines = [f"{'ok' if rep.ok else 'violations'}  H={fmt_q(e.H)} V={fmt_q(e.V)}"]
    lines += [f"{v.label} {v.edge}{list(v.at)} slack {fmt_q(v.slack)}" for v in rep.violations]
    return Output(doc, ["label", "edge", "i", "j", "slack"],
                  [[v.label, v.edge, v.at[0], v.at[1], v.slack] for v in rep.violations],
                  "\n".join(lines), EXIT_OK if rep.ok else EXIT_VIOLATION)


def _seed(args) -> idealgen.IntPolymatroid:
    raw = args.seed if args.seed else _read_doc(args)
    return idealgen.polymatroid_from_json(json.loads(raw))


def _cut(p, args) -> idealgen.ModularCut:
    """``--cut "1;12"`` lists generator sets; ``--cut-index k`` picks the
    k-th enumerated cut (default 1)."""
    if args.cut:
        gens = [{int(ch) for ch in g.strip()} for g in args.cut.split(";") if g.strip()]
        return idealgen.cut_generated_by(p, gens)
    cuts = idealgen.enumerate_modular_cuts(p)
    k = args.cut_index or 1
    if not 1 <= k <= len(cuts):
        raise KappaError(f"cut index must be 1..{len(cuts)}")
    return cuts[k - 1]


def _profiles_output(profiles, extra=None) -> Output:
    doc = {"minimal_profiles": [list(x) for x in profiles]}
    doc.update(extra or {})
    width = len(profiles[0]) if profiles else 0
    text = json.dumps([list(x) for x in profiles])
    if "kappa" in doc:
        text += f"\nkappa {doc['kappa']}"
    return Output(doc, [f"x{k + 1}" for k in range(width)], [list(x) for x in profiles], text)


def cmd_ideal(args) -> Output:
    if args.action == "bipartite":
        s = idealgen.bipartite_ideal_family(args.a, args.b, args.c, args.which, args.n1, args.n2)
        extra = {"staircase": s.to_json()}
        if args.kappa:
            extra["kappa"] = fmt_q(shannon.kappa(s).kappa)
        return _profiles_output(list(s.points), extra)
    p = _seed(args)
    if args.action == "cuts":
        cuts = idealgen.enumerate_modular_cuts(p)
        desc = [c.describe(p) for c in cuts]
        return Output({"cuts": desc}, ["index", "flats"],
                      [[k + 1, ";".join(d)] for k, d in enumerate(desc)],
                      "\n".join(f"{k + 1}: {{{', '.join(d)}}}" for k, d in enumerate(desc)))
    e = idealgen.one_point_extension(p, _cut(p, args))
    sizes = parse_ints(args.sizes)
    return _profiles_output(idealgen.generate_structure(e, sizes),
                            {"cut": e.cut.describe(p), "sizes": sizes})


def cmd_ingleton(args) -> Output:
    if args.vamos:
        p = idealgen.vamos()
        groups = [{1, 2}, {3, 4}, {5, 6}, {7, 8}]
        vals = {}
        for a, b in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
            c, d = (x for x in range(4) if x not in (a, b))
            key = tuple("".join(map(str, sorted(groups[k]))) for k in (a, b, c, d))
            vals[key] = idealgen.ingleton(p, groups[a], groups[b], groups[c], groups[d])
    else:
        p = _seed(args)
        if args.cut or args.cut_index:
            p = idealgen.one_point_extension(p, _cut(p, args)).poly
        vals = {tuple(map(str, k)): v for k, v in idealgen.ingleton_instances(p).items()}
    bad = [k for k, v in vals.items() if v < 0]
    rows = [[",".join(k), v] for k, v in vals.items()]
    return Output({"instances": {",".join(k): v for k, v in vals.items()}, "ok": not bad},
                  ["args", "value"], rows,
                  "\n".join(f"Ing({','.join(k)}) = {v}" for k, v in vals.items()),
                  EXIT_VIOLATION if bad else EXIT_OK)


def cmd_linrep(args) -> Output:
    if args.action == "complexity":
        t = linrep.scheme_shares_height1(args.w, args.ell, args.n1 or 1, args.n2 or 1)
        doc = t.to_json()
        doc["combined"] = fmt_q(linrep.combined_complexity_height1(args.w, args.ell))
        return Output(doc, ["w", "ell", "secret", "share_n1", "share_n2", "ratio"],
                      [[t.w, t.ell, t.secret, t.share_n1, t.share_n2, t.ratio]], fmt_q(t.ratio))
    rows, docs, code = [], [], EXIT_OK
    for seed in parse_range(args.seeds):
        s = linrep.build_scheme_30_11_03(seed, args.n1 or 3, args.n2 or 3)
        if args.control == "alpha":
            s = linrep.degenerate_control(s)
        elif args.control == "cross":
            s = linrep.cross_control(s)
        rep = linrep.verify_scheme(s)
        code = code if rep.ok else EXIT_VIOLATION
        docs.append({"seed": seed, **rep.to_json()})
        rows.append([seed, rep.ok, rep.checked, ";".join(sorted(rep.conditions()))])
    text = "\n".join(f"seed {r[0]}: {'ok' if r[1] else 'FAILED ' + r[3]}" for r in rows)
    return Output({"complexity": "3/2", "runs": docs}, ["seed", "ok", "checked", "failed"],
                  rows, text, code)


def _curve(args) -> continuous.Curve:
    if args.line:
        a, b = (Fraction(x) for x in args.line.split(","))
        return continuous.Curve.linear(a, b)
    if args.vertices:
        return continuous.Curve.piecewise(json.loads(args.vertices))
    raise KappaError("give --line a,b or --vertices JSON")


def cmd_continuous(args) -> Output:
    if args.action == "bound":
        c = _curve(args)
        v = continuous.continuous_lower_bound(c, args.samples)
        doc = {"bound": fmt_q(v), "exact": continuous.bound_is_exact(c)}
        if c.kind == "linear":
            doc["optimum"] = continuous.linear_curve_optimum(c.a, c.b).to_json()
        return Output(doc, ["bound"], [[v]], fmt_q(v))
    if args.action == "discretize":
        c = _curve(args)
        rows = continuous.convergence_rows(c, parse_range(args.n), args.samples)
        return Output([{"N": n, "kappa": fmt_q(k), "bound": fmt_q(b)} for n, k, b in rows],
                      ["N", "kappa_N", "bound"], [list(r) for r in rows],
                      "\n".join(f"N={n} kappa={fmt_q(k)} bound={fmt_q(b)}" for n, k, b in rows))
    if args.fn == "product":
        fn = lambda u, v: min(u, 1) * min(v, 1)  # noqa: E731
    elif args.fn == "zero":
        fn = lambda u, v: Fraction(0)  # noqa: E731
    else:
        fn = continuous.LinearOptimum(Fraction(args.cu), Fraction(args.cv), Fraction(args.M))
    sf = continuous.SampledFunction.uniform(fn, args.extent, args.extent, args.steps)
    rep = continuous.check_G_membership(sf)
    return Output(rep.to_json(), ["condition", "count"],
                  [[c, sum(v.condition == c for v in rep.violations)]
                   for c in sorted(rep.conditions())],
                  "ok" if rep.ok else "violations: " + ", ".join(sorted(rep.conditions())),
                  EXIT_OK if rep.ok else EXIT_VIOLATION)


# sweeps

def _sweep_one(task):
    fam, params, extra = task
    if fam == "single-step":
        w, h, i1 = params
        s = witness.single_step_staircase(i1, h, w, h).enlarged(extra)
        expected = 2 - Fraction(1, w)
    elif fam == "regular":
        w, ell = params
        s = witness.regular_staircase(w, ell, 1, (ell - 1) * w + 1).enlarged(extra)
        expected = 2 - Fraction(1, w)
    else:
        w, ell = params
        s = witness.height1_staircase([w] * (ell - 1), 1).enlarged(extra)
        expected = shannon.bound_matus([w] * (ell - 1))
    k = shannon.kappa(s).kappa
    return [fam, ";".join(map(str, params)), s.n1, s.n2, k, expected, k == expected]


def sweep_tasks(args) -> list:
    ws, extras = parse_range(args.w), parse_range(args.extra)
    tasks = []
    for w in ws:
        if args.family == "single-step":
            for h in range(1, w + 1):
                for i1 in parse_range(args.i1):
                    tasks += [(args.family, (w, h, i1), d) for d in extras]
        else:
            for ell in parse_range(args.ell):
                tasks += [(args.family, (w, ell), d) for d in extras]
    return tasks


def cmd_sweep(args) -> Output:
    tasks = sweep_tasks(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    bad = [r for r in rows if not r[-1]]
    header = ["family", "params", "n1", "n2", "kappa", "expected", "match"]
    return Output([dict(zip(header, r)) for r in rows], header, rows,
                  f"{len(rows) - len(bad)}/{len(rows)} instances match",
                  EXIT_VIOLATION if bad else EXIT_OK)


# parser

def _staircase_args(p):
    p.add_argument("--points", help='JSON list of points, e.g. "[[2,4],[5,2]]"')
    p.add_argument("--file", help="JSON staircase document (default: stdin)")
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--output", help=f"write here (relative to ${OUTDIR_ENV} if set)")

    parser = argparse.ArgumentParser(prog="bipartite-kappa",
                                     description="Shannon complexity of bipartite structures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kappa", parents=[common], help="solve the LP for a staircase")
    _staircase_args(p)
    p.add_argument("--witness", action="store_true", help="also emit the witness grid")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("bounds", parents=[common], help="closed-form lower bounds")
    _staircase_args(p)
    p.add_argument("--widths", help="height-one staircase widths, e.g. 3,3,2,3")
    p.add_argument("--w", type=int)
    p.add_argument("--h", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", parents=[common], help="edge-grid constructions and checks")
    p.add_argument("action", choices=["build", "check"])
    p.add_argument("--family", choices=["single", "regular", "height1", "fig6"],
                   default="single")
    p.add_argument("--i1", type=int, default=1)
    p.add_argument("--j1", type=int, default=2)
    p.add_argument("--w", type=int, default=2)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--widths", default="3,3")
    p.add_argument("--j-last", type=int, default=0)
    _staircase_args(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("ideal", parents=[common], help="kappa-ideal structure generation")
    p.add_argument("action", choices=["bipartite", "generate", "cuts"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--which", type=int, default=1)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--kappa", action="store_true", help="also solve the LP")
    p.add_argument("--seed", help='polymatroid JSON, e.g. {"m":2,"rank":{"1":2,"2":2,"12":3}}')
    p.add_argument("--file")
    p.add_argument("--cut", help='generator sets of the cut, e.g. "1;2" or "12"')
    p.add_argument("--cut-index", type=int, help="index into the enumerated cuts")
    p.add_argument("--sizes", default="3,3")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("ingleton", parents=[common], help="Ingleton instances")
    p.add_argument("--seed")
    p.add_argument("--file")
    p.add_argument("--cut", help='extend a 3-element seed by this cut first, e.g. "1;23"')
    p.add_argument("--cut-index", type=int)
    p.add_argument("--vamos", action="store_true")
    p.set_defaults(func=cmd_ingleton)

    p = sub.add_parser("linrep", parents=[common], help="linear scheme checks")
    p.add_argument("action", choices=["verify", "complexity"])
    p.add_argument("--seeds", default="1")
    p.add_argument("--control", choices=["none", "alpha", "cross"], default="none")
    p.add_argument("--w", type=int, default=3)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.set_defaults(func=cmd_linrep)

    p = sub.add_parser("continuous", parents=[common], help="continuous relaxation")
    p.add_argument("action", choices=["bound", "discretize", "member"])
    p.add_argument("--line", help="a,b for the segment (0,a)-(b,0)")
    p.add_argument("--vertices", help="JSON polygon from (0,a) to (b,0)")
    p.add_argument("--n", default="1..6")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--fn", choices=["linear", "product", "zero"], default="linear")
    p.add_argument("--cu", default="1")
    p.add_argument("--cv", default="1")
    p.add_argument("--M", default="1")
    p.add_argument("--extent", default="2")
    p.add_argument("--steps", type=int, default=8)
    p.set_defaults(func=cmd_continuous)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweeps of the LP")
    p.add_argument("--family", choices=["single-step", "regular", "height1"],
                   default="single-step")
    p.add_argument("--w", default="2..6")
    p.add_argument("--ell", default="2..3")
    p.add_argument("--i1", default="1..2")
    p.add_argument("--extra", default="0", help="grid enlargements, e.g. 0,2")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except SolverError as ex:
        print(f"solver error: {ex}", file=sys.stderr)
        return EXIT_SOLVER
    except (KappaError, ValueError, KeyError, TypeError, OSError) as ex:
        print(f"input error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    return emit(out, args.format, args.output)


if __name__ == "__main__":
    sys.exit(main())
