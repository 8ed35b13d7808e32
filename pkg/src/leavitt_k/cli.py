"""``leavitt-k``: K-theory of Leavitt path algebras of finite quivers.

Exit status: 0 on success, 1 when a check fails, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .ktheory import KTable, KTableError, k_groups, load_ktable
from .linalg import det, one_minus_Nt, parse_matrix, smith_normal_form
from .quiver import Quiver, QuiverError, QuiverParseError, classify, parse_quiver, \
    reduction_chain, tilde_quiver
from .verify import (check_dimension_tower, dim_L0, exhaustive_quivers, predict_gamma,
                     random_quiver, replay, run_checks)

SCHEMA = 1


class UsageError(Exception):
    pass


def _braces(vs) -> str:
    return "{" + ", ".join(vs) + "}"


def _read_quiver(path: str) -> Quiver:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return parse_quiver(p.read_text(encoding="utf-8"))
    except QuiverParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _read_table(ref: str | None, required: bool = True) -> KTable | None:
    if ref is None:
        if required:
            raise UsageError("this command needs --ktable")
        return None
    try:
        return load_ktable(ref)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    except KTableError as exc:
        raise UsageError(f"{ref}: {exc}") from None


def parse_degrees(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise UsageError(f"bad degree range {text!r}; use e.g. 0..3") from None
    if b < a:
        raise UsageError(f"empty degree range {text!r}")
    return range(a, b + 1)


def _emit(args, text_lines: list[str], payload: dict):
    if args.output == "json":
        payload = {"schema": SCHEMA, "command": args.verb, **payload}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in text_lines))


# --- verbs -----------------------------------------------------------------

def cmd_info(args) -> int:
    q = _read_quiver(args.quiver)
    cls = classify(q)
    tilde = tilde_quiver(q)
    sinks = [v for v in q.vertex_order if v in cls.sinks]
    sources = [v for v in q.vertices if v in cls.sources]
    tilde_text = ("tilde-E empty" if not tilde.vertices
                  else f"tilde-E {len(tilde.vertices)} vertices {len(tilde.edges)} edges")
    lines = [f"vertices {len(q.vertices)}, edges {len(q.edges)}, sinks {_braces(sinks)}, "
             f"sources {_braces(sources)}, {tilde_text}"]
    a = one_minus_Nt(q)
    d = det(a) if a.rows == a.cols else None
    if d is not None:
        lines.append(f"det(1-N^t) = {d}")
    _emit(args, lines, {
        "vertices": list(q.vertex_order), "edges": len(q.edges), "sinks": sinks,
        "sources": sources, "tilde_vertices": list(tilde.vertices),
        "tilde_edges": len(tilde.edges), "det": None if d is None else str(d),
    })
    return 0


def _label(mode: str, n: int) -> str:
    return {"K": "K", "KH": "KH", "Ktop": "Ktop"}[mode] + str(n)


def render_degree(mode: str, d, cite: bool) -> str:
    head = _label(mode, d.degree)
    if d.total is not None:
        line = f"{head} = {d.total}"
    else:
        line = f"{head} : coker = {d.coker}, ker = {d.ker} ({d.split_status})"
    if d.default_derived:
        line += " (table-default-derived)"
    if cite:
        line += "  [" + "; ".join(d.citations) + "]"
    return line


def cmd_kgroups(args) -> int:
    q = _read_quiver(args.quiver)
    table = _read_table(args.ktable)
    degrees = parse_degrees(args.degrees) if args.degrees else range(0, 2)
    try:
        rep = k_groups(q, table, degrees)
    except KTableError as exc:
        raise UsageError(str(exc)) from None
    lines = [render_degree(rep.mode, d, args.cite) for d in rep.degrees]
    if rep.nk_obstruction_note:
        lines.append("note: " + rep.nk_obstruction_note)
    _emit(args, lines, {"quiver": list(q.vertex_order), "report": rep.to_json(),
                        "matrix": one_minus_Nt(q).to_json()})
    return 0


def cmd_reduce(args) -> int:
    q = _read_quiver(args.quiver)
    chain = reduction_chain(q)
    lines = [f"chain length {len(chain)}, ell = {chain.ell}"]
    stages = []
    for i, f in enumerate(chain.stages):
        a = one_minus_Nt(f)
        added = f" (+{chain.added_vertex[i - 1]})" if i else ""
        lines.append(f"stage {i}{added}: vertices {' '.join(f.vertex_order) or '-'}, "
                     f"edges {len(f.edges)}")
        lines.extend("  " + row for row in str(a).splitlines())
        stages.append({"vertices": list(f.vertex_order), "edges": len(f.edges),
                       "added": chain.added_vertex[i - 1] if i else None,
                       "matrix": a.to_json()})
    _emit(args, lines, {"ell": chain.ell, "stages": stages})
    return 0


def cmd_snf(args) -> int:
    if args.matrix:
        p = Path(args.matrix)
        if not p.is_file():
            raise UsageError(f"no such file: {args.matrix}")
        try:
            a = parse_matrix(p.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise UsageError(f"{args.matrix}: {exc}") from None
    elif args.quiver:
        a = one_minus_Nt(_read_quiver(args.quiver))
    else:
        raise UsageError("snf needs a quiver file or --matrix")
    sf = smith_normal_form(a)
    lines = [f"shape {a.rows}x{a.cols}",
             "factors " + (" ".join(map(str, sf.factors)) or "(none)")]
    for label, m in (("U", sf.u), ("D", sf.d), ("V", sf.v)):
        lines.append(f"{label} =")
        lines.extend("  " + row for row in str(m).splitlines())
    _emit(args, lines, {"matrix": a.to_json(), "factors": [str(f) for f in sf.factors],
                        "u": sf.u.to_json(), "d": sf.d.to_json(), "v": sf.v.to_json()})
    return 0


def cmd_gamma(args) -> int:
    q = _read_quiver(args.quiver)
    table = _read_table(args.ktable)
    pred = predict_gamma(q, table)
    lines = [f"det(1-N^t) = {pred.det_value}", f"gamma: {pred.summary}"]
    if pred.hypothesis_trail:
        lines.append("by " + "; ".join(pred.hypothesis_trail))
    _emit(args, lines, pred.to_json())
    return 0


def cmd_dims(args) -> int:
    q = _read_quiver(args.quiver)
    n_max = args.n
    outcome = check_dimension_tower(q, n_max)
    dims = [dim_L0(q, n) for n in range(n_max + 1)]
    lines = [f"dim L0,{n} = {d}" for n, d in enumerate(dims)]
    lines.append(f"check {'passed' if outcome.passed else 'FAILED'}")
    _emit(args, lines, {"dims": [str(d) for d in dims], "passed": outcome.passed})
    return 0 if outcome.passed else 1


def _check_inputs(args) -> list[tuple[str, Quiver]]:
    items: list[tuple[str, Quiver]] = []
    for path in args.paths:
        p = Path(path)
        if p.is_dir():
            for f in sorted(p.glob("*.quiver")):
                items.append((str(f), _read_quiver(str(f))))
        elif p.suffix != ".json":
            items.append((path, _read_quiver(path)))
    if args.all:
        root = Path(args.all)
        if not root.is_dir():
            raise UsageError(f"no such directory: {args.all}")
        for f in sorted(root.glob("*.quiver")):
            items.append((str(f), _read_quiver(str(f))))
    if args.random:
        rng = random.Random(args.seed)
        for i in range(args.random):
            items.append((f"random#{i}", random_quiver(rng, args.max_vertices)))
    if args.exhaustive:
        for i, q in enumerate(exhaustive_quivers(3, 2)):
            items.append((f"exhaustive#{i}", q))
    return items


def _dump_witness(w: dict) -> str:
    return json.dumps(w, indent=2, sort_keys=True) + "\n"


def cmd_check(args) -> int:
    table = _read_table(args.ktable, required=False) or load_ktable("builtin:integers")
    witnesses = [p for p in args.paths if p.endswith(".json")]
    lines: list[str] = []
    results = []
    failed = 0
    for w in witnesses:
        p = Path(w)
        if not p.is_file():
            raise UsageError(f"no such file: {w}")
        stored = p.read_text(encoding="utf-8")
        original = json.loads(stored)
        outcome = replay(original, table)
        failed += not outcome.passed
        entry = {"input": w, "check": outcome.name, "passed": outcome.passed}
        status = "ok"
        if not outcome.passed:
            outcome.witness["seed"] = original.get("seed")
            entry["identical"] = _dump_witness(outcome.witness) == stored
            status = "FAIL " + ("reproduced byte-identically" if entry["identical"]
                                else "reproduced, witness differs")
        lines.append(f"{w}: {outcome.name} {status} {outcome.detail}".rstrip())
        results.append(entry)
    items = _check_inputs(args)
    if not items and not witnesses:
        raise UsageError("check needs quiver files, a witness, --all DIR, --random N or --exhaustive")
    if args.random or args.exhaustive:
        lines.append(f"seed {args.seed}")
    wdir = Path(args.witness_dir)
    for label, q in items:
        for outcome in run_checks(q, table):
            results.append({"input": label, "check": outcome.name, "passed": outcome.passed})
            if outcome.passed:
                continue
            failed += 1
            wdir.mkdir(parents=True, exist_ok=True)
            wpath = wdir / f"witness-{failed:04d}.json"
            outcome.witness["seed"] = args.seed
            wpath.write_text(_dump_witness(outcome.witness), encoding="utf-8")
            lines.append(f"{label}: {outcome.name} FAIL {outcome.detail} (witness {wpath})")
    total = len(results)
    lines.append(f"{total - failed}/{total} checks passed on {len(items)} quivers"
                 + (f" and {len(witnesses)} witnesses" if witnesses else ""))
    _emit(args, lines, {"seed": args.seed, "results": results, "failed": failed})
    return 1 if failed else 0


# --- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--json", dest="output", action="store_const", const="json",
                        help="shorthand for --output json")
    common.add_argument("--ktable", help="coefficient table file or builtin:NAME")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="leavitt-k", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("info", parents=[common], help="vertex classes and det(1-N^t)")
    p.add_argument("quiver")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("kgroups", parents=[common], help="K-groups from a coefficient table")
    p.add_argument("quiver")
    p.add_argument("--degrees", help="range like 0..3 (default 0..1)")
    p.add_argument("--cite", action="store_true", help="append the theorem trail")
    p.set_defaults(func=cmd_kgroups)

    p = sub.add_parser("reduce", parents=[common], help="reduction chain with stage matrices")
    p.add_argument("quiver")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of 1-N^t or a matrix")
    p.add_argument("quiver", nargs="?")
    p.add_argument("--matrix", help="integer matrix file, one row per line")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("gamma", parents=[common], help="predict the comparison map to K^top")
    p.add_argument("quiver")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("dims", parents=[common], help="dimensions of the degree-zero tower")
    p.add_argument("quiver")
    p.add_argument("-n", type=int, default=6, help="top level (default 6)")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("check", parents=[common], help="run the verification battery")
    p.add_argument("paths", nargs="*", help="quiver files, directories or witness .json files")
    p.add_argument("--all", metavar="DIR", help="every *.quiver file in DIR")
    p.add_argument("--random", type=int, default=0, metavar="N", help="N seeded random quivers")
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--exhaustive", action="store_true",
                   help="all quivers with <= 3 vertices and multiplicities <= 2")
    p.add_argument("--witness-dir", default="witnesses")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.verb in ("kgroups", "gamma") and not args.ktable:
            raise UsageError(f"{args.verb} needs --ktable")
        return args.func(args)
    except (UsageError, QuiverError) as exc:
        print(f"leavitt-k: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
