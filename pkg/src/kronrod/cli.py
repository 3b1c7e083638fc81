"""Command-line front end.

Subcommands:

* ``realize`` -- synthesize a field for a term and write field, record, and
  manifest JSON files,
* ``analyze`` -- classify a field, build its graph, and report shape data,
* ``verify``  -- run the full contract for a field/record pair against a term,
* ``corpus``  -- generate and verify the deterministic test corpus.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal
assertion.  Reports are JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from kronrod.construct import realize_disk, realize_simple, realize_torus_circuit, realize_torus_tree
from kronrod.corpus import corpus_summary
from kronrod.errors import KronrodError, NotRealizable, ParseError, ShapeViolation
from kronrod.fields import (
    euler_check,
    export_pgm,
    is_generic,
    is_simple,
    load_field,
    morse_counts,
    save_field,
)
from kronrod.records import ConstructionRecord
from kronrod.reeb import build_reeb, classify_shape, export_dot, export_json, find_special_vertex
from kronrod.terms import GroupTerm, Wr, Wr2, class_of, format_term, normalize, parse_term
from kronrod.verify import verify_realization

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _split_case_term(term: GroupTerm, case: str, n: int | None, m: int | None):
    """Resolve the construction base and indices from a term and flags."""
    if case == "circuit" or case == "simple":
        if n is not None:
            return term, n, 1
        if isinstance(term, Wr):
            return term.base, term.n, 1
        if class_of(normalize(term)).disk_realizable:
            return term, 1, 1
        raise NotRealizable(f"{format_term(term)} has no top-level cyclic wreath")
    if case == "tree":
        if isinstance(term, Wr2):
            return term.base, term.n, term.m
        if n is not None and m is not None:
            return term, n, m
        raise NotRealizable(
            "tree case needs a top-level wr2 term or explicit --n and --m"
        )
    if case == "disk":
        return term, 1, 1
    raise NotRealizable(f"unknown case {case!r}")


def cmd_realize(args) -> int:
    try:
        term = parse_term(args.term)
        base, n, m = _split_case_term(term, args.case, args.n, args.m)
        if args.case == "circuit":
            f, rec = realize_torus_circuit(base, n)
        elif args.case == "simple":
            f, rec = realize_simple(base, n)
        elif args.case == "tree":
            f, rec = realize_torus_tree(base, n, m)
        else:
            f, rec = realize_disk(base)
    except (ParseError, NotRealizable) as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_INPUT

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    field_path = out / "field.json"
    record_path = out / "record.json"
    field_path.write_bytes(save_field(f))
    record_path.write_bytes(rec.to_json())
    manifest = {
        "term": args.term,
        "normalized": format_term(normalize(term)),
        "case": args.case,
        "n": rec.n,
        "m": rec.m,
        "field": field_path.name,
        "record": record_path.name,
        "grid": [f.width, f.height],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2))
    _emit({"ok": True, **manifest})
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        f = load_field(Path(args.field).read_bytes())
    except (OSError, KronrodError) as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_INPUT
    try:
        mc = morse_counts(f)
        euler = euler_check(f)
        g = build_reeb(f)
        shape = classify_shape(g)
        special = None
        if f.kind == "torus" and shape.shape == "tree":
            special = find_special_vertex(g, f)
        doc = {
            "ok": euler,
            "kind": f.kind,
            "grid": [f.width, f.height],
            "counts": {"minima": mc.c0, "saddles": mc.c1, "maxima": mc.c2},
            "euler_ok": euler,
            "betti1": shape.betti1,
            "shape": shape.shape,
            "special_vertex": special,
            "generic": is_generic(f),
            "simple": is_simple(f, g),
            "graph": {"vertices": g.n_vertices, "edges": g.n_edges},
        }
    except ShapeViolation as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_VERIFY
    except KronrodError as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_VERIFY

    emits = set((args.emit or "").split(",")) - {""}
    out = Path(args.out) if args.out else Path(args.field).parent
    if "dot" in emits:
        (out / "reeb.dot").write_text(export_dot(g))
    if "json" in emits:
        (out / "reeb.json").write_bytes(export_json(g, include_cells=False))
    if "pgm" in emits:
        (out / "field.pgm").write_bytes(export_pgm(f))
    _emit(doc)
    return EXIT_OK if euler else EXIT_VERIFY


def cmd_verify(args) -> int:
    try:
        f = load_field(Path(args.field).read_bytes())
        rec = ConstructionRecord.from_json(Path(args.record).read_bytes())
        term = parse_term(args.term) if args.term else None
    except (OSError, KronrodError) as exc:
        _emit({"ok": False, "error": str(exc)})
        return EXIT_INPUT
    report = verify_realization(f, rec, term=term, cap=args.cap)
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_corpus(args) -> int:
    summary = corpus_summary(args.seed, cap=args.cap)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2))
    _emit(
        {
            "ok": summary["ok"],
            "seed": summary["seed"],
            "realizations": len(summary["realizations"]),
            "oracle_fields": len(summary["oracle"]),
            "failures": [r["label"] for r in summary["realizations"] if not r["ok"]],
        }
    )
    return EXIT_OK if summary["ok"] else EXIT_VERIFY


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kronrod", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("realize", help="synthesize a field realizing a group term")
    pr.add_argument("--term", required=True)
    pr.add_argument("--case", required=True, choices=["circuit", "tree", "simple", "disk"])
    pr.add_argument("--n", type=int, default=None)
    pr.add_argument("--m", type=int, default=None)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_realize)

    pa = sub.add_parser("analyze", help="classify a field and report its graph")
    pa.add_argument("--field", required=True)
    pa.add_argument("--emit", default="", help="comma list: dot,json,pgm")
    pa.add_argument("--out", default=None)
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run the full realization contract")
    pv.add_argument("--field", required=True)
    pv.add_argument("--record", required=True)
    pv.add_argument("--term", default=None)
    pv.add_argument("--cap", type=int, default=5000)
    pv.set_defaults(func=cmd_verify)

    pc = sub.add_parser("corpus", help="generate and verify the test corpus")
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--cap", type=int, default=5000)
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except KronrodError as exc:
        _emit({"ok": False, "error": f"internal: {exc}"})
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
