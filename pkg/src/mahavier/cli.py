"""The ``mahavier`` command-line interface.

Exit codes: 0 on success, 1 when the input is mathematically malformed or a
witness fails its check, 2 for unreadable files and schema violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import finite as fin
from .branch_pair import IntervalWitness, check_interval_witness
from .documents import (
    PairWitness,
    dumps,
    load_labeled_path,
    load_relation,
    read_json,
    relation_to_json,
    witness_from_json,
    write_text,
)
from .errors import InputFormatError, MahavierError, MalformedInputError
from .gallery import build, sidecar
from .intervals import IntervalUnion, as_rational
from .interval_relation import IntervalRelation
from .report import DEFAULT_LEVEL_CAP, DEFAULT_SIZE_CAP, GROWTH_M_MAX, analyze
from .svg import relation_svg
from .transforms import FiniteSystem, Turbulence, verify_turbulent
from .zigzag import flip_bound_verify, zigzag_bound, zigzag_number, zigzag_number_brute

EXIT_OK, EXIT_MATH, EXIT_FORMAT = 0, 1, 2
BRUTE_ZIGZAG_LIMIT = 20


def threads() -> int:
    """Parallelism cap from ``MAHAVIER_THREADS``; all work here is sequential."""
    raw = os.environ.get("MAHAVIER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputFormatError(f"MAHAVIER_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InputFormatError("MAHAVIER_THREADS must be positive")
    return n


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _growth_csv(R: fin.FiniteRelation, m_max: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "log_count_over_m"])
    for m, v in fin.entropy_growth(R, m_max).samples:
        writer.writerow([m, f"{v:.12g}"])
    return buf.getvalue()


def _shade(report: dict) -> dict:
    w = report.get("witnesses", {}).get("cr")
    if not w or "first" not in w.get("K", {}):
        return {}
    return {"#1f77b4": IntervalUnion.from_json(w["K"]["first"]), "#ff7f0e": IntervalUnion.from_json(w["L"]["first"])}


def cmd_analyze(args) -> int:
    relation = load_relation(args.path)
    report = analyze(
        relation,
        level_cap=args.level_cap,
        size_cap=args.size_cap,
        p=as_rational(args.p),
        timings=not args.no_timings,
    )
    _emit(dumps(report), args.out)
    if args.svg:
        write_text(args.svg, relation_svg(relation, _shade(report)))
    if args.csv:
        if not isinstance(relation, fin.FiniteRelation):
            raise MalformedInputError("--csv needs a finite relation")
        write_text(args.csv, _growth_csv(relation, GROWTH_M_MAX))
    return EXIT_OK


def cmd_gallery(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "a", "b", "depth", "permutation") if getattr(args, k) is not None}
    entry = build(args.name, **params)
    outdir = Path(args.out or ".")
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputFormatError(f"cannot create {outdir}: {exc.strerror or exc}") from None
    rel_path = outdir / f"{entry.name}.json"
    side_path = outdir / f"{entry.name}.expected.json"
    write_text(rel_path, dumps(relation_to_json(entry.relation)))
    write_text(side_path, dumps(sidecar(entry)))
    sys.stdout.write(f"{rel_path}\n{side_path}\n")
    return EXIT_OK


def _finite_witness_report(R: fin.FiniteRelation, w: fin.LevelWitness) -> dict:
    fin.check_witness_shape(R, w)
    fK, lK = fin.projections(w.K)
    fL, lL = fin.projections(w.L)
    if w.kind == fin.REVERSE_CR:
        fK, lK, fL, lL = lK, fK, lL, fL
        inclusion = "π_last(K) ∪ π_last(L) ⊆ π_first(K) ∩ π_first(L)"
        sides = ("first_K", "first_L")
    else:
        inclusion = "π_first(K) ∪ π_first(L) ⊆ π_last(K) ∩ π_last(L)"
        sides = ("last_K", "last_L")
    need = fK | fL
    miss_K, miss_L = sorted(map(str, need - lK)), sorted(map(str, need - lL))
    return {
        "verified": not miss_K and not miss_L,
        "kind": w.kind,
        "level": w.level,
        "inclusion": inclusion,
        f"missing_from_{sides[0]}": miss_K,
        f"missing_from_{sides[1]}": miss_L,
    }


def _interval_witness_report(R: IntervalRelation, w: IntervalWitness) -> dict:
    res = check_interval_witness(R, w)
    out = res.to_json()
    out.update({"kind": w.kind, "level": w.level})
    if w.kind == fin.REVERSE_CR:
        out["inclusion"] = "π_last(K) ∪ π_last(L) ⊆ π_first(K) ∩ π_first(L), as the cr inclusion of the inverse"
    else:
        out["inclusion"] = "π_first(K) ∪ π_first(L) ⊆ π_last(K) ∩ π_last(L)"
    return out


def _pair_report(relation, w: PairWitness) -> dict:
    S = FiniteSystem(relation) if isinstance(relation, fin.FiniteRelation) else relation
    result = verify_turbulent(S, w.K, w.L, w.m)
    return {
        "verified": result is not Turbulence.NEITHER,
        "classification": result.value,
        "m": w.m,
        "inclusion": "K ∪ L ⊆ f^m(K) ∩ f^m(L)",
    }


def cmd_verify_witness(args) -> int:
    relation = load_relation(args.relation)
    w = witness_from_json(read_json(args.witness), relation)
    if isinstance(w, PairWitness):
        report = _pair_report(relation, w)
    elif isinstance(relation, fin.FiniteRelation):
        report = _finite_witness_report(relation, w)
    elif isinstance(relation, IntervalRelation) and isinstance(w, IntervalWitness):
        report = _interval_witness_report(relation, w)
    else:
        raise InputFormatError("witness kind does not fit the relation")
    _emit(dumps(report), args.out)
    return EXIT_OK if report["verified"] else EXIT_MATH


def cmd_zigzag(args) -> int:
    report = {}
    if args.path:
        path = load_labeled_path(args.path)
        report["zigzag_number"] = zigzag_number(path)
        if len(path.labels) <= BRUTE_ZIGZAG_LIMIT:
            report["brute_force"] = zigzag_number_brute(path)
    if args.delta is not None:
        diameter = args.diameter if args.diameter is not None else "1"
        report["bound"] = zigzag_bound(as_rational(diameter), as_rational(args.delta))
    if args.flip_bound is not None:
        report["flip_bound"] = {"n": args.flip_bound, "holds": flip_bound_verify(args.flip_bound)}
    if not report:
        raise InputFormatError("zigzag needs a path, --delta or --flip-bound")
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_entropy(args) -> int:
    relation = load_relation(args.path)
    if not isinstance(relation, fin.FiniteRelation):
        raise MalformedInputError("entropy is computed for finite relations only")
    spectral = fin.entropy(relation)
    growth = fin.entropy_growth(relation, args.m_max)
    report = {
        "spectral": spectral.value,
        "growth": {"m_max": args.m_max, "final": growth.value},
        "difference": abs(spectral.value - growth.value),
    }
    _emit(dumps(report), args.out)
    if args.csv:
        write_text(args.csv, _growth_csv(relation, args.m_max))
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mahavier", description="Dynamics of closed relations: entropy, turbulence and witnesses.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="verdicts, entropy and verified witnesses for a relation file")
    p.add_argument("path")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--svg", help="write a plot of the relation")
    p.add_argument("--csv", help="write entropy-growth samples (finite relations)")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock timings for byte-stable output")
    p.add_argument("--level-cap", type=_positive, default=DEFAULT_LEVEL_CAP, help="largest level for brute-force cross-checks")
    p.add_argument("--size-cap", type=_positive, default=DEFAULT_SIZE_CAP, help="largest witness-set size for brute force")
    p.add_argument("--p", default="1/2", help="parameter p in (0, 1) for f∪g witness search")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gallery", help="write an example relation and its expected verdicts")
    p.add_argument("name")
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--n", type=_positive)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--depth", type=_positive)
    p.add_argument("--permutation", choices=["identity", "shift", "reverse"])
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("verify-witness", help="check a witness file against a relation file")
    p.add_argument("relation")
    p.add_argument("witness")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_witness)

    p = sub.add_parser("zigzag", help="zigzag numbers, the zigzag bound and the flip-count bound")
    p.add_argument("path", nargs="?")
    p.add_argument("--diameter")
    p.add_argument("--delta")
    p.add_argument("--flip-bound", type=_positive)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zigzag)

    p = sub.add_parser("entropy", help="spectral entropy and the walk-count growth estimate")
    p.add_argument("path")
    p.add_argument("--m-max", type=int, default=GROWTH_M_MAX)
    p.add_argument("--csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads()
        return args.func(args)
    except InputFormatError as exc:
        print(f"mahavier: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (MalformedInputError, ValueError) as exc:
        print(f"mahavier: invalid input: {exc}", file=sys.stderr)
        return EXIT_MATH
    except MahavierError as exc:
        print(f"mahavier: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
