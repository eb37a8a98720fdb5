"""Command-line interface: ``hypermatch <command> [options]``.

Output is JSON with sorted keys unless ``--format table`` is given.  Exit
codes: 0 on success, 2 for usage errors, 3 when a computation's
precondition fails (the payload then carries an ``error`` object).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .combinatorics import assoc_stirling2, beta, format_partition, format_set_partition, stirling2
from .families import (FamilySpec, UnknownFamily, build_family, is_fibre_closed, parse_family)
from .homology import homology_cross_check, reduced_homology
from .linalg import IntegerMatrix, smith_normal_form
from .shelling import NotAPermutation, NotAShelling, NotXn, homology_facets, is_shelling, singleton_shelling_order
from .simplicial import Complex, read_facet_file
from .stability import ImageNotAFace, NoFit, Surjection, fit_exp_poly, induced_map_on_homology, torsion_scan
from .symmetric import NotACharacter, cycle_types, decompose
from .symrep import ActionNotPreserved, homology_character, rational_homology_character


@dataclass
class CommandResult:
    command: str
    parameters: dict
    payload: Any
    exit_code: int = 0


class PreconditionError(Exception):
    def __init__(self, kind: str, message: str, witness: Any = None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


# ---------------------------------------------------------------------------
# Helpers

def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(v) for v in obj)
    return obj


def _face_str(face) -> str:
    return format_set_partition(face)


def _n_range(text: str) -> range:
    try:
        lo, hi = map(int, text.split(".."))
        if hi < lo:
            raise ValueError
        return range(lo, hi + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2..12, got {text!r}") from None


def _family(text: str) -> FamilySpec:
    try:
        return parse_family(text)
    except FileNotFoundError as e:
        raise PreconditionError("missing_file", str(e)) from None
    except (UnknownFamily, ValueError) as e:
        raise PreconditionError("unknown_family", str(e)) from None


def _member(spec: FamilySpec, n: int | None) -> tuple[Complex, int]:
    if n is None:
        n = spec.default_n
    if n is None:
        raise PreconditionError("missing_n", f"family {spec} needs --n")
    return build_family(spec, n), n


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Commands

def cmd_homology(args) -> dict:
    spec = _family(args.family)
    x, n = _member(spec, args.n)
    degrees = None if args.q is None else [args.q]
    out: dict[str, Any] = {"family": str(spec), "n": n, "method": args.method}
    if args.method in ("snf", "both"):
        groups = reduced_homology(x, degrees=degrees, threads=_threads(args))
        out["groups"] = [{"q": q, "rank": g.free_rank, "torsion": list(g.torsion)}
                         for q, g in sorted(groups.items())]
    if args.method in ("shelling", "both"):
        order = singleton_shelling_order(x, seed=args.seed)
        if args.method == "both":
            report = homology_cross_check(x, order, threads=_threads(args))
            out["agree"] = report.agree
            out["discrepancies"] = report.discrepancies
        else:
            facets = homology_facets(x, order)
            wanted = range(-1, x.dimension + 1) if args.q is None else [args.q]
            out["groups"] = [{"q": q, "rank": len(facets.get(q, [])), "torsion": []}
                             for q in wanted]
    return out


SNF_AUTO_MAX_N = 8


def cmd_betti(args) -> dict:
    spec = _family(args.family)
    if args.method == "formula" and spec.name != "X":
        raise PreconditionError("no_formula", f"no closed form for family {spec}")
    values, sources = {}, {}
    for n in args.n_range:
        use_formula = spec.name == "X" and (
            args.method == "formula" or (args.method == "auto" and n > SNF_AUTO_MAX_N))
        if use_formula:
            values[n] = beta(n, args.q) if n >= 2 else 0
            sources[n] = "formula"
            continue
        x = build_family(spec, n)
        values[n] = reduced_homology(x, degrees=[args.q], threads=_threads(args))[args.q].free_rank \
            if args.q <= x.dimension else 0
        sources[n] = "snf"
    out: dict[str, Any] = {"family": str(spec), "q": args.q, "values": values, "sources": sources}
    if args.fit:
        fit = fit_exp_poly(values, args.max_base, args.max_degree, args.min_held_out)
        out["fit"] = fit.as_json()
        out["valid_from"] = fit.valid_from
        out["solved_on"] = list(fit.solved_on)
        out["verified_on"] = list(fit.verified_on)
    return out


def cmd_character(args) -> dict:
    spec = _family(args.family)
    x, n = _member(spec, args.n)
    if args.method == "shelling":
        chi = homology_character(x, args.q, singleton_shelling_order(x, seed=args.seed))
    else:
        chi = rational_homology_character(x, args.q)
    out: dict[str, Any] = {
        "family": str(spec), "n": n, "q": args.q,
        "cycle_types": [format_partition(ct) for ct in cycle_types(n)],
        "values": chi.as_list(),
    }
    if args.decompose:
        out["multiplicities"] = {format_partition(mu): m for mu, m in sorted(decompose(chi).items(),
                                                                             reverse=True)}
    return out


def _read_order(path: str, facets: list) -> list:
    with open(path, encoding="utf-8") as fh:
        idx = [int(line.split("#", 1)[0]) for line in fh if line.split("#", 1)[0].strip()]
    if sorted(idx) != list(range(len(facets))):
        raise PreconditionError("bad_order", "order file must list each facet index 0..N-1 once")
    return [facets[i] for i in idx]


def cmd_shelling_verify(args) -> dict:
    if args.facets:
        facets = read_facet_file(args.facets)
        n = args.n or max((max(b) for f in facets for b in f), default=0)
        x = Complex(n, facets)
        # without an order file the facets are taken in file order
        order = _read_order(args.order, facets) if args.order else facets
    else:
        spec = _family(args.family or "X")
        x, n = _member(spec, args.n)
        order = singleton_shelling_order(x, seed=args.seed)
    report = is_shelling(x, order)
    out: dict[str, Any] = {"n": x.n, "is_shelling": report.ok, "facets": len(order)}
    if report.ok:
        facets_by_dim = homology_facets(x, order)
        out["homology_facets_by_dim"] = {q: sorted(_face_str(f) for f in fs)
                                         for q, fs in sorted(facets_by_dim.items())}
    else:
        out["witness"] = {"position": report.position, "reason": report.reason,
                          "facet": _face_str(order[report.position]),
                          "intersection": _face_str(report.witness or ())}
    return out


def cmd_stirling(args) -> dict:
    if args.assoc is not None:
        value = assoc_stirling2(args.n, args.k, args.assoc)
    else:
        value = stirling2(args.n, args.k)
    return {"n": args.n, "k": args.k, "r": args.assoc or 1, "value": value}


def _read_matrix(path: str) -> IntegerMatrix:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].split()
            if body:
                rows.append([int(v) for v in body])
    if len({len(r) for r in rows}) > 1:
        raise PreconditionError("ragged_matrix", "rows have different lengths")
    return IntegerMatrix.from_dense(rows, len(rows[0]) if rows else 0)


def cmd_snf(args) -> dict:
    m = _read_matrix(args.matrix)
    res = smith_normal_form(m)
    return {"shape": list(m.shape), "invariant_factors": list(res.invariant_factors),
            "rank": res.rank, "torsion": list(res.torsion)}


def cmd_fs_map(args) -> dict:
    try:
        f = Surjection.parse(args.f)
    except ValueError as e:
        raise PreconditionError("bad_surjection", str(e)) from None
    spec = _family(args.family)
    hm = induced_map_on_homology(f, spec, args.q)
    return {"family": str(spec), "q": args.q, "a": f.a, "b": f.b, "f": list(f.images),
            "source_rank": hm.source.rank, "target_rank": hm.target.rank,
            "matrix": hm.matrix.to_dense()}


def cmd_torsion_scan(args) -> dict:
    spec = _family(args.family)
    scan = torsion_scan(spec, args.q, args.n_range, threads=_threads(args))
    return {"family": str(spec), **scan.as_json()}


def cmd_family_audit(args) -> dict:
    spec = _family(args.family)
    rep = is_fibre_closed(spec, args.n_max, exhaustive_max=args.exhaustive_max)
    out: dict[str, Any] = {"family": str(spec), "ok": rep.ok, "n_max": rep.n_max,
                           "exhaustive_max": rep.exhaustive_max, "checks": rep.checks}
    if rep.witness:
        images, face, a, b = rep.witness
        out["witness"] = {"f": list(images), "face": _face_str(face), "a": a, "b": b}
    return out


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json",
                        help="output format (default: json)")
    common.add_argument("--threads", type=int, default=0,
                        help="worker processes for independent degrees (default: all cores)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized tie-breaks")

    p = argparse.ArgumentParser(prog="hypermatch", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", parents=[common], help="integral reduced homology")
    h.add_argument("--family", required=True)
    h.add_argument("--n", type=int)
    h.add_argument("--q", type=int)
    h.add_argument("--method", choices=("snf", "shelling", "both"), default="snf")
    h.set_defaults(func=cmd_homology)

    b = sub.add_parser("betti", parents=[common], help="Betti numbers across n, optionally fitted")
    b.add_argument("--family", required=True)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--n-range", type=_n_range, required=True, help="e.g. 2..12")
    b.add_argument("--fit", action="store_true", help="fit an exponential polynomial")
    b.add_argument("--max-base", type=int, default=4)
    b.add_argument("--max-degree", type=int, default=2)
    b.add_argument("--min-held-out", type=int, default=2)
    b.add_argument("--method", choices=("auto", "snf", "formula"), default="auto",
                   help="auto: exact SNF up to X(8), then the closed form for the X family")
    b.set_defaults(func=cmd_betti)

    c = sub.add_parser("character", parents=[common], help="character of a homology group")
    c.add_argument("--family", required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--decompose", action="store_true", help="also list irreducible multiplicities")
    c.add_argument("--method", choices=("shelling", "rational"), default="shelling")
    c.set_defaults(func=cmd_character)

    s = sub.add_parser("shelling", help="shelling tools")
    ssub = s.add_subparsers(dest="action", required=True)
    sv = ssub.add_parser("verify", parents=[common], help="check a shelling order")
    sv.add_argument("--facets", help="facet file: one facet per line, '|' between blocks")
    sv.add_argument("--order", help="order file: 0-based facet indices, one per line")
    sv.add_argument("--family", help="family instead of a facet file (default X)")
    sv.add_argument("--n", type=int)
    sv.set_defaults(func=cmd_shelling_verify)

    st = sub.add_parser("stirling", parents=[common], help="Stirling numbers of the second kind")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--k", type=int, required=True)
    st.add_argument("--assoc", type=int, metavar="R", help="blocks of size at least R")
    st.set_defaults(func=cmd_stirling)

    sn = sub.add_parser("snf", parents=[common], help="Smith normal form of an integer matrix")
    sn.add_argument("--matrix", required=True, help="whitespace-separated integer rows")
    sn.set_defaults(func=cmd_snf)

    fs = sub.add_parser("fs-map", parents=[common], help="map on homology induced by a surjection")
    fs.add_argument("--f", required=True, help='images listed positionally, e.g. "1 2 3 3"')
    fs.add_argument("--family", required=True)
    fs.add_argument("--q", type=int, required=True)
    fs.set_defaults(func=cmd_fs_map)

    ts = sub.add_parser("torsion-scan", parents=[common], help="torsion of H_q across n")
    ts.add_argument("--family", required=True)
    ts.add_argument("--q", type=int, required=True)
    ts.add_argument("--n-range", type=_n_range, required=True)
    ts.set_defaults(func=cmd_torsion_scan)

    fa = sub.add_parser("family-audit", parents=[common], help="fibre-closedness audit")
    fa.add_argument("--family", required=True)
    fa.add_argument("--n-max", type=int, default=6)
    fa.add_argument("--exhaustive-max", type=int, default=6)
    fa.set_defaults(func=cmd_family_audit)
    return p


_PRECONDITION_ERRORS = (NotXn, NotAShelling, NotAPermutation, ImageNotAFace, NoFit,
                        NotACharacter, ActionNotPreserved, UnknownFamily, FileNotFoundError)


def _snake(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


def run(argv: Sequence[str] | None = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CommandResult("", {}, None, int(e.code or 0))
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    params = {k: (f"{v.start}..{v.stop - 1}" if isinstance(v, range) else v)
              for k, v in vars(args).items() if k not in ("func", "command", "action", "threads")}
    try:
        payload = args.func(args)
        return CommandResult(command, params, _jsonable(payload), 0)
    except PreconditionError as e:
        err = {"type": e.kind, "message": str(e), "witness": _jsonable(e.witness)}
    except _PRECONDITION_ERRORS as e:
        err = {"type": _snake(type(e).__name__), "message": str(e)}
        report = getattr(e, "report", None)
        if report is not None:
            err["witness"] = {"position": report.position, "reason": report.reason}
        elif getattr(e, "witness", None) is not None:
            err["witness"] = repr(e.witness)
    except ValueError as e:
        err = {"type": _snake(type(e).__name__), "message": str(e)}
    return CommandResult(command, params, {"error": err}, 3)


def _table(payload: Any, indent: str = "") -> list[str]:
    lines = []
    if isinstance(payload, dict):
        width = max((len(str(k)) for k in payload), default=0)
        for k in sorted(payload, key=str):
            v = payload[k]
            if isinstance(v, (dict, list)) and v and any(isinstance(i, (dict, list))
                                                          for i in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{indent}{str(k):<{width}}")
                lines.extend(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{str(k):<{width}}  {_cell(v)}")
    elif isinstance(payload, list) and payload and all(isinstance(r, dict) for r in payload):
        cols = sorted({k for r in payload for k in r})
        cells = [[_cell(r.get(c, "")) for c in cols] for r in payload]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append(indent + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in cells:
            lines.append(indent + "  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    elif isinstance(payload, list):
        lines.extend(indent + _cell(r) for r in payload)
    else:
        lines.append(indent + _cell(payload))
    return lines


def _cell(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render(result: CommandResult, fmt: str = "json") -> str:
    if fmt == "table":
        return "\n".join(_table(result.payload))
    return json.dumps(result.payload, sort_keys=True)


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    if result.payload is not None:
        print(render(result, result.parameters.get("format", "json")))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
