"""Command-line interface.  Reports are JSON with sorted keys; exit codes 0/1/2."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .groebner import Bounds, buchberger, normal_monomials
from .koszul import bar_construction, check_yoneda_dims, is_n_koszul
from .linalg import field_from_name
from .na2n import na2n_expected_gb, na2n_presentation
from .nhomog import dual_presentation, presentation_compare
from .operad_algebra import algebra_groebner, algebra_normal_basis, algebra_order
from .ordering import PathLexOrder
from .textio import ParsedFile, ParseError, parse_presentation, serialize
from .trees import element_to_text, to_text


class UsageError(Exception):
    pass


def _load(args) -> tuple[ParsedFile, str]:
    text = Path(args.file).read_text() if args.file != "-" else sys.stdin.read()
    fld = field_from_name(args.field) if args.field else None
    digest = hashlib.sha256(f"{args.field or ''}\n{text}".encode()).hexdigest()
    return parse_presentation(text, fld), digest


def _bound(args, parsed: ParsedFile | None, key: str, required: bool = True) -> int | None:
    v = getattr(args, key.replace("-", "_"), None)
    if v is None and parsed is not None:
        v = parsed.bounds.get(key)
    if v is None and required:
        raise UsageError(f"--{key} is required (no default bounds)")
    return v


def _order(parsed: ParsedFile, gens):
    if parsed.order:
        return PathLexOrder([gens[n] for n in parsed.order])
    return PathLexOrder.default(gens)


def _need(obj, what: str):
    if obj is None:
        raise UsageError(f"input has no {what} section")
    return obj


def cmd_gb(args):
    parsed, digest = _load(args)
    op = _need(parsed.operad, "[operad]")
    bounds = Bounds(_bound(args, parsed, "max-arity"), _bound(args, parsed, "max-weight", False))
    o = _order(parsed, op.gens)
    gb = buchberger(op.relations, o, bounds, op.field)
    body = {
        "elements": [element_to_text(g.element) for g in gb],
        "leading_terms": [to_text(g.lt) for g in gb],
        "size": len(gb),
        "order": o.names(),
    }
    return digest, bounds.as_dict(), body, True


def cmd_normal_forms(args):
    parsed, digest = _load(args)
    op = _need(parsed.operad, "[operad]")
    max_arity = _bound(args, parsed, "max-arity")
    max_weight = _bound(args, parsed, "max-weight")
    bounds = Bounds(max_arity, max_weight)
    gb = buchberger(op.relations, _order(parsed, op.gens), bounds, op.field)
    counts, listing = {}, {}
    for n in range(1, max_arity + 1):
        trees = normal_monomials(gb, n, max_weight, op.gens)
        counts[str(n)] = len(trees)
        if args.list:
            listing[str(n)] = [to_text(t) for t in trees]
    body = {"counts_by_arity": counts}
    if args.list:
        body["monomials"] = listing
    return digest, bounds.as_dict(), body, True


def _algebra(parsed):
    alg = _need(parsed.algebra, "[constants]/[algebra-relations]")
    return alg, algebra_order(alg, parsed.order)


def cmd_algebra_gb(args):
    parsed, digest = _load(args)
    alg, o = _algebra(parsed)
    w = _bound(args, parsed, "max-weight")
    gb = algebra_groebner(alg, o, Bounds(max_size=w))
    body = {"elements": [element_to_text(g.element) for g in gb], "size": len(gb),
            "order": o.names()}
    return digest, {"max_weight": w, "max_size": w}, body, True


def cmd_algebra_basis(args):
    parsed, digest = _load(args)
    alg, o = _algebra(parsed)
    w = _bound(args, parsed, "max-weight")
    gb = algebra_groebner(alg, o, Bounds(max_size=w))
    basis = algebra_normal_basis(alg, gb, w)
    body = {"dims_by_weight": {str(m): len(ts) for m, ts in basis.items()}}
    if args.list:
        body["basis"] = {str(m): [to_text(t) for t in ts] for m, ts in basis.items()}
    return digest, {"max_weight": w}, body, True


def _nhomog(parsed):
    return _need(parsed.nhomog, "[nhomog]")


def cmd_dual(args):
    parsed, digest = _load(args)
    a = _nhomog(parsed)
    w = _bound(args, parsed, "max-weight", False)
    d = dual_presentation(a)
    body = {"dual": serialize(ParsedFile(field=a.field, nhomog=d)), "dim_r": a.dim_r,
            "dim_r_perp": d.dim_r}
    if w is not None:
        body["dims_a"] = a.quotient().dims(w)
        body["dims_dual"] = d.quotient().dims(w)
    return digest, {"max_weight": w}, body, True


def cmd_nkoszul(args):
    parsed, digest = _load(args)
    a = _nhomog(parsed)
    w = _bound(args, parsed, "max-weight")
    v = is_n_koszul(a, w)
    body = {"verdict": v.label,
            "witness": None if v.witness is None else
            {"weight": v.witness[0], "degree": v.witness[1], "homology_dim": v.witness[2]},
            "homology": {str(m): {str(h): d for h, d in hm.items()} for m, hm in v.homology.items()}}
    ok = v.koszul
    if not args.skip_yoneda:
        y = check_yoneda_dims(a, w)
        body["yoneda_match"] = y.match
        body["yoneda_mismatch_weights"] = y.mismatches
    return digest, {"max_weight": w}, body, ok


def cmd_ext_dims(args):
    parsed, digest = _load(args)
    a = _nhomog(parsed)
    w = _bound(args, parsed, "max-weight")
    bar = bar_construction(a, w)
    body = {"ext_dims": {str(m): {str(s): d for s, d in e.items()} for m, e in bar.ext_dims.items()}}
    return digest, {"max_weight": w}, body, True


def cmd_na2n_verify(args):
    fld = field_from_name(args.field or "q")
    max_arity = _bound(args, None, "max-arity")
    p = na2n_presentation(args.n, fld)
    o = p.default_order()
    bounds = Bounds(max_arity)
    gb = buchberger(p.relations, o, bounds, fld)
    got = sorted((element_to_text(g.element) for g in gb))
    want = sorted(element_to_text(e) for e in na2n_expected_gb(args.n, bounds, fld, o))
    body = {"n": args.n, "size": len(got), "expected_size": len(want), "match": got == want,
            "only_computed": sorted(set(got) - set(want)), "only_expected": sorted(set(want) - set(got))}
    return f"na2n:{args.n}", bounds.as_dict(), body, got == want


def cmd_kd_present(args):
    parsed, digest = _load(args)
    a = _nhomog(parsed)
    w = _bound(args, parsed, "max-weight")
    r = presentation_compare(a, w)
    body = {"dims_operadic": {str(m): d for m, d in r.dims_operadic.items()},
            "dims_dual": {str(m): d for m, d in r.dims_dual.items()},
            "equal_by_weight": {str(m): e for m, e in r.equal_by_weight.items()},
            "bases_matched": r.bases_matched, "structure_equal": r.structure_equal,
            "witness": None if r.witness is None else repr(r.witness), "ok": r.ok}
    return digest, {"max_weight": w}, body, r.ok


COMMANDS = {
    "gb": (cmd_gb, "Gröbner basis of an operad presentation"),
    "normal-forms": (cmd_normal_forms, "normal monomial counts per arity"),
    "algebra-gb": (cmd_algebra_gb, "Gröbner basis of an algebra via extension of constants"),
    "algebra-basis": (cmd_algebra_basis, "normal basis of an algebra per weight"),
    "dual": (cmd_dual, "N-homogeneous dual A^∨"),
    "nkoszul": (cmd_nkoszul, "N-Koszulness verdict with the Ext cross-check"),
    "ext-dims": (cmd_ext_dims, "Ext dims from the bar construction"),
    "na2n-verify": (cmd_na2n_verify, "completion of NA_{2,N} against the expected basis"),
    "kd-present": (cmd_kd_present, "A^! against its NA_{2,N} presentation"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nkoszul", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        if name == "na2n-verify":
            p.add_argument("--n", type=int, required=True)
        else:
            p.add_argument("file", help="presentation file, or - for stdin")
        p.add_argument("--max-arity", type=int)
        p.add_argument("--max-weight", type=int)
        p.add_argument("--field", help="q, f2, f<p>")
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings")
        if name in ("normal-forms", "algebra-basis"):
            p.add_argument("--list", action="store_true", help="also list the monomials")
        if name == "nkoszul":
            p.add_argument("--skip-yoneda", action="store_true",
                           help="skip the bar-construction cross-check")
    return ap


def _pretty(report: dict) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and all(isinstance(x, str) for x in v):
            lines.append(f"{prefix}:")
            lines.extend(f"    {x}" for x in v)
        else:
            lines.append(f"{prefix}: {v}")
    walk("", report)
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    fn = COMMANDS[args.command][0]
    t0 = time.perf_counter()
    try:
        if args.field:
            field_from_name(args.field)
        digest, bounds, body, ok = fn(args)
    except (ParseError, UsageError, ValueError, OSError) as exc:
        print(f"nkoszul {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "input_sha256": digest, "bounds": bounds,
              "result": body, "verdict": ok}
    if args.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - t0, 3)}
    if args.pretty:
        print(_pretty(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
