"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a structural validation
failure (the input is not a matroid or semilattice) or a failed check.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import errors
from .asl import check_asl, inverted_flats
from .decomposition import verify_flat_grading, verify_hilbert_recursion, verify_mobius_embedding
from .degree import (
    CheckReport,
    degree,
    random_polynomial,
    verify_annihilator,
    verify_projection_formula,
    verify_x_restriction,
)
from .io import builtin_matroid, matroid_from_json, poset_from_json
from .matroid import MatroidLattice
from .pairing import pairing_matrix, verify_theorems
from .polynomial import format_polynomial, parse_polynomial
from .ring import AUGMENTED, REDUCED, RingContext, hilbert_series

VALIDATION_ERRORS = (
    errors.NotALattice,
    errors.NotRanked,
    errors.NotAtomic,
    errors.NotSubmodular,
    errors.NotASemilattice,
    errors.CycleDetected,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["aug", "red"], default=None,
                        help="augmented or reduced Chow ring (verify runs both when omitted)")
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--degree", type=int, default=None, help="degree K for pairing and asl-check")
    source = common.add_mutually_exclusive_group()
    source.add_argument("--input", metavar="PATH", help="matroid (or poset) JSON document")
    source.add_argument("--builtin", nargs="+", metavar="ARG",
                        help="builtin family: 'boolean N', 'uniform R N' or 'graph K4'")

    parser = _Parser(prog="chowring", description="Chow rings of matroids in the simplicial presentation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("describe", parents=[common], help="list flats with their indices")
    sub.add_parser("hilbert", parents=[common], help="Hilbert function")
    p = sub.add_parser("straighten", parents=[common], help="normal form of a polynomial")
    p.add_argument("expr")
    p = sub.add_parser("degree", parents=[common], help="degree map of a polynomial")
    p.add_argument("expr")
    sub.add_parser("pairing", parents=[common], help="pairing matrix in degree K")
    sub.add_parser("verify", parents=[common], help="run the verification suite")
    sub.add_parser("asl-check", parents=[common], help="straightening-law checks for B(L)")
    return parser


def _read_document(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_matroid(args) -> MatroidLattice:
    if args.input:
        return matroid_from_json(_read_document(args.input))
    if args.builtin:
        name, *params = args.builtin
        return builtin_matroid(name, params)
    raise UsageError("one of --input or --builtin is required")


def _resolver(m: MatroidLattice):
    def resolve(name: str, position: int) -> int:
        if name == "E":
            return m.top
        if not name.isdigit():
            raise errors.UnknownFlat(f"unknown flat h[{name}] at position {position}")
        f = int(name)
        if not 0 <= f < m.n or f == m.bottom:
            raise errors.UnknownFlat(f"unknown flat h[{name}] at position {position}")
        return f

    return resolve


def _mode(args, default=AUGMENTED) -> str:
    if args.ring is None:
        return default
    return AUGMENTED if args.ring == "aug" else REDUCED


def _emit(args, text: str, payload: dict):
    if args.output == "json":
        print(json.dumps(payload))
    else:
        print(text)


def cmd_describe(args) -> int:
    m = load_matroid(args)
    rows = [{"index": x, "rank": m.rank[x], "elements": sorted(m.labels[x]) if m.labels else []} for x in range(m.n)]
    lines = [f"matroid: {m.n} flats, rank {m.r}", "index  rank  flat"]
    lines += [f"{row['index']:>5}  {row['rank']:>4}  {m.label(row['index'])}" for row in rows]
    _emit(args, "\n".join(lines), {"rank": m.r, "flats": rows})
    return 0


def cmd_hilbert(args) -> int:
    ctx = RingContext(load_matroid(args), _mode(args))
    coeffs = list(hilbert_series(ctx))
    _emit(args, json.dumps(coeffs), {"coefficients": coeffs})
    return 0


def cmd_straighten(args) -> int:
    m = load_matroid(args)
    ctx = RingContext(m, _mode(args))
    nf = format_polynomial(ctx.straighten(parse_polynomial(args.expr, _resolver(m))))
    _emit(args, nf, {"normal_form": nf})
    return 0


def cmd_degree(args) -> int:
    m = load_matroid(args)
    ctx = RingContext(m, _mode(args))
    p = parse_polynomial(args.expr, _resolver(m))
    value = degree(ctx, p)
    _emit(args, str(value), {"degree": value})
    return 0


def _format_pairing(report) -> str:
    lines = [f"degree {report.degree_k}: {len(report.row_monomials)} standard monomials"]
    lines += [f"  [{i}] {m}" for i, m in enumerate(report.row_monomials)]
    lines.append("matrix deg(m_i * d(m_j)):")
    lines += ["  " + " ".join(f"{v:>2}" for v in row) for row in report.matrix]
    lines.append(f"lower triangular unit: {str(report.is_lower_triangular_unit).lower()}")
    det = "n/a" if report.full_pairing_det is None else str(report.full_pairing_det)
    lines.append(f"full pairing determinant: {det}")
    return "\n".join(lines)


def cmd_pairing(args) -> int:
    if args.degree is None:
        raise UsageError("pairing needs --degree K")
    ctx = RingContext(load_matroid(args), _mode(args))
    report = pairing_matrix(ctx, args.degree)
    _emit(args, _format_pairing(report), report.to_json())
    return 0 if report.is_lower_triangular_unit and report.full_pairing_det in (1, -1) else 2


def _mode_checks(m: MatroidLattice, mode: str, seed: int) -> list[CheckReport]:
    ctx = RingContext(m, mode)
    checks = list(verify_theorems(ctx).checks)
    checks.append(verify_flat_grading(ctx, seed=seed))
    checks.append(verify_hilbert_recursion(ctx))
    if mode == AUGMENTED:
        checks.append(verify_mobius_embedding(ctx))
    rng = random.Random(seed)
    ann = CheckReport("annihilator containment")
    proj = CheckReport("projection formula")
    restr = CheckReport("x_H restriction")
    for g in range(m.n):
        if g == m.top or (mode == REDUCED and g == m.bottom):
            continue
        sub = verify_annihilator(ctx, g)
        ann.checked += sub.checked
        ann.violations += sub.violations
        sub = verify_x_restriction(ctx, g)
        restr.checked += sub.checked
        restr.violations += sub.violations
        for _ in range(10):
            y = random_polynomial(ctx, ctx.top_degree - 1, rng)
            proj.checked += 1
            if not verify_projection_formula(ctx, g, y):
                proj.violations.append((g, str(y)))
    checks += [ann, proj, restr]
    return checks


def cmd_verify(args) -> int:
    m = load_matroid(args)
    modes = [_mode(args)] if args.ring else [AUGMENTED, REDUCED]
    results = []
    for mode in modes:
        for check in _mode_checks(m, mode, args.seed):
            results.append((mode, check))
    if m.n - 1 <= 50 and m.n > 1:
        asl = check_asl(inverted_flats(m), d_max=3)
        check = CheckReport("straightening law on inverted flats", checked=3)
        if not asl.ok:
            check.violations.append({"axiom1": asl.axiom1_ok, "axiom2": asl.axiom2_ok, "nzd": asl.nzd_ok})
        results.append(("semilattice", check))
    passed = all(c.ok for _, c in results)
    lines = [
        f"{'PASS' if c.ok else 'FAIL'}  [{mode}] {c.name} ({c.checked} checked)"
        + ("" if c.ok else f": {c.violations[:3]}")
        for mode, c in results
    ]
    lines.append("all checks passed" if passed else "verification FAILED")
    payload = {
        "passed": passed,
        "checks": [
            {"mode": mode, "name": c.name, "checked": c.checked, "ok": c.ok,
             "violations": [str(v) for v in c.violations[:10]]}
            for mode, c in results
        ],
    }
    _emit(args, "\n".join(lines), payload)
    return 0 if passed else 2


def cmd_asl_check(args) -> int:
    if args.input:
        text = _read_document(args.input)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise errors.ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
        if isinstance(data, dict) and "format" in data:
            lattice = inverted_flats(matroid_from_json(data))
        else:
            lattice = poset_from_json(data)
    else:
        lattice = inverted_flats(load_matroid(args))
    d_max = 4 if args.degree is None else args.degree
    report = check_asl(lattice, d_max=d_max)
    counts = [list(row[:3]) for row in report.details["counts"]]
    lines = [
        f"axiom 1 (chain monomials form a basis through degree {d_max}): {'pass' if report.axiom1_ok else 'FAIL'}",
        f"axiom 2 (straightening through a common lower bound): {'pass' if report.axiom2_ok else 'FAIL'}",
        f"h_bottom is a non-zero-divisor below degree {d_max}: {'pass' if report.nzd_ok else 'FAIL'}",
        "counts per degree (chain monomials, order complex, oracle): " + json.dumps(counts),
    ]
    payload = {
        "axiom1": report.axiom1_ok,
        "axiom2": report.axiom2_ok,
        "nonzerodivisor": report.nzd_ok,
        "counts": counts,
    }
    _emit(args, "\n".join(lines), payload)
    return 0 if report.ok else 2


COMMANDS = {
    "describe": cmd_describe,
    "hilbert": cmd_hilbert,
    "straighten": cmd_straighten,
    "degree": cmd_degree,
    "pairing": cmd_pairing,
    "verify": cmd_verify,
    "asl-check": cmd_asl_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except VALIDATION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, errors.ChowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
