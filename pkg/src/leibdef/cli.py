"""Command-line front end.

``leibdef <command> <algebra-file|catalog-name> [options]``

Exit codes: 0 success, 1 a mathematical failure was found and reported
(the input is not a Leibniz algebra), 2 usage, parse or scale errors.
JSON reports are canonical (sorted keys, monomials in graded-lex order) and
contain no timing unless ``--timing`` is given, so identical runs produce
identical bytes.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Callable

from . import __version__
from .deformation import obstruction, universal_infinitesimal
from .fileformat import (
    ParseError,
    algebra_digest,
    dumps,
    encode_base,
    encode_cochain,
    encode_deformation,
    encode_vector,
    load_algebra,
    rational_str,
)
from .leibniz import LeibnizAlgebra, Verdict, adjoint, cohomology, verify_leibniz
from .local_algebra import (
    ORACLE_MAX_DEGREE,
    ORACLE_MAX_DIM,
    format_polynomial,
    harrison_cohomology_bruteforce,
    harrison_h2_presented,
    sort_key,
    tangent_space_dim,
    universal_extension,
)
from .versal import verify_versal, versal_truncation

COMMANDS = ("check", "cohomology", "infinitesimal", "obstruct", "versal", "harrison-oracle")
MAX_ORDER = 8
MAX_DEGREE = 4


class UsageError(Exception):
    pass


class Text:
    """Accumulates the human-readable report."""

    def __init__(self):
        self.lines: list[str] = []

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _violations(alg: LeibnizAlgebra, verdict: Verdict) -> list[dict]:
    return [
        {
            "triple": [alg.labels[i] for i in v.where],
            "lhs": encode_vector(alg, v.lhs),
            "rhs": encode_vector(alg, v.rhs),
        }
        for v in verdict.violations
    ]


def _vector_text(alg: LeibnizAlgebra, vec) -> str:
    terms = [f"{rational_str(c)}*{alg.labels[k]}" for k, c in enumerate(vec) if c != 0]
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _violation_text(alg: LeibnizAlgebra, verdict: Verdict, out: Text) -> None:
    for v in verdict.violations:
        triple = ",".join(alg.labels[i] for i in v.where)
        out.add(f"  at ({triple}): [x,[y,z]] = {_vector_text(alg, v.lhs)}, "
                f"[[x,y],z] - [[x,z],y] = {_vector_text(alg, v.rhs)}")


def _cochain_text(alg: LeibnizAlgebra, enc: dict, indent: str = "    ") -> list[str]:
    if not enc:
        return [indent + "0"]
    lines = []
    for key, value in enc.items():
        terms = " + ".join(f"{c}*{lab}" for lab, c in value.items()).replace("+ -", "- ")
        lines.append(f"{indent}({key}) -> {terms}")
    return lines


# ---------------------------------------------------------------------------
# commands; each returns (result dict, exit code) and fills the text report
# ---------------------------------------------------------------------------

def cmd_check(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    verdict = verify_leibniz(alg)
    c = alg.constants
    n = alg.dim
    antisym = all(c[i, j, k] == -c[j, i, k] for i in range(n) for j in range(n) for k in range(n))
    result = {
        "dim": n,
        "leibniz": {"ok": verdict.ok, "violations": _violations(alg, verdict)},
        "lie": verdict.ok and antisym,
        "abelian": alg.is_abelian(),
    }
    out.add(f"Leibniz identity: {'ok' if verdict.ok else 'FAILED'}")
    _violation_text(alg, verdict, out)
    if verdict.ok:
        out.add(f"Lie algebra: {'yes' if result['lie'] else 'no'}")
    return result, 0 if verdict.ok else 1


def cmd_cohomology(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    q = args.degree
    data = cohomology(alg, adjoint(alg), q)
    result = {
        "degree": q,
        "coefficients": "adjoint",
        "betti": data.betti,
        "cocycles_dim": data.cocycle_space.dim,
        "coboundaries_dim": data.coboundary_space.dim,
        "representatives": [encode_cochain(alg, r) for r in data.representatives],
    }
    out.add(f"dim HL^{q}(L; L) = {data.betti}")
    out.add(f"  cocycles {data.cocycle_space.dim}, coboundaries {data.coboundary_space.dim}")
    for h, rep in enumerate(result["representatives"], start=1):
        out.add(f"  representative {h}:")
        out.lines.extend(_cochain_text(alg, rep))
    return result, 0


def cmd_infinitesimal(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    eta = universal_infinitesimal(alg)
    result = {"betti": eta.base.num_vars, "deformation": encode_deformation(eta)}
    out.add(f"base: {eta.base}")
    for line in eta.format_brackets():
        out.add(f"  {line}")
    return result, 0


def cmd_obstruct(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    k = args.order
    eta = versal_truncation(alg, k).bracket
    ext = universal_extension(eta.base)
    obs = obstruction(eta, ext)
    names = eta.base.names
    directions = []
    for r, poly in enumerate(ext.kernel_basis):
        directions.append({
            "kernel": format_polynomial(poly, names),
            "class": [[h + 1, rational_str(c)] for h, c in enumerate(obs.coordinates[r]) if c != 0],
            "phi_bar": encode_cochain(alg, obs.phi_bar[r]),
            "correction": encode_cochain(alg, obs.correction[r]),
        })
    nonzero = [d for d in directions if d["class"]]
    result = {
        "order": k,
        "base": encode_base(eta.base),
        "extension": encode_base(ext.total),
        "hl3_dim": cohomology(alg, adjoint(alg), 3).betti,
        "directions": directions,
        "vanishes": obs.vanishes,
    }
    out.add(f"base C_{k}: {eta.base}")
    out.add(f"extension: {ext.total}  (kernel dim {ext.dim})")
    out.add(f"HL^3 dim: {result['hl3_dim']}")
    out.add(f"obstruction: {'vanishes' if obs.vanishes else f'nonzero in {len(nonzero)} of {ext.dim} directions'}")
    for d in nonzero:
        coords = ", ".join(f"h{h}: {c}" for h, c in d["class"])
        out.add(f"  {d['kernel']}: {coords}")
    return result, 0


def cmd_versal(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    res = versal_truncation(alg, args.order)
    verdict = verify_versal(res)
    names = res.base.names
    history = [
        {
            "order": s.order,
            "kernel": [format_polynomial(p, names) for p in s.kernel_basis],
            "new_relations": [format_polynomial(p, names) for p in s.new_relations],
            "corrections": [
                {"monomial": format_polynomial({m: 1}, names), "cochain": encode_cochain(alg, c)}
                for m, c in sorted(s.corrections.items(), key=lambda mc: sort_key(mc[0]))
            ],
            "stabilized": s.stabilized,
        }
        for s in res.history
    ]
    result = {
        "order": res.order,
        "base": encode_base(res.base),
        "relations": res.relation_strings(),
        "relation_degrees": res.relation_degrees(),
        "bracket": encode_deformation(res.bracket),
        "stabilized": res.stabilized,
        "stabilized_at": res.stabilized_at,
        "history": history,
        "verification": {"ok": verdict.ok, "failures": list(verdict.failures)},
    }
    out.add(f"versal base to order {res.order}: {res.base}")
    out.add(f"  relations: {', '.join(result['relations']) or 'none'}")
    if res.stabilized:
        out.add(f"  stabilized at order {res.stabilized_at}")
    out.add("bracket:")
    for line in res.bracket.format_brackets():
        out.add(f"  {line}")
    out.add(f"verification: {'ok' if verdict.ok else '; '.join(verdict.failures)}")
    return result, 0 if verdict.ok else 1


def cmd_harrison_oracle(alg: LeibnizAlgebra, args, out: Text) -> tuple[dict, int]:
    k = args.order
    base = versal_truncation(alg, k).base
    q = args.degree
    if base.dim > ORACLE_MAX_DIM or q > ORACLE_MAX_DEGREE:
        raise UsageError(
            f"versal base C_{k} = {base} has dim {base.dim}; the brute-force oracle is limited "
            f"to dim <= {ORACLE_MAX_DIM} and degree <= {ORACLE_MAX_DEGREE}"
        )
    brute = {str(d): harrison_cohomology_bruteforce(base, d) for d in range(1, q + 1)}
    presented = harrison_h2_presented(base)[0] if base.dim > 1 else 0
    tangent = tangent_space_dim(base)
    agree = brute["1"] == tangent and (q < 2 or brute["2"] == presented)
    result = {
        "order": k,
        "base": encode_base(base),
        "degree": q,
        "bruteforce": brute,
        "presented_h2": presented,
        "tangent_space_dim": tangent,
        "agree": agree,
    }
    out.add(f"base C_{k}: {base}")
    for d, v in brute.items():
        out.add(f"  brute-force dim H^{d}_Harr = {v}")
    out.add(f"  tangent space dim = {tangent}, presented H^2 dim = {presented}")
    out.add(f"agreement: {'ok' if agree else 'MISMATCH'}")
    return result, 0 if agree else 1


HANDLERS: dict[str, Callable] = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "infinitesimal": cmd_infinitesimal,
    "obstruct": cmd_obstruct,
    "versal": cmd_versal,
    "harrison-oracle": cmd_harrison_oracle,
}

DEFAULT_ORDER = {"obstruct": 1, "versal": 2, "harrison-oracle": 1}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leibdef", description="Exact cohomology and versal deformations of Leibniz algebras.")
    p.add_argument("--version", action="version", version=f"leibdef {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("algebra", help="algebra file (JSON) or catalog name")
    p.add_argument("--degree", type=int, default=None, help="cohomology degree (default 2)")
    p.add_argument("--order", type=int, default=None, help="truncation order")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    return p


def _options(args) -> dict:
    opts = {}
    if args.command in ("cohomology", "harrison-oracle"):
        opts["degree"] = args.degree
    if args.command in DEFAULT_ORDER:
        opts["order"] = args.order
    return opts


def _validate(args) -> None:
    if args.degree is None:
        args.degree = 2
    if args.order is None:
        args.order = DEFAULT_ORDER.get(args.command, 1)
    if args.command == "cohomology" and not 0 <= args.degree <= MAX_DEGREE:
        raise UsageError(f"--degree must be in 0..{MAX_DEGREE}")
    if args.command == "harrison-oracle" and not 1 <= args.degree <= ORACLE_MAX_DEGREE:
        raise UsageError(f"--degree must be in 1..{ORACLE_MAX_DEGREE}")
    if args.command in DEFAULT_ORDER and not 1 <= args.order <= MAX_ORDER:
        raise UsageError(f"--order must be in 1..{MAX_ORDER}")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report: dict = {"command": args.command, "input": {"source": args.algebra}}
    out = Text()
    try:
        _validate(args)
        report["options"] = _options(args)
        alg = load_algebra(args.algebra)
        report["input"].update({"name": alg.name, "dim": alg.dim, "digest": algebra_digest(alg)})
        start = time.perf_counter()
        if args.command != "check":
            verdict = verify_leibniz(alg)
            if not verdict.ok:
                report["status"] = "not-leibniz"
                report["violations"] = _violations(alg, verdict)
                out.add("Leibniz identity: FAILED")
                _violation_text(alg, verdict, out)
                code = 1
            else:
                report["result"], code = HANDLERS[args.command](alg, args, out)
                report["status"] = "ok" if code == 0 else "failed"
        else:
            report["result"], code = cmd_check(alg, args, out)
            report["status"] = "ok" if code == 0 else "failed"
        if args.timing:
            report["timing_seconds"] = round(time.perf_counter() - start, 6)
            out.add(f"time: {report['timing_seconds']:.3f} s")
    except (UsageError, ParseError, OSError) as exc:
        report["status"] = "error"
        report["error"] = str(exc)
        out = Text()
        out.add(f"error: {exc}")
        code = 2
    if args.format == "json":
        _emit(dumps(report), args.out)
    else:
        _emit(out.render(), args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
