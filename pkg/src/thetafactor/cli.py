"""Command line front end.

Exit codes: 0 success with positive verdicts, 1 negative verdict, 2 input error
(a JSON error object is written to stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import degeneration, local_model, mu_transform, semistability
from .errors import InvariantViolation, ParseError, ThetaFactorError
from .parabolic import SheafNumerics, balance_check, theta_exponents
from .spec_io import atomic_write, dumps, error_object, load_spec, rational, spec_from_dict
from .verlinde import oracle
from .verlinde.report import factorization_report, mu_to_label

SUBCOMMANDS = ("check", "certify", "components", "mu-enum", "dim", "factorize", "local-model")


@dataclass
class Outcome:
    payload: Any
    ok: bool = True
    table: list[dict] | None = None
    columns: Sequence[str] | None = None


def _mu_str(mu) -> str:
    return " ".join(map(str, mu))


def _read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc


def _need_input(args) -> None:
    if not args.input:
        raise ParseError(f"{args.command} needs --input")


# -- subcommands ------------------------------------------------------------


def cmd_check(args) -> Outcome:
    _need_input(args)
    spec = spec_from_dict(_read_json(args.input), enforce_balance=False)
    verdict = balance_check(spec)
    payload: dict[str, Any] = {
        "balanced": verdict.balanced,
        "lhs": verdict.lhs,
        "rhs": verdict.rhs,
        "ell1": spec.ell1,
        "ell2": spec.ell2,
    }
    if verdict.balanced:
        th = theta_exponents(spec)
        payload["theta_exponents"] = {
            "k": th.k,
            "ell1": th.ell1,
            "ell2": th.ell2,
            "points": [{"id": p.point_id, "alpha": p.alpha, "jumps": list(p.jumps)} for p in th.points],
        }
    return Outcome(payload, verdict.balanced, [payload], ("balanced", "lhs", "rhs", "ell1", "ell2"))


def _numerics(doc: Any, path: str) -> SheafNumerics:
    if not isinstance(doc, dict):
        raise InvariantViolation(path, "expected an object")
    try:
        return SheafNumerics(tuple(doc["rank_pair"]), int(doc["chi"]), doc.get("flag_dims", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation(path, f"bad sheaf numerics: {exc}") from exc


def cmd_certify(args) -> Outcome:
    """Subobject file: {"ambient": {...}?, "dim_q": int?, "subobjects": [{rank_pair, chi, flag_dims, dim_q_image?}]}."""
    _need_input(args)
    if not args.subobjects:
        raise ParseError("certify needs --subobjects")
    spec = load_spec(args.input)
    doc = _read_json(args.subobjects)
    if not isinstance(doc, dict) or not isinstance(doc.get("subobjects"), list):
        raise InvariantViolation("subobjects", "expected a list of subobject profiles")
    ambient = _numerics(doc["ambient"], "ambient") if "ambient" in doc else SheafNumerics.ambient(spec)
    subs = [_numerics(s, f"subobjects[{i}]") for i, s in enumerate(doc["subobjects"])]
    gps = "dim_q" in doc
    if gps:
        amb = semistability.GpsProfile(ambient, int(doc["dim_q"]), int(doc["dim_q"]))
        verdicts = [
            semistability.check_gps(
                semistability.GpsProfile(s, int(raw.get("dim_q_image", 0))), amb, spec
            )
            for s, raw in zip(subs, doc["subobjects"])
        ]
    else:
        verdicts = list(semistability.certify(subs, ambient, spec).verdicts)
    rows = [
        {"index": i, "verdict": v.verdict_class.value, "margin": rational(v.margin)}
        for i, v in enumerate(verdicts)
    ]
    worst = min(range(len(verdicts)), key=lambda i: (verdicts[i].margin, i)) if verdicts else None
    ok = all(v.semistable for v in verdicts)
    payload = {
        "mode": "gps" if gps else "parabolic",
        "semistable": ok,
        "worst_index": worst,
        "worst_margin": rational(verdicts[worst].margin) if verdicts else None,
        "results": rows,
    }
    return Outcome(payload, ok, rows, ("index", "verdict", "margin"))


def cmd_components(args) -> Outcome:
    _need_input(args)
    spec = load_spec(args.input)
    window = degeneration.chi_window(spec)
    pol = degeneration.generic_polarization(spec)
    rows = [{"chi1": a, "chi2": b} for a, b in window.pairs]
    payload = {
        "n1": rational(window.n1),
        "n2": rational(window.n2),
        "count": window.count,
        "pairs": [list(p) for p in window.pairs],
        "polarization": pol.kind.value,
        "w0_empty": pol.w0_empty,
    }
    return Outcome(payload, True, rows, ("chi1", "chi2"))


def cmd_mu_enum(args) -> Outcome:
    if args.input:
        spec = load_spec(args.input)
        rows = []
        for s in mu_transform.factorization_summands(spec):
            lam, charge = mu_to_label(s.label, spec.k)
            holds = bool(mu_transform.verify_node_balance(spec, s.label))
            rows.append({
                "mu": _mu_str(s.label.mu),
                "label": _mu_str(lam.weights),
                "charge": charge.total,
                "chi1": rational(s.chi1),
                "chi2": rational(s.chi2),
                "admissible": s.admissible,
                "identity_holds": holds,
            })
        ok = all(r["identity_holds"] for r in rows)
        payload = {"k": spec.k, "r": spec.r, "count": len(rows), "labels": rows}
        return Outcome(payload, ok, rows,
                       ("mu", "label", "charge", "chi1", "chi2", "admissible", "identity_holds"))
    if args.level is None or args.rank is None:
        raise ParseError("mu-enum needs --input or both --level and --rank")
    labels = mu_transform.enumerate_mu(args.level, args.rank)
    rows = [{"mu": _mu_str(l.mu), "charge": l.total} for l in labels]
    return Outcome({"k": args.level, "r": args.rank, "count": len(rows), "labels": rows},
                   True, rows, ("mu", "charge"))


def _parse_label(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise ParseError(f"bad label {text!r}") from exc


def cmd_dim(args) -> Outcome:
    if args.rank is None or args.level is None or args.genus is None:
        raise ParseError("dim needs --genus, --rank and --level")
    labels = tuple(_parse_label(t) for t in args.label or ())
    q = oracle.DimQuery.of(args.genus, labels, args.rank, args.level)
    payload: dict[str, Any] = {
        "genus": q.genus, "rank": q.rank, "level": q.level,
        "labels": [_mu_str(l) for l in q.labels],
    }
    ok = True
    if args.method in ("direct", "both"):
        payload["direct"] = oracle.dim_direct(q, args.tolerance)
    if args.method in ("recursive", "both"):
        payload["recursive"] = oracle.dim_recursive(q)
    if args.method == "both":
        ok = payload["direct"] == payload["recursive"]
        payload["agree"] = ok
    row = {k: v for k, v in payload.items() if k != "labels"} | {"labels": ";".join(payload["labels"])}
    return Outcome(payload, ok, [row], list(row))


FACTORIZE_COLUMNS = ("mu", "chi1", "chi2", "admissible", "dim_left", "dim_right", "product")


def cmd_factorize(args) -> Outcome:
    _need_input(args)
    spec = load_spec(args.input)
    method = "direct" if args.method == "direct" else "recursive"
    rep = factorization_report(spec, method=method, cross_check=args.method == "both",
                               workers=args.workers, tolerance=args.tolerance)
    rows = [
        {
            "mu": _mu_str(row.mu),
            "chi1": rational(row.chi1),
            "chi2": rational(row.chi2),
            "admissible": row.admissible,
            "dim_left": row.dim_left,
            "dim_right": row.dim_right,
            "product": row.product,
        }
        for row in rep.rows
    ]
    payload = {
        "lhs": rep.lhs,
        "lhs_cross_check": rep.lhs_direct,
        "rhs": rep.rhs,
        "equal": rep.equal,
        "summands": [r | {"label": _mu_str(s.label), "dual": _mu_str(s.dual)} for r, s in zip(rows, rep.rows)],
        "diagnostics": list(rep.diagnostics),
    }
    return Outcome(payload, rep.equal, rows, FACTORIZE_COLUMNS)


def cmd_local_model(args) -> Outcome:
    if args.size is None or args.field is None:
        raise ParseError("local-model needs --size and --field")
    counts = local_model.census(args.size, args.field, workers=args.workers)
    cumulative = local_model.cumulative(counts)
    total = sum(counts.values())
    rows = [{"stratum": a, "count": counts[a], "cumulative": cumulative[a]} for a in sorted(counts)]
    ok = max(counts) <= args.size and cumulative[-1] == total
    payload = {"n": args.size, "q": args.field, "total": total, "strata": rows,
               "rank_sum_bounded": max(counts) <= args.size}
    return Outcome(payload, ok, rows, ("stratum", "count", "cumulative"))


HANDLERS = {
    "check": cmd_check,
    "certify": cmd_certify,
    "components": cmd_components,
    "mu-enum": cmd_mu_enum,
    "dim": cmd_dim,
    "factorize": cmd_factorize,
    "local-model": cmd_local_model,
}


# -- plumbing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="spec JSON file")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write here (atomically) instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--tolerance", type=float, default=oracle.DEFAULT_TOLERANCE)

    parser = argparse.ArgumentParser(prog="thetafactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="balance condition and theta exponents")
    p = sub.add_parser("certify", parents=[common], help="semistability against given subobjects")
    p.add_argument("--subobjects", help="JSON file of subobject profiles")
    sub.add_parser("components", parents=[common], help="Euler characteristic windows")
    p = sub.add_parser("mu-enum", parents=[common], help="node labels")
    p.add_argument("--level", type=int)
    p.add_argument("--rank", type=int)
    p = sub.add_parser("dim", parents=[common], help="conformal block dimension")
    p.add_argument("--genus", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--label", action="append", help="comma separated weight, repeatable")
    p.add_argument("--method", choices=("direct", "recursive", "both"), default="both")
    p = sub.add_parser("factorize", parents=[common], help="factorization dimension check")
    p.add_argument("--method", choices=("direct", "recursive", "both"), default="both")
    p = sub.add_parser("local-model", parents=[common], help="finite field census of XY = YX = 0")
    p.add_argument("--size", type=int)
    p.add_argument("--field", type=int)
    return parser


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return dumps(outcome.payload)
    buf = io.StringIO()
    columns = list(outcome.columns or [])
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in outcome.table or []:
        writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        atomic_write(output, text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.tolerance <= 0:
            raise ParseError("--tolerance must be positive")
        if args.workers < 1:
            raise ParseError("--workers must be at least 1")
        outcome = HANDLERS[args.command](args)
    except (ThetaFactorError, ValueError, OSError) as exc:
        sys.stdout.write(dumps(error_object(exc)))
        return 2
    finally:
        oracle.persist_caches()
    _emit(render(outcome, args.format), args.output)
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
