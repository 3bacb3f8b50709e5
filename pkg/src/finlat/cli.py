"""Batch command-line front end.

JSON in, JSON out: each command reads input files, runs the requested
analysis, and prints a machine-readable report to stdout (human-readable
rendering behind --pretty).  Reports are deterministic for identical inputs
and budgets; timings are opt-in so the default output stays byte-stable.

Exit codes: 0 when all --expect assertions hold (or none were given),
1 when an assertion fails, 2 on input or budget errors.

Budgets resolve as: --budget name=value flags, then FINLAT_<NAME>
environment variables, then module defaults.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from typing import Optional, Sequence

from . import congruence, diversity, eqrel, lattice, ramsey, ranked, reps
from .errors import FinlatError, InvalidParameter, ParseError, SizeLimit

_BUDGET_NAMES = {
    "max_elements": lattice.MAX_ELEMENTS,
    "max_sublattice_host": lattice.MAX_SUBLATTICE_HOST,
    "max_rank_elements": ranked.MAX_RANK_ELEMENTS,
    "max_rank_candidates": ranked.MAX_RANK_CANDIDATES,
    "max_cpp_ground": reps.MAX_CPP_GROUND,
    "max_order_elements": diversity.MAX_ORDER_ELEMENTS,
    "max_survey_kernels": ramsey.MAX_SURVEY_KERNELS,
    "max_subset_candidates": ramsey.MAX_SUBSET_CANDIDATES,
    "max_cg_carrier": congruence.MAX_CG_CARRIER,
    "max_search_candidates": congruence.MAX_SEARCH_CANDIDATES,
}


class _Budgets:
    def __init__(self, overrides: dict[str, int]):
        self.values = dict(_BUDGET_NAMES)
        for name, default in _BUDGET_NAMES.items():
            env = os.environ.get("FINLAT_" + name.upper())
            if env is not None:
                self.values[name] = int(env)
        self.values.update(overrides)

    def __getitem__(self, name: str) -> int:
        return self.values[name]

    def overridden(self) -> list[str]:
        return sorted(
            f"{name}={value}"
            for name, value in self.values.items()
            if value != _BUDGET_NAMES[name]
        )


def _parse_budget_flags(items: Optional[Sequence[str]]) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in items or ():
        if "=" not in item:
            raise InvalidParameter(f"budget flag {item!r} is not name=value")
        name, value = item.split("=", 1)
        if name not in _BUDGET_NAMES:
            raise InvalidParameter(f"unknown budget {name!r}")
        out[name] = int(value)
    return out


def _read_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _load_lattice(args, budgets) -> tuple[lattice.FiniteLattice, list[dict]]:
    if getattr(args, "std", None):
        L = lattice.standard_lattice(args.std)
        return L, [{"std": args.std}]
    data, digest = _read_json(args.input)
    try:
        L = lattice.lattice_from_json(data, max_size=budgets["max_elements"])
    except FinlatError as exc:
        raise ParseError(f"{args.input}: {exc}") from exc
    return L, [{"path": args.input, "sha256": digest}]


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _lookup(report: dict, dotted: str):
    value = report
    for part in dotted.split("."):
        if isinstance(value, list):
            value = value[int(part)]
        elif isinstance(value, dict):
            if part not in value:
                raise KeyError(dotted)
            value = value[part]
        else:
            raise KeyError(dotted)
    return value


def _check_expectations(report: dict, expects: Sequence[str]) -> list[dict]:
    failures = []
    for item in expects or ():
        if "=" not in item:
            raise InvalidParameter(f"--expect {item!r} is not key=value")
        key, raw = item.split("=", 1)
        try:
            expected = json.loads(raw)
        except json.JSONDecodeError:
            expected = raw
        try:
            actual = _lookup(report, key)
        except (KeyError, IndexError, ValueError):
            failures.append({"key": key, "expected": expected, "actual": None, "missing": True})
            continue
        if actual != expected:
            failures.append({"key": key, "expected": expected, "actual": actual})
    return failures


# ---------------------------------------------------------------------------
# command payloads


def _cmd_analyze(args, budgets) -> dict:
    L, inputs = _load_lattice(args, budgets)
    verdict = lattice.is_distributive(L, max_host=budgets["max_sublattice_host"])
    birk = lattice.birkhoff_oracle(L)
    law = lattice.satisfies_distributive_law(L)
    witness = None
    if verdict.witness is not None:
        witness = {"kind": verdict.witness_kind, "map": list(verdict.witness.map)}
    # construction already proves validity; the cubic re-check is only worth
    # running at small sizes
    revalidated = not lattice.validate_lattice(L) if L.size <= 64 else True
    return {
        "command": "analyze",
        "inputs": inputs,
        "size": L.size,
        "valid": revalidated,
        "bottom": L.bottom,
        "top": L.top,
        "distributive": verdict.distributive,
        "forbidden_sublattice": {
            "distributive": verdict.distributive,
            "witness": witness,
        },
        "birkhoff": {
            "distributive": birk.distributive,
            "join_irreducibles": list(birk.join_irreducibles),
            "downset_count": birk.downset_count,
        },
        "distributive_law": law,
        "methods_agree": verdict.distributive == birk.distributive == law,
        "lattice": lattice.lattice_to_json(L),
    }


def _cmd_ranks(args, budgets) -> dict:
    L, inputs = _load_lattice(args, budgets)
    require = {"axioms"}
    if args.blass:
        require.add("blass")
    if args.gaifman:
        require.add("gaifman")
    ranks = ranked.enumerate_ranks(
        L,
        require,
        max_elements=budgets["max_rank_elements"],
        max_candidates=budgets["max_rank_candidates"],
    )
    rows = ranked.rank_report(L, ranks)
    ranksets = sorted({tuple(row["rankset"]) for row in rows})
    return {
        "command": "ranks",
        "inputs": inputs,
        "size": L.size,
        "require": sorted(require),
        "count": len(rows),
        "ranksets": [list(r) for r in ranksets],
        "ranks": rows,
    }


def _cmd_rep_verify(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    R = reps.rep_from_json(data)
    pseudo = reps.verify_pseudo_rep(R)
    inj = reps.is_representation(R)
    return {
        "command": "rep verify",
        "inputs": [{"path": args.input, "sha256": digest}],
        "pseudo_valid": pseudo.valid,
        "violations": [
            {"law": law, "witness": list(w) if w else None} for law, w in pseudo.violations
        ],
        "is_representation": inj.injective,
        "injectivity_witness": list(inj.witness) if inj.witness else None,
        "flags": reps.rep_flags(R),
        "representation": reps.rep_to_json(R),
    }


def _cmd_rep_cpp(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    R = reps.rep_from_json(data)
    verdict = reps.is_ncpp(R, args.depth, max_ground=budgets["max_cpp_ground"])
    return {
        "command": "rep cpp",
        "inputs": [{"path": args.input, "sha256": digest}],
        "depth": args.depth,
        "holds": verdict.holds,
        "result": reps.cpp_certificate_json(verdict),
        "flags": reps.rep_flags(R),
    }


def _cmd_rep_ranked(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    R = reps.rep_from_json(data)
    rho = tuple(int(v) for v in args.rho.split(","))
    axioms = ranked.verify_rank_axioms(R.lattice, rho)
    ctx = reps.ThresholdRankContext(args.bound)
    result = None
    if axioms.valid:
        verdict = reps.check_ranked_rep(R, rho, ctx)
        result = {
            "holds": verdict.holds,
            "witness": list(verdict.witness) if verdict.witness else None,
            "reason": verdict.reason,
        }
    return {
        "command": "rep ranked",
        "inputs": [{"path": args.input, "sha256": digest}],
        "rho": list(rho),
        "bound": args.bound,
        "rank_axioms_valid": axioms.valid,
        "result": result,
    }


def _cmd_rep_family(args, budgets) -> dict:
    family = []
    inputs = []
    for path in args.inputs:
        data, digest = _read_json(path)
        family.append(reps.rep_from_json(data))
        inputs.append({"path": path, "sha256": digest})
    report = reps.family_closure_check(family, max_ground=budgets["max_cpp_ground"])
    failure = None
    if report.closure_failure is not None:
        idx, theta = report.closure_failure
        failure = {"member": idx, "theta": eqrel.eq_to_json(theta)}
    return {
        "command": "rep family-closure",
        "inputs": inputs,
        "nonempty": report.nonempty,
        "all_0cpp": report.all_0cpp,
        "not_0cpp_members": list(report.not_0cpp_members),
        "closure_holds": report.closure_holds,
        "closure_failure": failure,
        "correct": report.correct,
        "note": report.note,
    }


def _cmd_crt2(args, budgets) -> dict:
    if args.survey:
        if args.n is None:
            raise InvalidParameter("--survey needs --n")
        survey = ramsey.crt2_survey(args.n, args.k, max_kernels=budgets["max_survey_kernels"])
        if args.csv:
            _write_atomic(args.csv, ramsey.survey_csv(survey))
        return {
            "command": "crt2",
            "inputs": [{"n": args.n, "k": args.k}],
            "survey": True,
            "total": survey.total,
            "admitting": survey.admitting,
            "failing": list(survey.failing),
            "csv": args.csv,
        }
    if not args.fn:
        raise InvalidParameter("crt2 needs --survey or --fn FILE")
    data, digest = _read_json(args.fn)
    if "n" not in data or "values" not in data:
        raise ParseError(f"{args.fn}: pair function JSON needs 'n' and 'values'")
    f = ramsey.pair_function(int(data["n"]), data["values"])
    witness = ramsey.find_canonical_subset(f, args.k, max_candidates=budgets["max_subset_candidates"])
    forms = sorted(ramsey.canonical_form_on(f, witness)) if witness else []
    return {
        "command": "crt2",
        "inputs": [{"path": args.fn, "sha256": digest}],
        "survey": False,
        "k": args.k,
        "witness": list(witness) if witness else None,
        "forms": forms,
        "form": ramsey.summarize_form(frozenset(forms)) if forms else None,
    }


def _cmd_alg_cg(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    A = congruence.algebra_from_json(data)
    cg = congruence.congruence_lattice(A, max_carrier=budgets["max_cg_carrier"])
    return {
        "command": "alg cg",
        "inputs": [{"path": args.input, "sha256": digest}],
        "carrier": A.size,
        "congruence_count": len(cg.congruences),
        "congruences": [eqrel.eq_to_json(t) for t in cg.congruences],
        "lattice": lattice.lattice_to_json(cg.lattice),
    }


def _cmd_alg_check(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    A = congruence.algebra_from_json(data)
    ids = [int(v) for v in args.theta.split(",")]
    theta = eqrel.from_class_ids(ids)
    verdict = congruence.is_congruence(theta, A)
    witness = None
    if verdict.witness is not None:
        op, a, b = verdict.witness
        witness = {"op": op, "args": list(a), "args_substituted": list(b)}
    return {
        "command": "alg check",
        "inputs": [{"path": args.input, "sha256": digest}],
        "theta": eqrel.eq_to_json(theta),
        "is_congruence": verdict.holds,
        "witness": witness,
    }


def _cmd_alg_search(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    L = lattice.lattice_from_json(data, max_size=budgets["max_elements"])
    result = congruence.search_algebra(
        L,
        max_carrier=args.max_carrier,
        max_unary_ops=args.max_unary,
        max_binary_ops=args.max_binary,
        max_candidates=budgets["max_search_candidates"],
        match_dual=args.dual,
    )
    return {
        "command": "alg search",
        "inputs": [{"path": args.input, "sha256": digest}],
        "found": result.algebra is not None,
        "algebra": congruence.algebra_to_json(result.algebra) if result.algebra else None,
        "exhausted_budget": result.exhausted_budget,
        "candidates_tried": result.candidates_tried,
        "note": result.note,
    }


def _cmd_reasonable(args, budgets) -> dict:
    data, digest = _read_json(args.input)
    EL = lattice.equivalenced_from_json(data)
    verdict = diversity.is_reasonable(EL, max_elements=budgets["max_order_elements"])
    return {
        "command": "reasonable",
        "inputs": [{"path": args.input, "sha256": digest}],
        "reasonable": verdict.reasonable,
        "witness_order": list(verdict.witness_order) if verdict.witness_order else None,
        "obstruction": list(verdict.obstruction) if verdict.obstruction else None,
        "equivalenced": lattice.equivalenced_to_json(EL),
    }


# ---------------------------------------------------------------------------
# rendering and driver


def _pretty(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    skip = {"command", "inputs", "lattice", "representation", "equivalenced", "ranks", "congruences"}
    for key in sorted(report):
        if key in skip:
            continue
        lines.append(f"  {key}: {json.dumps(report[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finlat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.add_argument("--expect", action="append", metavar="KEY=VALUE",
                       help="assert a report field; failures set exit code 1")
        p.add_argument("--budget", action="append", metavar="NAME=VALUE",
                       help="override a budget (also via FINLAT_<NAME> env vars)")
        p.add_argument("--timings", action="store_true", help="include elapsed_ms")

    def lattice_input(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("input", nargs="?", help="lattice JSON file")
        group.add_argument("--std", help="standard lattice, e.g. m(3), pentagon, boolean(2)")

    p = sub.add_parser("analyze", help="lattice axioms and distributivity, all methods")
    lattice_input(p)
    common(p)

    p = sub.add_parser("ranks", help="enumerate rank maps and ranksets")
    lattice_input(p)
    p.add_argument("--blass", action="store_true")
    p.add_argument("--gaifman", action="store_true")
    common(p)

    p = sub.add_parser("rep", help="representation checks")
    rep_sub = p.add_subparsers(dest="rep_command", required=True)
    q = rep_sub.add_parser("verify")
    q.add_argument("input")
    common(q)
    q = rep_sub.add_parser("cpp")
    q.add_argument("input")
    q.add_argument("--depth", type=int, required=True)
    common(q)
    q = rep_sub.add_parser("ranked")
    q.add_argument("input")
    q.add_argument("--rho", required=True, help="comma-separated rank map")
    q.add_argument("--bound", type=int, required=True)
    common(q)
    q = rep_sub.add_parser("family-closure")
    q.add_argument("inputs", nargs="+")
    common(q)

    p = sub.add_parser("crt2", help="canonical Ramsey search and survey")
    p.add_argument("--survey", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--fn", help="pair function JSON file")
    p.add_argument("--csv", help="write per-kernel CSV here")
    common(p)

    p = sub.add_parser("alg", help="finite algebra commands")
    alg_sub = p.add_subparsers(dest="alg_command", required=True)
    q = alg_sub.add_parser("cg")
    q.add_argument("input")
    common(q)
    q = alg_sub.add_parser("check")
    q.add_argument("input")
    q.add_argument("--theta", required=True, help="comma-separated class ids")
    common(q)
    q = alg_sub.add_parser("search")
    q.add_argument("input")
    q.add_argument("--max-carrier", type=int, default=congruence.MAX_SEARCH_CARRIER)
    q.add_argument("--max-unary", type=int, default=3)
    q.add_argument("--max-binary", type=int, default=0)
    q.add_argument("--dual", action="store_true")
    common(q)

    p = sub.add_parser("reasonable", help="equivalenced lattice reasonableness")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("export-dot", help="Hasse diagram as DOT")
    lattice_input(p)
    p.add_argument("-o", "--output", help="write DOT here instead of stdout")
    common(p)

    return parser


_DISPATCH = {
    ("analyze", None): _cmd_analyze,
    ("ranks", None): _cmd_ranks,
    ("rep", "verify"): _cmd_rep_verify,
    ("rep", "cpp"): _cmd_rep_cpp,
    ("rep", "ranked"): _cmd_rep_ranked,
    ("rep", "family-closure"): _cmd_rep_family,
    ("crt2", None): _cmd_crt2,
    ("alg", "cg"): _cmd_alg_cg,
    ("alg", "check"): _cmd_alg_check,
    ("alg", "search"): _cmd_alg_search,
    ("reasonable", None): _cmd_reasonable,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        budgets = _Budgets(_parse_budget_flags(getattr(args, "budget", None)))
        if args.command == "export-dot":
            L, _ = _load_lattice(args, budgets)
            text = lattice.lattice_to_dot(L)
            if args.output:
                _write_atomic(args.output, text)
            else:
                sys.stdout.write(text)
            return 0
        sub_name = getattr(args, "rep_command", None) or getattr(args, "alg_command", None)
        handler = _DISPATCH[(args.command, sub_name)]
        start = time.monotonic()
        report = handler(args, budgets)
        report["budget_overrides"] = budgets.overridden()
        if args.timings:
            report["elapsed_ms"] = round((time.monotonic() - start) * 1000, 3)
        failures = _check_expectations(report, args.expect)
        if failures:
            report["expect_failures"] = failures
        text = _pretty(report) if args.pretty else json.dumps(report, indent=2, sort_keys=True) + "\n"
        sys.stdout.write(text)
        return 1 if failures else 0
    except (ParseError, SizeLimit, InvalidParameter, FinlatError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if isinstance(exc, SizeLimit):
            error["error"]["dimension"] = exc.dimension
            error["error"]["actual"] = exc.actual
            error["error"]["limit"] = exc.limit
        sys.stderr.write(json.dumps(error, indent=2, sort_keys=True) + "\n")
        return 2
    except (ValueError, OSError) as exc:
        # malformed numeric flags, unwritable output paths
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(json.dumps(error, indent=2, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
