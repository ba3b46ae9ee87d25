"""Command-line front end.

Subcommands mirror the library: validate / subalgebras / chains / eta for
model inspection, check / ricci / solve / iterate for the curvature problem,
and catalog for the built-in generators.  Exit codes: 0 on success or a
passing check, 1 when a condition fails or a solve does not certify, 2 for
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as catalog_mod
from .chains import (
    ChainError,
    check_corollary_lambda,
    check_theorem,
    enumerate_simple_chains,
    two_summand_condition,
)
from .curvature import CurvatureError, grad_S, ricci
from .iteration import IterationError, ricci_iterate
from .model import (
    CASIMIR_TOL,
    DiagonalForm,
    ModelError,
    check_hypothesis,
    classify_cor_all,
    enumerate_subalgebras,
    load_model,
    parse_model,
    serialize_model,
    validate,
)
from .numbers import NumberFormatError, format_number, parse_number
from .solver import SolverError, SolverOptions, solve_prescribed_ricci

_INPUT_ERRORS = (
    ModelError,
    ChainError,
    CurvatureError,
    SolverError,
    IterationError,
    NumberFormatError,
    OSError,
)


def _parse_form(text: str, rational: bool) -> DiagonalForm:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise NumberFormatError("empty coefficient list")
    return DiagonalForm.full(tuple(parse_number(p, rational=rational) for p in parts))


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _load(args):
    return load_model(
        args.model, rational=args.rational, tol=args.tol or CASIMIR_TOL
    )


def cmd_validate(args) -> int:
    with open(args.model, "r", encoding="utf-8") as fh:
        raw = parse_model(fh.read(), rational=args.rational)
    report = validate(raw, tol=args.tol or CASIMIR_TOL)
    payload = report.to_dict()
    lines = []
    if report.ok:
        model = report.model
        lines.append(f"{model.name}: valid (s={model.s}, dim={model.dimension})")
        if report.derived:
            values = ", ".join(
                str(format_number(v)) for v in getattr(model, report.derived)
            )
            lines.append(f"derived {report.derived}: {values}")
        payload["model"] = json.loads(serialize_model(model))
    else:
        lines.append("invalid model:")
        lines.extend(f"  - {err}" for err in report.errors)
    _emit(args, payload, lines)
    return 0 if report.ok else 2


def cmd_subalgebras(args) -> int:
    model = _load(args)
    lattice = enumerate_subalgebras(model)
    verdict = check_hypothesis(model, lattice)
    payload = {
        "lattice": lattice.to_dict(),
        "hypothesis": verdict.to_dict(),
        "unconditional": classify_cor_all(model, lattice),
    }
    lines = [f"{model.name}: {len(lattice.members)} bracket-closed index sets"]
    for J, dim in zip(lattice.members, lattice.member_dims):
        label = "{" + ",".join(map(str, J)) + "}" if J else "{}"
        lines.append(f"  {label}  dim={dim}")
    lines.append(f"hypothesis: {verdict.status}")
    _emit(args, payload, lines)
    return 0


def cmd_chains(args) -> int:
    model = _load(args)
    chains = enumerate_simple_chains(model)
    payload = {"chains": [ch.to_dict() for ch in chains]}
    lines = [f"{model.name}: {len(chains)} simple chain(s)"]
    for ch in chains:
        lines.append(
            f"  k={list(ch.J_k)} k'={list(ch.J_kprime)} l={list(ch.J_l)} "
            f"omega={ch.omega} eta={format_number(ch.eta)}"
        )
    _emit(args, payload, lines)
    return 0


def cmd_eta(args) -> int:
    model = _load(args)
    chains = enumerate_simple_chains(model)
    payload = {
        "chains": [
            {"k": list(ch.J_k), "kprime": list(ch.J_kprime), "eta": format_number(ch.eta)}
            for ch in chains
        ]
    }
    lines = [
        f"eta(k={list(ch.J_k)}, k'={list(ch.J_kprime)}) = {format_number(ch.eta)}"
        for ch in chains
    ] or ["no simple chains (isotropy algebra is maximal)"]
    _emit(args, payload, lines)
    return 0


def cmd_check(args) -> int:
    model = _load(args)
    T = _parse_form(args.T, args.rational)
    if args.corollary:
        report = check_corollary_lambda(model, T)
    else:
        report = check_theorem(model, T)
    payload = report.to_dict()
    if model.s == 2:
        payload["two_summand"] = two_summand_condition(model, T).to_dict()
    lines = [f"{model.name}: {report.criterion} check "
             + ("PASS" if report.passed else "FAIL")]
    for cond in report.conditions:
        lines.append(
            f"  k'={list(cond.chain.J_kprime)}: "
            f"{float(cond.lambda_min):.6g}/{float(cond.trace):.6g} vs "
            f"threshold {format_number(cond.threshold)} margin {float(cond.margin):+.6g} "
            + ("ok" if cond.passed else "FAIL")
        )
    if not report.conditions:
        lines.append("  no simple chains: passes unconditionally")
    if report.requirement1_unknown:
        lines.append("  caveat: inequivalence requirement not certified by the data")
    if not report.passed:
        lines.append("  verdict: inconclusive (the condition is sufficient, not necessary)")
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def cmd_ricci(args) -> int:
    model = _load(args)
    x = _parse_form(args.x, args.rational)
    r = ricci(model, x)
    g = grad_S(model, x)
    payload = {
        "ricci": [format_number(v) for v in r],
        "grad_S": [format_number(v) for v in g],
    }
    lines = ["ricci: " + ", ".join(str(format_number(v)) for v in r)]
    _emit(args, payload, lines)
    return 0


def cmd_solve(args) -> int:
    model = _load(args)
    T = _parse_form(args.T, args.rational)
    opts = SolverOptions(seed=args.seed, residual_tol=args.tol or 1e-8)
    report = solve_prescribed_ricci(model, T, options=opts)
    payload = report.to_dict()
    lines = [f"{model.name}: solve status = {report.status}"]
    if report.x is not None:
        lines.append("  x = " + ", ".join(f"{float(v):.12g}" for v in report.x.values))
    if report.c is not None:
        lines.append(f"  c = {report.c:.12g}")
    if report.residual is not None:
        lines.append(f"  residual = {report.residual:.3e}")
    if report.collapsed:
        lines.append(f"  escaped coordinates: {list(report.collapsed)}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    _emit(args, payload, lines)
    return 0 if report.status == "solved" else 1


def cmd_iterate(args) -> int:
    model = _load(args)
    start = _parse_form(args.start, args.rational)
    opts = SolverOptions(seed=args.seed)
    trace = ricci_iterate(model, start, args.steps, options=opts)
    if args.json:
        sys.stdout.write(trace.to_json_lines())
        if trace.status != "completed":
            print(json.dumps({"status": trace.status}))
    else:
        for st in trace.steps:
            print(
                f"step {st.index}: c={st.c:.9g} residual={st.residual:.3e} "
                f"g=({', '.join(f'{float(v):.9g}' for v in st.g.values)})"
            )
        print(f"status: {trace.status}; completed {len(trace.steps)}/{args.steps} steps")
        if trace.cauchy:
            print(f"normalized step differences: "
                  + ", ".join(f"{v:.3e}" for v in trace.cauchy))
    return 0 if trace.status == "completed" else 1


def cmd_catalog(args) -> int:
    if args.kind == "list" or args.kind is None:
        payload = {
            "generators": ["flag3 d1 d2 d3", "twosum d1 d2 zeta1 zeta2 t122 [t111] [t222]", "g2u2"],
            "placeholders": list(catalog_mod.PLACEHOLDER_SPACES),
        }
        lines = ["generators:"]
        lines += [f"  {g}" for g in payload["generators"]]
        lines.append("placeholder spaces (supply your own constants):")
        lines += [f"  {p}" for p in payload["placeholders"]]
        _emit(args, payload, lines)
        return 0
    if args.kind == "g2u2":
        model = catalog_mod.flag3(4, 2, 4)
    elif args.kind == "flag3":
        if len(args.params) != 3:
            raise ModelError("flag3 needs three dimensions: flag3 d1 d2 d3")
        model = catalog_mod.flag3(*(int(p) for p in args.params))
    elif args.kind == "twosum":
        if not 5 <= len(args.params) <= 7:
            raise ModelError(
                "twosum needs: d1 d2 zeta1 zeta2 t122 [t111] [t222]"
            )
        d1, d2 = int(args.params[0]), int(args.params[1])
        rest = [parse_number(p, rational=True) for p in args.params[2:]]
        model = catalog_mod.two_summand(d1, d2, *rest)
    else:
        raise ModelError(f"unknown catalog kind {args.kind!r}")
    sys.stdout.write(serialize_model(model))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--rational",
        action="store_true",
        help="force exact arithmetic (decimal literals become exact fractions)",
    )
    common.add_argument(
        "--tol",
        type=float,
        default=None,
        help="tolerance override (validation residual; solve certification)",
    )

    parser = argparse.ArgumentParser(
        prog="homricci",
        description="prescribed Ricci curvature on compact homogeneous spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, with_model=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if with_model:
            p.add_argument("model", help="model JSON file")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check a model file and derive missing data")
    add("subalgebras", cmd_subalgebras, "enumerate the bracket-closed index sets")
    add("chains", cmd_chains, "list simple chains with their eta values")
    add("eta", cmd_eta, "print eta per simple chain")

    p = add("check", cmd_check, "evaluate the solvability conditions for a target form")
    p.add_argument("--T", required=True, help="comma-separated positive coefficients")
    p.add_argument(
        "--corollary",
        action="store_true",
        help="use the eigenvalue-ratio variant of the condition",
    )

    p = add("ricci", cmd_ricci, "Ricci coefficients of a diagonal metric")
    p.add_argument("--x", required=True, help="comma-separated positive coefficients")

    p = add("solve", cmd_solve, "solve Ric g = c T for a positive target form")
    p.add_argument("--T", required=True, help="comma-separated positive coefficients")
    p.add_argument("--seed", type=int, default=0, help="multistart seed")

    p = add("iterate", cmd_iterate, "run the Ricci iteration")
    p.add_argument("--start", required=True, help="starting form coefficients")
    p.add_argument("--steps", type=int, required=True, help="number of solve steps")
    p.add_argument("--seed", type=int, default=0, help="multistart seed")

    p = add("catalog", cmd_catalog, "emit a built-in model as JSON", with_model=False)
    p.add_argument("kind", nargs="?", help="flag3 | twosum | g2u2 | list")
    p.add_argument("params", nargs="*", help="generator parameters")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
