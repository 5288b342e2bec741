"""Command-line front end: construct systems, estimate constants, run the
named checks, and emit machine-readable reports.

Commands::

    bibasis system NAME [--p P] [--level L] [--m M] [--n N] [--out PATH]
    bibasis constant --system NAME [system flags] [--kind KIND]
                     [--strategy STRATEGY] [--budget B] [--seed S] [--csv]
    bibasis check ID [check flags] [--tol T] [--seed S] [--csv]
    bibasis suite [--select id,id,...] [--tol T] [--seed S] [--csv]

Exit codes: 0 on success (all selected checks passed), 1 when a check
failed, 2 on usage errors.  Reports go to stdout (or --out); diagnostics go
to stderr.  Identical invocations, including the seed, produce byte-identical
JSON apart from the runtime_ms fields.
"""

from __future__ import annotations

import argparse
import inspect
import json
import math
import sys
from typing import Any, Sequence

from . import __version__
from . import checks as _checks
from .checks import (
    CheckOutcome,
    DEFAULT_PLAN,
    SuiteConfig,
    list_checks,
    run_check,
    run_suite,
)
from .constants import ConstantEstimate, ConstantKind, estimate_constant
from .systems import (
    SignMatrix,
    System,
    absolute_matrix_example,
    difference_basis,
    discretized_rademacher,
    haar,
    hadamard,
    rademacher,
    schauder_c01,
    sign_matrix_to_csv,
    summing_basis,
    system_to_csv,
    unit_vectors,
    walsh,
)

__all__ = ["main"]

SYSTEM_NAMES = (
    "unit-vectors",
    "summing",
    "diff-basis",
    "haar",
    "rademacher",
    "walsh",
    "hadamard",
    "discretized-rademacher",
    "absolute-matrix",
    "schauder",
)

_KIND_BY_NAME = {
    "basis": ConstantKind.K,
    "bibasis": ConstantKind.M,
    "unc-bibasis": ConstantKind.L,
    "unconditional": ConstantKind.Ku,
    "absolute": ConstantKind.A,
}

_STRATEGY_NAMES = ("exhaustive-signs", "grid-sphere", "multistart-ascent")

_CHECK_FN_BY_ID = {
    "haar-doob": _checks.check_haar_doob,
    "haar-l1-failure": _checks.check_haar_l1_failure,
    "diff-basis": _checks.check_difference_basis,
    "perturbation": _checks.check_perturbation,
    "blocks": _checks.check_blocks,
    "rademacher": _checks.check_rademacher,
    "unc-block-l1": _checks.check_unc_block_l1,
    "absolute-matrix": _checks.check_absolute_matrix,
    "walsh": _checks.check_walsh,
    "perm-discretized-rademacher": _checks.check_discretized_rademacher,
    "lemma-2unc": _checks.check_lemma_2unc,
    "bgd-khintchine": _checks.check_bgd_khintchine_report,
}

# generic flags that land under a different parameter name for some checks
_CHECK_FLAG_ALIASES = {
    "haar-l1-failure": {"level": "level_max"},
    "perm-discretized-rademacher": {"m": "S"},
}


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_report(
    command: str,
    inv_args: dict,
    outcomes: Sequence[CheckOutcome],
    estimates: Sequence[ConstantEstimate],
) -> str:
    doc = {
        "tool_version": __version__,
        "invocation": {"command": command, "args": inv_args},
        "outcomes": [o.to_dict() for o in outcomes],
        "estimates": [e.to_dict() for e in estimates],
    }
    return json.dumps(doc, indent=2, allow_nan=False)


def _invocation_args(args: argparse.Namespace, keys: Sequence[str]) -> dict:
    out = {}
    for key in keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            out[key] = _json_safe(value)
    return out


def _estimate_csv(est: ConstantEstimate) -> str:
    header = "kind,lower,upper,upper_provenance,strategy,budget,evaluations,seed"
    upper = "" if est.upper is None else repr(est.upper)
    row = (
        f"{est.kind.value},{est.lower!r},{upper},{est.upper_provenance},"
        f"{est.strategy},{est.budget},{est.evaluations},{est.seed}"
    )
    return header + "\n" + row


def _outcomes_csv(outcomes: Sequence[CheckOutcome]) -> str:
    # long format, one metric per row: plot-ready and runtime-free
    lines = ["check_id,field,name,value"]
    for o in outcomes:
        lines.append(f"{o.id},result,passed,{int(o.passed)}")
        lines.append(f"{o.id},result,tolerance,{o.tolerance!r}")
        lines.append(f"{o.id},result,seed,{o.seed}")
        for name, val in o.measured.items():
            lines.append(f"{o.id},measured,{name},{val!r}")
        for name, val in o.bound.items():
            lines.append(f"{o.id},bound,{name},{val!r}")
    return "\n".join(lines)


def _require(args: argparse.Namespace, flag: str, parser: argparse.ArgumentParser) -> Any:
    value = getattr(args, flag)
    if value is None:
        parser.error(f"--{flag} is required for this system")
    return value


def _build_system(
    name: str, args: argparse.Namespace, parser: argparse.ArgumentParser
) -> "System | SignMatrix":
    p = 2.0 if args.p is None else args.p
    if name == "unit-vectors":
        return unit_vectors(p, _require(args, "n", parser))
    if name == "summing":
        return summing_basis(_require(args, "n", parser))
    if name == "diff-basis":
        return difference_basis(_require(args, "m", parser))
    if name == "haar":
        return haar(p, _require(args, "level", parser))
    if name == "rademacher":
        return rademacher(p, _require(args, "m", parser))
    if name == "walsh":
        return walsh(p, _require(args, "n", parser))
    if name == "hadamard":
        return hadamard(_require(args, "n", parser))
    if name == "discretized-rademacher":
        return discretized_rademacher(p, _require(args, "m", parser))  # --m is S
    if name == "absolute-matrix":
        return absolute_matrix_example(_require(args, "m", parser))
    if name == "schauder":
        return schauder_c01(_require(args, "level", parser))
    raise AssertionError(f"unhandled system name {name!r}")


def _collect_check_params(
    args: argparse.Namespace, check_id: str, parser: argparse.ArgumentParser
) -> dict:
    raw = {
        "p": args.p,
        "level": args.level,
        "m": args.m,
        "n": args.n,
        "budget": args.budget,
        "trials": args.trials,
        "tol": args.tol,
    }
    aliases = _CHECK_FLAG_ALIASES.get(check_id, {})
    signature = inspect.signature(_CHECK_FN_BY_ID[check_id])
    params = {}
    for flag, value in raw.items():
        if value is None:
            continue
        name = aliases.get(flag, flag)
        if name not in signature.parameters:
            parser.error(f"--{flag} does not apply to check {check_id!r}")
        params[name] = value
    return params


# -- command handlers ----------------------------------------------------------


def _cmd_system(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    obj = _build_system(args.name, args, parser)
    text = sign_matrix_to_csv(obj) if isinstance(obj, SignMatrix) else system_to_csv(obj)
    _emit(text, args.out)
    return 0


def _cmd_constant(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    built = _build_system(args.system, args, parser)
    if isinstance(built, SignMatrix):
        parser.error("hadamard is a sign matrix, not a system; use walsh")
    est = estimate_constant(
        built,
        _KIND_BY_NAME[args.kind],
        args.strategy.replace("-", "_"),
        args.budget,
        args.seed,
    )
    if args.format == "csv":
        _emit(_estimate_csv(est), args.out)
    else:
        inv = _invocation_args(
            args, ("system", "kind", "strategy", "budget", "seed", "p", "level", "m", "n")
        )
        _emit(_render_report("constant", inv, [], [est]), args.out)
    return 0


def _cmd_check(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    params = _collect_check_params(args, args.id, parser)
    outcome = run_check(args.id, seed=args.seed, **params)
    if args.format == "csv":
        _emit(_outcomes_csv([outcome]), args.out)
    else:
        inv = _invocation_args(
            args, ("id", "p", "level", "m", "n", "trials", "budget", "tol", "seed")
        )
        _emit(_render_report("check", inv, [outcome], []), args.out)
    return 0 if outcome.passed else 1


def _cmd_suite(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    select = None
    if args.select is not None:
        select = tuple(s for s in args.select.split(",") if s)
    overrides = {}
    if args.tol is not None:
        overrides = {check_id: {"tol": args.tol} for check_id, _ in DEFAULT_PLAN}
    outcomes = run_suite(SuiteConfig(seed=args.seed, select=select, overrides=overrides))
    if args.format == "csv":
        _emit(_outcomes_csv(outcomes), args.out)
    else:
        inv = _invocation_args(args, ("select", "tol", "seed"))
        _emit(_render_report("suite", inv, outcomes, []), args.out)
    failed = [o.id for o in outcomes if not o.passed]
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


# -- parser --------------------------------------------------------------------


def _add_format_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument(
        "--json", dest="format", action="store_const", const="json",
        help="JSON report (default)",
    )
    group.add_argument(
        "--csv", dest="format", action="store_const", const="csv",
        help="CSV report",
    )
    sub.set_defaults(format="json")


def _add_system_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=float, help="norm exponent, 1 <= p <= inf")
    sub.add_argument("--level", type=int, help="dyadic level")
    sub.add_argument("--m", type=int, help="sequence length (block count S for discretized-rademacher)")
    sub.add_argument("--n", type=int, help="dimension or matrix order")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bibasis",
        description=(
            "Estimate basis, bibasis, unconditional and absolute constants of "
            "finite sections of classical systems, and run the named checks."
        ),
    )
    parser.add_argument("--version", action="version", version=f"bibasis {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sys_p = commands.add_parser("system", help="write a system as CSV")
    sys_p.add_argument("name", choices=SYSTEM_NAMES)
    _add_system_flags(sys_p)
    sys_p.add_argument("--out", help="write to this path instead of stdout")
    sys_p.set_defaults(handler=_cmd_system)

    con_p = commands.add_parser("constant", help="estimate a constant")
    con_p.add_argument("--system", required=True, choices=SYSTEM_NAMES)
    _add_system_flags(con_p)
    con_p.add_argument(
        "--kind", choices=tuple(_KIND_BY_NAME), default="bibasis",
        help="which constant to estimate (default bibasis)",
    )
    con_p.add_argument(
        "--strategy", choices=_STRATEGY_NAMES, default="multistart-ascent",
    )
    con_p.add_argument("--budget", type=int, default=10_000,
                       help="ratio-evaluation budget (default 10000)")
    con_p.add_argument("--seed", type=int, default=0)
    con_p.add_argument("--out", help="write to this path instead of stdout")
    _add_format_flags(con_p)
    con_p.set_defaults(handler=_cmd_constant)

    chk_p = commands.add_parser("check", help="run one named check")
    chk_p.add_argument("id", choices=list_checks())
    _add_system_flags(chk_p)
    chk_p.add_argument("--trials", type=int, help="random trials, where applicable")
    chk_p.add_argument("--budget", type=int, help="ratio-evaluation budget")
    chk_p.add_argument("--tol", type=float, help="override the check's headline tolerance")
    chk_p.add_argument("--seed", type=int, default=0)
    chk_p.add_argument("--out", help="write to this path instead of stdout")
    _add_format_flags(chk_p)
    chk_p.set_defaults(handler=_cmd_check)

    ste_p = commands.add_parser("suite", help="run the default check plan")
    ste_p.add_argument("--select", help="comma-separated check ids (default: all)")
    ste_p.add_argument("--tol", type=float,
                       help="override every check's headline tolerance")
    ste_p.add_argument("--seed", type=int, default=0)
    ste_p.add_argument("--out", help="write to this path instead of stdout")
    _add_format_flags(ste_p)
    ste_p.set_defaults(handler=_cmd_suite)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
