"""Batch command-line front end.

Verb-noun subcommands over the library: representation solving and
verification (`rep`, `ladder`), filling-factor arithmetic (`ff`), and
wavefunction inner products (`wf`).  Machine-readable JSON is the default
output.  Exit code 0 means success, 1 a failed verification or an honest
mathematical failure, 2 a usage error.  The only environment variable
consulted is HALLREP_COLOR (1/0), toggling color in table output.
"""

from __future__ import annotations

import argparse
import cmath
import json
import os
import sys

import numpy as np

from . import __version__
from .algebra import PrimitiveRoot, verify_relations
from .cyclic import (
    InfeasibleBaseError,
    LadderRep,
    build_ladder,
    cyclicity_check,
    generic_from_coefficients,
    intertwiner,
    ladder_from_coefficients,
    rep_from_json,
    solve_generic_coefficients,
    solve_ladder_magnitudes,
)
from .hierarchy import (
    DecompositionError,
    FillingFactor,
    PositiveCF,
    StandardCF,
    basis_index,
    blok_wen_sequence,
    decompose,
    eval_positive_cf,
    eval_standard_cf,
    family,
    family_partition_sum,
)
from .wavefunctions import (
    HierarchyR1Spec,
    LaughlinSpec,
    as_config,
    gram_matrix,
    hierarchy_r1_eval,
    inner_product_exact,
    inner_product_mc,
    laughlin_eval,
    spec_from_json,
)

CYCLICITY_TOL = 1e-9
INTERTWINER_TOL = 1e-10


# ----------------------------------------------------------------------
# parsing helpers


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _json_arg(text: str):
    return json.loads(text)


def _config_from_json(payload) -> np.ndarray:
    coords = [complex(re, im) for re, im in payload]
    return as_config(coords)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _extract_rep(obj: dict):
    """Accept either a bare representation object or a CLI report envelope."""
    if "kind" in obj:
        return rep_from_json(obj)
    if "result" in obj and isinstance(obj["result"], dict) and "kind" in obj["result"]:
        return rep_from_json(obj["result"])
    raise ValueError("file does not contain a serialized representation")


def _root_from_args(args) -> PrimitiveRoot:
    return PrimitiveRoot(args.p, args.k)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ----------------------------------------------------------------------
# output


def _use_color() -> bool:
    toggle = os.environ.get("HALLREP_COLOR")
    if toggle is not None:
        return toggle not in ("0", "false", "no")
    return sys.stdout.isatty()


def _flatten(value, prefix=""):
    rows = []
    if isinstance(value, dict):
        for key, sub in value.items():
            rows.extend(_flatten(sub, f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(value, (list, tuple)) and len(str(value)) > 60:
        rows.append((prefix.rstrip("."), f"[{len(value)} items]"))
    else:
        rows.append((prefix.rstrip("."), value))
    return rows


def _emit(args, envelope: dict, csv_text: str | None, passed: bool | None) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = json.dumps(envelope, indent=2) + "\n"
    elif fmt == "csv":
        if csv_text is None:
            lines = ["key,value"]
            lines += [f"{k},{v}" for k, v in _flatten(envelope["result"])]
            csv_text = "\n".join(lines) + "\n"
        text = csv_text
    else:  # table
        lines = [f"hallrep {envelope['command']} (v{__version__})"]
        for key, value in _flatten(envelope["result"]):
            lines.append(f"  {key:<36} {value}")
        if passed is not None:
            verdict = "PASS" if passed else "FAIL"
            if _use_color():
                color = "32" if passed else "31"
                verdict = f"\x1b[{color}m{verdict}\x1b[0m"
            lines.append(f"  {'verdict':<36} {verdict}")
        text = "\n".join(lines) + "\n"
    output = getattr(args, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(args, result) -> dict:
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("handler", "command_path") and not key.startswith("_")
    }
    return {
        "tool": {"name": "hallrep", "version": __version__},
        "command": args.command_path,
        "config": config,
        "result": result,
    }


# ----------------------------------------------------------------------
# rep / ladder handlers


def _cmd_rep_solve(args):
    root = _root_from_args(args)
    lam = cmath.exp(1j * args.lam_phase)
    rep = solve_generic_coefficients(root, lam, args.base, args.phases)
    return rep.to_json(), None, None


def _cmd_rep_build(args):
    obj = _load_json(args.infile)
    stored = _extract_rep(obj)
    if isinstance(stored, LadderRep):
        rebuilt = ladder_from_coefficients(stored.root, stored.a)
    else:
        rebuilt = generic_from_coefficients(stored.root, stored.lam, stored.g, stored.f)
    deviation = max(
        float(np.linalg.norm(getattr(stored, name) - getattr(rebuilt, name)))
        for name in ("k_mat", "e_plus", "e_minus")
    )
    result = rebuilt.to_json()
    result["max_deviation_from_stored"] = deviation
    return result, None, None


def _cmd_rep_verify(args):
    rep = _extract_rep(_load_json(args.infile))
    report = verify_relations(rep.k_mat, rep.e_plus, rep.e_minus, rep.root, args.tol)
    result = report.to_json()
    if not report.passed:
        result["failures"] = report.failing()
    return result, report.passed, None


def _cmd_rep_intertwine(args):
    rep = _extract_rep(_load_json(args.infile))
    if not isinstance(rep, LadderRep):
        raise ValueError("intertwine expects a ladder-form representation file")
    res = intertwiner(rep, args.s)
    result = {
        "sigma": list(res.sigma),
        "lambda": _pair(res.lam),
        "residual": res.residual,
        "tolerance": args.tol,
    }
    return result, res.residual <= args.tol, None


def _ladder_rep_from_args(args):
    if getattr(args, "infile", None):
        rep = _extract_rep(_load_json(args.infile))
        if not isinstance(rep, LadderRep):
            raise ValueError("expected a ladder-form representation file")
        return rep
    return build_ladder(_root_from_args(args), base=args.base, phases=args.phases)


def _cmd_ladder_magnitudes(args):
    solution = solve_ladder_magnitudes(_root_from_args(args), args.base)
    result = {
        "p": solution.root.p,
        "k": solution.root.k,
        "base": solution.base,
        "infimum_base": solution.infimum_base,
        "magnitudes": list(solution.magnitudes),
    }
    csv_text = "i,squared_magnitude\n" + "".join(
        f"{i + 1},{m!r}\n" for i, m in enumerate(solution.magnitudes)
    )
    return result, None, csv_text


def _cmd_ladder_build(args):
    rep = build_ladder(_root_from_args(args), base=args.base, phases=args.phases)
    return rep.to_json(), None, None


def _cmd_ladder_verify(args):
    rep = _ladder_rep_from_args(args)
    report = verify_relations(rep.k_mat, rep.e_plus, rep.e_minus, rep.root, args.tol)
    result = report.to_json()
    if not report.passed:
        result["failures"] = report.failing()
    return result, report.passed, None


def _cmd_ladder_cyclicity(args):
    rep = _ladder_rep_from_args(args)
    report = cyclicity_check(rep)
    passed = (
        report.is_cyclic
        and report.raising_residual <= args.tol
        and report.lowering_residual <= args.tol
    )
    result = {
        "is_cyclic": report.is_cyclic,
        "epow_scalar": _pair(report.epow_scalar),
        "raising_residual": report.raising_residual,
        "lowering_residual": report.lowering_residual,
        "tolerance": args.tol,
    }
    return result, passed, None


# ----------------------------------------------------------------------
# ff handlers


def _cmd_ff_eval(args):
    cf = StandardCF(tuple(args.coeffs)) if args.form == "standard" else PositiveCF(tuple(args.coeffs))
    nu = eval_standard_cf(cf) if args.form == "standard" else eval_positive_cf(cf)
    return {"nu": str(nu), "num": nu.num, "den": nu.den}, None, None


def _cmd_ff_decompose(args):
    nu = FillingFactor.parse(args.nu)
    cf = decompose(nu, args.form)
    return {"nu": str(nu), "form": args.form, "coefficients": list(cf.coefficients)}, None, None


def _cmd_ff_family(args):
    members = family(args.p)
    result = {
        "p": args.p,
        "family": [str(nu) for nu in members],
        "partition_sum": str(family_partition_sum(args.p)),
    }
    csv_text = "i,nu\n" + "".join(f"{i + 1},{nu}\n" for i, nu in enumerate(members))
    return result, None, csv_text


def _cmd_ff_blokwen(args):
    seq = blok_wen_sequence(PositiveCF(tuple(args.coeffs)))
    return {
        "thetas": [str(t) for t in seq.thetas],
        "qs": [str(q) for q in seq.qs],
    }, None, None


def _cmd_ff_index(args):
    i, p = basis_index(FillingFactor.parse(args.nu), args.family_p)
    return {"i": i, "p": p}, None, None


# ----------------------------------------------------------------------
# wf handlers


def _cmd_wf_eval(args):
    spec = spec_from_json(args.spec)
    config = _config_from_json(args.config)
    if isinstance(spec, LaughlinSpec):
        value = laughlin_eval(spec.m, as_config(config, spec.n_electrons))
    else:
        value = hierarchy_r1_eval(spec, config, args.quad_order)
    return {"value": _pair(value)}, None, None


def _cmd_wf_inner(args):
    spec_a = spec_from_json(args.spec_a)
    spec_b = spec_from_json(args.spec_b)
    if args.method == "exact":
        res = inner_product_exact(spec_a, spec_b)
    else:
        res = inner_product_mc(
            spec_a, spec_b, args.samples, args.seed,
            workers=args.workers, quad_order=args.quad_order,
        )
    return res.to_json(), None, None


def _cmd_wf_gram(args):
    specs = [spec_from_json(obj) for obj in args.specs]
    gram = gram_matrix(
        specs,
        args.method,
        samples=args.samples,
        seed=args.seed,
        normalize=args.normalize,
        workers=args.workers,
        quad_order=args.quad_order,
    )
    return gram.to_json(), None, gram.to_csv()


# ----------------------------------------------------------------------
# parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=("json", "csv", "table"), default="json",
        help="output format",
    )
    parser.add_argument("-o", "--output", default=None, help="write the report to a file")


def _add_root_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, required=True, help="representation size parameter; dimension is 2p+1")
    parser.add_argument("--k", type=int, default=1, help="primitive-root label, coprime to 2p+1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hallrep",
        description=__doc__,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"hallrep {__version__}")
    groups = parser.add_subparsers(dest="group")

    def sub(group_parser, name, handler, help_text):
        cmd = group_parser.add_parser(
            name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        cmd.set_defaults(handler=handler)
        _add_common(cmd)
        return cmd

    # rep
    rep = groups.add_parser("rep", help="generic weight-basis representations")
    rep_sub = rep.add_subparsers(dest="action")
    cmd = sub(rep_sub, "solve", _cmd_rep_solve, "solve the unitary closure chain for given lambda")
    _add_root_flags(cmd)
    cmd.add_argument("--lam-phase", type=float, default=0.0, help="arg(lambda) in radians; lambda = exp(i*phase)")
    cmd.add_argument("--base", type=float, default=None, help="free base |g_0|^2 (default: infimum + 1)")
    cmd.add_argument("--phases", type=_float_list, default=None, help="comma-separated coefficient phases")
    cmd = sub(rep_sub, "build", _cmd_rep_build, "re-realize matrices from a serialized representation")
    cmd.add_argument("--in", dest="infile", required=True, help="representation JSON file")
    cmd = sub(rep_sub, "verify", _cmd_rep_verify, "verify the defining relations of a stored representation")
    cmd.add_argument("--in", dest="infile", required=True, help="representation JSON file")
    cmd.add_argument("--tol", type=float, default=None, help="Frobenius tolerance (default: 1e-10 * dim)")
    cmd = sub(rep_sub, "intertwine", _cmd_rep_intertwine, "relabel a ladder rep into weight-basis form")
    cmd.add_argument("--in", dest="infile", required=True, help="ladder representation JSON file")
    cmd.add_argument("--s", type=int, required=True, help="integer exponent; lambda = q^s")
    cmd.add_argument("--tol", type=float, default=INTERTWINER_TOL, help="residual tolerance")

    # ladder
    ladder = groups.add_parser("ladder", help="ladder-form representations")
    ladder_sub = ladder.add_subparsers(dest="action")
    cmd = sub(ladder_sub, "magnitudes", _cmd_ladder_magnitudes, "solve the squared-magnitude chain")
    _add_root_flags(cmd)
    cmd.add_argument("--base", type=float, default=None, help="free base |a_{2p+1}|^2 (default: infimum + 1)")
    cmd = sub(ladder_sub, "build", _cmd_ladder_build, "realize the ladder matrices")
    _add_root_flags(cmd)
    cmd.add_argument("--base", type=float, default=None, help="free base |a_{2p+1}|^2 (default: infimum + 1)")
    cmd.add_argument("--phases", type=_float_list, default=None, help="comma-separated coefficient phases")
    for name, handler, tol_default, help_text in (
        ("verify", _cmd_ladder_verify, None, "verify the defining relations"),
        ("cyclicity", _cmd_ladder_cyclicity, CYCLICITY_TOL, "check that no state is annihilated"),
    ):
        cmd = sub(ladder_sub, name, handler, help_text)
        cmd.add_argument("--in", dest="infile", default=None, help="representation JSON file (else build from flags)")
        cmd.add_argument("--p", type=int, default=1, help="used when --in is absent")
        cmd.add_argument("--k", type=int, default=1, help="used when --in is absent")
        cmd.add_argument("--base", type=float, default=None, help="used when --in is absent")
        cmd.add_argument("--phases", type=_float_list, default=None, help="used when --in is absent")
        if tol_default is None:
            cmd.add_argument("--tol", type=float, default=None, help="Frobenius tolerance (default: 1e-10 * dim)")
        else:
            cmd.add_argument("--tol", type=float, default=tol_default, help="residual tolerance")

    # ff
    ff = groups.add_parser("ff", help="filling-factor continued fractions")
    ff_sub = ff.add_subparsers(dest="action")
    cmd = sub(ff_sub, "eval", _cmd_ff_eval, "evaluate a coefficient list to a filling factor")
    cmd.add_argument("--form", choices=("standard", "positive"), default="standard", help="continued-fraction form")
    cmd.add_argument("--coeffs", type=_int_list, required=True, help="comma-separated coefficients, e.g. 3,2")
    cmd = sub(ff_sub, "decompose", _cmd_ff_decompose, "find coefficients for a filling factor")
    cmd.add_argument("--nu", required=True, help="filling factor as P/Q")
    cmd.add_argument("--form", choices=("standard", "positive"), default="standard", help="continued-fraction form")
    cmd = sub(ff_sub, "family", _cmd_ff_family, "list the 2p+1 family members and the partition sum")
    cmd.add_argument("--p", type=int, required=True, help="family parameter")
    cmd = sub(ff_sub, "blokwen", _cmd_ff_blokwen, "auxiliary theta/q sequences of a positive-form CF")
    cmd.add_argument("--coeffs", type=_int_list, required=True, help="comma-separated positive-form coefficients")
    cmd = sub(ff_sub, "index", _cmd_ff_index, "basis address (i, p) of a filling factor")
    cmd.add_argument("--nu", required=True, help="filling factor as P/Q")
    cmd.add_argument("--family-p", type=int, default=None, help="family parameter (required for nu = 1)")

    # wf
    wf = groups.add_parser("wf", help="trial wavefunctions and inner products")
    wf_sub = wf.add_subparsers(dest="action")
    cmd = sub(wf_sub, "eval", _cmd_wf_eval, "evaluate a wavefunction at one configuration")
    cmd.add_argument("--spec", type=_json_arg, required=True, help='wavefunction spec JSON, e.g. {"variant":"laughlin","m":3,"n_electrons":2}')
    cmd.add_argument("--config", type=_json_arg, required=True, help="coordinates as JSON [[re,im],...]")
    cmd.add_argument("--quad-order", type=int, default=32, help="per-axis quadrature order (hierarchy specs)")
    cmd = sub(wf_sub, "inner", _cmd_wf_inner, "scalar product of two wavefunctions")
    cmd.add_argument("--spec-a", type=_json_arg, required=True, help="first spec JSON")
    cmd.add_argument("--spec-b", type=_json_arg, required=True, help="second spec JSON")
    cmd.add_argument("--method", choices=("exact", "mc"), default="exact", help="integration method")
    cmd.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")
    cmd.add_argument("--seed", type=int, default=0, help="stream seed")
    cmd.add_argument("--workers", type=int, default=1, help="worker threads; must not affect outputs")
    cmd.add_argument("--quad-order", type=int, default=32, help="per-axis quadrature order (hierarchy specs)")
    cmd = sub(wf_sub, "gram", _cmd_wf_gram, "Hermitian matrix of pairwise inner products")
    cmd.add_argument("--specs", type=_json_arg, required=True, help="JSON array of wavefunction specs")
    cmd.add_argument("--method", choices=("exact", "mc"), default="exact", help="integration method")
    cmd.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")
    cmd.add_argument("--seed", type=int, default=0, help="stream seed")
    cmd.add_argument("--workers", type=int, default=1, help="worker threads; must not affect outputs")
    cmd.add_argument("--quad-order", type=int, default=32, help="per-axis quadrature order (hierarchy specs)")
    cmd.add_argument("--normalize", action="store_true", help="rescale so the diagonal is exactly 1")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return int(exc.code) if exc.code else 0
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        return 2
    args.command_path = " ".join(part for part in (args.group, getattr(args, "action", None)) if part)
    try:
        result, passed, csv_text = args.handler(args)
    except DecompositionError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except InfeasibleBaseError as exc:
        print(f"error: --base {exc.base} is infeasible; the infimum is {exc.infimum_base}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, _envelope(args, result), csv_text, passed)
    if passed is False:
        failing = result.get("failures") if isinstance(result, dict) else None
        detail = "; ".join(failing) if failing else "see the residuals in the report"
        print(f"verification failed: {detail}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
