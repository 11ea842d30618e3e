"""Command-line front end: verification suites, spectra, and audits.

Exit codes: 0 success, 1 check/solve failure, 2 usage error.
Identical configuration produces byte-identical JSON output; run
metadata lives in a separate header field and carries no timestamps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .algebra import (
    RealizationKind,
    build_generators,
    gamma_action,
    gamma_report,
    j_v_sign_report,
    verify_algebra,
    verify_qpm_closure,
)
from .fock import FockSpace
from .spectra import (
    JCKerrParams,
    MJCParams,
    build_jck_reduced,
    build_mjc_reduced,
    compare_reduced_vs_full,
    dense_spectrum,
    jck_recurrence,
    mjc_closed_form_all,
    Spectrum,
)
from .transform import (
    TAGS,
    parse_tag,
    structure_report,
    verify_intertwining,
    verify_transformed_algebra,
)

_CONFIG_KEYS = {
    "cutoffs", "j", "tol", "realization", "tag", "omega", "omega0",
    "kappa", "lambda", "l1", "l2", "method", "format", "output", "margin",
    "which", "max_total", "suite",
}


def _read_config(path: str, parser: argparse.ArgumentParser) -> dict:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    parser.error(f"{path}:{lineno}: expected key=value")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in _CONFIG_KEYS:
                    parser.error(f"{path}:{lineno}: unknown config key {key!r}")
                values[key] = val.strip()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    return values


def _apply_config(args, config: dict):
    mapping = {"lambda": "lam", "l1": "l1", "l2": "l2", "max_total": "max_total"}
    for key, val in config.items():
        dest = mapping.get(key, key)
        if not hasattr(args, dest) or getattr(args, dest) is not None:
            continue  # flags beat the file
        if dest == "cutoffs":
            setattr(args, dest, [int(v) for v in val.split()])
        elif dest in ("j", "margin", "max_total"):
            setattr(args, dest, int(val))
        elif dest in ("tol", "omega", "omega0", "kappa", "lam", "l1", "l2"):
            setattr(args, dest, float(val))
        else:
            setattr(args, dest, val)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(args, payload_text: str) -> None:
    out = getattr(args, "output", None)
    if not out:
        sys.stdout.write(payload_text)
        return
    base = os.environ.get("OSP21_OUTPUT_DIR", "")
    path = out if os.path.isabs(out) or not base else os.path.join(base, out)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload_text)
    print(f"wrote {path}")


def _header(command: str, config: dict) -> dict:
    return {"tool": "osp21", "version": __version__, "command": command,
            "config": config}


def _require(parser, cond: bool, message: str):
    if not cond:
        parser.error(message)


# -- verify-algebra -----------------------------------------------------------


def cmd_verify_algebra(args, parser) -> int:
    tol = args.tol if args.tol is not None else 1e-10
    _require(parser, tol > 0, "tolerance must be > 0")
    cutoffs = args.cutoffs or [10, 10]
    _require(parser, len(cutoffs) == 2 and min(cutoffs) >= 2,
             "--cutoffs needs two integers >= 2")
    suites = []
    reports = {}
    ok = True

    realizations = []
    if args.realization:
        if args.realization == "all":
            realizations = [RealizationKind.FERM_A, RealizationKind.FERM_B]
        else:
            try:
                realizations = [RealizationKind(args.realization)]
            except ValueError:
                parser.error(f"unknown realization {args.realization!r}")
    tags = []
    if args.tag:
        if args.tag == "all":
            tags = list(TAGS)
        else:
            try:
                tags = [parse_tag(args.tag)]
            except ValueError as exc:
                parser.error(str(exc))
    if not realizations and not tags:
        realizations = [RealizationKind.FERM_A, RealizationKind.FERM_B]
        tags = list(TAGS)

    space = FockSpace(*cutoffs)
    for rk in realizations:
        g = build_generators(space, rk)
        rep = verify_algebra(g, interior_margin=args.margin or 2, tolerance=tol)
        qrep = verify_qpm_closure(g, interior_margin=args.margin or 2, tolerance=tol)
        reports[f"fock:{rk.value}"] = json.loads(rep.to_json())
        reports[f"fock:{rk.value}:q_closure"] = json.loads(qrep.to_json())
        reports[f"fock:{rk.value}:j_v_sign"] = j_v_sign_report(g)
        ok &= rep.passed and qrep.passed
        suites.append(f"fock:{rk.value}")

    if tags:
        _require(parser, args.j is None or args.j >= 1, "--j must be >= 1")
        js = [args.j] if args.j else list(range(1, 9))
        for tag in tags:
            for j in js:
                rep = verify_transformed_algebra(j, tag)
                key = f"transformed:{tag.name}:j={j}"
                reports[key] = json.loads(rep.to_json())
                reports[f"{key}:structure"] = structure_report(j, tag)
                ok &= rep.passed
                suites.append(key)
        if args.suite in ("intertwining", "all"):
            for tag in tags:
                if tag.metric == "S":
                    rep = verify_intertwining(space, tag)
                    reports[f"intertwining:{tag.name}"] = rep.to_json_dict()
                    ok &= rep.passed
                else:
                    for variant in ("tabulated", "derived"):
                        rep = verify_intertwining(space, tag, variant)
                        reports[f"intertwining:{tag.name}:{variant}"] = rep.to_json_dict()
                        # the tabulated T table is a recorded finding, not a gate

    payload = {
        "meta": _header("verify-algebra", {
            "cutoffs": cutoffs, "tolerance": tol, "suites": suites,
        }),
        "passed": ok,
        "reports": reports,
    }
    _emit(args, _json_text(payload))
    return 0 if ok else 1


# -- spectrum ------------------------------------------------------------------


def _jck_params(args, parser) -> JCKerrParams:
    vals = {k: getattr(args, k) for k in ("omega", "omega0", "kappa", "lam")}
    missing = [k for k, v in vals.items() if v is None]
    _require(parser, not missing, f"missing couplings: {missing}")
    return JCKerrParams(vals["omega"], vals["omega0"], vals["kappa"], vals["lam"])


def _mjc_params(args, parser) -> MJCParams:
    vals = {k: getattr(args, k) for k in ("omega", "omega0", "l1", "l2")}
    missing = [k for k, v in vals.items() if v is None]
    _require(parser, not missing, f"missing couplings: {missing}")
    return MJCParams(vals["omega"], vals["omega0"], vals["l1"], vals["l2"])


def cmd_spectrum(args, parser) -> int:
    _require(parser, args.j is not None and args.j >= 1, "--j must be >= 1")
    j = args.j
    warnings: list[str] = []
    if args.model == "jck":
        p = _jck_params(args, parser)
        method = args.method or "recurrence"
        _require(parser, method in ("recurrence", "dense"),
                 "jck supports --method recurrence|dense")
        if method == "recurrence":
            spec = jck_recurrence(j, p)
            warnings = spec.warnings
        else:
            spec = dense_spectrum("jck", j, p, build_jck_reduced(j, p))
    else:
        p = _mjc_params(args, parser)
        method = args.method or "dense"
        _require(parser, method in ("dense", "closed-form"),
                 "mjc supports --method dense|closed-form")
        if method == "dense":
            spec = dense_spectrum("mjc", j, p, build_mjc_reduced(j, p))
        else:
            results = mjc_closed_form_all(j, p)
            accepted = [b.E for r in results for b in r.branches if b.accepted]
            spec = Spectrum(
                model="mjc",
                j=j,
                params=p.as_dict(),
                provenance="closed_form",
                eigenvalues=[complex(v) for v in accepted],
                residual=max(
                    (b.residual for r in results for b in r.branches if b.accepted),
                    default=0.0,
                ),
                audit={"branches": [r.to_json_dict() for r in results]},
            )

    payload = {
        "meta": _header("spectrum", {"model": args.model, "j": j,
                                     "method": method, "params": p.as_dict()}),
        "spectrum": spec.to_json_dict(),
    }
    if args.format == "csv":
        _emit(args, spec.to_csv_text())
    else:
        _emit(args, _json_text(payload))
    return 0


# -- compare -------------------------------------------------------------------


def cmd_compare(args, parser) -> int:
    _require(parser, args.j is not None and args.j >= 1, "--j must be >= 1")
    cutoffs = args.cutoffs or [args.j + 4, args.j + 4]
    _require(parser, len(cutoffs) == 2, "--cutoffs needs two integers")
    _require(parser, min(cutoffs) >= args.j + 4,
             f"cutoffs must be >= j + 4 = {args.j + 4}")
    space = FockSpace(*cutoffs)
    if args.model == "jck":
        p = _jck_params(args, parser)
    else:
        p = _mjc_params(args, parser)
    report = compare_reduced_vs_full(args.model, args.j, p, space)
    payload = {
        "meta": _header("compare", {"model": args.model, "j": args.j,
                                    "cutoffs": cutoffs, "params": p.as_dict()}),
        "audit": report.to_json_dict(),
        "all_matched": report.all_matched,
    }
    _emit(args, _json_text(payload))
    return 0


# -- gamma ---------------------------------------------------------------------


def cmd_gamma(args, parser) -> int:
    max_total = args.max_total if args.max_total is not None else 10
    _require(parser, max_total >= 0, "--max-total must be >= 0")
    space = FockSpace(max_total, 2 * max_total)
    report = gamma_report(space, max_total)
    table = {}
    for which in ("gamma1", "gamma2"):
        rows = []
        for n1 in range(max_total + 1):
            for n2 in range(max_total - n1 + 1):
                res = gamma_action(which, (n1, n2, 0))
                rows.append({
                    "state": [n1, n2],
                    "target": [res.state.n1, res.state.n2],
                    "amplitude": res.amplitude,
                    "annihilated": res.annihilated,
                })
        table[which] = rows
    payload = {
        "meta": _header("gamma", {"max_total": max_total}),
        "actions": table,
        "matrix_power_comparison": {
            "max_abs_tabulated_minus_oracle": report["max_abs_tabulated_minus_oracle"],
            "gamma1_matches_matrix_power": report["gamma1_matches_matrix_power"],
            "gamma2_matches_matrix_power": report["gamma2_matches_matrix_power"],
        },
    }
    _emit(args, _json_text(payload))
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osp21",
        description="osp(2,1) realization checks, QES transforms, and "
                    "Jaynes-Cummings spectra",
    )
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", help="output file (JSON/CSV)")
        sp.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
        sp.add_argument("--tol", type=float, default=None)

    va = sub.add_parser("verify-algebra", help="structure-table suites")
    va.add_argument("--realization", choices=["ferma", "fermb", "all"])
    va.add_argument("--tag", help="s+1 | s-1 | t+1 | t-1 | all")
    va.add_argument("--j", type=int, default=None)
    va.add_argument("--cutoffs", type=int, nargs=2, default=None)
    va.add_argument("--margin", type=int, default=None)
    va.add_argument("--suite", choices=["fock", "transformed", "intertwining", "all"],
                    default=None)
    common(va)

    sp_ = sub.add_parser("spectrum", help="sector spectra")
    sp_.add_argument("model", choices=["jck", "mjc"])
    sp_.add_argument("--j", type=int, default=None)
    sp_.add_argument("--method", choices=["recurrence", "dense", "closed-form"],
                     default=None)
    sp_.add_argument("--omega", type=float, default=None)
    sp_.add_argument("--omega0", type=float, default=None)
    sp_.add_argument("--kappa", type=float, default=None)
    sp_.add_argument("--lambda", dest="lam", type=float, default=None)
    sp_.add_argument("--l1", type=float, default=None)
    sp_.add_argument("--l2", type=float, default=None)
    common(sp_)

    cp = sub.add_parser("compare", help="reduced vs full spectrum audit")
    cp.add_argument("model", choices=["jck", "mjc"])
    cp.add_argument("--j", type=int, default=None)
    cp.add_argument("--cutoffs", type=int, nargs=2, default=None)
    cp.add_argument("--omega", type=float, default=None)
    cp.add_argument("--omega0", type=float, default=None)
    cp.add_argument("--kappa", type=float, default=None)
    cp.add_argument("--lambda", dest="lam", type=float, default=None)
    cp.add_argument("--l1", type=float, default=None)
    cp.add_argument("--l2", type=float, default=None)
    common(cp)

    ga = sub.add_parser("gamma", help="Gamma action table and oracle comparison")
    ga.add_argument("--max-total", dest="max_total", type=int, default=None)
    common(ga)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        _apply_config(args, _read_config(args.config, parser))
    handlers = {
        "verify-algebra": cmd_verify_algebra,
        "spectrum": cmd_spectrum,
        "compare": cmd_compare,
        "gamma": cmd_gamma,
    }
    try:
        return handlers[args.command](args, parser)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
