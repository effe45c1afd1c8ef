"""Command-line front end.

Exit status: 0 when every check passes, 1 on a numeric failure (a residual
over threshold or a non-converging oracle), 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import appell, laplace, oracle, physics, verify
from .appell import F1Params, F2Params
from .errors import ConvergenceError, HypergeometricError
from .special_core import DEFAULT_TOL, MAX_TERMS

TOL_ENV = "APPELLF2_TOL"
CHECK_TOL = 1e-8  # residual above which a --check run exits 1
FORMATS = ("plain", "json", "csv")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    tolerance: float = DEFAULT_TOL
    output_format: str = "plain"
    seed: int = 0
    budget: int = MAX_TERMS

    def __post_init__(self):
        if not 0 < self.tolerance <= 1e-2:
            raise UsageError(f"--tol must lie in (0, 1e-2], got {self.tolerance!r}")
        if self.output_format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if self.seed < 0:
            raise UsageError("--seed must be a nonnegative integer")
        if self.budget < 1:
            raise UsageError("--budget must be positive")


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


# ---------------------------------------------------------------------------
# rendering


def _fmt(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def _result_dict(value, abs_error, method, terms) -> dict:
    return {"value": float(value), "abs_error": float(abs_error), "method": method, "terms": int(terms)}


def _from_eval(r) -> dict:
    return _result_dict(r.value, r.abs_error_estimate, r.method, r.terms_used)


def _check_dict(oracle_value: float, value: float) -> dict:
    diff = abs(value - oracle_value)
    rel = diff / max(abs(value), abs(oracle_value), 1e-300)
    return {"oracle_value": float(oracle_value), "rel_residual": rel}


def render(doc: dict, fmt: str, csv_rows: tuple[list[str], list[list]] | None = None) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if csv_rows is None:
            res = doc["result"]
            header = ["command", "value", "abs_error", "method", "terms"]
            row = [doc["command"], res["value"], res["abs_error"], res["method"], res["terms"]]
            if "check" in doc:
                header += ["oracle_value", "rel_residual"]
                row += [doc["check"]["oracle_value"], doc["check"]["rel_residual"]]
            csv_rows = (header, [row])
        header, rows = csv_rows
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    lines = []
    for key, val in doc.get("result", {}).items():
        if isinstance(val, (list, dict)):
            continue
        lines.append(f"{key}: {_fmt(val)}")
    for key, val in doc.get("check", {}).items():
        lines.append(f"{key}: {_fmt(val)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_f2(args, cfg: CliConfig):
    p = F2Params(args.d, args.a, args.ap, args.b, args.bp, args.x, args.y)
    inputs = dict(zip(("d", "a", "a_prime", "b", "b_prime", "x", "y"), p.as_tuple()))
    if args.brute_force:
        v = oracle.f2_bruteforce(p)
        doc = {"command": "f2", "inputs": inputs, "result": _result_dict(v, abs(v) * 1e-14, "bruteforce", 0)}
        return doc, EXIT_OK
    r = appell.f2_eval(p, cfg.tolerance)
    doc = {"command": "f2", "inputs": inputs, "result": _from_eval(r)}
    status = EXIT_OK
    if args.check:
        doc["check"] = _check_dict(oracle.f2_bruteforce(p), r.value)
        status = EXIT_OK if doc["check"]["rel_residual"] <= CHECK_TOL else EXIT_NUMERIC
    return doc, status


def cmd_f1(args, cfg: CliConfig):
    p = F1Params(args.a, args.b, args.bp, args.c, args.x, args.y)
    inputs = {"a": p.a, "b": p.b, "b_prime": p.b_prime, "c": p.c, "x": p.x, "y": p.y}
    r = appell.f1_series(p, cfg.tolerance, cfg.budget)
    return {"command": "f1", "inputs": inputs, "result": _from_eval(r)}, EXIT_OK


def cmd_integral(args, cfg: CliConfig):
    if args.gamma is not None:
        for name in ("s", "p", "ap", "kp"):
            if getattr(args, name) is None:
                raise UsageError(f"the Landau-Lifshitz form needs --{name}")
        jp = laplace.JspParams(args.gamma, args.s, args.p, args.a, args.ap, args.k, args.kp, args.h)
        inputs = {"gamma": jp.gamma, "s": jp.s, "p": jp.p, "a": jp.a, "a_prime": jp.a_prime,
                  "k": jp.k, "k_prime": jp.k_prime, "h": jp.h}
        r = laplace.landau_lifshitz_J(jp, args.method, cfg.tolerance)
        integrand, scale = jp.integrand(), max(1.0, jp.gamma + jp.s) / jp.h
    else:
        if args.d is None or args.b is None:
            raise UsageError("the product form needs --d and --b")
        second = (args.ap, args.bp, args.kp)
        if any(v is not None for v in second) and any(v is None for v in second):
            raise UsageError("give all of --ap, --bp, --kp or none")
        spec = laplace.LaplaceProductSpec(args.d, args.h, args.a, args.b, args.k, *second)
        inputs = {"d": spec.d, "h": spec.h, "a": spec.a, "b": spec.b, "k": spec.k}
        if not spec.single:
            inputs.update(a_prime=spec.a_prime, b_prime=spec.b_prime, k_prime=spec.k_prime)
        r = laplace.laplace_product(spec, cfg.tolerance)
        integrand, scale = spec.integrand(), spec.quad_scale()
    doc = {"command": "integral", "inputs": inputs, "result": _from_eval(r)}
    status = EXIT_OK
    if args.check:
        q = oracle.integrate_semiinfinite(integrand, laplace.QUAD_TOL, scale=scale, max_evaluations=cfg.budget * 100)
        doc["check"] = _check_dict(q.value, r.value)
        status = EXIT_OK if doc["check"]["rel_residual"] <= CHECK_TOL else EXIT_NUMERIC
    return doc, status


def _parse_assignments(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} must look like name=value")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise UsageError(f"parameter {name!r} has non-numeric value {val!r}") from None
    return out


def cmd_appendix(args, cfg: CliConfig):
    if args.identity is None or args.list:
        rows = [[iid, " ".join(laplace.appendix_entry(iid).names)] for iid in laplace.APPENDIX_IDS]
        doc = {"command": "appendix", "inputs": {}, "result": {"identities": {r[0]: r[1].split() for r in rows}}}
        if cfg.output_format == "plain":
            return "".join(f"{r[0]}: {r[1]}\n" for r in rows), EXIT_OK
        return (doc, (["identity", "parameters"], rows)), EXIT_OK
    if args.identity not in laplace.APPENDIX:
        raise UsageError(f"unknown identity {args.identity!r}; known: {', '.join(laplace.APPENDIX_IDS)}")
    params = _parse_assignments(args.param)
    rep = laplace.appendix_identity(args.identity, params)
    doc = {"command": "appendix", "inputs": dict(rep.params, identity=args.identity),
           "result": _result_dict(rep.rhs, 0.0, "closed_form", 1),
           "check": _check_dict(rep.lhs, rep.rhs)}
    status = EXIT_OK if doc["check"]["rel_residual"] <= CHECK_TOL or rep.abs_residual <= CHECK_TOL * 1e-3 else EXIT_NUMERIC
    return doc, status


def cmd_verify(args, cfg: CliConfig):
    res = verify.run_suite(args.suite, cfg.seed, cfg.tolerance)
    doc = {"command": "verify", "inputs": {"suite": args.suite, "seed": cfg.seed, "tol": cfg.tolerance},
           "result": {"cases": len(res.cases), "failures": len(res.failures), "passed": res.passed,
                      "reports": [c.as_dict() for c in res.cases]}}
    status = EXIT_OK if res.passed else EXIT_NUMERIC
    if cfg.output_format == "csv":
        rows = [[c.suite, c.identity_id, c.report.rel_residual if c.report else float("nan"),
                 "pass" if c.passed else "FAIL", json.dumps(c.as_dict()["params"])] for c in res.cases]
        return (doc, (["suite", "identity", "rel_residual", "status", "params"], rows)), status
    if cfg.output_format == "plain":
        lines = [f"{args.suite}: {len(res.cases)} cases, {len(res.failures)} failures"]
        for c in res.failures:
            d = c.as_dict()
            lines.append(f"FAIL {c.suite} {c.identity_id} params={json.dumps(d['params'])} "
                         f"rel_residual={d.get('rel_residual')} {d.get('error', '')}".rstrip())
        return "\n".join(lines) + "\n", status
    return doc, status


def cmd_matrix(args, cfg: CliConfig):
    if args.basis == "spiked":
        if (args.gamma is None) == (args.A is None):
            raise UsageError("spiked basis needs exactly one of --gamma or --A")
        basis = physics.OscillatorBasis.from_gamma(args.gamma) if args.gamma is not None else physics.OscillatorBasis(args.A)
    else:
        if args.B is None:
            raise UsageError("kratzer basis needs --B")
        basis = physics.KratzerBasis(0.0 if args.A is None else args.A, args.B, args.l)
    if args.variational and args.lam is None:
        raise UsageError("--variational needs --lambda")
    block = physics.build_perturbation_matrix(basis, args.alpha, args.n)
    result = {"size": block.size, "alpha": block.alpha, "basis": block.basis,
              "entries": [[float(v) for v in row] for row in block.entries]}
    if args.variational:
        result["lambda"] = args.lam
        result["eigenvalues"] = [float(v) for v in physics.variational_eigenvalues(basis, block, args.lam)]
        if args.h0:
            result["unperturbed"] = [float(v) for v in physics.unperturbed_energies(basis, block.size)]
    doc = {"command": "matrix", "inputs": dict(block.basis, alpha=args.alpha, n=args.n), "result": result}
    if cfg.output_format == "csv":
        out = render(doc, "csv", (["n", "m", "value"], [list(r) for r in block.rows()]))
        if args.variational:
            extra = [[k, v] for k, v in enumerate(result["eigenvalues"])]
            out += "\n" + render(doc, "csv", (["k", "eigenvalue"], extra))
            if args.h0:
                out += "\n" + render(doc, "csv", (["n", "energy"], [[k, v] for k, v in enumerate(result["unperturbed"])]))
        return out, EXIT_OK
    if cfg.output_format == "plain":
        lines = [" ".join(_fmt(float(v)) for v in row) for row in block.entries]
        if args.variational:
            lines.append("eigenvalues: " + " ".join(_fmt(v) for v in result["eigenvalues"]))
            if args.h0:
                lines.append("unperturbed: " + " ".join(_fmt(v) for v in result["unperturbed"]))
        return "\n".join(lines) + "\n", EXIT_OK
    return doc, EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="appellf2", description="Appell F2, Laplace integrals and matrix elements")
    ap.add_argument("--tol", type=float, default=None, help=f"evaluation tolerance (default 1e-12, or ${TOL_ENV})")
    ap.add_argument("--format", choices=FORMATS, default="plain", dest="output_format")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized verification grids")
    ap.add_argument("--budget", type=int, default=MAX_TERMS, help="series term / quadrature budget")
    sub = ap.add_subparsers(dest="command", required=True)

    f2 = sub.add_parser("f2", help="evaluate F2(d; a, a'; b, b'; x, y)")
    for name in ("d", "a", "ap", "b", "bp", "x", "y"):
        f2.add_argument(f"--{name}", type=float, required=True)
    f2.add_argument("--brute-force", action="store_true", help="use the slow oracle sum instead")
    f2.add_argument("--check", action="store_true", help="compare with the oracle sum")
    f2.set_defaults(func=cmd_f2)

    f1 = sub.add_parser("f1", help="evaluate F1(a; b, b'; c; x, y)")
    for name in ("a", "b", "bp", "c", "x", "y"):
        f1.add_argument(f"--{name}", type=float, required=True)
    f1.set_defaults(func=cmd_f1)

    it = sub.add_parser("integral", help="Laplace integral of 1F1 products")
    it.add_argument("--h", type=float, required=True)
    it.add_argument("--a", type=float, required=True)
    it.add_argument("--k", type=float, required=True)
    for name in ("d", "b", "ap", "bp", "kp", "gamma"):
        it.add_argument(f"--{name}", type=float)
    it.add_argument("--s", type=int)
    it.add_argument("--p", type=int)
    it.add_argument("--method", choices=("auto", "gordon_1_2", "continuation_3_5"), default="auto")
    it.add_argument("--check", action="store_true", help="also integrate by quadrature")
    it.set_defaults(func=cmd_integral)

    apx = sub.add_parser("appendix", help="check one catalog identity by quadrature")
    apx.add_argument("identity", nargs="?")
    apx.add_argument("--param", action="append", metavar="NAME=VALUE")
    apx.add_argument("--list", action="store_true")
    apx.set_defaults(func=cmd_appendix)

    ver = sub.add_parser("verify", help="run a seeded verification suite")
    ver.add_argument("suite", choices=verify.SUITES + ("all",))
    ver.set_defaults(func=cmd_verify)

    mx = sub.add_parser("matrix", help="perturbation matrix block")
    mx.add_argument("basis", choices=("spiked", "kratzer"))
    mx.add_argument("--gamma", type=float)
    mx.add_argument("--A", type=float)
    mx.add_argument("--B", type=float)
    mx.add_argument("--l", type=int, default=0)
    mx.add_argument("--alpha", type=float, required=True)
    mx.add_argument("--n", type=int, required=True, help="block size N")
    mx.add_argument("--variational", action="store_true")
    mx.add_argument("--lambda", type=float, dest="lam")
    mx.add_argument("--h0", action="store_true", help="also print the unperturbed energies")
    mx.set_defaults(func=cmd_matrix)
    return ap


def _move_globals_first(argv: list[str]) -> list[str]:
    """Allow the global flags after the subcommand as well as before it."""
    globals_ = {"--tol", "--format", "--seed", "--budget"}
    head, rest = [], []
    i = 0
    while i < len(argv):
        tok = argv[i]
        name = tok.split("=", 1)[0]
        if name in globals_:
            if "=" in tok:
                head.append(tok)
            else:
                head.extend(argv[i:i + 2])
                i += 1
        else:
            rest.append(tok)
        i += 1
    return head + rest


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_move_globals_first(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = args.tol if args.tol is not None else default_tolerance()
        cfg = CliConfig(tol, args.output_format, args.seed, args.budget)
        out, status = args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except HypergeometricError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    if isinstance(out, str):
        stdout.write(out)
    elif isinstance(out, tuple):
        doc, rows = out
        stdout.write(render(doc, cfg.output_format, rows))
    else:
        stdout.write(render(out, cfg.output_format))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
