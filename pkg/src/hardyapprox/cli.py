"""Command-line driver: JSON problems in, deterministic JSON (or CSV) results out.

Exit codes: 0 success, 1 file I/O failure, 2 validation error,
3 non-convergence, 4 structure violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .approx import ApproxConfig, best_approx
from .circle_fn import (
    AnalyticPolynomial,
    FiniteBlaschke,
    RationalDiskFunction,
    SampledCircleFunction,
    TrigPolynomial,
    circle_grid,
    fourier_coeffs,
)
from .interp import PickProblem, SchurProblem, extremal_functional, interpolate_etheta, pick_minimal, schur_minimal
from .structure import dual_extremal, extract_certificate, holder_equality_check, is_badly_approximable

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NONCONVERGENCE, EXIT_STRUCTURE = 0, 1, 2, 3, 4
COMMANDS = ("approx", "certify", "dual", "badly", "interp-etheta", "schur", "pick", "extremal", "selftest")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# Deterministic JSON
# --------------------------------------------------------------------------


def _plain(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k, ensure_ascii=False)}: {_encode(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Byte-stable JSON: insertion-ordered keys, floats at 17 significant digits."""
    return _encode(_plain(obj))


# --------------------------------------------------------------------------
# Input parsing
# --------------------------------------------------------------------------


def load_json(text_or_path: str):
    """Parse ``text_or_path`` as inline JSON when it starts with ``{`` or ``[``, else read the file."""
    src = text_or_path.strip()
    if src[:1] in "{[":
        text, origin = src, "inline input"
    else:
        try:
            text = Path(text_or_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {text_or_path}: {exc.strerror or exc}", EXIT_IO) from exc
        origin = text_or_path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {origin} at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                       EXIT_VALIDATION) from exc


def parse_complex(text: str) -> complex:
    s = text.strip()
    if s.startswith("["):
        v = load_json(s)
        if not (isinstance(v, list) and len(v) == 2):
            raise CliError(f"expected [re, im], got {text}", EXIT_VALIDATION)
        return complex(float(v[0]), float(v[1]))
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise CliError(f"not a complex number: {text}", EXIT_VALIDATION) from exc


def _complex_list(v) -> list[complex]:
    if not isinstance(v, list):
        raise CliError("expected a list of [re, im] pairs", EXIT_VALIDATION)
    out = []
    for z in v:
        if isinstance(z, (int, float)):
            out.append(complex(z))
        elif isinstance(z, list) and len(z) == 2:
            out.append(complex(float(z[0]), float(z[1])))
        else:
            raise CliError(f"bad complex entry {z!r}", EXIT_VALIDATION)
    return out


def parse_function(obj):
    """Trig polynomial ``{"type": "trig", "coeffs": {...}}`` or rational ``{"type": "rational", ...}``."""
    if not isinstance(obj, dict):
        raise CliError("function must be a JSON object", EXIT_VALIDATION)
    kind = obj.get("type", "trig")
    if kind == "trig":
        if not isinstance(obj.get("coeffs"), dict):
            raise CliError("trig input needs a 'coeffs' map of frequency -> [re, im]", EXIT_VALIDATION)
        return TrigPolynomial({int(k): _complex_list([v])[0] for k, v in obj["coeffs"].items()})
    if kind == "rational":
        return RationalDiskFunction(AnalyticPolynomial(_complex_list(obj["numerator"])),
                                    parse_blaschke(obj["blaschke"]),
                                    AnalyticPolynomial(_complex_list(obj.get("denominator", [[1.0, 0.0]]))))
    raise CliError(f"unknown function type {kind!r}", EXIT_VALIDATION)


def parse_blaschke(obj) -> FiniteBlaschke:
    if isinstance(obj, int):
        return FiniteBlaschke.monomial(obj)
    if not isinstance(obj, dict):
        raise CliError("theta must be an integer degree or {\"zeros\": ..., \"const\": ...}", EXIT_VALIDATION)
    const = _complex_list([obj.get("const", [1.0, 0.0])])[0]
    return FiniteBlaschke(_complex_list(obj.get("zeros", [])), const)


def default_theta(g) -> FiniteBlaschke:
    if isinstance(g, RationalDiskFunction):
        return g.blaschke
    n_neg = max((-k for k in g.coeffs if k < 0), default=0)
    return FiniteBlaschke.monomial(max(n_neg, 1))


def approx_problem(obj):
    """``{"g": <function>, "theta": ...}`` or a bare function object."""
    if isinstance(obj, dict) and "g" in obj:
        g = parse_function(obj["g"])
        theta = parse_blaschke(obj["theta"]) if "theta" in obj else default_theta(g)
    else:
        g = parse_function(obj)
        theta = default_theta(g)
    return g, theta


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _config(args) -> ApproxConfig:
    return ApproxConfig(p=args.p, budget=args.budget, grid=args.grid, tol=args.tol,
                        max_iters=args.max_iters, seed=args.seed)


def _config_json(cfg: ApproxConfig) -> dict:
    return {"p": cfg.p, "budget": cfg.budget, "grid": cfg.grid, "tol": cfg.tol, "max_iters": cfg.max_iters,
            "eps0": cfg.eps0, "eps_floor": cfg.eps_floor, "seed": cfg.seed}


def _need_input(args):
    if args.input is None:
        raise CliError(f"{args.command} needs --input", EXIT_VALIDATION)
    return load_json(args.input)


def _residual_rows(res: SampledCircleFunction):
    theta = np.angle(circle_grid(res.n_points)) % (2 * np.pi)
    return [("residual", float(t), float(abs(v))) for t, v in zip(theta, res.values)]


def _coeff_rows(coeffs, kind: str = "coefficient"):
    return [(kind, k, float(abs(c))) for k, c in enumerate(coeffs)]


def cmd_approx(args, cfg):
    g, theta = approx_problem(_need_input(args))
    res = best_approx(g, cfg)
    out = {"input": {"g": g.to_json(), "theta": theta.to_json()}, "result": res.to_json(),
           "diagnostics": {"converged": res.converged, "iterations": res.iterations}}
    code = EXIT_OK if res.converged else EXIT_NONCONVERGENCE
    rows = _coeff_rows(res.p_g.coeffs) + _residual_rows(res.residual)
    return out, code, rows


def _certify(args, cfg):
    g, theta = approx_problem(_need_input(args))
    res = best_approx(g, cfg)
    if not res.converged:
        return g, theta, res, None
    cert = extract_certificate(res.residual, theta, cfg.p, c_hint=res.distance)
    return g, theta, res, cert


def cmd_certify(args, cfg):
    g, theta, res, cert = _certify(args, cfg)
    out = {"input": {"g": g.to_json(), "theta": theta.to_json()}, "result": {"approx": res.to_json()},
           "diagnostics": {"converged": res.converged}}
    rows = _coeff_rows(res.p_g.coeffs) + _residual_rows(res.residual)
    if cert is None:
        return out, EXIT_NONCONVERGENCE, rows
    out["result"]["certificate"] = cert.to_json()
    out["diagnostics"]["certificate_valid"] = cert.valid
    return out, EXIT_OK if cert.valid else EXIT_STRUCTURE, rows


def cmd_dual(args, cfg):
    g, theta, res, cert = _certify(args, cfg)
    out = {"input": {"g": g.to_json(), "theta": theta.to_json()}, "result": {"approx": res.to_json()},
           "diagnostics": {"converged": res.converged}}
    rows = _coeff_rows(res.p_g.coeffs) + _residual_rows(res.residual)
    if cert is None:
        return out, EXIT_NONCONVERGENCE, rows
    dual = dual_extremal(cert)
    holder = holder_equality_check(cert.residual, dual.h_g, cert.c, cert.p)
    out["result"].update(certificate=cert.to_json(), dual=dual.to_json(), holder_defect=holder)
    ok = cert.valid and dual.valid and holder < 1e-5 * cert.c
    out["diagnostics"].update(certificate_valid=cert.valid, dual_valid=dual.valid)
    return out, EXIT_OK if ok else EXIT_STRUCTURE, rows


def cmd_badly(args, cfg):
    g, theta = approx_problem(_need_input(args))
    flag, cert = is_badly_approximable(g, theta, cfg.p, cfg, cross_check=True)
    cross = cert.diagnostics["cross_check"]
    out = {"input": {"g": g.to_json(), "theta": theta.to_json()},
           "result": {"badly_approximable": flag, "certificate": cert.to_json()},
           "diagnostics": {"solver_agrees": cross["agrees"]}}
    return out, EXIT_OK, _residual_rows(cert.residual)


def cmd_interp(args, cfg):
    obj = _need_input(args)
    if not isinstance(obj, dict) or "f1" not in obj or "theta" not in obj:
        raise CliError("interp-etheta input needs 'f1' (coefficient list) and 'theta'", EXIT_VALIDATION)
    f1 = AnalyticPolynomial(_complex_list(obj["f1"]))
    theta = parse_blaschke(obj["theta"])
    r = interpolate_etheta(f1, theta, cfg.p, cfg)
    out = {"input": {"f1": f1.to_json()["coeffs"], "theta": theta.to_json()}, "result": r.to_json(),
           "diagnostics": r.diagnostics}
    if not r.diagnostics["converged"]:
        code = EXIT_NONCONVERGENCE
    elif not r.diagnostics["certificate_valid"]:
        code = EXIT_STRUCTURE
    else:
        code = EXIT_OK
    return out, code, _coeff_rows(r.taylor(min(64, cfg.grid // 2))) + _residual_rows(r.residual)


def _schur_problem(args) -> SchurProblem:
    if args.a is not None:
        return SchurProblem(_complex_list(load_json(args.a)))
    obj = _need_input(args)
    if isinstance(obj, dict) and "a" in obj:
        return SchurProblem(_complex_list(obj["a"]))
    return SchurProblem(_complex_list(obj))


def _interp_status(r) -> int:
    d = r.diagnostics
    if r.allpass_deviation is not None and r.allpass_deviation > 1e-5 * max(r.sigma, 1e-300):
        return EXIT_STRUCTURE
    if not d.get("blaschke_count_ok", True):
        return EXIT_STRUCTURE
    return EXIT_OK


def cmd_schur(args, cfg):
    prob = _schur_problem(args)
    r = schur_minimal(prob, cfg.grid)
    out = {"input": prob.to_json(), "result": r.to_json(), "diagnostics": r.diagnostics}
    return out, _interp_status(r), _coeff_rows(r.taylor(min(64, cfg.grid // 2))) + _residual_rows(r.residual)


def cmd_pick(args, cfg):
    obj = _need_input(args)
    if not isinstance(obj, dict) or "nodes" not in obj or "values" not in obj:
        raise CliError("pick input needs 'nodes' and 'values'", EXIT_VALIDATION)
    prob = PickProblem(_complex_list(obj["nodes"]), _complex_list(obj["values"]))
    r = pick_minimal(prob, cfg.grid)
    code = _interp_status(r)
    d = r.diagnostics
    if d.get("sigma_relative_gap", 0.0) > 1e-6 or d.get("section_change", 0.0) > 1e-8:
        code = EXIT_NONCONVERGENCE
    out = {"input": prob.to_json(), "result": r.to_json(), "diagnostics": r.diagnostics}
    return out, code, _coeff_rows(r.taylor(min(64, cfg.grid // 2))) + _residual_rows(r.residual)


def cmd_extremal(args, cfg):
    if args.a0 is None or args.a1 is None:
        raise CliError("extremal needs --a0 and --a1", EXIT_VALIDATION)
    a0, a1 = parse_complex(args.a0), parse_complex(args.a1)
    r = extremal_functional(a0, a1, cfg.grid)
    out = {"input": {"a0": a0, "a1": a1}, "result": r, "diagnostics": {"converged": r["converged"]}}
    return out, EXIT_OK if r["converged"] else EXIT_NONCONVERGENCE, None


def cmd_selftest(args, cfg):
    from .acceptance import run_all

    results = run_all(lambda r: print(r.line(), flush=True))
    total = sum(r.seconds for r in results)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed in {total:.1f}s", flush=True)
    out = {"input": {}, "result": {"criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                                                 "detail": r.detail} for r in results]},
           "diagnostics": {"failed": failed}}
    return out, EXIT_OK if not failed else EXIT_STRUCTURE, None


HANDLERS = {"approx": cmd_approx, "certify": cmd_certify, "dual": cmd_dual, "badly": cmd_badly,
            "interp-etheta": cmd_interp, "schur": cmd_schur, "pick": cmd_pick, "extremal": cmd_extremal,
            "selftest": cmd_selftest}


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardy-approx", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p", type=float, default=1.0, help="exponent, 1 <= p < inf")
    ap.add_argument("--budget", type=int, default=None, help="polynomial degree budget M")
    ap.add_argument("--grid", type=int, default=4096, help="number of grid points (power of two)")
    ap.add_argument("--tol", type=float, default=1e-13)
    ap.add_argument("--max-iters", type=int, default=400)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--input", help="path to a JSON problem, or inline JSON")
    ap.add_argument("--output", help="write the result here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--a", help="Schur coefficients as a JSON list of [re, im]")
    ap.add_argument("--a0", help="coefficient of f(0) for extremal")
    ap.add_argument("--a1", help="coefficient of f'(0) for extremal")
    return ap


def versions() -> dict:
    return {"hardyapprox": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def _csv(rows) -> str:
    lines = ["kind,index,value"]
    for kind, idx, val in rows:
        idx_s = str(idx) if isinstance(idx, int) else format(idx, ".17g")
        lines.append(f"{kind},{idx_s},{format(val, '.17g')}")
    return "\n".join(lines) + "\n"


def _thread_limit():
    n = os.environ.get("HARDY_APPROX_THREADS")
    if not n:
        return None
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(n))


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    limiter = _thread_limit()
    try:
        try:
            cfg = _config(args)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_VALIDATION) from exc
        try:
            out, code, rows = HANDLERS[args.command](args, cfg)
        except CliError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise CliError(f"invalid problem: {exc}", EXIT_VALIDATION) from exc
        doc = {"command": args.command, "input": out["input"], "result": out["result"],
               "diagnostics": out["diagnostics"], "versions": versions(), "config": _config_json(cfg)}
        if args.format == "csv":
            if rows is None:
                raise CliError(f"csv output is not available for {args.command}", EXIT_VALIDATION)
            text = _csv(rows)
        else:
            text = dumps(doc) + "\n"
        if args.output:
            try:
                Path(args.output).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise CliError(f"cannot write {args.output}: {exc.strerror or exc}", EXIT_IO) from exc
        elif args.command != "selftest" or args.format == "csv":
            sys.stdout.write(text)
        return code
    except CliError as exc:
        print(f"hardy-approx: error: {exc}", file=sys.stderr)
        return exc.code
    finally:
        if limiter is not None:
            limiter.restore_original_limits()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
