"""``fockexp`` command line: file validation, kernel application, symbols, expansion and verification.

Exit codes: 0 success, 1 a checked property failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from . import bounds as _bounds
from .expansion import BLOCKS, KernelFamily, expand_full, extract_kappa, reconstruct, reconstruct_full
from .fileio import (
    FormatError,
    dumps,
    family_from_json,
    family_to_json,
    fock_from_json,
    fock_to_json,
    loads,
    matrix_to_json,
    ms_from_json,
    ms_to_json,
    operator_from_json,
    value_to_json,
    vector_from_json,
    wedge_from_json,
)
from .fock import FockVector, ParityError, s_transform
from .kernelop import iko_apply, symbol_eval
from .modespace import ModeSpaceError, build_mode_space, default_lambdas
from .opmatrix import OperatorMatrix
from .suites import SUITES, run_suite
from .wedge import WedgeTensor, wedge_basis


class UsageError(Exception):
    pass


# -- configuration ---------------------------------------------------------------

def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _mode_space(args, arith=None):
    arith = arith or args.arith
    try:
        if args.space:
            return ms_from_json(loads(_read(args.space)), arith)
        if args.modes < 1:
            raise UsageError(f"--modes must be at least 1, got {args.modes}")
        lambdas = _split(args.lambdas) if args.lambdas else [str(x) for x in default_lambdas(args.modes)]
        return build_mode_space(args.modes, lambdas, args.alpha, arith=arith)
    except (ModeSpaceError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    return loads(_read(path))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(text: str | None) -> dict:
    if text in (None, "", "default"):
        return dict(_bounds.DEFAULT_GRID)
    grid = dict(_bounds.DEFAULT_GRID)
    try:
        for part in text.split(";"):
            key, _, vals = part.partition("=")
            key = key.strip()
            if key not in grid:
                raise UsageError(f"grid keys are p, q and r; got {key!r}")
            grid[key] = tuple(float(Fraction(v)) for v in _split(vals))
            if not grid[key]:
                raise UsageError(f"grid axis {key} is empty")
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --grid {text!r}: {exc}") from exc
    if any(r <= 0 for r in grid["r"]):
        raise UsageError("grid values of r must be positive")
    return grid


def _suites(text: str) -> list[str]:
    names = _split(text)
    if "all" in names:
        return list(SUITES)
    bad = [n for n in names if n not in SUITES]
    if bad or not names:
        raise UsageError(f"unknown suite(s) {bad or text!r}; choose from {', '.join(SUITES)} or all")
    return [s for s in SUITES if s in names]


def _vector_arg(text: str, ms) -> WedgeTensor:
    vals = _split(text)
    if len(vals) != ms.d:
        raise UsageError(f"--f needs {ms.d} comma-separated values, got {len(vals)}")
    return vector_from_json(vals if ms.exact else [float(Fraction(v)) for v in vals], ms)


# -- operators as matrices -----------------------------------------------------------

def _as_matrix(op) -> OperatorMatrix:
    if isinstance(op, OperatorMatrix):
        return op
    M = reconstruct(op)
    if (M.domain, M.codomain) == ("even", "even"):
        return M
    return M.embed("full", "full")


def _load_operator(path: str, ms):
    obj = _load(path)
    if isinstance(obj, dict) and obj.get("kind") == "expansion":
        fams = obj.get("families")
        if not isinstance(fams, dict) or set(fams) != set(BLOCKS):
            raise FormatError(f"an expansion file holds the families {', '.join(BLOCKS)}")
        return {k: family_from_json(fams[k], ms) for k in BLOCKS}
    return operator_from_json(obj, ms)


def _residual(a: OperatorMatrix, b: OperatorMatrix, ms):
    return value_to_json(a.max_abs_diff(b), ms)


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    ms = _mode_space(args)
    obj = _load(args.file)
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    if "dim" in obj:
        space = ms_from_json(obj, args.arith)
        summary = {"kind": "space", **ms_to_json(space)}
    elif "components" in obj:
        phi = fock_from_json(obj, ms)
        summary = {"kind": "vector", "parity": phi.parity, "nonzero": len(phi.coeffs)}
    else:
        op = _load_operator(args.file, ms)
        if isinstance(op, OperatorMatrix):
            summary = {"kind": "matrix", "parity": op.domain, "shape": list(op.data.shape),
                       "blocks": [list(k) for k in op.blocks()]}
        elif isinstance(op, KernelFamily):
            summary = {"kind": "kernels", "terms": [list(k) for k in sorted(op.terms)],
                       "domain": op.domain, "codomain": op.codomain}
        else:
            summary = {"kind": "expansion", "families": {k: [list(t) for t in sorted(f.terms)] for k, f in op.items()}}
    summary["dim"] = ms.d if summary["kind"] != "space" else summary["dim"]
    summary["status"] = "ok"
    _emit(dumps(summary), args.out)
    return 0


def cmd_apply(args) -> int:
    ms = _mode_space(args)
    op = _load_operator(args.operator, ms)
    phi = fock_from_json(_load(args.vector), ms)
    if isinstance(op, KernelFamily) and op.left_W is None and op.right_W is None:
        # literal kernel action, term by term
        out = FockVector(ms)
        for K in op.terms.values():
            out = out + iko_apply(K, phi)
    else:
        M = op if isinstance(op, OperatorMatrix) else _as_matrix(op) if isinstance(op, KernelFamily) \
            else reconstruct_full(op)
        try:
            out = M.apply(phi)
        except ValueError as exc:
            raise ParityError(str(exc)) from exc
    _emit(dumps(fock_to_json(out)), args.out)
    return 0


def cmd_symbol(args) -> int:
    ms = _mode_space(args)
    zeta = wedge_from_json(_load(args.zeta), ms, 2) if args.zeta else WedgeTensor(ms, 2)
    if args.vec and not args.op:
        value = s_transform(fock_from_json(_load(args.vec), ms), zeta)
        kind = "s_transform"
    elif args.op and not args.vec:
        eta = wedge_from_json(_load(args.eta), ms, 2) if args.eta else WedgeTensor(ms, 2)
        M = _load_operator(args.op, ms)
        M = reconstruct_full(M) if isinstance(M, dict) else _as_matrix(M)
        if (M.domain, M.codomain) == ("full", "full"):
            M = M.restrict("even", "even")
        value = symbol_eval(M, zeta, eta)
        kind = "symbol"
    else:
        raise UsageError("symbol needs exactly one of --op (operator symbol) or --vec (S-transform)")
    _emit(dumps({"kind": kind, "value": value_to_json(value, ms)}), args.out)
    return 0


def cmd_expand(args) -> int:
    ms = _mode_space(args)
    op = _load_operator(args.operator, ms)
    if not isinstance(op, OperatorMatrix):
        raise FormatError("expand takes a matrix operator file")
    if op.domain == "even":
        fam = extract_kappa(op)
        doc = family_to_json(fam)
        doc["residual"] = _residual(reconstruct(fam), op, ms)
    else:
        f = _vector_arg(args.f, ms) if args.f else wedge_basis(ms, 1)
        try:
            fams = expand_full(op, f)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        doc = {"kind": "expansion", "families": {k: family_to_json(v) for k, v in fams.items()},
               "residual": _residual(reconstruct_full(fams), op, ms)}
    _emit(dumps(doc), args.out)
    return 0


def cmd_reconstruct(args) -> int:
    ms = _mode_space(args)
    op = _load_operator(args.operator, ms)
    if isinstance(op, OperatorMatrix):
        raise FormatError("reconstruct takes a kernels or expansion file")
    M = reconstruct_full(op) if isinstance(op, dict) else _as_matrix(op)
    _emit(dumps(matrix_to_json(M)), args.out)
    return 0


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x != x:
        return "nan"
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return x


def cmd_verify(args) -> int:
    names = _suites(args.suite)
    grid = _parse_grid(args.grid)
    if args.instances < 1:
        raise UsageError("--instances must be positive")
    tol = args.tol if args.tol is not None else _bounds.TOL
    ms = _mode_space(args, "rational")
    fms = _mode_space(args, "float")
    rows = []
    for name in names:
        space = fms if name == "bounds" else ms
        for r in run_suite(name, space, seed=args.seed, grid=grid, instances=args.instances, tol=tol):
            rows.append({"suite": name, "check": r.name, "anchor": r.anchor, "passed": r.passed,
                         "checked": r.checked, "counterexample": _jsonable(r.counterexample),
                         "detail": _jsonable(r.detail)})
    ok = all(r["passed"] for r in rows)
    if args.report == "json":
        doc = {"config": {"modes": ms.d, "lambdas": ms_to_json(ms)["lambdas"], "alpha": ms_to_json(ms)["alpha"],
                          "seed": args.seed, "suites": names, "grid": {k: list(v) for k, v in grid.items()},
                          "instances": args.instances, "tolerance": tol},
               "results": rows, "passed": ok}
        text = dumps(doc)
    else:
        lines = []
        for r in rows:
            mark = "PASS" if r["passed"] else "FAIL"
            lines.append(f"{mark}  {r['suite']:<9} {r['check']}  [{r['anchor']}; {r['checked']} checked]")
            if not r["passed"]:
                lines.append(f"      counterexample: {dumps(r['counterexample']).strip()}")
        lines.append(f"{sum(r['passed'] for r in rows)}/{len(rows)} checks passed")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 1


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arith", choices=("rational", "float"), default="rational")
    common.add_argument("--modes", type=int, default=4, help="number of modes d")
    common.add_argument("--lambdas", help="comma-separated weights, default 2,3,...,d+1")
    common.add_argument("--alpha", default="1", help="Schwartz exponent alpha")
    common.add_argument("--space", help="mode-space JSON file; overrides --modes/--lambdas/--alpha")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="fockexp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fockexp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse a space, vector or operator file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("apply", parents=[common], help="apply an operator file to a vector file")
    s.add_argument("operator")
    s.add_argument("vector")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("symbol", parents=[common], help="operator symbol or S-transform")
    s.add_argument("--op", help="operator file")
    s.add_argument("--vec", help="vector file (S-transform)")
    s.add_argument("--zeta", help="degree-2 vector file, default 0")
    s.add_argument("--eta", help="degree-2 vector file, default 0")
    s.set_defaults(func=cmd_symbol)

    s = sub.add_parser("expand", parents=[common], help="kernel expansion of a matrix operator")
    s.add_argument("operator")
    s.add_argument("--f", help="comma-separated unit vector for the odd blocks, default e1")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("reconstruct", parents=[common], help="matrix of a kernels or expansion file")
    s.add_argument("operator")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("verify", parents=[common], help="run property suites")
    s.add_argument("--suite", default="all", help=f"comma list of {', '.join(SUITES)} or all")
    s.add_argument("--grid", default="default", help='"default" or e.g. "p=-1,0;q=0;r=1/2,1"')
    s.add_argument("--instances", type=int, default=20, help="random instances per bound")
    s.add_argument("--tol", type=float, help="relative tolerance for the bounds suite")
    s.add_argument("--report", choices=("json", "text"), default="text")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormatError, ParityError, ModeSpaceError, _bounds.BoundDomainError) as exc:
        print(f"fockexp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
