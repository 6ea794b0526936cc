"""Command-line interface.

Subcommands: `fourier` (coefficient formulas), `series` (expanded or
symbolic series), `solve` (problem files to solution files), `eval`
(solutions to CSV grids), and `bessel-zeros`.  All symbolic inputs are
expression strings in the library grammar; floats only appear in CSV
output and in the numeric membrane path.

Exit codes: 0 success, 2 malformed input (expression or problem
schema), 3 expression outside the symbolic fragment, 4 recognized but
unsupported problem, 5 unbound opaque symbol during evaluation, 1 any
other library failure.
"""

import argparse
import itertools
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .calculus import eval_numeric
from .bessel import bessel_j_zeros, bessel_jprime_zeros
from .errors import (DomainError, FourierPDEError, FragmentError, ParseError,
                     UnboundSymbolError, UnsupportedProblemError)
from .expr import Expr
from .fourier import fourier_coeff, fourier_series
from .laplace import (solve_laplace_annulus, solve_laplace_disk,
                      solve_laplace_rectangle, solve_laplace_wedge)
from .membrane import chop, solve_wave_disk
from .parse import parse
from .pde import BoundaryRecord, solve_heat, solve_parabolic, solve_wave
from .piecewise import PiecewiseExpr
from .render import render
from .series import SeriesSolution

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2
EXIT_FRAGMENT = 3
EXIT_UNSUPPORTED = 4
EXIT_UNBOUND = 5

_KINDS = {"trig": "trig", "cos": "cosine", "cosine": "cosine",
          "sin": "sine", "sine": "sine", "complex": "complex"}


def _emit(text: str, path: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _warn(line: Optional[str]) -> None:
    if line:
        print(f"warning: {line}", file=sys.stderr)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise DomainError(f"{path} must contain a JSON object")
    return obj


def _input_function(args) -> Union[str, PiecewiseExpr]:
    if getattr(args, "piecewise", None):
        return PiecewiseExpr.from_json(_load_json(args.piecewise),
                                       default_var=args.var)
    if getattr(args, "expr", None) is not None:
        return args.expr
    raise DomainError("provide --expr or --piecewise")


def _parse_order(value) -> Optional[int]:
    """'inf' -> None (symbolic series); otherwise a positive int."""
    if value is None or value == "inf":
        return None
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise DomainError(f"order must be a positive integer or 'inf', "
                          f"got {value!r}") from None
    if n < 1:
        raise DomainError(f"order must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# fourier / series

def cmd_fourier(args) -> int:
    coeffs = fourier_coeff(_input_function(args), var=args.var, L=args.L,
                           kind=_KINDS[args.kind])
    _warn(coeffs.warning)
    if args.format == "text":
        lines = [f"{k} = {render(v)}" for k, v in coeffs.general.items()]
        for j, vals in coeffs.singular:
            for k, v in vals.items():
                lines.append(f"{k}[{j}] = {render(v)}")
        if coeffs.warning:
            lines.append(f"[{coeffs.warning}]")
        _emit("\n".join(lines), args.output)
    else:
        _emit(json.dumps(coeffs.to_json(), indent=2), args.output)
    return EXIT_OK


def cmd_series(args) -> int:
    terms = _parse_order(args.N)
    result = fourier_series(_input_function(args), var=args.var, L=args.L,
                            kind=_KINDS[args.kind], terms=terms)
    if isinstance(result, SeriesSolution):
        _warn(result.warning)
        if args.format == "text":
            _emit(result.render_text(), args.output)
        else:
            _emit(json.dumps(result.to_json(), indent=2), args.output)
    else:
        if args.format == "text":
            _emit(render(result), args.output)
        else:
            _emit(json.dumps({"expression": render(result)}, indent=2),
                  args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve

def _require(obj: dict, key: str, eq: str):
    if key not in obj:
        raise DomainError(f"'{eq}' problem needs a '{key}' field")
    return obj[key]


def _bc_records(obj: dict, eq: str, count: int) -> List[BoundaryRecord]:
    bc = _require(obj, "bc", eq)
    if not isinstance(bc, list) or len(bc) != count:
        raise DomainError(f"'{eq}' needs a 'bc' list with {count} records")
    return [BoundaryRecord.make(rec) for rec in bc]


def _geometry(obj: dict, eq: str, keys: Tuple[str, ...]) -> dict:
    geom = _require(obj, "geometry", eq)
    if not isinstance(geom, dict):
        raise DomainError("'geometry' must be an object")
    for k in keys:
        if k not in geom:
            raise DomainError(f"'{eq}' geometry needs '{k}'")
    return geom


def _side_flag(rec: BoundaryRecord, eq: str) -> int:
    if rec.kind == "dirichlet":
        return 0
    if rec.kind == "neumann":
        return 1
    raise UnsupportedProblemError(
        f"'{eq}' sides support value or slope conditions only")


def _scalar_value(text, what: str) -> float:
    try:
        return float(eval_numeric(parse(str(text))))
    except FourierPDEError:
        raise DomainError(f"{what} must be a numeric scalar, "
                          f"got {text!r}") from None


def _numeric_sampler(text, what: str):
    e = parse(str(text))

    def sampler(r: float, theta: float) -> float:
        try:
            return float(eval_numeric(e, {"r": r, "theta": theta}))
        except FourierPDEError as exc:
            raise DomainError(f"{what} is not numerically evaluable: "
                              f"{exc}") from None
    return sampler


def _solve_problem(obj: dict) -> dict:
    eq = obj.get("equation")
    if not isinstance(eq, str):
        raise DomainError("problem file needs an 'equation' string")
    order = obj.get("order", "inf")
    terms = _parse_order(order)
    params = {k: v for k, v in obj.items() if k not in ("equation", "order")}
    out = {"equation": eq, "parameters": params,
           "truncation": "inf" if terms is None else terms}

    if eq in ("heat", "parabolic", "wave"):
        L = _require(obj, "L", eq)
        bc = _bc_records(obj, eq, 2)
        if eq == "heat":
            sol = solve_heat(obj.get("F", "0"), bc[0], bc[1], L,
                             kappa=obj.get("kappa", "1"),
                             Q=obj.get("Q", "0"), terms=terms)
        elif eq == "parabolic":
            sol = solve_parabolic(obj.get("F", "0"), bc[0], bc[1], L,
                                  kappa=obj.get("kappa", "1"),
                                  v=obj.get("v", "0"), c=obj.get("c", "0"),
                                  Q=obj.get("Q", "0"), terms=terms)
        else:
            resonance = obj.get("resonance")
            if resonance is not None:
                try:
                    resonance = (str(resonance["symbol"]),
                                 int(resonance["mode"]))
                except (TypeError, KeyError, ValueError):
                    raise DomainError("'resonance' needs 'symbol' and "
                                      "'mode' fields") from None
            sol = solve_wave(obj.get("F", "0"), obj.get("G", "0"),
                             bc[0], bc[1], L, c=obj.get("c", "1"),
                             Q=obj.get("Q", "0"), terms=terms,
                             resonance=resonance)
    elif eq == "laplace-rectangle":
        geom = _geometry(obj, eq, ("a", "b"))
        bc = _bc_records(obj, eq, 4)  # sides y=0, y=b, x=0, x=a
        flags = tuple(_side_flag(rec, eq) for rec in bc)
        sol = solve_laplace_rectangle(geom["a"], geom["b"], flags,
                                      f0=bc[0].h, fb=bc[1].h,
                                      g0=bc[2].h, ga=bc[3].h, terms=terms)
    elif eq == "laplace-disk":
        geom = _geometry(obj, eq, ("R",))
        rec = _bc_records(obj, eq, 1)[0]
        kind = "dirichlet" if _side_flag(rec, eq) == 0 else "neumann"
        sol = solve_laplace_disk(geom["R"], rec.h, bc=kind, terms=terms)
    elif eq == "laplace-wedge":
        geom = _geometry(obj, eq, ("R", "opening"))
        rec = _bc_records(obj, eq, 1)[0]
        kind = "dirichlet" if _side_flag(rec, eq) == 0 else "neumann"
        sol = solve_laplace_wedge(geom["R"], geom["opening"], rec.h,
                                  bc=kind, terms=terms)
    elif eq == "laplace-annulus":
        geom = _geometry(obj, eq, ("R1", "R2"))
        bc = _bc_records(obj, eq, 2)  # inner boundary first
        kind = ("dirichlet"
                if all(_side_flag(rec, eq) == 0 for rec in bc)
                else "neumann")
        sol = solve_laplace_annulus(geom["R1"], geom["R2"], bc[0].h,
                                    bc[1].h, bc=kind, terms=terms)
    elif eq == "wave-disk":
        geom = _geometry(obj, eq, ("R",))
        c = _scalar_value(obj.get("c", "1"), "'c'")
        R = _scalar_value(geom["R"], "'R'")
        try:
            k = int(_require(obj, "k", eq))
            l = int(_require(obj, "l", eq))
        except (TypeError, ValueError):
            raise DomainError("'k' and 'l' must be integers") from None
        u = solve_wave_disk(c, R, _numeric_sampler(obj.get("F", "0"), "'F'"),
                            _numeric_sampler(obj.get("G", "0"), "'G'"), k, l)
        exponent = obj.get("chop", 12)
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise DomainError("'chop' must be an integer exponent")
        out["solution"] = {"expression": render(chop(u, exponent))}
        return out
    else:
        raise DomainError(f"unknown equation {eq!r}")

    out["solution"] = sol.to_json()
    if sol.warning:
        out["warning"] = sol.warning
    return out


def cmd_solve(args) -> int:
    out = _solve_problem(_load_json(args.problem))
    _warn(out.get("warning"))
    if args.format == "text":
        sol = out["solution"]
        body = sol["expression"] if "expression" in sol else \
            _series_from_json(sol).render_text()
        lines = [f"equation: {out['equation']}",
                 f"truncation: {out['truncation']}",
                 body]
        _emit("\n".join(lines), args.output)
    else:
        _emit(json.dumps(out, indent=2), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval

def _series_from_json(obj: dict) -> SeriesSolution:
    if "summand" not in obj:
        raise DomainError("solution JSON needs a 'summand' field")
    try:
        special = tuple((int(rec["n"]), parse(rec["term"]))
                        for rec in obj.get("special", ()))
    except (TypeError, KeyError):
        raise DomainError("'special' records need 'n' and 'term'") from None
    return SeriesSolution(
        summand=parse(obj["summand"]),
        closed=parse(obj.get("closed", "0")),
        special=special,
        index=obj.get("index", "n"),
        start=int(obj.get("start", 1)),
        truncation=obj.get("truncation"),
    )


def _eval_source(args) -> Expr:
    if args.expr is not None and args.solution is not None:
        raise DomainError("give either --expr or --solution, not both")
    if args.expr is not None:
        return parse(args.expr)
    if args.solution is None:
        raise DomainError("provide --expr or --solution")
    obj = _load_json(args.solution)
    sol = obj.get("solution", obj)
    if not isinstance(sol, dict):
        raise DomainError("'solution' must be an object")
    if "expression" in sol:
        return parse(sol["expression"])
    series = _series_from_json(sol)
    n = args.N
    if n is None:
        n = series.truncation if isinstance(series.truncation, int) else 25
    return series.instantiate(n)


def _parse_ranges(specs: Sequence[str]) -> List[Tuple[str, List[float]]]:
    dims = []
    for spec in specs:
        try:
            name, rest = spec.split("=", 1)
            lo_s, hi_s, n_s = rest.split(":")
            lo, hi, count = float(lo_s), float(hi_s), int(n_s)
        except ValueError:
            raise DomainError(f"bad range {spec!r}; expected "
                              f"var=lo:hi:count") from None
        if count < 2:
            raise DomainError(f"range {spec!r} needs at least 2 nodes")
        if not (lo < float("inf") and hi < float("inf")
                and lo > float("-inf") and hi > float("-inf")):
            raise DomainError(f"range {spec!r} must be finite")
        step = (hi - lo) / (count - 1)
        dims.append((name.strip(), [lo + i * step for i in range(count)]))
    return dims


def _parse_snaps(specs: Sequence[str]) -> List[Tuple[str, List[float]]]:
    dims = []
    for spec in specs:
        try:
            name, rest = spec.split("=", 1)
            values = [float(v) for v in rest.split(",") if v.strip()]
        except ValueError:
            raise DomainError(f"bad snapshot {spec!r}; expected "
                              f"var=v1,v2,...") from None
        if not values:
            raise DomainError(f"snapshot {spec!r} has no values")
        dims.append((name.strip(), values))
    return dims


def cmd_eval(args) -> int:
    e = chop(_eval_source(args), args.chop)
    # snapshots are the slowest axes, then ranges in the order given
    dims = _parse_snaps(args.snap or []) + _parse_ranges(args.range or [])
    if not dims:
        raise DomainError("provide at least one --range or --snap")
    names = [name for name, _ in dims]
    rows = [",".join(names + ["value"])]
    for combo in itertools.product(*(vals for _, vals in dims)):
        bindings = dict(zip(names, combo))
        value = eval_numeric(e, bindings)
        if isinstance(value, complex):
            raise DomainError(f"complex value {value} at {bindings}")
        cells = [f"{v:.15g}" for v in combo] + [f"{value:.15g}"]
        rows.append(",".join(cells))
    _emit("\n".join(rows), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bessel zeros

def cmd_bessel_zeros(args) -> int:
    fn = bessel_jprime_zeros if args.derivative else bessel_j_zeros
    _emit(json.dumps(fn(args.nu, args.count)), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None,
                        help="write to this path instead of standard output")
    common.add_argument("--format", choices=("json", "text"), default="json")

    fn_args = argparse.ArgumentParser(add_help=False)
    fn_args.add_argument("--expr", help="expression in the library grammar")
    fn_args.add_argument("--piecewise",
                         help="path to a piecewise-definition JSON file")
    fn_args.add_argument("--var", default="x")
    fn_args.add_argument("--L", default=None,
                         help="half-width (grammar string, e.g. 'pi')")
    fn_args.add_argument("--kind", choices=sorted(_KINDS), default="trig")

    p = argparse.ArgumentParser(
        prog="fourierpde",
        description="Symbolic Fourier series and eigenfunction-expansion "
                    "PDE solvers.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("fourier", parents=[common, fn_args],
                       help="Fourier coefficient formulas")
    q.set_defaults(func=cmd_fourier)

    q = sub.add_parser("series", parents=[common, fn_args],
                       help="Fourier series, expanded or symbolic")
    q.add_argument("--N", default="inf",
                   help="number of terms, or 'inf' for the symbolic series")
    q.set_defaults(func=cmd_series)

    q = sub.add_parser("solve", parents=[common],
                       help="solve a problem file")
    q.add_argument("problem", help="path to the problem JSON file")
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("eval", parents=[common],
                       help="evaluate a solution on a grid as CSV")
    q.add_argument("--expr", help="inline expression to evaluate")
    q.add_argument("--solution", help="path to a solution JSON file")
    q.add_argument("--range", action="append", metavar="VAR=LO:HI:COUNT",
                   help="sampling range (repeatable)")
    q.add_argument("--snap", action="append", metavar="VAR=V1,V2,...",
                   help="explicit snapshot values, slowest axes (repeatable)")
    q.add_argument("--N", type=int, default=None,
                   help="series truncation (default: stored value, else 25)")
    q.add_argument("--chop", type=int, default=12,
                   help="drop terms below 10^-CHOP before evaluating")
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("bessel-zeros", parents=[common],
                       help="positive zeros of J_nu or J_nu'")
    q.add_argument("--nu", type=float, required=True)
    q.add_argument("--count", type=int, required=True)
    q.add_argument("--derivative", action="store_true",
                   help="zeros of the derivative instead")
    q.set_defaults(func=cmd_bessel_zeros)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except FragmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FRAGMENT
    except UnsupportedProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except UnboundSymbolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    except FourierPDEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
