"""Command-line interface.

    potentia check FILE [--method M]
    potentia potential FILE [--route R] [--constant C] [--lambda L]
    potentia project FILE [--output PATH]
    potentia nash FILE
    potentia equations N K

Exit codes: 0 potential / success, 1 not potential / empty result,
2 usage or input error, 3 criteria disagree.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import checks, core, minimal, nash
from .errors import NotPotentialError, PotentiaError
from .game import FiniteGame, game_to_document, parse_game, serialize_game
from .linalg import DEFAULT_TOL, Tolerance

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3
ROUTES = ("bimatrix", "equation", "closed-form")


class InputError(PotentiaError):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload, human_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(human_lines))


def _fmt(x):
    return f"{x:.6g}"


# -- check ----------------------------------------------------------------------

def cmd_check(args, game, tol):
    if args.method == "all":
        report = checks.run_checks(game, None, tol)
    else:
        reason = checks.why_not_applicable(game, args.method)
        if reason:
            raise InputError(reason)
        report = checks.run_checks(game, [args.method], tol)
    lines = [f"game: {game.n} players, strategies {list(game.strategies)}"]
    for v in report.verdicts:
        base = v.method.split("-")[0] if v.method.startswith(("t21", "reshaped")) else v.method
        lines.append(
            f"  {v.method:<12} {'potential' if v.holds else 'NOT potential':<14}"
            f" max residual {_fmt(v.max_residual)} over {v.n_equations} equations"
            f"  [{checks.DESCRIPTIONS.get(base, '')}]"
        )
        if v.method == "minimal":
            lines.append("    residuals: " + " ".join(_fmt(r) for r in v.residuals))
        for i, j, rest in v.failures[:10]:
            lines.append(f"    failing sub-game: players ({i}, {j}), others fixed at {list(rest)}")
    if not report.agree:
        lines.append("criteria DISAGREE")
    else:
        lines.append("verdict: " + ("potential" if report.potential else "not potential"))
    _emit(args, report.to_dict(), lines)
    if not report.agree:
        return EXIT_DISAGREE
    return EXIT_OK if report.potential else EXIT_NO


# -- potential ------------------------------------------------------------------

def _potential(game, route, constant, lam, tol):
    if route == "bimatrix":
        if game.n != 2:
            raise InputError("route bimatrix is for two-player games")
        return core.bimatrix_potential(game, lam, tol)
    if route == "equation":
        return core.potential_by_equation(game, constant, tol)
    if checks.why_not_applicable(game, "minimal"):
        raise InputError(checks.why_not_applicable(game, "minimal"))
    return minimal.potential_closed_form(game, constant, tol)


def cmd_potential(args, game, tol):
    if args.route == "all":
        routes = [r for r in ROUTES if not (r == "bimatrix" and game.n != 2)]
        if checks.why_not_applicable(game, "minimal"):
            routes.remove("closed-form")
    else:
        routes = [args.route or ("bimatrix" if game.n == 2 else "closed-form")]
    lam = args.lam if args.lam is not None else args.constant
    results = []
    for route in routes:
        pv = _potential(game, route, args.constant, lam, tol)
        results.append((route, pv, core.validate_potential(game, pv, tol)))

    payload = {"strategies": list(game.strategies), "potentials": []}
    lines = []
    for route, pv, check in results:
        entry = {"route": route, "entries": pv.entries.tolist(), "validation_residual": check.max_residual}
        if game.n == 2:
            entry["matrix"] = pv.matrix.tolist()
        payload["potentials"].append(entry)
        lines.append(f"route {route}: validation residual {_fmt(check.max_residual)}")
        if game.n == 2:
            lines.extend("  " + " ".join(_fmt(x) for x in row) for row in pv.matrix)
        else:
            lines.append("  " + " ".join(_fmt(x) for x in pv.entries))
    if len(results) > 1:
        base = results[0][1].entries
        diffs = {r: (pv.entries - base) for r, pv, _ in results[1:]}
        payload["spread_vs_first"] = {r: float(d.max() - d.min()) for r, d in diffs.items()}
        for r, d in diffs.items():
            lines.append(f"{r} - {results[0][0]}: constant {_fmt(float(d.mean()))}, spread {_fmt(float(d.max() - d.min()))}")
    _emit(args, payload, lines)
    return EXIT_OK


# -- project --------------------------------------------------------------------

def cmd_project(args, game, tol):
    if game.n != 2:
        raise InputError("projection onto the potential subspace is defined for bi-matrix games")
    projected, distance = core.project_to_potential(game.as_bimatrix())
    out = projected.to_game()
    if game.labels is not None:
        out = FiniteGame(out.strategies, out.payoffs, game.labels)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serialize_game(out, indent=2) + "\n")
    payload = {"distance": distance, "game": game_to_document(out)}
    lines = [f"distance: {_fmt(distance)}"]
    if not args.output:
        lines.append(serialize_game(out, indent=2))
    _emit(args, payload, lines)
    return EXIT_OK


# -- nash -----------------------------------------------------------------------

def cmd_nash(args, game, tol):
    brute = nash.pure_nash_brute(game, tol)
    payload = {"brute_force": [list(p) for p in brute.profiles]}
    lines = [f"pure equilibria (brute force): {len(brute)}"]
    lines.extend(f"  {list(p)}" for p in brute.profiles)
    status = EXIT_OK if len(brute) else EXIT_NO

    method = "minimal" if checks.why_not_applicable(game, "minimal") is None else "equation"
    if checks.why_not_applicable(game, method) is None and checks.run_method(game, method, tol)[0].holds:
        pv = (minimal.potential_closed_form(game, 0.0, tol) if method == "minimal"
              else core.potential_by_equation(game, 0.0, tol))
        via = nash.nash_from_potential(game, pv, tol)
        agree = via.profiles == brute.profiles
        payload["potential_argmax"] = [list(p) for p in via.profiles]
        payload["global_max"] = [list(p) for p in via.global_max]
        payload["agree"] = agree
        lines.append(f"potential game: local maxima of the potential: {len(via)}"
                     f" ({'agree' if agree else 'DISAGREE'} with brute force)")
        lines.extend(f"  {list(p)}{'  (global max)' if p in via.global_max else ''}" for p in via.profiles)
        if not agree:
            status = EXIT_DISAGREE
    _emit(args, payload, lines)
    return status


# -- equations ------------------------------------------------------------------

def cmd_equations(args, tol):
    n, k = args.n, args.k
    if n < 2 or k < 2:
        raise InputError("equations needs n >= 2 and k >= 2")
    matrix = minimal.minimal_check_matrix(n, k)
    counts = minimal.minimal_equation_count(n, k)
    payload = {"n": n, "k": k, "rows": matrix.tolist(), "minimal_count": counts.minimal,
               "pairwise_count": counts.pairwise}
    width = max(len(str(x)) for x in np.unique(matrix)) if matrix.size else 1
    lines = [" ".join(f"{x:>{width}d}" for x in row) for row in matrix]
    lines.append(f"({n},{k}): {counts.minimal} minimal vs {counts.pairwise} pairwise")
    _emit(args, payload, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--abs-eps", type=float, default=DEFAULT_TOL.abs_eps)
    shared.add_argument("--rel-scale", type=float, default=DEFAULT_TOL.rel_scale)
    shared.add_argument("--format", choices=("human", "json"), default="human")

    parser = argparse.ArgumentParser(prog="potentia", description="Potential-game toolkit for finite games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[shared], help="decide whether a game is potential")
    p.add_argument("file")
    p.add_argument("--method", choices=(*checks.METHODS, "all"), default="all")

    p = sub.add_parser("potential", parents=[shared], help="compute a potential function")
    p.add_argument("file")
    p.add_argument("--route", choices=(*ROUTES, "all"), default=None)
    p.add_argument("--constant", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)

    p = sub.add_parser("project", parents=[shared], help="project a bi-matrix game onto potential games")
    p.add_argument("file")
    p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("nash", parents=[shared], help="list pure Nash equilibria")
    p.add_argument("file")

    p = sub.add_parser("equations", parents=[shared], help="print the minimal verification matrix")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = Tolerance(args.abs_eps, args.rel_scale)
    except ValueError as exc:
        print(f"potentia: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "equations":
            return cmd_equations(args, tol)
        game = parse_game(_read(args.file))
        handler = {"check": cmd_check, "potential": cmd_potential, "project": cmd_project, "nash": cmd_nash}
        return handler[args.command](args, game, tol)
    except NotPotentialError as exc:
        v = exc.verdict
        detail = ""
        if v is not None:
            detail = f" (max residual {_fmt(v.max_residual)} over {v.n_equations} equations)"
            if v.residuals is not None:
                bad = [_fmt(r) for r in v.residuals if abs(r) > v.threshold]
                detail += "\n  failing residuals: " + " ".join(bad[:20])
        print(f"potentia: {exc}{detail}", file=sys.stderr)
        return EXIT_NO
    except PotentiaError as exc:
        print(f"potentia: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
