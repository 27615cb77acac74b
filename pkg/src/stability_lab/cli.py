"""Command-line entry point: ``stability-lab <command> [options]``.

Every report is JSON with sorted keys (or CSV for sweeps) and carries the tool
version, the presentation hash and the completeness flags, so identical argv
give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .arith import RationalFormatError, format_rational, parse_rational
from .cones import MissingConeDataError, Verdict, in_cone, projection
from .dhym import (
    DEFAULT_EPS,
    SupercriticalError,
    central_charge,
    complementary_lifted_angle,
    dhym_hypothesis_check,
    dhym_test,
)
from .geometry import (
    ManifoldPresentation,
    PresentationError,
    blowup_pn,
    load_manifold,
    parse_class,
    wu_bundle,
)
from .gma import GmaCoefficients, classify_gma, factorize, q_polynomial
from .jstab import classify, effective_test
from .walls import (
    CoefficientPath,
    ParameterSegment,
    chambers,
    gma_chambers,
    gma_sweep_oracle,
    oracle_mismatches,
    sweep_oracle,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3


class InputError(Exception):
    """Bad command-line input; mapped to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _rationals(text: str) -> tuple:
    if text is None:
        return ()
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_rational(x) for x in text.split(","))


def _class(text: str, name: str, m: ManifoldPresentation):
    if text is None:
        raise InputError(f"--{name} is required")
    c = parse_class(text)
    if len(c) != m.basis_size:
        raise InputError(f"--{name} has {len(c)} coordinates, basis {list(m.basis)} needs {m.basis_size}")
    return c


def _manifold(args) -> ManifoldPresentation:
    if args.manifold:
        try:
            return load_manifold(Path(args.manifold).read_text())
        except OSError as e:
            raise InputError(f"cannot read {args.manifold}: {e}") from e
    if args.family == "wu":
        return wu_bundle(args.d, [int(w) for w in args.weights.split(",")])
    if args.family == "blowup":
        if args.n is None:
            raise InputError("--family blowup needs --n")
        return blowup_pn(args.n)
    raise InputError("give --manifold FILE or --family wu|blowup")


def _add_manifold(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("manifold")
    g.add_argument("--manifold", help="presentation JSON file")
    g.add_argument("--family", choices=["wu", "blowup"])
    g.add_argument("--d", type=int, default=1, help="base degree for the wu family")
    g.add_argument("--weights", default="1,3", help="comma-separated weights for the wu family")
    g.add_argument("--n", type=int, help="dimension for the blowup family")


def _add_output(p: argparse.ArgumentParser, csv_ok: bool = False) -> None:
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"] if csv_ok else ["json"], default="json")
    p.add_argument("--strict", action="store_true", help="exit 3 when a hypothesis check fails")


def _header(m: ManifoldPresentation | None) -> dict:
    out = {"tool": {"name": "stability-lab", "version": __version__}}
    if m is not None:
        out["manifold"] = {"name": m.name, "dim": m.dim, "basis": list(m.basis), "sha256": m.sha256()}
    return out


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (report text, hypotheses ok)
# ---------------------------------------------------------------------------


def cmd_analyze_j(args) -> tuple[str, bool]:
    m = _manifold(args)
    alpha, beta = _class(args.alpha, "alpha", m), _class(args.beta, "beta", m)
    lam = parse_rational(args.lam)
    verdict = classify(m, alpha, beta)
    eff = effective_test(m, alpha, beta, lam)
    doc = _header(m)
    doc.update(
        {
            "command": "analyze-j",
            "alpha": alpha.to_json(),
            "beta": beta.to_json(),
            "lambda": format_rational(lam),
            "verdict": verdict.to_json(),
            "effective": eff.to_json(),
            "completeness": verdict.completeness,
        }
    )
    ok = all(h.verdict is Verdict.INSIDE for h in eff.hypotheses)
    return _dump(doc), ok


def cmd_analyze_gma(args) -> tuple[str, bool]:
    m = _manifold(args)
    alpha, beta = _class(args.alpha, "alpha", m), _class(args.beta, "beta", m)
    c = _rationals(args.coeffs)
    if len(c) != m.dim - 1:
        raise InputError(f"--coeffs needs {m.dim - 1} values c_1..c_{m.dim - 1}")
    verdict = classify_gma(m, alpha, beta, GmaCoefficients(c))
    doc = _header(m)
    doc.update(
        {
            "command": "analyze-gma",
            "alpha": alpha.to_json(),
            "beta": beta.to_json(),
            "verdict": verdict.to_json(),
            "completeness": verdict.completeness,
        }
    )
    ok = all(v is Verdict.INSIDE for _, v in verdict.tau_verdicts)
    return _dump(doc), ok


def cmd_analyze_dhym(args) -> tuple[str, bool]:
    m = _manifold(args)
    alpha, beta = _class(args.alpha, "alpha", m), _class(args.beta, "beta", m)
    eps = args.eps
    doc = _header(m)
    doc.update({"command": "analyze-dhym", "alpha": alpha.to_json(), "beta": beta.to_json(), "eps": eps})
    if args.phi_hat is None:
        angle = complementary_lifted_angle(central_charge(m, alpha, beta), m.dim, eps)
        phi = angle.phi_hat
        doc["angle"] = angle.to_json()
    else:
        phi = float(args.phi_hat)
        if not 0 < phi < math.pi:
            raise InputError("--phi-hat must lie in (0, pi)")
        doc["angle"] = {"phi_hat": phi, "given": True}
    tests = [dhym_test(m, alpha, beta, phi, v, eps) for v in m.candidates]
    hyps = dhym_hypothesis_check(m, alpha, beta, phi, eps)
    doc["candidates"] = [t.to_json() for t in tests]
    doc["dest"] = [t.name for t in tests if t.destabilizing]
    doc["marginal"] = [t.name for t in tests if t.marginal]
    doc["status"] = "unstable" if doc["dest"] else "stable"
    doc["hypotheses"] = hyps.to_json()
    doc["completeness"] = m.completeness(alpha, beta, "dhym")
    return _dump(doc), hyps.ok


def cmd_factorize(args) -> tuple[str, bool]:
    c = _rationals(args.coeffs)
    if args.n is not None and len(c) != args.n - 1:
        raise InputError(f"--coeffs needs {args.n - 1} values for n={args.n}")
    if not c:
        raise InputError("--coeffs needs at least one value")
    g = GmaCoefficients(c)
    fd = factorize(g)
    doc = _header(None)
    doc.update(
        {
            "command": "factorize",
            "n": g.n,
            "coeffs": g.to_json(),
            "q": [{"p": p, "coeffs": q_polynomial(p, g).to_json()} for p in range(1, g.n)],
            "factors": fd.to_json(),
        }
    )
    return _dump(doc), True


def cmd_cones(args) -> tuple[str, bool]:
    m = _manifold(args)
    alpha = _class(args.alpha, "alpha", m)
    doc = _header(m)
    rows = {}
    for key in sorted(m.cones):
        kind, _, p = key.partition(":")
        rows[key] = in_cone(m, kind, alpha, int(p) if p else None).value
    doc.update({"command": "cones", "alpha": alpha.to_json(), "verdicts": rows})
    if args.beta is not None:
        beta = _class(args.beta, "beta", m)
        eta = projection(m, alpha, beta)
        try:
            big = in_cone(m, "big", eta).value
        except MissingConeDataError:
            big = None
        doc["beta"] = beta.to_json()
        doc["projection"] = {"eta": eta.to_json(), "big": big}
    return _dump(doc), True


def _segment_inputs(args, m):
    if args.var == "beta":
        alphas = [_class(a, "alpha", m) for a in (args.alpha or [])]
        if not alphas:
            raise InputError("--var beta needs at least one --alpha")
        b0, b1 = _class(args.beta0, "beta0", m), _class(args.beta1, "beta1", m)
        return alphas, ParameterSegment.checked(m, b0, b1)
    if not args.alpha or len(args.alpha) != 1:
        raise InputError("--var coeffs needs exactly one --alpha")
    alpha, beta = _class(args.alpha[0], "alpha", m), _class(args.beta, "beta", m)
    c0, c1 = _rationals(args.c0), _rationals(args.c1)
    if len(c0) != m.dim - 1 or len(c1) != m.dim - 1:
        raise InputError(f"--c0/--c1 need {m.dim - 1} values each")
    return (alpha, beta), CoefficientPath(c0, c1)


def _sweep_report(args, m):
    inputs, path = _segment_inputs(args, m)
    if args.var == "beta":
        rep = chambers(m, inputs, path)
        doc = {"alphas": [a.to_json() for a in inputs], "beta0": path.beta0.to_json(), "beta1": path.beta1.to_json()}
    else:
        alpha, beta = inputs
        rep = gma_chambers(m, alpha, beta, path)
        doc = {
            "alpha": alpha.to_json(),
            "beta": beta.to_json(),
            "c0": [format_rational(x) for x in path.c0],
            "c1": [format_rational(x) for x in path.c1],
            "wall_coeffs": [[format_rational(x) for x in path.at(w.t).c] for w in rep.walls],
        }
    return inputs, path, rep, doc


def _write_plot(args, rep) -> None:
    if args.plot_data:
        Path(args.plot_data).write_text(_dump(rep.plot_data()))


def cmd_sweep(args) -> tuple[str, bool]:
    m = _manifold(args)
    _, _, rep, params = _sweep_report(args, m)
    _write_plot(args, rep)
    if args.format == "csv":
        return rep.to_csv(), True
    doc = _header(m)
    doc.update({"command": "sweep", "var": args.var, "params": params, "report": rep.to_json()})
    doc["completeness"] = "relative"
    return _dump(doc), True


def cmd_oracle_sweep(args) -> tuple[str, bool]:
    m = _manifold(args)
    inputs, path, rep, params = _sweep_report(args, m)
    if args.var == "beta":
        rows = sweep_oracle(m, inputs, path, args.grid)
    else:
        rows = gma_sweep_oracle(m, inputs[0], inputs[1], path, args.grid)
    bad = oracle_mismatches(rep, rows)
    _write_plot(args, rep)
    if args.format == "csv":
        lines = ["t,verdicts"]
        lines += [f"{format_rational(t)},{'|'.join(s + ':' + ';'.join(d) for s, d in v)}" for t, v in rows]
        return "\n".join(lines) + "\n", True
    doc = _header(m)
    doc.update(
        {
            "command": "oracle-sweep",
            "var": args.var,
            "params": params,
            "grid": args.grid,
            "report": rep.to_json(),
            "mismatches": [format_rational(t) for t in bad],
            "agree": not bad,
            "completeness": "relative",
        }
    )
    return _dump(doc), True


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stability-lab", description="Numerical stability criteria on presented Kähler manifolds.")
    parser.add_argument("--version", action="version", version=f"stability-lab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze-j", help="J-equation slopes, destabilizers and the effective test")
    _add_manifold(p)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lam", default="0", help="shift for the modified-cone hypotheses")
    _add_output(p)
    p.set_defaults(func=cmd_analyze_j)

    p = sub.add_parser("analyze-gma", help="generalized Monge-Ampère test with constant top coefficient")
    _add_manifold(p)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--coeffs", required=True, help="c_1,...,c_{n-1}; c_n is solved")
    _add_output(p)
    p.set_defaults(func=cmd_analyze_gma)

    p = sub.add_parser("analyze-dhym", help="supercritical dHYM test")
    _add_manifold(p)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--phi-hat", type=float, help="radians; computed from the central charge when omitted")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    _add_output(p)
    p.set_defaults(func=cmd_analyze_dhym)

    p = sub.add_parser("factorize", help="roots r_p and factorizations of Q_p")
    p.add_argument("--n", type=int)
    p.add_argument("--coeffs", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("cones", help="cone membership of a class (and projection with --beta)")
    _add_manifold(p)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    _add_output(p)
    p.set_defaults(func=cmd_cones)

    for name, func in (("sweep", cmd_sweep), ("oracle-sweep", cmd_oracle_sweep)):
        p = sub.add_parser(name, help="exact walls and chambers along a segment" if name == "sweep" else "compare chambers with a grid")
        _add_manifold(p)
        p.add_argument("--var", choices=["beta", "coeffs"], default="beta")
        p.add_argument("--alpha", action="append", help="repeatable for --var beta")
        p.add_argument("--beta", help="fixed beta for --var coeffs")
        p.add_argument("--beta0")
        p.add_argument("--beta1")
        p.add_argument("--c0")
        p.add_argument("--c1")
        p.add_argument("--plot-data", help="write chamber plot data JSON here")
        if name == "oracle-sweep":
            p.add_argument("--grid", type=int, default=1000)
        _add_output(p, csv_ok=True)
        p.set_defaults(func=func)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise InputError("missing command")
        text, ok = args.func(args)
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    except (InputError, RationalFormatError, PresentationError, SupercriticalError, MissingConeDataError, ValueError, ZeroDivisionError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"stability-lab: error: {msg}", file=stderr)
        return EXIT_INPUT
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    if args.strict and not ok:
        print("stability-lab: hypothesis check failed", file=stderr)
        return EXIT_HYPOTHESIS
    return EXIT_OK


def main() -> None:
    sys.exit(run())
