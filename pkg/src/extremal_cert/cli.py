"""Command-line entry point: ``extremal-cert``.

Exit codes: 0 all certified, 1 a certificate failed, 2 configuration error.
All rational inputs are "p/q" strings; decimal input is refused.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .bubbles import (
    RULES,
    _elf_cert,
    _sprite_cert,
    area_contradiction,
    bottom_axiom,
    energy_budgets,
    exclude_trivial_gamma,
    forced_symmetry,
    mod3_obstruction,
    pell_solutions,
    run_full_exclusion,
)
from .errors import CertificationError, ConfigError, UnknownRule
from .exactnum import format_rational, parse_rational
from .extremal import F, certify_boundary_L, certify_critical_point
from .report import RunConfig, canonical_json, cmd_verify_all, render_markdown

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 on its own; keep the message format ours
        raise ConfigError(message)


def rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def decimal_string(value: Fraction, digits: int = 15) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _emit(obj, fmt: str, out) -> None:
    if fmt == "md":
        out.write(_markdown_block(obj))
    else:
        out.write(canonical_json(obj) + "\n")


def _markdown_block(obj) -> str:
    return "```json\n" + json.dumps(obj, indent=2) + "\n```\n"


def cmd_functional(args, out) -> int:
    if args.action == "eval":
        x = args.x
        if x < 0:
            raise ConfigError("x must be nonnegative")
        value = F(x)
        if value.denominator == 1:
            out.write(f"{value.numerator}\n")
        else:
            out.write(f"{value} ≈ {decimal_string(value)}\n")
        return EXIT_OK
    if args.action == "critical":
        cert = certify_critical_point(args.width)
        _emit(cert.to_json(), args.format, out)
        return EXIT_OK if cert.valid else EXIT_FAILED
    if args.action == "boundary":
        cert = certify_boundary_L(args.width)
        _emit(cert.to_json(), args.format, out)
        return EXIT_OK if cert.valid else EXIT_FAILED
    if args.action == "table":
        step = args.stop / args.points
        rows = [[format_rational(step * i), format_rational(F(step * i))] for i in range(args.points + 1)]
        for x, v in rows:
            out.write(f"{x}\t{v}\t{decimal_string(parse_rational(v), 10)}\n")
        return EXIT_OK
    raise ConfigError(f"unknown functional action {args.action!r}")


def _single_rule(rule: str, cfg: RunConfig):
    budget = energy_budgets(cfg.a_bound)
    if rule == "TrivialGammaEnergy":
        return exclude_trivial_gamma(budget)
    if rule == "BottomAxiom":
        return bottom_axiom()
    if rule == "ForcedSymmetry":
        return forced_symmetry(budget)
    if rule == "SpriteRicci":
        return _sprite_cert(budget)[0]
    if rule == "ElfWminus":
        return _elf_cert(budget)[0]
    if rule == "CaseI_Mod3":
        return mod3_obstruction(cfg.dioph_bound)
    if rule == "CaseII_III_PellArea":
        L = certify_boundary_L(cfg.L_width).L
        return area_contradiction(L, pell_solutions(cfg.pell_bound))
    raise UnknownRule(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")


def cmd_bubbles(args, out) -> int:
    cfg = RunConfig(
        a_bound=args.a_bound,
        L_width=args.L_width,
        dioph_bound=args.dioph_bound,
        pell_bound=args.pell_bound,
        format=args.format,
    )
    if args.only:
        if args.only not in RULES:
            raise UnknownRule(f"unknown rule {args.only!r}; choose from {', '.join(RULES)}")
        try:
            cert = _single_rule(args.only, cfg)
        except CertificationError as exc:
            payload = exc.certificate.to_json() if exc.certificate else {"rule": args.only, "error": str(exc)}
            _emit(payload, args.format, out)
            return EXIT_FAILED
        _emit(cert.to_json(), args.format, out)
        return EXIT_OK
    L = certify_boundary_L(cfg.L_width).L
    run = run_full_exclusion(cfg.a_bound, L, cfg.dioph_bound, cfg.pell_bound)
    _emit(run.to_json(), args.format, out)
    return EXIT_OK if run.ok else EXIT_FAILED


def cmd_budgets(args, out) -> int:
    _emit(energy_budgets(args.a_bound).to_json(), args.format, out)
    return EXIT_OK


def cmd_dioph(args, out) -> int:
    if args.kind == "pell":
        sols = pell_solutions(args.bound)
        _emit({"equation": "j^2 - 2 l^2 = -1", "bound": args.bound, "solutions": [list(s) for s in sols]}, args.format, out)
        return EXIT_OK
    try:
        cert = mod3_obstruction(args.bound)
    except CertificationError as exc:
        _emit(exc.certificate.to_json() if exc.certificate else {"error": str(exc)}, args.format, out)
        return EXIT_FAILED
    _emit(cert.to_json(), args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = RunConfig(
        x0_width=args.x0_width,
        L_width=args.L_width,
        a_bound=args.a_bound,
        dioph_bound=args.dioph_bound,
        pell_bound=args.pell_bound,
        format=args.format,
    )
    report = cmd_verify_all(cfg)
    text = render_markdown(report) if cfg.format == "md" else canonical_json(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK if report["verdict"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="extremal-cert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=["json", "md"], default="json")

    v = sub.add_parser("verify-all", help="run every certification and print the report")
    v.add_argument("--a-bound", type=rational, default=Fraction(8))
    v.add_argument("--x0-width", type=rational, default=Fraction(1, 10**6))
    v.add_argument("--L-width", type=rational, default=Fraction(1, 10**3))
    v.add_argument("--dioph-bound", type=positive_int, default=10**4)
    v.add_argument("--pell-bound", type=positive_int, default=10**6)
    v.add_argument("--output", "-o", default=None)
    fmt(v)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("functional", help="evaluate f or certify its critical point / boundary root")
    fsub = f.add_subparsers(dest="action", required=True, parser_class=_Parser)
    fe = fsub.add_parser("eval")
    fe.add_argument("--x", type=rational, required=True)
    for name, default in (("critical", Fraction(1, 10**6)), ("boundary", Fraction(1, 10**3))):
        fp = fsub.add_parser(name)
        fp.add_argument("--width", type=rational, default=default)
        fmt(fp)
    ft = fsub.add_parser("table", help="exact samples of f on [0, stop]")
    ft.add_argument("--stop", type=rational, default=Fraction(4))
    ft.add_argument("--points", type=positive_int, default=16)
    f.set_defaults(func=cmd_functional)

    b = sub.add_parser("bubbles", help="run the bubble-exclusion chain")
    b.add_argument("--a-bound", type=rational, default=Fraction(8))
    b.add_argument("--L-width", type=rational, default=Fraction(1, 10**3))
    b.add_argument("--dioph-bound", type=positive_int, default=10**4)
    b.add_argument("--pell-bound", type=positive_int, default=10**6)
    b.add_argument("--only", default=None, metavar="RULE")
    fmt(b)
    b.set_defaults(func=cmd_bubbles)

    bu = sub.add_parser("budgets", help="curvature energy budgets for an A bound")
    bu.add_argument("--a-bound", type=rational, required=True)
    fmt(bu)
    bu.set_defaults(func=cmd_budgets)

    d = sub.add_parser("dioph", help="Diophantine oracles")
    d.add_argument("kind", choices=["pell", "mod3"])
    d.add_argument("--bound", type=positive_int, default=10**4)
    fmt(d)
    d.set_defaults(func=cmd_dioph)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "width", None) is not None and args.width <= 0:
            raise ConfigError("width must be positive")
        return args.func(args, out)
    except ConfigError as exc:
        sys.stderr.write(f"extremal-cert: error: {exc}\n")
        return EXIT_CONFIG
    except CertificationError as exc:
        sys.stderr.write(f"extremal-cert: certification failed: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
