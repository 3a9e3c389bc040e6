"""Command-line driver: ``fixcheck check|eval|gfp-approx|iterate|termination|metric``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import engine, report
from .diagrams import evaluate
from .dsl import ModelError, parse_model, parse_system, system_kind
from .engine import Mode, Verdict
from .liftings import EnumerationLimit, NondetTS, build_behavioural_diagram, \
    build_termination_diagram, build_wasserstein_diagram
from .mv import parse_rational
from .valuations import format_element

EXIT = {Verdict.CONFIRMED: 0, Verdict.REFUTED: 1, Verdict.INCONCLUSIVE: 2}
EXIT_INPUT = 3
EXIT_LIMIT = 4

_COLORS = {Verdict.CONFIRMED: "32", Verdict.REFUTED: "31", Verdict.INCONCLUSIVE: "33"}


class UsageError(ValueError):
    pass


def _use_color(stream) -> bool:
    flag = os.environ.get("FIXCHECK_COLOR")
    if flag in ("0", "1"):
        return flag == "1"
    return stream.isatty()


def _paint(text: str, verdict: Verdict, color: bool) -> str:
    return f"\033[{_COLORS[verdict]}m{text}\033[0m" if color else text


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(args, frontend: str | None):
    """Return ``(diagram, candidate)`` from a model file or a system file."""
    if frontend is not None or args.system:
        if not args.system:
            raise UsageError("--system is required")
        try:
            kind = system_kind(args.system)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if frontend == "termination" and kind != "mc":
            raise UsageError("termination needs a .mc file")
        if frontend == "metric" and kind == "mc":
            raise UsageError("metric needs a .lmc or .nts file")
        sf = parse_system(_read(args.system), kind, args.system)
        if kind == "mc":
            d = build_termination_diagram(sf.system)
        elif isinstance(sf.system, NondetTS):
            d = build_wasserstein_diagram(sf.system)
        else:
            d = build_behavioural_diagram(sf.system)
        if args.candidate not in sf.candidates:
            raise UsageError(f"unknown candidate {args.candidate!r}; available: "
                             + ", ".join(sf.candidates))
        return d, sf.candidates[args.candidate]
    if not args.file:
        raise UsageError("one of --file or --system is required")
    m = parse_model(_read(args.file), args.file)
    if not args.diagram:
        raise UsageError("--diagram is required with --file")
    try:
        return m.diagram(args.diagram), m.valuation(args.candidate)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _emit(args, obj: dict, lines: list[str]) -> None:
    if args.json:
        text = report.dumps(obj)
        if args.json == "-":
            sys.stdout.write(text)
            return
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    for line in lines:
        print(line)


def _fmt_subset(domain, s) -> str:
    return "{" + ", ".join(format_element(e) for e in domain.ordered(s)) + "}"


def _do_check(args, d, a) -> int:
    r = engine.check(d, a, args.mode)
    color = _use_color(sys.stdout)
    lines = [f"mode: {r.mode.value}", f"is_fixpoint: {str(r.is_fixpoint).lower()}",
             "verdict: " + _paint(r.verdict.value, r.verdict, color)]
    if r.witness:
        lines.append("witness: " + _fmt_subset(a.domain, r.witness))
    if r.suggested_delta is not None:
        lines.append(f"suggested_delta: {r.suggested_delta}")
    if r.reason:
        lines.append(f"reason: {r.reason}")
    _emit(args, report.check_json(r, a.domain), lines)
    return EXIT[r.verdict]


def _do_eval(args, d, a) -> int:
    fa = evaluate(d, a)
    obj = {"valuation": report.valuation_json(fa), "is_fixpoint": fa == a}
    lines = [f"{k}: {v}" for k, v in obj["valuation"].items()]
    lines.append(f"is_fixpoint: {str(obj['is_fixpoint']).lower()}")
    _emit(args, obj, lines)
    return 0


def _do_gfp(args, d, a) -> int:
    trace: list = []
    nu = engine.gfp_approx(d, a, trace)
    obj = {"gfp": [format_element(e) for e in a.domain.ordered(nu)],
           "iterations": [[format_element(e) for e in a.domain.ordered(U)] for U in trace]}
    _emit(args, obj, ["gfp: " + _fmt_subset(a.domain, nu)])
    return 0


def _do_iterate(args, d, a) -> int:
    mode = Mode(args.mode)
    if mode not in (Mode.LEAST, Mode.GREATEST):
        raise UsageError("iterate supports --mode least or greatest")
    eps = parse_rational(args.epsilon)
    if eps <= 0:
        raise UsageError("--epsilon must be positive")
    run = (engine.iterate_to_least_from_above if mode == Mode.LEAST
           else engine.iterate_to_greatest_from_below)
    entry = engine.is_pre_fixpoint(d, a) if mode == Mode.LEAST else a.leq(evaluate(d, a))
    color = _use_color(sys.stdout)
    if not entry:
        kind = "pre-fixpoint" if mode == Mode.LEAST else "post-fixpoint"
        obj = {"mode": mode.value, "is_fixpoint": False, "verdict": Verdict.INCONCLUSIVE.value,
               "witness": [], "suggested_delta": None, "corrected": None, "iterations": [],
               "reason": f"start value is not a {kind}"}
        _emit(args, obj, ["verdict: " + _paint("Inconclusive", Verdict.INCONCLUSIVE, color),
                          obj["reason"]])
        return EXIT[Verdict.INCONCLUSIVE]
    r = run(d, a, max_rounds=args.max_rounds, epsilon=eps)
    final = r.valuation
    obj = report.iteration_json(mode, r, evaluate(d, final) == final)
    verdict = Verdict(obj["verdict"])
    lines = [f"{k}: {v}" for k, v in obj["corrected"].items()]
    lines += [f"rounds: {r.rounds}", f"residual: {obj['residual']}",
              "verdict: " + _paint(verdict.value, verdict, color)]
    _emit(args, obj, lines)
    return EXIT[verdict]


ACTIONS = {"check": _do_check, "eval": _do_eval, "gfp-approx": _do_gfp,
           "iterate": _do_iterate}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fixcheck",
                                description="Check fixpoints of non-expansive functions.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, system_only=False):
        if not system_only:
            sp.add_argument("--file", help="model file")
            sp.add_argument("--diagram", help="diagram (or block) name in the model")
        sp.add_argument("--system", required=system_only,
                        help="transition system file (.mc, .lmc or .nts)")
        sp.add_argument("--candidate", required=True, help="candidate valuation name")
        sp.add_argument("--mode", default="least", choices=[m.value for m in Mode])
        sp.add_argument("--json", metavar="PATH", help="write the report as JSON ('-' = stdout)")
        sp.add_argument("--max-rounds", type=int, default=50)
        sp.add_argument("--epsilon", default="1/1000000000", help="Kleene stopping gap, p/q")

    for name, help_ in [("check", "decide or bound a candidate against a fixpoint"),
                        ("eval", "apply the function to the candidate"),
                        ("gfp-approx", "greatest fixpoint of the approximation"),
                        ("iterate", "iterate to the least/greatest fixpoint")]:
        common(sub.add_parser(name, help=help_))
    for name, help_ in [("termination", "termination probability of a Markov chain"),
                        ("metric", "behavioural metric of a labelled chain or an NTS")]:
        sp = sub.add_parser(name, help=help_)
        common(sp, system_only=True)
        sp.add_argument("--action", default="check", choices=list(ACTIONS))
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    frontend = args.command if args.command in ("termination", "metric") else None
    action = args.action if frontend else args.command
    try:
        d, a = _load(args, frontend)
        return ACTIONS[action](args, d, a)
    except (ModelError, UsageError) as exc:
        print(f"fixcheck: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationLimit as exc:
        print(f"fixcheck: error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"fixcheck: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
