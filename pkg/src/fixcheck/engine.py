"""Fixpoint checks built on the greatest fixpoint of the approximation.

The primal machinery decides whether a fixpoint is the least one and checks
post-fixpoints against the least fixpoint.  The greatest-fixpoint and
pre-fixpoint checks run the primal check on the conjugated diagram
``¬ ∘ f ∘ ¬`` at ``¬a`` and translate the answer back.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .diagrams import Diagram, approximation_map, conjugate, evaluate, typecheck
from .mv import CHAIN, MVValue, Number
from .valuations import (Valuation, agreement_set, decrease, disagreement_set, norm,
                         support_nonzero)

log = logging.getLogger(__name__)

DEFAULT_EPSILON = Fraction(1, 10**9)
PROBE_BUDGET = 64


class Mode(str, Enum):
    LEAST = "least"
    GREATEST = "greatest"
    POST_BELOW_LEAST = "post-below-least"
    PRE_ABOVE_GREATEST = "pre-above-greatest"


class Verdict(str, Enum):
    CONFIRMED = "Confirmed"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


class SearchExhausted(RuntimeError):
    """No verified decrease was found; indicates a bug, never a user error."""


@dataclass
class CheckReport:
    mode: Mode
    is_fixpoint: bool
    verdict: Verdict
    witness: frozenset
    suggested_delta: Optional[MVValue] = None
    corrected: Optional[Valuation] = None
    iterations: list = field(default_factory=list)  # Kleene steps of the gfp computation
    reason: str = ""


def _require_endo(d: Diagram, a: Valuation) -> None:
    typecheck(d)
    if not d.is_endo:
        raise ValueError("fixpoint checks need a diagram whose input and output sets agree")
    if not a.domain.same_elements(d.input):
        raise ValueError("candidate is not defined on the diagram's carrier")


def greatest_fixpoint(fn: Callable[[frozenset], frozenset], start: frozenset,
                      trace: list | None = None) -> frozenset:
    """Greatest fixpoint of ``U -> fn(U) ∩ start`` by Kleene descent from ``start``."""
    U = frozenset(start)
    if trace is not None:
        trace.append(U)
    while True:
        nxt = fn(U) & U
        if trace is not None:
            trace.append(nxt)
        if nxt == U:
            return U
        U = nxt


def gfp_approx(d: Diagram, a: Valuation, trace: list | None = None) -> frozenset:
    """Greatest fixpoint of ``U -> approximate(d, a, U)`` below the nonzero support of ``a``."""
    _require_endo(d, a)
    approx = approximation_map(d, a)
    return greatest_fixpoint(approx, support_nonzero(a), trace)


def _restricted_gfp(d: Diagram, a: Valuation, fa: Valuation, trace: list | None) -> frozenset:
    eq = agreement_set(a, fa) & support_nonzero(a)
    approx = approximation_map(d, a)
    return greatest_fixpoint(lambda U: approx(U) & eq, eq, trace)


def check_least(d: Diagram, a: Valuation, *, suggest: bool = True) -> CheckReport:
    _require_endo(d, a)
    fa = evaluate(d, a)
    if fa != a:
        return CheckReport(Mode.LEAST, False, Verdict.INCONCLUSIVE, disagreement_set(a, fa),
                           reason="candidate is not a fixpoint")
    trace: list = []
    nu = gfp_approx(d, a, trace)
    if not nu:
        return CheckReport(Mode.LEAST, True, Verdict.CONFIRMED, frozenset(), iterations=trace)
    report = CheckReport(Mode.LEAST, True, Verdict.REFUTED, nu, iterations=trace)
    if suggest:
        delta, corrected = suggest_decrease(d, a, nu)
        report.suggested_delta = delta
        report.corrected = corrected
    return report


def check_greatest(d: Diagram, a: Valuation, *, suggest: bool = True) -> CheckReport:
    _require_endo(d, a)
    r = check_least(conjugate(d), a.complement(), suggest=suggest)
    corrected = None if r.corrected is None else r.corrected.complement()
    return replace(r, mode=Mode.GREATEST, corrected=corrected)


def check_post_below_least(d: Diagram, a: Valuation) -> CheckReport:
    """Sound rule: ``a ⊑ f(a)`` and an empty restricted gfp give ``a ⊑ μf``."""
    _require_endo(d, a)
    fa = evaluate(d, a)
    is_fix = fa == a
    if not a.leq(fa):
        return CheckReport(Mode.POST_BELOW_LEAST, is_fix, Verdict.INCONCLUSIVE,
                           frozenset(e for e, v in a.items() if v > fa[e]),
                           reason="candidate is not a post-fixpoint")
    trace: list = []
    nu = _restricted_gfp(d, a, fa, trace)
    if not nu:
        return CheckReport(Mode.POST_BELOW_LEAST, is_fix, Verdict.CONFIRMED, frozenset(),
                           iterations=trace)
    return CheckReport(Mode.POST_BELOW_LEAST, is_fix, Verdict.INCONCLUSIVE, nu, iterations=trace,
                       reason="restricted approximation has a nonempty greatest fixpoint")


def check_pre_above_greatest(d: Diagram, a: Valuation) -> CheckReport:
    """Dual rule: ``f(a) ⊑ a`` and an empty restricted gfp give ``νf ⊑ a``."""
    _require_endo(d, a)
    r = check_post_below_least(conjugate(d), a.complement())
    reason = r.reason.replace("post-fixpoint", "pre-fixpoint")
    return replace(r, mode=Mode.PRE_ABOVE_GREATEST, reason=reason)


def check(d: Diagram, a: Valuation, mode: Mode | str) -> CheckReport:
    mode = Mode(mode)
    if mode == Mode.LEAST:
        return check_least(d, a)
    if mode == Mode.GREATEST:
        return check_greatest(d, a)
    if mode == Mode.POST_BELOW_LEAST:
        return check_post_below_least(d, a)
    return check_pre_above_greatest(d, a)


def is_pre_fixpoint(d: Diagram, b: Valuation) -> bool:
    return evaluate(d, b).leq(b)


def suggest_decrease(d: Diagram, a: Valuation, witness: Iterable) -> tuple[MVValue, Valuation]:
    """Find ``δ ⊐ 0`` such that ``a ⊖ δ_witness`` is a pre-fixpoint.

    Finite chains scan ``k, k-1, ..., 1``.  On the real interval the search
    halves from ``top`` until a probe verifies, then bisects between the best
    verified and the smallest refuted value.  Every returned value has been
    checked exactly.
    """
    _require_endo(d, a)
    W = frozenset(witness)
    if not W:
        raise ValueError("suggest_decrease needs a nonempty witness")
    if not W <= support_nonzero(a):
        raise ValueError("witness must lie in the nonzero support of the candidate")
    alg = a.algebra

    def ok(delta) -> Optional[Valuation]:
        b = decrease(a, delta, W)
        return b if is_pre_fixpoint(d, b) else None

    if alg.kind == CHAIN:
        for delta in range(alg.k, 0, -1):
            b = ok(delta)
            if b is not None:
                return MVValue(delta, alg), b
        raise SearchExhausted("no decrease in {1..k} yields a pre-fixpoint")

    probes = 0
    hi = None  # smallest refuted probe
    best = None
    delta = alg.top
    while probes < PROBE_BUDGET:
        probes += 1
        b = ok(delta)
        if b is not None:
            best = (delta, b)
            break
        hi = delta
        delta = delta / 2
    if best is None:
        raise SearchExhausted(f"no verified decrease within {PROBE_BUDGET} probes")
    lo = best[0]
    refine = 0
    while hi is not None and probes < PROBE_BUDGET and refine < 16:
        probes += 1
        refine += 1
        mid = (lo + hi) / 2
        b = ok(mid)
        if b is not None:
            lo, best = mid, (mid, b)
        else:
            hi = mid
    log.debug("decrease search used %d probes, delta=%s", probes, best[0])
    return MVValue(best[0], alg), best[1]


@dataclass
class IterationResult:
    valuation: Valuation
    confirmed: bool
    rounds: int
    residual: Number
    exhausted: bool
    history: list = field(default_factory=list)  # (round, kleene_steps, delta or None)


def kleene_descent(d: Diagram, b: Valuation, epsilon=DEFAULT_EPSILON,
                   max_steps: int = 100_000) -> tuple[Valuation, Number, int]:
    """Iterate ``b -> f(b)`` from a pre-fixpoint.  Stops on an exact fixpoint or
    when successive iterates differ by less than ``epsilon`` in norm.
    Returns ``(iterate, residual, steps)``."""
    steps = 0
    while True:
        c = evaluate(d, b).relabel(b.domain)
        if c == b:
            return b, b.algebra.bottom, steps
        steps += 1
        gap = norm(b.ominus(c))
        b = c
        if gap < epsilon or steps >= max_steps:
            residual = norm(b.ominus(evaluate(d, b)))
            return b, residual, steps


def iterate_to_least_from_above(d: Diagram, a: Valuation, max_rounds: int = 50,
                                epsilon=DEFAULT_EPSILON) -> IterationResult:
    """Alternate Kleene descent with the least-fixpoint check and its decrease
    until the iterate is confirmed as the least fixpoint."""
    _require_endo(d, a)
    if not is_pre_fixpoint(d, a):
        raise ValueError("iteration from above needs a pre-fixpoint as the start value")
    b = a
    history = []
    for rnd in range(max_rounds + 1):
        b, residual, steps = kleene_descent(d, b, epsilon)
        if residual != 0:
            history.append((rnd, steps, None))
            return IterationResult(b, False, rnd, residual, False, history)
        report = check_least(d, b)
        if report.verdict == Verdict.CONFIRMED:
            history.append((rnd, steps, None))
            return IterationResult(b, True, rnd, residual, False, history)
        history.append((rnd, steps, report.suggested_delta))
        if rnd == max_rounds:
            break
        b = report.corrected
    return IterationResult(b, False, max_rounds, norm(b.ominus(evaluate(d, b))), True, history)


def iterate_to_greatest_from_below(d: Diagram, a: Valuation, max_rounds: int = 50,
                                   epsilon=DEFAULT_EPSILON) -> IterationResult:
    r = iterate_to_least_from_above(conjugate(d), a.complement(), max_rounds, epsilon)
    return replace(r, valuation=r.valuation.complement())

