"""Brute-force reference implementations for cross-checking.

Everything here goes through :func:`evaluate` only and never touches the
structural approximation rules.
"""

from __future__ import annotations

from typing import Iterable

from .diagrams import Diagram, blocks_of, evaluate, typecheck
from .mv import CHAIN, MVValue
from .valuations import Element, Valuation, decrease, support_nonzero


def _delta_value(a: Valuation, delta):
    if isinstance(delta, MVValue):
        if delta.algebra != a.algebra:
            raise ValueError("delta lives in a different algebra")
        delta = delta.value
    delta = a.algebra.coerce(delta)
    if delta == 0:
        raise ValueError("delta must be strictly positive")
    return delta


def approx_delta(d: Diagram, a: Valuation, delta, yprime: Iterable[Element]) -> frozenset:
    """Output elements whose value drops by at least ``delta`` when ``a`` is
    decreased by ``delta`` on ``yprime``."""
    delta = _delta_value(a, delta)
    U = frozenset(yprime)
    if not U <= support_nonzero(a):
        raise ValueError("subset must lie in the nonzero support of the valuation")
    fa = evaluate(d, a)
    fb = evaluate(d, decrease(a, delta, U))
    alg = a.algebra
    return frozenset(z for z, v in fa.items() if v != 0 and alg.ominus(v, fb[z]) >= delta)


def approx_delta_union(d: Diagram, a: Valuation, yprime: Iterable[Element]) -> frozenset:
    """Union of :func:`approx_delta` over every ``delta`` in ``{1..k}``."""
    if a.algebra.kind != CHAIN:
        raise ValueError("the exhaustive union is only available on finite chains")
    U = frozenset(yprime)
    out: frozenset = frozenset()
    for delta in range(1, a.algebra.k + 1):
        out |= approx_delta(d, a, delta, U)
    return out


def _kleene(d: Diagram, start: Valuation, trace: list | None) -> Valuation:
    typecheck(d)
    if not d.is_endo:
        raise ValueError("fixpoints need a diagram whose input and output sets agree")
    if start.algebra.kind != CHAIN:
        raise ValueError("brute-force fixpoints are only available on finite chains")
    a = start
    while True:
        if trace is not None:
            trace.append(a)
        b = evaluate(d, a).relabel(a.domain)
        if b == a:
            return a
        a = b


def _algebra_of(d: Diagram, algebra):
    if algebra is not None:
        return algebra
    for b in blocks_of(d):
        if isinstance(b.param, Valuation):
            return b.param.algebra
    raise ValueError("cannot infer the algebra from the diagram; pass it explicitly")


def brute_lfp(d: Diagram, algebra=None, trace: list | None = None) -> Valuation:
    """Least fixpoint by iteration from the bottom valuation.  The algebra is
    taken from a parametrised block when not given."""
    alg = _algebra_of(d, algebra)
    return _kleene(d, Valuation.constant(d.input, alg, alg.bottom), trace)


def brute_gfp(d: Diagram, algebra=None, trace: list | None = None) -> Valuation:
    """Greatest fixpoint by iteration from the top valuation."""
    alg = _algebra_of(d, algebra)
    return _kleene(d, Valuation.constant(d.input, alg, alg.top), trace)
