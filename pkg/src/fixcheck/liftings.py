"""Wasserstein/Hausdorff liftings, their approximations and the two frontends.

Distribution kind: the lifting is expectation, couplings are transport plans
and the optimum is found with the exact simplex.  The vertex set of the
transportation polytope serves as the finite coupling set when a diagram is
built.  Powerset kind: the lifting is ``max`` and couplings are relations
whose projections are the two successor sets.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import blocks as B
from . import simplex
from .diagrams import Diagram, block, seq, tensor
from .mv import MVAlgebra, REAL
from .valuations import (EMPTY, Distribution, Element, FiniteSet, Valuation, coproduct,
                         format_element)

UNIT = MVAlgebra(REAL, 1)

VERTEX_LIMIT = 8        # support size per marginal for vertex enumeration
POWERSET_PAIR_CAP = 16  # |S1 x S2| for powerset coupling enumeration


class EnumerationLimit(ValueError):
    pass


# transition systems

@dataclass(frozen=True)
class MarkovChain:
    states: FiniteSet
    terminal: frozenset
    next: Mapping[Element, Distribution]

    def __post_init__(self):
        if not self.terminal <= self.states.members:
            raise ValueError("terminal states must be states")
        for s in self.states:
            if s in self.terminal:
                if s in self.next:
                    raise ValueError(f"terminal state {format_element(s)} has outgoing edges")
            elif s not in self.next:
                raise ValueError(f"state {format_element(s)} has no successor distribution")
        for s, p in self.next.items():
            if not p.support <= self.states.members:
                raise ValueError(f"distribution of {format_element(s)} leaves the state set")


@dataclass(frozen=True)
class LabelledMarkovChain:
    states: FiniteSet
    labels: Mapping[Element, str]
    next: Mapping[Element, Distribution]

    def __post_init__(self):
        for s in self.states:
            if s not in self.next:
                raise ValueError(f"state {format_element(s)} has no successor distribution")
            if s not in self.labels:
                raise ValueError(f"state {format_element(s)} has no label")
            if not self.next[s].support <= self.states.members:
                raise ValueError(f"distribution of {format_element(s)} leaves the state set")

    def successor(self, x: Element) -> tuple:
        """The coalgebra value ``(label, distribution)``."""
        return (self.labels[x], _canonical_dist(self.next[x], self.states))


@dataclass(frozen=True)
class NondetTS:
    states: FiniteSet
    succ: Mapping[Element, frozenset]

    def __post_init__(self):
        for s in self.states:
            if s not in self.succ:
                raise ValueError(f"state {format_element(s)} has no successor set")
            if not frozenset(self.succ[s]) <= self.states.members:
                raise ValueError(f"successors of {format_element(s)} leave the state set")

    def successor(self, x: Element) -> frozenset:
        return frozenset(self.succ[x])


def _canonical_dist(p: Distribution, base: FiniteSet) -> Distribution:
    """Rename ``p`` after its weights so equal distributions become equal elements."""
    items = sorted(p.items(), key=lambda ew: base.index(ew[0]))
    name = "{" + ",".join(f"{format_element(e)}:{_fmt(w)}" for e, w in items) + "}"
    return Distribution(name, tuple(items))


def _fmt(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def coupling_distribution(weights: Mapping[tuple, Fraction], states: FiniteSet) -> Distribution:
    items = [(pair, w) for pair, w in weights.items() if w]
    items.sort(key=lambda pw: (states.index(pw[0][0]), states.index(pw[0][1])))
    name = "t{" + ",".join(f"{format_element(e)}:{_fmt(w)}" for e, w in items) + "}"
    return Distribution(name, tuple(items))


def marginals(t: Distribution) -> tuple[dict, dict]:
    left: dict = {}
    right: dict = {}
    for (x1, x2), w in t.items():
        left[x1] = left.get(x1, Fraction(0)) + w
        right[x2] = right.get(x2, Fraction(0)) + w
    return left, right


def is_coupling(t: Distribution, p1: Distribution, p2: Distribution) -> bool:
    left, right = marginals(t)
    return left == dict(p1.items()) and right == dict(p2.items())


# distribution kind

def _support_order(p: Distribution) -> list:
    return [e for e, _ in p.items()]


def _transport_lp(d: Valuation, p1: Distribution, p2: Distribution,
                  allowed: frozenset | None = None):
    """LP data over the cells ``supp p1 x supp p2`` (optionally restricted)."""
    rows, cols = _support_order(p1), _support_order(p2)
    cells = [(x1, x2) for x1 in rows for x2 in cols
             if allowed is None or (x1, x2) in allowed]
    A, b = [], []
    for x1 in rows:
        A.append([1 if c[0] == x1 else 0 for c in cells])
        b.append(p1(x1))
    for x2 in cols:
        A.append([1 if c[1] == x2 else 0 for c in cells])
        b.append(p2(x2))
    c = [d[cell] for cell in cells]
    return cells, c, A, b


def optimal_transport(d: Valuation, p1: Distribution,
                      p2: Distribution) -> tuple[Fraction, dict]:
    """Optimal transport cost and one optimal plan (cell -> mass)."""
    cells, c, A, b = _transport_lp(d, p1, p2)
    value, x = simplex.solve(c, A, b)
    return value, {cell: w for cell, w in zip(cells, x) if w}


def wasserstein_distribution(d: Valuation, p1: Distribution, p2: Distribution) -> Fraction:
    if not (d.algebra.kind == REAL and d.algebra.k == 1):
        raise ValueError("the distribution lifting needs the algebra [0,1]")
    return optimal_transport(d, p1, p2)[0]


def restricted_transport(d: Valuation, p1: Distribution, p2: Distribution,
                         allowed: frozenset) -> Fraction | None:
    """Optimal cost over plans supported in ``allowed``; None if there is none."""
    cells, c, A, b = _transport_lp(d, p1, p2, allowed)
    try:
        return simplex.solve(c, A, b)[0]
    except simplex.Infeasible:
        return None


def transport_vertices(p1: Distribution, p2: Distribution,
                       limit: int = VERTEX_LIMIT) -> list[dict]:
    """All vertices of the transportation polytope of ``(p1, p2)``.

    A vertex has a forest as support, so it has a line (row or column)
    carrying a single cell.  Peeling that cell (which takes the full remaining
    mass of its line) and recursing enumerates every vertex; the
    recursion is memoised on the remaining masses.
    """
    return [dict(v) for v in _vertices(p1.weights, p2.weights, limit)]


@functools.lru_cache(maxsize=1024)
def _vertices(w1: tuple, w2: tuple, limit: int) -> tuple:
    p1, p2 = dict(w1), dict(w2)
    rows, cols = list(p1), list(p2)
    if len(rows) > limit or len(cols) > limit:
        raise EnumerationLimit(
            f"vertex enumeration is limited to supports of size {limit}; "
            f"got {len(rows)} x {len(cols)}")
    # work in integer units of the common denominator; Fractions hash slowly
    den = math.lcm(*(w.denominator for w in [*(p1[x] for x in rows), *(p2[x] for x in cols)]))
    ncols = len(cols)
    memo: dict = {}

    def plans(supply: tuple, demand: tuple) -> frozenset:
        alive_r = [i for i, s in enumerate(supply) if s]
        alive_c = [j for j, t in enumerate(demand) if t]
        if not alive_r:
            return frozenset([frozenset()])
        key = (supply, demand)
        if key in memo:
            return memo[key]
        out = set()
        for i in alive_r:
            for j in alive_c:
                amt = min(supply[i], demand[j])
                s2 = supply[:i] + (supply[i] - amt,) + supply[i + 1:]
                d2 = demand[:j] + (demand[j] - amt,) + demand[j + 1:]
                cell = (i * ncols + j, amt)
                for rest in plans(s2, d2):
                    out.add(rest | {cell})
        res = frozenset(out)
        memo[key] = res
        return res

    found = plans(tuple(int(p1[x] * den) for x in rows), tuple(int(p2[x] * den) for x in cols))
    result = []
    for plan in found:
        t = {}
        for c, amt in sorted(plan):
            t[(rows[c // ncols], cols[c % ncols])] = Fraction(amt, den)
        result.append(t)
    result.sort(key=lambda t: sorted((rows.index(c[0]), cols.index(c[1]), w)
                                     for c, w in t.items()))
    return tuple(tuple(t.items()) for t in result)


def lifting_member_distribution(t: Distribution | Mapping, d: Valuation,
                                yprime: Iterable[Element]) -> bool:
    """Is the coupling ``t`` in the approximation of expectation at ``d`` on ``yprime``?"""
    yp = frozenset(yprime)
    support = t.support if isinstance(t, Distribution) else frozenset(c for c, w in t.items() if w)
    if any(d[c] == 0 for c in yp):
        raise ValueError("subset must lie in the nonzero support of d")
    return bool(support) and support <= yp


def expectation(d: Valuation, t: Distribution | Mapping) -> Fraction:
    items = t.items()
    return sum((w * d[c] for c, w in items), Fraction(0))


# powerset kind

def powerset_couplings(s1: Iterable[Element], s2: Iterable[Element],
                       cap: int = POWERSET_PAIR_CAP) -> list[frozenset]:
    """All relations ``t ⊆ s1 x s2`` whose projections are ``s1`` and ``s2``."""
    s1, s2 = frozenset(s1), frozenset(s2)
    pairs = sorted(((a, b) for a in s1 for b in s2), key=format_element)
    if len(pairs) > cap:
        raise EnumerationLimit(f"powerset couplings are limited to {cap} candidate pairs; "
                               f"got {len(pairs)}")
    out = []

    def extend(i: int, chosen: list, left: set, right: set) -> None:
        if i == len(pairs):
            if left == s1 and right == s2:
                out.append(frozenset(chosen))
            return
        # prune: every element not yet covered must still be coverable
        rest = pairs[i:]
        if not (s1 - left) <= {a for a, _ in rest} or not (s2 - right) <= {b for _, b in rest}:
            return
        a, b = pairs[i]
        chosen.append(pairs[i])
        extend(i + 1, chosen, left | {a}, right | {b})
        chosen.pop()
        extend(i + 1, chosen, left, right)

    extend(0, [], set(), set())
    return out


def lifting_member_powerset(t: Iterable[tuple], d: Valuation, yprime: Iterable[Element]) -> bool:
    """Some pair of ``t`` inside ``yprime`` strictly dominates every pair outside it."""
    t = frozenset(t)
    yp = frozenset(yprime)
    inside = [d[c] for c in t if c in yp]
    outside = [d[c] for c in t if c not in yp]
    if not inside:
        return False
    best = max(inside)
    return best != 0 and all(best > v for v in outside)


def hausdorff_powerset(d: Valuation, s1: Iterable[Element], s2: Iterable[Element]):
    """Lifted distance of two finite sets: min over couplings of the max of ``d``."""
    s1, s2 = list(s1), list(s2)
    alg = d.algebra
    if not s1 and not s2:
        return alg.bottom
    if not s1 or not s2:
        return alg.top
    fwd = max(min(d[(a, b)] for b in s2) for a in s1)
    bwd = max(min(d[(a, b)] for a in s1) for b in s2)
    return max(fwd, bwd)


def powerset_lifting(d: Valuation, t: Iterable[tuple]):
    return max((d[c] for c in t), default=d.algebra.bottom)


# behavioural function and its approximation computed directly

def _pairs(states: FiniteSet) -> FiniteSet:
    return states.product(states)


def wasserstein_function(system, d: Valuation) -> Valuation:
    """``W(d)(x, y)`` = lifted distance of the successors of ``x`` and ``y``."""
    Y = _pairs(system.states)
    out = {}
    for x, y in Y:
        if isinstance(system, NondetTS):
            out[(x, y)] = hausdorff_powerset(d, system.successor(x), system.successor(y))
        elif system.labels[x] != system.labels[y]:
            out[(x, y)] = d.algebra.top
        else:
            out[(x, y)] = wasserstein_distribution(d, system.next[x], system.next[y])
    return Valuation(Y, d.algebra, out, check=False)


def behavioural_function(lmc: LabelledMarkovChain, d: Valuation) -> Valuation:
    """``B(d)``: 1 on pairs with different labels, the lifted distance otherwise."""
    return wasserstein_function(lmc, d)


def w_approx(d: Valuation, yprime: Iterable[Element], system) -> frozenset:
    """Approximation of ``W`` at ``d``: pairs of ``[Y]^{W(d)}`` with an optimal
    coupling that belongs to the lifting's approximation on ``yprime``."""
    yp = frozenset(yprime)
    if any(d[c] == 0 for c in yp):
        raise ValueError("subset must lie in the nonzero support of d")
    wd = wasserstein_function(system, d)
    out = set()
    for x, y in wd.domain:
        opt = wd[(x, y)]
        if opt == 0:
            continue
        if isinstance(system, NondetTS):
            s1, s2 = system.successor(x), system.successor(y)
            if any(powerset_lifting(d, t) == opt and lifting_member_powerset(t, d, yp)
                   for t in powerset_couplings(s1, s2)):
                out.add((x, y))
        else:
            if system.labels[x] != system.labels[y]:
                continue
            restricted = restricted_transport(d, system.next[x], system.next[y], yp)
            if restricted is not None and restricted == opt:
                out.add((x, y))
    return frozenset(out)


# diagram builders

def build_termination_diagram(mc: MarkovChain) -> Diagram:
    """``(η* ∘ expectation) ⊗ c_1`` on the state set."""
    S = mc.states
    live = FiniteSet(s for s in S if s not in mc.terminal)
    term = FiniteSet(s for s in S if s in mc.terminal)
    dists: dict = {}
    eta = {}
    for s in live:
        p = mc.next[s]
        key = frozenset(p.items())
        if key not in dists:
            items = sorted(p.items(), key=lambda ew: S.index(ew[0]))
            dists[key] = Distribution(f"p_{format_element(s)}", tuple(items))
        eta[s] = dists[key]
    D = FiniteSet(dists.values())
    left = seq(block(B.expect(S, D, "D")), block(B.reindex(eta, D, live, "eta")))
    k = Valuation.constant(term, UNIT, 1)
    return tensor(left, block(B.const(k, EMPTY, "c_k")))


def _lmc_coupling_sets(lmc: LabelledMarkovChain):
    """Pair set, coalgebra pairs, coupling set and the marginal relation."""
    X = lmc.states
    Y = _pairs(X)
    keys = {}
    for x, y in Y:
        keys[(x, y)] = (lmc.successor(x), lmc.successor(y))
    Wset = FiniteSet(dict.fromkeys(keys.values()))
    V: dict = {}
    rel = set()
    for w in Wset:
        (l1, p1), (l2, p2) = w
        if l1 != l2:
            continue
        for plan in transport_vertices(p1, p2):
            t = coupling_distribution(plan, X)
            V.setdefault(t, None)
            rel.add((t, w))
    return Y, keys, Wset, FiniteSet(V), rel


def build_wasserstein_diagram(system) -> Diagram:
    """``(ξ×ξ)* ∘ min_u ∘ F̃`` over a finite coupling set."""
    if isinstance(system, NondetTS):
        return _build_powerset_diagram(system)
    Y, keys, Wset, V, rel = _lmc_coupling_sets(system)
    return seq(block(B.expect(Y, V, "D")),
               block(B.minrel(rel, V, Wset, "min_u")),
               block(B.reindex(keys, Wset, Y, "xi_x_xi")))


def _build_powerset_diagram(nts: NondetTS) -> Diagram:
    X = nts.states
    Y = _pairs(X)
    keys = {(x, y): (nts.successor(x), nts.successor(y)) for x, y in Y}
    Wset = FiniteSet(dict.fromkeys(keys.values()))
    V: dict = {}
    rel = set()
    for w in Wset:
        for t in powerset_couplings(*w):
            V.setdefault(t, None)
            rel.add((t, w))
    V = FiniteSet(V)
    member = {(c, t) for t in V for c in t}
    return seq(block(B.maxrel(member, Y, V, "P")),
               block(B.minrel(rel, V, Wset, "min_u")),
               block(B.reindex(keys, Wset, Y, "xi_x_xi")))


def build_behavioural_diagram(lmc: LabelledMarkovChain) -> Diagram:
    """``max_ρ ∘ (c_k ⊗ W)`` with ``k = 1`` exactly on pairs with different labels."""
    X = lmc.states
    Y = _pairs(X)
    k = Valuation(Y, UNIT, {(x, y): 1 if lmc.labels[x] != lmc.labels[y] else 0 for x, y in Y})
    inner = tensor(block(B.const(k, EMPTY, "c_k")), build_wasserstein_diagram(lmc))
    cp = coproduct(Y, Y)
    rho = {(cp.inl(y), y) for y in Y} | {(cp.inr(y), y) for y in Y}
    return seq(inner, block(B.maxrel(rho, cp.carrier, Y, "max_rho")))


# non-expansiveness spot checks for the two liftings

def distribution_lifting_bounded(delta, Y: FiniteSet, D: Sequence[Distribution]) -> bool:
    """Expectation of the constant ``δ_Y`` stays below ``δ`` on every ``p`` in ``D``."""
    dv = Valuation.constant(Y, UNIT, delta)
    return all(expectation(dv, p) <= dv.algebra.coerce(delta) for p in D)


def powerset_lifting_bounded(delta, Y: FiniteSet, algebra: MVAlgebra,
                             family: Sequence[frozenset]) -> bool:
    """``max`` of the constant ``δ_Y`` stays below ``δ`` on every set in ``family``."""
    dv = Valuation.constant(Y, algebra, delta)
    bound = algebra.coerce(delta)
    return all(max((dv[y] for y in S), default=algebra.bottom) <= bound for S in family)
