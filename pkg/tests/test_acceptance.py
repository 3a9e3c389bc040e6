"""End-to-end acceptance suite: one block of tests per criterion.

Each test records a pass/fail line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import os
import random
import time
from fractions import Fraction

import pytest

from conftest import MODELS, record
from gen import Gen, all_valuations, positional, positions, random_distribution, \
    random_subset, random_valuation, to_domain

from fixcheck.diagrams import (Disch, Dup, Id, Seq, Sym, Tensor, approximate, evaluate,
                               rewire)
from fixcheck.dsl import parse_system
from fixcheck.engine import (Verdict, check_greatest, check_least, gfp_approx,
                             greatest_fixpoint, is_pre_fixpoint,
                             iterate_to_least_from_above)
from fixcheck.liftings import (UNIT, LabelledMarkovChain, build_behavioural_diagram,
                               build_termination_diagram, build_wasserstein_diagram,
                               hausdorff_powerset, lifting_member_powerset,
                               optimal_transport, transport_vertices, w_approx,
                               wasserstein_distribution, wasserstein_function, expectation)
from fixcheck.mv import CHAIN, MVAlgebra
from fixcheck.oracle import approx_delta_union, brute_lfp
from fixcheck.valuations import EMPTY, FiniteSet, Valuation, norm, support_nonzero


def load(name):
    kind = name.rsplit(".", 1)[1]
    with open(os.path.join(MODELS, name)) as fh:
        return parse_system(fh.read(), kind, name)


def off_diagonal(X):
    return frozenset((x, y) for x in X for y in X if x != y)


# criterion 1

def test_criterion_1_termination():
    t0 = time.perf_counter()
    sf = load("termination.mc")
    T = build_termination_diagram(sf.system)
    ones, mu = sf.candidates["ones"], sf.candidates["muT"]
    assert mu == Valuation(sf.system.states, UNIT, {"x": Fraction(1, 2), "u": 1, "y": 0, "z": 0})
    r1 = check_least(T, ones)
    r2 = check_least(T, mu)
    r3 = check_greatest(T, ones)
    elapsed = time.perf_counter() - t0
    ok = (r1.verdict == Verdict.REFUTED and r1.witness == {"y", "z"}
          and r2.verdict == Verdict.CONFIRMED and r3.verdict == Verdict.CONFIRMED
          and elapsed < 1)
    record(1, ok, f"{elapsed:.3f}s")
    assert r1.verdict == Verdict.REFUTED
    assert r1.witness == {"y", "z"}
    assert r2.verdict == Verdict.CONFIRMED
    assert r3.verdict == Verdict.CONFIRMED
    assert elapsed < 1


# criterion 2

def test_criterion_2_behavioural_metric():
    t0 = time.perf_counter()
    sf = load("split.lmc")
    d = sf.candidates["d8"]
    assert d[("3", "3")] == 0 and d[("1", "1")] == Fraction(1, 2)
    assert all(d[p] == Fraction(2, 3) for p in [("1", "2"), ("2", "1"), ("2", "2")])
    assert d[("4", "4")] == 1 and d[("3", "4")] == 1
    Bd = build_behavioural_diagram(sf.system)
    is_fix = evaluate(Bd, d) == d
    least = check_least(Bd, d)
    greatest = check_greatest(Bd, d)
    nu = gfp_approx(Bd, d)
    elapsed = time.perf_counter() - t0
    ok = (is_fix and least.verdict == Verdict.REFUTED and greatest.verdict == Verdict.REFUTED
          and nu == {("4", "4")} and elapsed < 5)
    record(2, ok, f"{elapsed:.3f}s")
    assert is_fix
    assert least.verdict == Verdict.REFUTED
    assert greatest.verdict == Verdict.REFUTED
    assert nu == {("4", "4")}
    assert elapsed < 5


# criterion 3

def test_criterion_3_vicious_cycle():
    t0 = time.perf_counter()
    sf = load("cycle.lmc")
    a = sf.candidates["vicious"]
    Bd = build_behavioural_diagram(sf.system)
    is_fix = evaluate(Bd, a) == a
    nu = gfp_approx(Bd, a)
    it = iterate_to_least_from_above(Bd, a)
    elapsed = time.perf_counter() - t0
    zero_off = all(it.valuation[p] == 0 for p in off_diagonal(sf.system.states))
    ok = is_fix and nu == {("1", "2"), ("2", "1")} and it.confirmed and zero_off and elapsed < 1
    record(3, ok, f"{elapsed:.3f}s")
    assert is_fix
    assert nu == {("1", "2"), ("2", "1")}
    assert it.confirmed and zero_off
    assert elapsed < 1


# criterion 4: the three-state distribution system

def test_criterion_4_distance_and_coupling():
    sf = load("three.lmc")
    lmc, d = sf.system, sf.candidates["d"]
    value, plan = optimal_transport(d, lmc.next["x"], lmc.next["y"])
    W = wasserstein_function(lmc, d)
    ok = (value == 1 and W[("x", "y")] == 1
          and plan == {("x", "y"): Fraction(1, 2), ("x", "z"): Fraction(1, 2)})
    record(4, ok, "W(d)(x,y)=%s" % W[("x", "y")])
    assert W[("x", "y")] == 1
    assert plan == {("x", "y"): Fraction(1, 2), ("x", "z"): Fraction(1, 2)}


def test_criterion_4_greatest_fixpoint():
    sf = load("three.lmc")
    lmc, d = sf.system, sf.candidates["d"]
    expected = off_diagonal(lmc.states)
    nu = gfp_approx(build_wasserstein_diagram(lmc), d)
    nu_direct = greatest_fixpoint(lambda U: w_approx(d, U, lmc), support_nonzero(d))
    record(4, nu == expected, "gfp has %d pairs, expected 6" % len(nu))
    assert nu == nu_direct
    assert nu == expected


# criterion 5: the powerset system

def test_criterion_5_powerset():
    sf = load("branch.nts")
    nts, d = sf.system, sf.candidates["half"]
    h = hausdorff_powerset(d, nts.successor("x"), nts.successor("y"))
    nu = gfp_approx(build_wasserstein_diagram(nts), d)
    Yp = {("x", "y"), ("y", "x")}
    t = {("x", "x"), ("y", "x")}
    S = {(d[c], 1 if c in Yp else 0) for c in t}
    member = lifting_member_powerset(t, d, Yp)
    ok = (h == Fraction(1, 2) and nu == Yp and member
          and S == {(0, 0), (Fraction(1, 2), 1)})
    record(5, ok)
    assert h == Fraction(1, 2)
    assert nu == Yp
    assert S == {(0, 0), (Fraction(1, 2), 1)}
    assert member


# criterion 6: vertex/LP agreement and the two routes to the approximation

def random_lmc(rng):
    n = rng.randint(1, 5)
    X = FiniteSet(str(i) for i in range(n))
    labels = {x: rng.choice("AB") for x in X}
    nxt = {x: random_distribution(rng, f"eta({x})", X, max_den=12) for x in X}
    return LabelledMarkovChain(X, labels, nxt)


def test_criterion_6_vertices_and_routes():
    rng = random.Random(6)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(100):
        lmc = random_lmc(rng)
        Y = lmc.states.product(lmc.states)
        d = random_valuation(rng, Y, UNIT)
        for x, y in Y:
            p1, p2 = lmc.next[x], lmc.next[y]
            lp = wasserstein_distribution(d, p1, p2)
            vmin = min(expectation(d, t) for t in transport_vertices(p1, p2))
            mismatches += lp != vmin
        W = build_wasserstein_diagram(lmc)
        for _ in range(3):
            U = random_subset(rng, support_nonzero(d), 0.7)
            mismatches += w_approx(d, U, lmc) != approximate(W, d, U)
    elapsed = time.perf_counter() - t0
    record(6, mismatches == 0 and elapsed < 60, f"{elapsed:.1f}s")
    assert mismatches == 0
    assert elapsed < 60


# criterion 7: oracle equivalence on finite chains

ENUM_LIMIT = 1024


def candidate_fixpoints(rng, d, alg):
    X = d.input
    if (alg.k + 1) ** len(X) <= ENUM_LIMIT:
        pool = all_valuations(X, alg)
    else:
        pool = (random_valuation(rng, X, alg, 0.1) for _ in range(300))
    fix = [a for a in pool if evaluate(d, a).relabel(X) == a]
    top = Valuation.constant(X, alg, alg.top)
    while True:
        nxt = evaluate(d, top).relabel(X)
        if nxt == top:
            break
        top = nxt
    fix.append(top)
    return fix


def test_criterion_7_oracle_equivalence():
    rng = random.Random(7)
    t0 = time.perf_counter()
    approx_bad = lfp_bad = larger_bad = larger = 0
    for _ in range(200):
        alg = MVAlgebra(CHAIN, rng.randint(1, 4))
        g = Gen(rng, alg)
        X = g.carrier()
        d = g.endo(X, 4)
        for _ in range(3):
            a = random_valuation(rng, X, alg)
            U = random_subset(rng, support_nonzero(a))
            approx_bad += approximate(d, a, U) != approx_delta_union(d, a, U)
        mu = brute_lfp(d, alg)
        lfp_bad += check_least(d, mu).verdict != Verdict.CONFIRMED
        for b in candidate_fixpoints(rng, d, alg):
            if b == mu:
                continue
            assert mu.leq(b)
            larger += 1
            r = check_least(d, b)
            if r.verdict != Verdict.REFUTED or not is_pre_fixpoint(d, r.corrected) \
                    or not r.corrected.leq(b) or r.corrected == b:
                larger_bad += 1
    elapsed = time.perf_counter() - t0
    ok = approx_bad == lfp_bad == larger_bad == 0 and elapsed < 120
    record(7, ok, f"{larger} larger fixpoints, {elapsed:.1f}s")
    assert approx_bad == 0
    assert lfp_bad == 0
    assert larger_bad == 0
    assert larger > 0
    assert elapsed < 120


# criterion 8: gs-monoidal axioms

def compose(f, g):
    """``g ∘ f`` up to the canonical isomorphism between f's output and g's input."""
    if f.output.same_elements(g.input):
        return Seq(f, g)
    return Seq(Seq(f, rewire(f.output, g.input)), g)


def agree(lhs, rhs, rng, alg, samples=4) -> bool:
    """Both sides agree positionally under evaluate and approximate."""
    if len(lhs.input) != len(rhs.input) or len(lhs.output) != len(rhs.output):
        return False
    for _ in range(samples):
        a = random_valuation(rng, lhs.input, alg)
        U = random_subset(rng, support_nonzero(a))
        b = to_domain(a, rhs.input)
        Ub = {rhs.input.elements[i] for i in positions(lhs.input, U)}
        if positional(evaluate(lhs, a)) != positional(evaluate(rhs, b)):
            return False
        if positions(lhs.output, approximate(lhs, a, U)) != \
                positions(rhs.output, approximate(rhs, b, Ub)):
            return False
    return True


def _axioms(g: Gen):
    rng = g.rng
    small = lambda: g.carrier(1, 3)  # noqa: E731
    diag = lambda X: g.diagram(X, 2, 3)  # noqa: E731

    def functoriality():
        a, a2 = small(), small()
        f, f2 = diag(a), diag(a2)
        h, h2 = diag(f.output), diag(f2.output)
        return compose(Tensor(f, f2), Tensor(h, h2)), Tensor(Seq(f, h), Seq(f2, h2))

    def id_tensor():
        a, b = small(), small()
        return Id(Tensor(Id(a), Id(b)).input), Tensor(Id(a), Id(b))

    def associativity():
        f, h, k = diag(small()), diag(small()), diag(small())
        return Tensor(Tensor(f, h), k), Tensor(f, Tensor(h, k))

    def unit():
        f = diag(small())
        side = rng.random() < 0.5
        return (Tensor(f, Id(EMPTY)) if side else Tensor(Id(EMPTY), f)), f

    def naturality():
        a, a2 = small(), small()
        f, f2 = diag(a), diag(a2)
        lhs = compose(Sym(a, a2), Tensor(f2, f))
        rhs = compose(Tensor(f, f2), Sym(f.output, f2.output))
        return lhs, rhs

    def sym_unit():
        return Sym(EMPTY, EMPTY), Id(EMPTY)

    def sym_involution():
        a, b = small(), small()
        return compose(Sym(a, b), Sym(b, a)), Id(Sym(a, b).input)

    def sym_hexagon():
        a, b, c = small(), small(), small()
        lhs = Sym(Tensor(Id(a), Id(b)).output, c)
        rhs = compose(Tensor(Id(a), Sym(b, c)), Tensor(Sym(a, c), Id(b)))
        return lhs, rhs

    def empty_dup_disch():
        choice = rng.choice([Dup(EMPTY), Disch(EMPTY)])
        return choice, Id(EMPTY)

    def dup_coassoc():
        a = small()
        lhs = compose(Dup(a), Tensor(Id(a), Dup(a)))
        rhs = compose(Dup(a), Tensor(Dup(a), Id(a)))
        return lhs, rhs

    def dup_counit():
        a = small()
        return compose(Dup(a), Tensor(Id(a), Disch(a))), Id(a)

    def dup_commut():
        a = small()
        return compose(Dup(a), Sym(a, a)), Dup(a)

    def disch_tensor():
        a, b = small(), small()
        return Disch(Tensor(Id(a), Id(b)).input), Tensor(Disch(a), Disch(b))

    def dup_tensor():
        a, b = small(), small()
        lhs = compose(Tensor(Dup(a), Dup(b)), Tensor(Tensor(Id(a), Sym(a, b)), Id(b)))
        return lhs, Dup(Tensor(Id(a), Id(b)).input)

    return {
        "functoriality of tensor": functoriality,
        "identity of tensor": id_tensor,
        "associativity": associativity,
        "unit": unit,
        "naturality of symmetry": naturality,
        "symmetry on unit": sym_unit,
        "symmetry involution": sym_involution,
        "symmetry hexagon": sym_hexagon,
        "duplicator/discharger on unit": empty_dup_disch,
        "duplicator coassociativity": dup_coassoc,
        "duplicator counit": dup_counit,
        "duplicator commutativity": dup_commut,
        "discharger monoidality": disch_tensor,
        "duplicator monoidality": dup_tensor,
    }


AXIOM_NAMES = list(_axioms(Gen(random.Random(0), MVAlgebra(CHAIN, 1))))


@pytest.mark.parametrize("axiom", AXIOM_NAMES)
def test_criterion_8_gs_monoidal(axiom):
    rng = random.Random(hash(axiom) % 10_000)
    failures = 0
    for i in range(50):
        alg = MVAlgebra(CHAIN, rng.randint(1, 4)) if i % 2 else UNIT
        g = Gen(rng, alg)
        lhs, rhs = _axioms(g)[axiom]()
        failures += not agree(lhs, rhs, rng, alg)
    record(8, failures == 0, "" if failures == 0 else f"{axiom}: {failures}/50")
    assert failures == 0


# criterion 9: non-expansiveness

def nonexpansive(d, rng, alg, samples=5) -> bool:
    for _ in range(samples):
        a = random_valuation(rng, d.input, alg)
        b = random_valuation(rng, d.input, alg)
        lhs = norm(evaluate(d, b).ominus(evaluate(d, a)))
        rhs = norm(b.ominus(a)) if len(d.input) else alg.bottom
        if not lhs <= rhs:
            return False
    return True


@pytest.mark.parametrize("kind", Gen.BLOCK_KINDS)
def test_criterion_9_blocks(kind):
    rng = random.Random(len(kind))
    bad = 0
    for i in range(60):
        alg = UNIT if kind == "expect" or i % 3 == 0 else MVAlgebra(CHAIN, rng.randint(1, 4))
        if i % 3 == 1 and kind != "expect":
            alg = MVAlgebra("real", rng.randint(1, 3))
        g = Gen(rng, alg)
        d = g.block_of(kind, g.carrier(), 5)
        bad += not nonexpansive(d, rng, alg)
    record(9, bad == 0, "" if bad == 0 else f"{kind}: {bad}")
    assert bad == 0


def test_criterion_9_composites():
    rng = random.Random(99)
    bad = 0
    for i in range(120):
        alg = [UNIT, MVAlgebra(CHAIN, rng.randint(1, 4)), MVAlgebra("real", 2)][i % 3]
        g = Gen(rng, alg)
        d = g.diagram(g.carrier(), 4)
        bad += not nonexpansive(d, rng, alg)
    record(9, bad == 0, "" if bad == 0 else f"composites: {bad}")
    assert bad == 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
