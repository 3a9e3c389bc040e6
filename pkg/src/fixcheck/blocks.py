"""Basic non-expansive functions and their approximations.

Each :class:`Block` is a map ``M^input -> M^output``.  ``apply`` evaluates
it, ``approx`` computes the set-valued approximation at a valuation ``a``
for a subset ``Y'`` of the nonzero support of ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .mv import CHAIN, REAL, MVAlgebra
from .valuations import Distribution, Element, FiniteSet, Valuation, format_element


class BlockKind(str, Enum):
    CONST = "const"
    REINDEX = "reindex"
    MINREL = "minrel"
    MAXREL = "maxrel"
    EXPECT = "expect"
    ADD = "add"
    SUB = "sub"


class BlockError(ValueError):
    pass


@dataclass(frozen=True)
class Block:
    kind: BlockKind
    input: FiniteSet
    output: FiniteSet
    # CONST/ADD/SUB: a Valuation; REINDEX: tuple of (z, g(z)) pairs in output
    # order; MINREL/MAXREL: frozenset of (y, z) pairs; EXPECT: None
    param: object = None
    name: str = field(default="", compare=False)
    _pre: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        _validate(self)
        pre = None
        if self.kind == BlockKind.REINDEX:
            pre = dict(self.param)
        elif self.kind in (BlockKind.MINREL, BlockKind.MAXREL):
            pre = {z: [] for z in self.output}
            order = {y: i for i, y in enumerate(self.input)}
            for y, z in self.param:
                pre[z].append(y)
            for z in pre:
                pre[z] = tuple(sorted(pre[z], key=order.__getitem__))
        object.__setattr__(self, "_pre", pre)

    def apply(self, a: Valuation) -> Valuation:
        return block_apply(self, a)

    def approx(self, a: Valuation, yprime: Iterable[Element]) -> frozenset:
        return block_approx(self, a, yprime)

    def preimage(self, z: Element) -> tuple:
        """R-predecessors of ``z`` (relation kinds only)."""
        return self._pre[z]

    def __str__(self) -> str:
        return self.name or f"{self.kind.value}[{len(self.input)}->{len(self.output)}]"


def _validate(b: Block) -> None:
    kind = BlockKind(b.kind)
    object.__setattr__(b, "kind", kind)
    if kind == BlockKind.CONST:
        k = b.param
        if not isinstance(k, Valuation) or not k.domain.same_elements(b.output):
            raise BlockError("const block needs a valuation on its output set")
    elif kind == BlockKind.REINDEX:
        g = dict(b.param)
        missing = [z for z in b.output if z not in g]
        if missing:
            raise BlockError("reindexing map is not total; missing "
                             + ", ".join(format_element(z) for z in missing))
        extra = [z for z in g if z not in b.output]
        if extra:
            raise BlockError("reindexing map defined outside its domain: "
                             + ", ".join(format_element(z) for z in extra))
        bad = [y for y in g.values() if y not in b.input]
        if bad:
            raise BlockError("reindexing map leaves its codomain: "
                             + ", ".join(format_element(y) for y in bad))
    elif kind in (BlockKind.MINREL, BlockKind.MAXREL):
        for pair in b.param:
            y, z = pair
            if y not in b.input or z not in b.output:
                raise BlockError(f"relation pair {format_element(pair)} outside its sets")
    elif kind == BlockKind.EXPECT:
        for p in b.output:
            if not isinstance(p, Distribution):
                raise BlockError(f"expectation output {format_element(p)} is not a distribution")
            outside = [y for y in p.support if y not in b.input]
            if outside:
                raise BlockError(f"distribution {p.name} has support outside the input set: "
                                 + ", ".join(format_element(y) for y in outside))
    elif kind in (BlockKind.ADD, BlockKind.SUB):
        if not b.input.same_elements(b.output):
            raise BlockError(f"{kind.value} block needs equal input and output sets")
        w = b.param
        if not isinstance(w, Valuation) or not w.domain.same_elements(b.input):
            raise BlockError(f"{kind.value} block needs a valuation on its input set")


# constructors

def const(k: Valuation, input: FiniteSet = FiniteSet(), name: str = "") -> Block:
    return Block(BlockKind.CONST, input, k.domain, k, name)


def reindex(g: Mapping[Element, Element], input: FiniteSet, output: FiniteSet,
            name: str = "") -> Block:
    """``g*``: input valuation ``a`` becomes ``a ∘ g`` with ``g: output -> input``."""
    order = {z: i for i, z in enumerate(output)}
    pairs = sorted(g.items(), key=lambda zy: order.get(zy[0], len(order)))
    return Block(BlockKind.REINDEX, input, output, tuple(pairs), name)


def minrel(rel: Iterable[tuple], input: FiniteSet, output: FiniteSet, name: str = "") -> Block:
    return Block(BlockKind.MINREL, input, output, frozenset(rel), name)


def maxrel(rel: Iterable[tuple], input: FiniteSet, output: FiniteSet, name: str = "") -> Block:
    return Block(BlockKind.MAXREL, input, output, frozenset(rel), name)


def expect(input: FiniteSet, dists: FiniteSet, name: str = "") -> Block:
    return Block(BlockKind.EXPECT, input, dists, None, name)


def add(w: Valuation, name: str = "") -> Block:
    return Block(BlockKind.ADD, w.domain, w.domain, w, name)


def sub(w: Valuation, name: str = "") -> Block:
    return Block(BlockKind.SUB, w.domain, w.domain, w, name)


# semantics

def _check_input(b: Block, a: Valuation) -> None:
    if not a.domain.same_elements(b.input):
        raise BlockError(f"block {b}: valuation domain does not match the input set")
    if b.kind == BlockKind.EXPECT and not (a.algebra.kind == REAL and a.algebra.k == 1):
        raise BlockError("expectation is only defined over the real algebra [0,1]")
    if b.kind in (BlockKind.CONST, BlockKind.ADD, BlockKind.SUB) and b.param.algebra != a.algebra:
        raise BlockError(f"block {b}: parameter algebra {b.param.algebra} differs from {a.algebra}")


def block_apply(b: Block, a: Valuation) -> Valuation:
    _check_input(b, a)
    alg = a.algebra
    kind = b.kind
    if kind == BlockKind.CONST:
        return b.param.relabel(b.output)
    if kind == BlockKind.REINDEX:
        return Valuation(b.output, alg, {z: a[y] for z, y in b._pre.items()}, check=False)
    if kind == BlockKind.MINREL:
        top = alg.top
        return Valuation(b.output, alg,
                         {z: min((a[y] for y in ys), default=top) for z, ys in b._pre.items()},
                         check=False)
    if kind == BlockKind.MAXREL:
        bot = alg.bottom
        return Valuation(b.output, alg,
                         {z: max((a[y] for y in ys), default=bot) for z, ys in b._pre.items()},
                         check=False)
    if kind == BlockKind.EXPECT:
        return Valuation(b.output, alg, {p: sum((w * a[y] for y, w in p.items()), alg.bottom)
                                         for p in b.output}, check=False)
    if kind == BlockKind.ADD:
        w = b.param
        return Valuation(b.output, alg, {y: alg.oplus(a[y], w[y]) for y in b.output}, check=False)
    if kind == BlockKind.SUB:
        w = b.param
        return Valuation(b.output, alg, {y: alg.ominus(a[y], w[y]) for y in b.output},
                         check=False)
    raise BlockError(f"unknown block kind {kind}")


def block_approx(b: Block, a: Valuation, yprime: Iterable[Element],
                 fa: Valuation | None = None) -> frozenset:
    """Approximation of ``b`` at ``a`` applied to ``yprime``.

    ``fa`` may carry a precomputed ``block_apply(b, a)``.
    """
    yp = frozenset(yprime)
    _check_input(b, a)
    if not all(a[y] != 0 for y in yp):
        bad = [format_element(y) for y in a.domain.ordered(yp) if a[y] == 0]
        raise BlockError(f"block {b}: subset leaves the nonzero support at {', '.join(bad)}")
    kind = b.kind
    if kind == BlockKind.CONST:
        return frozenset()
    if kind == BlockKind.REINDEX:
        return frozenset(z for z, y in b._pre.items() if y in yp)
    if fa is None:
        fa = block_apply(b, a)
    alg = a.algebra
    if kind == BlockKind.MINREL:
        out = set()
        for z, ys in b._pre.items():
            m = fa[z]
            if m != 0 and any(y in yp for y in ys if a[y] == m):
                out.add(z)
        return frozenset(out)
    if kind == BlockKind.MAXREL:
        out = set()
        for z, ys in b._pre.items():
            m = fa[z]
            if m != 0 and all(y in yp for y in ys if a[y] == m):
                out.add(z)
        return frozenset(out)
    if kind == BlockKind.EXPECT:
        return frozenset(p for p in b.output if fa[p] != 0 and p.support <= yp)
    if kind == BlockKind.ADD:
        # a decrease at y survives iff the untruncated sum stays within top
        w = b.param
        return frozenset(y for y in yp if a[y] + w[y] <= alg.top)
    if kind == BlockKind.SUB:
        w = b.param
        return frozenset(y for y in yp if alg.ominus(a[y], w[y]) != 0)
    raise BlockError(f"unknown block kind {kind}")


def conjugate_block(b: Block) -> Block:
    """Block denoting ``¬ ∘ b ∘ ¬``."""
    kind = b.kind
    if kind == BlockKind.CONST:
        return Block(kind, b.input, b.output, b.param.complement(), b.name)
    if kind in (BlockKind.REINDEX, BlockKind.EXPECT):
        return b
    swap = {BlockKind.MINREL: BlockKind.MAXREL, BlockKind.MAXREL: BlockKind.MINREL,
            BlockKind.ADD: BlockKind.SUB, BlockKind.SUB: BlockKind.ADD}
    return Block(swap[kind], b.input, b.output, b.param, b.name)


def algebra_ok(b: Block, alg: MVAlgebra) -> bool:
    if b.kind == BlockKind.EXPECT:
        return alg.kind == REAL and alg.k == 1
    if b.kind in (BlockKind.CONST, BlockKind.ADD, BlockKind.SUB):
        return b.param.algebra == alg
    return alg.kind in (REAL, CHAIN)
