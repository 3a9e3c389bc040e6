"""gs-monoidal terms over blocks.

A diagram is built from blocks with sequential composition (``Seq``), tensor
(``Tensor``, disjoint union of carriers), identities, symmetries,
duplicators and dischargers.  ``evaluate`` runs the denoted function and
``approximate`` runs the approximation structurally: every block is
approximated at the valuation that actually reaches its input wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .blocks import Block, block_apply, block_approx, conjugate_block
from .valuations import (EMPTY, Coproduct, Element, FiniteSet, Valuation, coproduct,
                         format_element, split_valuation, support_nonzero, tensor_valuation)


class DiagramTypeError(ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message} (at {path})" if path else message)


class Diagram:
    input: FiniteSet
    output: FiniteSet

    def __rshift__(self, other: "Diagram") -> "Seq":
        return Seq(self, other)

    def __matmul__(self, other: "Diagram") -> "Tensor":
        return Tensor(self, other)

    @property
    def is_endo(self) -> bool:
        return self.input.same_elements(self.output)


@dataclass(frozen=True, eq=True)
class BlockNode(Diagram):
    block: Block

    @property
    def input(self) -> FiniteSet:
        return self.block.input

    @property
    def output(self) -> FiniteSet:
        return self.block.output


@dataclass(frozen=True)
class Id(Diagram):
    carrier: FiniteSet

    @property
    def input(self) -> FiniteSet:
        return self.carrier

    @property
    def output(self) -> FiniteSet:
        return self.carrier


@dataclass(frozen=True)
class Sym(Diagram):
    left: FiniteSet
    right: FiniteSet
    cin: Coproduct = field(init=False, compare=False, repr=False)
    cout: Coproduct = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "cin", coproduct(self.left, self.right))
        object.__setattr__(self, "cout", coproduct(self.right, self.left))

    @property
    def input(self) -> FiniteSet:
        return self.cin.carrier

    @property
    def output(self) -> FiniteSet:
        return self.cout.carrier


@dataclass(frozen=True)
class Dup(Diagram):
    carrier: FiniteSet
    cout: Coproduct = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "cout", coproduct(self.carrier, self.carrier))

    @property
    def input(self) -> FiniteSet:
        return self.carrier

    @property
    def output(self) -> FiniteSet:
        return self.cout.carrier


@dataclass(frozen=True)
class Disch(Diagram):
    carrier: FiniteSet

    @property
    def input(self) -> FiniteSet:
        return self.carrier

    @property
    def output(self) -> FiniteSet:
        return EMPTY


@dataclass(frozen=True)
class Seq(Diagram):
    first: Diagram
    second: Diagram

    @property
    def input(self) -> FiniteSet:
        return self.first.input

    @property
    def output(self) -> FiniteSet:
        return self.second.output


@dataclass(frozen=True)
class Tensor(Diagram):
    left: Diagram
    right: Diagram
    cin: Coproduct = field(init=False, compare=False, repr=False)
    cout: Coproduct = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "cin", coproduct(self.left.input, self.right.input))
        object.__setattr__(self, "cout", coproduct(self.left.output, self.right.output))

    @property
    def input(self) -> FiniteSet:
        return self.cin.carrier

    @property
    def output(self) -> FiniteSet:
        return self.cout.carrier


def block(b: Block) -> BlockNode:
    return BlockNode(b)


def seq(*parts: Diagram) -> Diagram:
    """Left-to-right composition of one or more diagrams."""
    d = parts[0]
    for p in parts[1:]:
        d = Seq(d, p)
    return d


def tensor(*parts: Diagram) -> Diagram:
    d = parts[0]
    for p in parts[1:]:
        d = Tensor(d, p)
    return d


def _fmt_set(s: FiniteSet) -> str:
    return "{" + ", ".join(format_element(e) for e in s) + "}"


def typecheck(d: Diagram, path: str = "root") -> tuple[FiniteSet, FiniteSet]:
    """Return ``(input, output)`` or raise :class:`DiagramTypeError` naming the
    offending sub-term."""
    if isinstance(d, Seq):
        typecheck(d.first, path + ".first")
        typecheck(d.second, path + ".second")
        if not d.first.output.same_elements(d.second.input):
            raise DiagramTypeError(
                f"composition mismatch: output {_fmt_set(d.first.output)} of the first part "
                f"vs input {_fmt_set(d.second.input)} of the second", path)
    elif isinstance(d, Tensor):
        typecheck(d.left, path + ".left")
        typecheck(d.right, path + ".right")
    elif not isinstance(d, (BlockNode, Id, Sym, Dup, Disch)):
        raise DiagramTypeError(f"not a diagram: {d!r}", path)
    return d.input, d.output


# evaluation and approximation

Trace = list  # of (path, Valuation) pairs, one per wire


def _run(d: Diagram, a: Valuation, U: frozenset | None, path: str, trace: Trace | None):
    """Return ``(f(a), f#(U))``; the second component is None when ``U`` is None."""
    if trace is not None:
        trace.append((path, a))
    if isinstance(d, BlockNode):
        fa = block_apply(d.block, a)
        fu = None if U is None else block_approx(d.block, a, U, fa)
        return fa, fu
    if isinstance(d, Seq):
        mid, mid_u = _run(d.first, a, U, path + ".first", trace)
        mid = mid.relabel(d.second.input)
        return _run(d.second, mid, mid_u, path + ".second", trace)
    if isinstance(d, Tensor):
        al, ar = split_valuation(d.cin, a)
        ul = ur = None
        if U is not None:
            ul, ur = d.cin.split(U)
        fl, gl = _run(d.left, al, ul, path + ".left", trace)
        fr, gr = _run(d.right, ar, ur, path + ".right", trace)
        fa = tensor_valuation(d.cout, fl, fr)
        fu = None
        if U is not None:
            fu = frozenset(d.cout.inl(e) for e in gl) | frozenset(d.cout.inr(e) for e in gr)
        return fa, fu
    if isinstance(d, Id):
        return a.relabel(d.carrier), U
    if isinstance(d, Sym):
        al, ar = split_valuation(d.cin, a)
        fa = tensor_valuation(d.cout, ar, al)
        fu = None
        if U is not None:
            ul, ur = d.cin.split(U)
            fu = frozenset(d.cout.inl(e) for e in ur) | frozenset(d.cout.inr(e) for e in ul)
        return fa, fu
    if isinstance(d, Dup):
        fa = tensor_valuation(d.cout, a, a)
        fu = None
        if U is not None:
            fu = frozenset(d.cout.inl(e) for e in U) | frozenset(d.cout.inr(e) for e in U)
        return fa, fu
    if isinstance(d, Disch):
        return Valuation(EMPTY, a.algebra, {}, check=False), (None if U is None else frozenset())
    raise DiagramTypeError(f"not a diagram: {d!r}", path)


def _check_domain(d: Diagram, a: Valuation) -> None:
    if not a.domain.same_elements(d.input):
        raise ValueError(f"valuation domain {_fmt_set(a.domain)} does not match "
                         f"diagram input {_fmt_set(d.input)}")


def evaluate(d: Diagram, a: Valuation, trace: Trace | None = None) -> Valuation:
    """Apply the function denoted by ``d``.  When ``trace`` is a list, the
    valuation entering every sub-term is appended to it as ``(path, value)``."""
    typecheck(d)
    _check_domain(d, a)
    fa, _ = _run(d, a.relabel(d.input), None, "root", trace)
    return fa.relabel(d.output)


def approximate(d: Diagram, a: Valuation, yprime: Iterable[Element]) -> frozenset:
    """The a-approximation of ``d`` applied to ``yprime``."""
    typecheck(d)
    _check_domain(d, a)
    U = frozenset(yprime)
    bad = U - support_nonzero(a)
    if bad:
        raise ValueError("subset must lie in the nonzero support of the valuation; offending "
                         + ", ".join(format_element(e) for e in a.domain.ordered(bad)))
    _, fu = _run(d, a.relabel(d.input), U, "root", None)
    return fu


def evaluate_and_approximate(d: Diagram, a: Valuation,
                             yprime: Iterable[Element]) -> tuple[Valuation, frozenset]:
    typecheck(d)
    _check_domain(d, a)
    U = frozenset(yprime)
    if U - support_nonzero(a):
        raise ValueError("subset must lie in the nonzero support of the valuation")
    fa, fu = _run(d, a.relabel(d.input), U, "root", None)
    return fa.relabel(d.output), fu


def approximation_map(d: Diagram, a: Valuation) -> Callable[[frozenset], frozenset]:
    """``U -> approximate(d, a, U)`` with the forward pass done once."""
    typecheck(d)
    _check_domain(d, a)
    a = a.relabel(d.input)
    wires: dict[str, Valuation] = {}
    trace: Trace = []
    _run(d, a, None, "root", trace)
    wires.update(trace)

    def go(node: Diagram, U: frozenset, path: str) -> frozenset:
        if isinstance(node, BlockNode):
            return block_approx(node.block, wires[path], U)
        if isinstance(node, Seq):
            return go(node.second, go(node.first, U, path + ".first"), path + ".second")
        if isinstance(node, Tensor):
            ul, ur = node.cin.split(U)
            gl = go(node.left, ul, path + ".left")
            gr = go(node.right, ur, path + ".right")
            return (frozenset(node.cout.inl(e) for e in gl)
                    | frozenset(node.cout.inr(e) for e in gr))
        if isinstance(node, Id):
            return U
        if isinstance(node, Sym):
            ul, ur = node.cin.split(U)
            return (frozenset(node.cout.inl(e) for e in ur)
                    | frozenset(node.cout.inr(e) for e in ul))
        if isinstance(node, Dup):
            return (frozenset(node.cout.inl(e) for e in U)
                    | frozenset(node.cout.inr(e) for e in U))
        if isinstance(node, Disch):
            return frozenset()
        raise DiagramTypeError(f"not a diagram: {node!r}", path)

    support = support_nonzero(a)

    def approx(U: Iterable[Element]) -> frozenset:
        U = frozenset(U)
        if U - support:
            raise ValueError("subset must lie in the nonzero support of the valuation")
        return go(d, U, "root")

    return approx


def conjugate(d: Diagram) -> Diagram:
    """Diagram denoting ``¬ ∘ f ∘ ¬`` for the function ``f`` denoted by ``d``."""
    if isinstance(d, BlockNode):
        return BlockNode(conjugate_block(d.block))
    if isinstance(d, Seq):
        return Seq(conjugate(d.first), conjugate(d.second))
    if isinstance(d, Tensor):
        return Tensor(conjugate(d.left), conjugate(d.right))
    return d


def blocks_of(d: Diagram) -> list[Block]:
    if isinstance(d, BlockNode):
        return [d.block]
    if isinstance(d, Seq):
        return blocks_of(d.first) + blocks_of(d.second)
    if isinstance(d, Tensor):
        return blocks_of(d.left) + blocks_of(d.right)
    return []


def depth(d: Diagram) -> int:
    if isinstance(d, Seq):
        return 1 + max(depth(d.first), depth(d.second))
    if isinstance(d, Tensor):
        return 1 + max(depth(d.left), depth(d.right))
    return 0


def rewire(src: FiniteSet, dst: FiniteSet) -> Diagram:
    """The positional bijection ``src -> dst`` as a reindexing (``Id`` when
    the carriers already agree)."""
    if len(src) != len(dst):
        raise DiagramTypeError(f"cannot rewire {_fmt_set(src)} to {_fmt_set(dst)}")
    if src == dst:
        return Id(src)
    from .blocks import reindex
    return BlockNode(reindex(dict(zip(dst, src)), src, dst, "rewire"))
