"""Finite carriers, elements and M-valued valuations.

Elements are hashable Python values: atoms are ``str``, pairs are 2-tuples,
coproduct injections are :class:`Inj` and distributions are
:class:`Distribution`.  Subsets of a carrier are plain ``frozenset``\\ s; the
carrier they live in is always known from context (a diagram interface or a
valuation domain).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .mv import MVAlgebra, MVValue, Number, format_number

Element = Any


@dataclass(frozen=True)
class Inj:
    """Tagged element of a coproduct ``A + B`` whose summands overlap."""

    side: int  # 0 = left summand, 1 = right summand
    elem: Element

    def __str__(self) -> str:
        return f"{'inl' if self.side == 0 else 'inr'}({format_element(self.elem)})"


@dataclass(frozen=True)
class Distribution:
    """A finitely supported probability distribution with exact weights.

    ``weights`` holds only the strictly positive entries, in a fixed order.
    Two distributions are the same element iff name and weights agree.
    """

    name: str
    weights: tuple[tuple[Element, Fraction], ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        seen = {}
        for e, w in self.weights:
            if e in seen:
                raise ValueError(f"distribution {self.name}: duplicate entry {format_element(e)}")
            if not isinstance(w, Fraction):
                raise TypeError(f"distribution {self.name}: weights must be Fractions")
            if w <= 0:
                raise ValueError(f"distribution {self.name}: non-positive weight at {format_element(e)}")
            seen[e] = w
        total = sum(seen.values(), Fraction(0))
        if total != 1:
            raise ValueError(
                f"distribution {self.name}: weights sum to {format_number(total)} != 1")
        object.__setattr__(self, "_lookup", seen)

    @classmethod
    def from_mapping(cls, name: str, weights: Mapping[Element, Any]) -> "Distribution":
        items = []
        for e, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"distribution {name}: negative weight at {format_element(e)}")
            if w:
                items.append((e, w))
        return cls(name, tuple(items))

    def __call__(self, e: Element) -> Fraction:
        return self._lookup.get(e, Fraction(0))

    @property
    def support(self) -> frozenset:
        return frozenset(self._lookup)

    def items(self):
        return self.weights

    def same_weights(self, other: "Distribution") -> bool:
        return self._lookup == other._lookup

    def __str__(self) -> str:
        return self.name


def format_element(e: Element) -> str:
    if isinstance(e, tuple):
        return "(" + ",".join(format_element(x) for x in e) + ")"
    if isinstance(e, frozenset):
        return "{" + ",".join(sorted(format_element(x) for x in e)) + "}"
    return str(e)


class FiniteSet:
    """An ordered finite carrier without duplicates."""

    __slots__ = ("elements", "_index", "_members")

    def __init__(self, elements: Iterable[Element] = ()):
        elems = tuple(elements)
        index = {}
        for i, e in enumerate(elems):
            if e in index:
                raise ValueError(f"duplicate element {format_element(e)}")
            index[e] = i
        self.elements = elems
        self._index = index
        self._members = frozenset(elems)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: Element) -> bool:
        return e in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return "FiniteSet({" + ", ".join(format_element(e) for e in self.elements) + "})"

    @property
    def members(self) -> frozenset:
        return self._members

    def same_elements(self, other: "FiniteSet") -> bool:
        return self._members == other._members

    def index(self, e: Element) -> int:
        return self._index[e]

    def ordered(self, subset: Iterable[Element]) -> list:
        """Members of ``subset`` in carrier order."""
        s = set(subset)
        return [e for e in self.elements if e in s]

    def product(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet((a, b) for a in self.elements for b in other.elements)

    def difference(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet(e for e in self.elements if e not in other)


@dataclass(frozen=True)
class Coproduct:
    """Result of ``A + B`` with its two injections."""

    carrier: FiniteSet
    left: FiniteSet
    right: FiniteSet
    tagged: bool

    def inl(self, e: Element) -> Element:
        return Inj(0, e) if self.tagged else e

    def inr(self, e: Element) -> Element:
        return Inj(1, e) if self.tagged else e

    def split(self, subset: Iterable[Element]) -> tuple[frozenset, frozenset]:
        """Split a subset of the coproduct into its left and right parts."""
        left, right = set(), set()
        if self.tagged:
            for e in subset:
                (left if e.side == 0 else right).add(e.elem)
        else:
            for e in subset:
                (left if e in self.left else right).add(e)
        return frozenset(left), frozenset(right)


def coproduct(a: FiniteSet, b: FiniteSet) -> Coproduct:
    """Disjoint union.  Plain concatenation when ``a`` and ``b`` share no
    element, otherwise every element is wrapped in :class:`Inj`."""
    tagged = bool(a.members & b.members)
    if tagged:
        carrier = FiniteSet([Inj(0, e) for e in a] + [Inj(1, e) for e in b])
    else:
        carrier = FiniteSet(list(a) + list(b))
    return Coproduct(carrier, a, b, tagged)


EMPTY = FiniteSet()


class Valuation:
    """A total map from a finite carrier into an MV-algebra."""

    __slots__ = ("domain", "algebra", "_values")

    def __init__(self, domain: FiniteSet, algebra: MVAlgebra, values: Mapping[Element, Any],
                 *, check: bool = True):
        if check:
            vals = {}
            for e, v in values.items():
                if e not in domain:
                    raise ValueError(f"{format_element(e)} is not in the domain")
                vals[e] = algebra.coerce(v)
            missing = [e for e in domain if e not in vals]
            if missing:
                raise ValueError("valuation is not total; missing "
                                 + ", ".join(format_element(e) for e in missing))
        else:
            vals = dict(values)
        self.domain = domain
        self.algebra = algebra
        self._values = vals

    @classmethod
    def constant(cls, domain: FiniteSet, algebra: MVAlgebra, value) -> "Valuation":
        v = algebra.coerce(value)
        return cls(domain, algebra, {e: v for e in domain}, check=False)

    @classmethod
    def partial(cls, domain: FiniteSet, algebra: MVAlgebra,
                values: Mapping[Element, Any]) -> "Valuation":
        """Build a valuation where unspecified elements get 0."""
        full = {e: algebra.bottom for e in domain}
        for e, v in values.items():
            if e not in domain:
                raise ValueError(f"{format_element(e)} is not in the domain")
            full[e] = algebra.coerce(v)
        return cls(domain, algebra, full, check=False)

    def __getitem__(self, e: Element) -> Number:
        return self._values[e]

    def value(self, e: Element) -> MVValue:
        return MVValue(self._values[e], self.algebra)

    def items(self):
        return ((e, self._values[e]) for e in self.domain)

    def as_dict(self) -> dict:
        return dict(self._values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Valuation) and self.algebra == other.algebra
                and self.domain.same_elements(other.domain) and self._values == other._values)

    def __hash__(self) -> int:
        return hash(frozenset(self._values.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_element(e)}: {format_number(v)}" for e, v in self.items())
        return "Valuation({" + body + "})"

    def _compatible(self, other: "Valuation") -> None:
        if self.algebra != other.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra} vs {other.algebra}")
        if not self.domain.same_elements(other.domain):
            raise ValueError("valuations live on different carriers")

    def map(self, fn: Callable[[Number], Number]) -> "Valuation":
        return Valuation(self.domain, self.algebra, {e: fn(v) for e, v in self._values.items()},
                         check=False)

    def zip_with(self, other: "Valuation", fn) -> "Valuation":
        self._compatible(other)
        return Valuation(self.domain, self.algebra,
                         {e: fn(v, other._values[e]) for e, v in self._values.items()},
                         check=False)

    def oplus(self, other: "Valuation") -> "Valuation":
        return self.zip_with(other, self.algebra.oplus)

    def ominus(self, other: "Valuation") -> "Valuation":
        return self.zip_with(other, self.algebra.ominus)

    def join(self, other: "Valuation") -> "Valuation":
        return self.zip_with(other, self.algebra.join)

    def meet(self, other: "Valuation") -> "Valuation":
        return self.zip_with(other, self.algebra.meet)

    def complement(self) -> "Valuation":
        return self.map(self.algebra.complement)

    def leq(self, other: "Valuation") -> bool:
        self._compatible(other)
        return all(v <= other._values[e] for e, v in self._values.items())

    def __le__(self, other: "Valuation") -> bool:
        return self.leq(other)

    def restrict(self, domain: FiniteSet) -> "Valuation":
        return Valuation(domain, self.algebra, {e: self._values[e] for e in domain}, check=False)

    def relabel(self, domain: FiniteSet) -> "Valuation":
        """Same values viewed over ``domain``, which must hold the same elements."""
        if not domain.same_elements(self.domain):
            raise ValueError("relabel target has different elements")
        return Valuation(domain, self.algebra, self._values, check=False)


def norm(a: Valuation) -> Number:
    return a.algebra.sup(a[e] for e in a.domain)


def support_nonzero(a: Valuation) -> frozenset:
    return frozenset(e for e, v in a.items() if v != 0)


def delta_on(delta, s: Iterable[Element], domain: FiniteSet, algebra: MVAlgebra) -> Valuation:
    d = algebra.coerce(delta)
    members = frozenset(s)
    if not members <= domain.members:
        raise ValueError("subset is not contained in the domain")
    zero = algebra.bottom
    return Valuation(domain, algebra, {e: d if e in members else zero for e in domain},
                     check=False)


def decrease(a: Valuation, delta, s: Iterable[Element]) -> Valuation:
    """``a ⊖ δ_S``."""
    return a.ominus(delta_on(delta, s, a.domain, a.algebra))


def increase(a: Valuation, delta, s: Iterable[Element]) -> Valuation:
    """``a ⊕ δ_S``."""
    return a.oplus(delta_on(delta, s, a.domain, a.algebra))


def agreement_set(a: Valuation, b: Valuation) -> frozenset:
    a._compatible(b)
    return frozenset(e for e, v in a.items() if v == b[e])


def disagreement_set(a: Valuation, b: Valuation) -> frozenset:
    a._compatible(b)
    return frozenset(e for e, v in a.items() if v != b[e])


def tensor_valuation(cp: Coproduct, left: Valuation, right: Valuation) -> Valuation:
    values = {cp.inl(e): v for e, v in left.items()}
    values.update({cp.inr(e): v for e, v in right.items()})
    return Valuation(cp.carrier, left.algebra, values, check=False)


def split_valuation(cp: Coproduct, a: Valuation) -> tuple[Valuation, Valuation]:
    left = {e: a[cp.inl(e)] for e in cp.left}
    right = {e: a[cp.inr(e)] for e in cp.right}
    return (Valuation(cp.left, a.algebra, left, check=False),
            Valuation(cp.right, a.algebra, right, check=False))
