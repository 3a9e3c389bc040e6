"""Line-oriented text format for models and transition systems.

A model file declares one algebra followed by sets, maps, relations,
distributions, blocks, diagrams and valuations, each referring only to
names declared above it.  Transition-system files (``.mc``, ``.lmc``,
``.nts``) describe a system plus named candidate valuations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import blocks as B
from .diagrams import (Diagram, BlockNode, Disch, DiagramTypeError, Dup, Id, Seq, Sym, Tensor,
                       typecheck)
from .mv import CHAIN, REAL, MVAlgebra, format_number, parse_rational
from .valuations import (Distribution, FiniteSet, Inj, Valuation, coproduct, format_element)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    token: str = ""

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class ModelError(ValueError):
    def __init__(self, message: str, span: SourceSpan | None = None):
        self.message = message
        self.span = span
        where = f"{span}: " if span else ""
        tok = f" (at {span.token!r})" if span and span.token else ""
        super().__init__(f"{where}{message}{tok}")


class ParseError(ModelError):
    pass


class ValidationError(ModelError):
    pass


# tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sym><->|->|[{}(),:=;|*\\+])
  | (?P<word>[A-Za-z0-9_.'/-]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    text: str
    kind: str  # "sym", "word" or "eol"
    span: SourceSpan


def _tokenize_line(text: str, lineno: int, file: str) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", SourceSpan(file, lineno, pos + 1, text[pos]))
        if m.lastgroup != "ws":
            # a lone arrow glued to a word, e.g. "x->y", splits at the arrow
            word = m.group()
            if m.lastgroup == "word" and "->" in word:
                word = word[:word.index("->")]
                if not word:
                    word = "->"
                    out.append(Tok(word, "sym", SourceSpan(file, lineno, pos + 1, word)))
                    pos += 2
                    continue
                out.append(Tok(word, "word", SourceSpan(file, lineno, pos + 1, word)))
                pos += len(word)
                continue
            out.append(Tok(word, m.lastgroup, SourceSpan(file, lineno, pos + 1, word)))
        pos = m.end()
    out.append(Tok("", "eol", SourceSpan(file, lineno, len(text) + 1)))
    return out


def _lines(text: str, file: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield lineno, _tokenize_line(body, lineno, file)


class _Cursor:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    @property
    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eol":
            self.i += 1
        return t

    def accept(self, text: str) -> Tok | None:
        if self.peek.text == text and self.peek.kind != "eol":
            return self.next()
        return None

    def expect(self, text: str) -> Tok:
        t = self.peek
        if t.text != text or t.kind == "eol":
            raise ParseError(f"expected {text!r}", t.span)
        return self.next()

    def word(self, what: str = "a name") -> Tok:
        t = self.peek
        if t.kind != "word":
            raise ParseError(f"expected {what}", t.span)
        return self.next()

    def end(self) -> None:
        if self.peek.kind != "eol":
            raise ParseError("unexpected trailing input", self.peek.span)


def _element(c: _Cursor):
    t = c.peek
    if c.accept("("):
        a = _element(c)
        c.expect(",")
        b = _element(c)
        c.expect(")")
        return (a, b)
    if t.kind == "word" and t.text in ("inl", "inr") and c.toks[c.i + 1].text == "(":
        c.next()
        c.expect("(")
        e = _element(c)
        c.expect(")")
        return Inj(0 if t.text == "inl" else 1, e)
    return c.word("an element").text


def _number(c: _Cursor) -> tuple[Fraction, Tok]:
    t = c.word("a number")
    try:
        return parse_rational(t.text), t
    except ValueError:
        raise ParseError("expected a rational number", t.span) from None


def _braced(c: _Cursor, item):
    """Parse ``{ item, item, ... }`` and return the list of parsed items."""
    c.expect("{")
    out = []
    if c.accept("}"):
        return out
    while True:
        out.append(item(c))
        if c.accept("}"):
            return out
        c.expect(",")


def _entry(c: _Cursor):
    start = c.peek
    if c.accept("*"):
        key = "*"
    else:
        key = _element(c)
    c.expect(":")
    return key, start


# model

@dataclass(frozen=True)
class MapDecl:
    source: str
    target: str | None  # None means the map goes into the algebra
    entries: tuple  # (element, value) pairs in source order


@dataclass(frozen=True)
class RelDecl:
    left: str
    right: str
    pairs: tuple


@dataclass
class Model:
    algebra: MVAlgebra | None = None
    sets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    distributions: dict = field(default_factory=dict)
    dist_base: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    valuations: dict = field(default_factory=dict)
    order: list = field(default_factory=list, compare=False)

    def diagram(self, name: str) -> Diagram:
        if name in self.diagrams:
            return self.diagrams[name]
        if name in self.blocks:
            return BlockNode(self.blocks[name])
        raise KeyError(f"unknown diagram {name!r}")

    def valuation(self, name: str) -> Valuation:
        if name not in self.valuations:
            raise KeyError(f"unknown valuation {name!r}")
        return self.valuations[name]


class _ModelParser:
    def __init__(self, file: str):
        self.file = file
        self.m = Model()

    # lookups
    def _lookup(self, registry: dict, tok: Tok, what: str):
        if tok.text not in registry:
            raise ValidationError(f"unknown {what} {tok.text!r}", tok.span)
        return registry[tok.text]

    def _set(self, tok: Tok) -> FiniteSet:
        return self._lookup(self.m.sets, tok, "set")

    def _fresh(self, registry: dict, tok: Tok, what: str) -> str:
        if tok.text in registry:
            raise ValidationError(f"duplicate {what} name {tok.text!r}", tok.span)
        if what in ("block", "diagram") and tok.text in (
                self.m.diagrams if what == "block" else self.m.blocks):
            raise ValidationError(f"{tok.text!r} is already used by a "
                                  f"{'diagram' if what == 'block' else 'block'}", tok.span)
        return tok.text

    def _resolve(self, e, set_name: str):
        """Distribution sets are written with distribution names."""
        if set_name in self.m.dist_base and isinstance(e, str):
            return self.m.distributions.get(e, e)
        return e

    def _need_algebra(self, tok: Tok) -> MVAlgebra:
        if self.m.algebra is None:
            raise ValidationError("the algebra must be declared first", tok.span)
        return self.m.algebra

    def _value(self, c: _Cursor):
        v, t = _number(c)
        alg = self._need_algebra(t)
        try:
            return alg.coerce(v if v.denominator != 1 or alg.kind == REAL else int(v))
        except (ValueError, TypeError) as exc:
            raise ValidationError(str(exc), t.span) from None

    def parse(self, text: str) -> Model:
        for _, toks in _lines(text, self.file):
            c = _Cursor(toks)
            kw = c.word("a declaration keyword")
            handler = getattr(self, "_decl_" + kw.text, None)
            if handler is None:
                raise ParseError(f"unknown declaration {kw.text!r}", kw.span)
            handler(c, kw)
            c.end()
        if self.m.algebra is None:
            raise ValidationError("model declares no algebra", SourceSpan(self.file, 1, 1))
        return self.m

    def _decl_algebra(self, c: _Cursor, kw: Tok) -> None:
        if self.m.algebra is not None:
            raise ValidationError("a model has exactly one algebra", kw.span)
        kind = c.word("'real' or 'chain'")
        if kind.text not in (REAL, CHAIN):
            raise ParseError("expected 'real' or 'chain'", kind.span)
        kt = c.word("an integer")
        try:
            k = int(kt.text)
            self.m.algebra = MVAlgebra(kind.text, k)
        except ValueError as exc:
            raise ValidationError(str(exc), kt.span) from None
        self.m.order.append(("algebra", ""))

    def _decl_set(self, c: _Cursor, kw: Tok) -> None:
        name = self._fresh(self.m.sets, c.word(), "set")
        c.expect("=")
        t = c.peek
        if t.text == "{":
            elems = _braced(c, _element)
            try:
                s = FiniteSet(elems)
            except ValueError as exc:
                raise ValidationError(str(exc), t.span) from None
        elif t.text == "dists":
            c.next()
            toks = _braced(c, lambda cc: cc.word("a distribution name"))
            dists = [self._lookup(self.m.distributions, dt, "distribution") for dt in toks]
            bases = {self.m.dist_base[dt.text] for dt in toks}
            if len(bases) > 1:
                raise ValidationError("distributions in one set must share their base set",
                                      t.span)
            try:
                s = FiniteSet(dists)
            except ValueError as exc:
                raise ValidationError(str(exc), t.span) from None
            if dists:
                self.m.dist_base[name] = bases.pop()
        else:
            a = self._set(c.word("a set name"))
            op = c.next()
            b = self._set(c.word("a set name"))
            if op.text == "*":
                s = a.product(b)
            elif op.text == "\\":
                s = a.difference(b)
            elif op.text == "+":
                s = coproduct(a, b).carrier
            else:
                raise ParseError("expected '*', '\\' or '+'", op.span)
        self.m.sets[name] = s
        self.m.order.append(("set", name))

    def _decl_map(self, c: _Cursor, kw: Tok) -> None:
        name = self._fresh(self.m.maps, c.word(), "map")
        c.expect(":")
        st = c.word("a set name")
        src = self._set(st)
        c.expect("->")
        tt = c.word("a set name or M")
        into_m = tt.text == "M"
        tgt = None if into_m else self._set(tt)
        entries = {}

        def item(cc):
            key, start = _entry(cc)
            if key == "*":
                raise ParseError("'*' is not allowed in maps", start.span)
            key = self._resolve(key, st.text)
            if key not in src:
                raise ValidationError(f"{format_element(key)} is not in {st.text}", start.span)
            if key in entries:
                raise ValidationError(f"duplicate entry {format_element(key)}", start.span)
            if into_m:
                entries[key] = self._value(cc)
            else:
                vt = cc.peek
                v = self._resolve(_element(cc), tt.text)
                if v not in tgt:
                    raise ValidationError(f"{format_element(v)} is not in {tt.text}", vt.span)
                entries[key] = v
            return key

        _braced(c, item)
        if into_m:
            self._need_algebra(tt)
            for e in src:
                entries.setdefault(e, self.m.algebra.bottom)
        else:
            missing = [e for e in src if e not in entries]
            if missing:
                raise ValidationError(f"map {name} is not total; missing "
                                      + ", ".join(format_element(e) for e in missing), kw.span)
        ordered = tuple((e, entries[e]) for e in src)
        self.m.maps[name] = MapDecl(st.text, None if into_m else tt.text, ordered)
        self.m.order.append(("map", name))

    def _decl_rel(self, c: _Cursor, kw: Tok) -> None:
        name = self._fresh(self.m.relations, c.word(), "relation")
        c.expect(":")
        lt = c.word("a set name")
        left = self._set(lt)
        c.expect("<->")
        rt = c.word("a set name")
        right = self._set(rt)

        def item(cc):
            t = cc.peek
            pair = _element(cc)
            if not isinstance(pair, tuple):
                raise ParseError("expected a pair (a,b)", t.span)
            if pair[0] not in left or pair[1] not in right:
                raise ValidationError(f"pair {format_element(pair)} is outside "
                                      f"{lt.text} x {rt.text}", t.span)
            return pair

        pairs = _braced(c, item)
        order = {p: i for i, p in enumerate(left.product(right))}
        uniq = sorted(set(pairs), key=order.__getitem__)
        self.m.relations[name] = RelDecl(lt.text, rt.text, tuple(uniq))
        self.m.order.append(("rel", name))

    def _decl_dist(self, c: _Cursor, kw: Tok) -> None:
        nt = c.word()
        name = self._fresh(self.m.distributions, nt, "distribution")
        c.expect("on")
        bt = c.word("a set name")
        base = self._set(bt)
        weights = {}

        def item(cc):
            key, start = _entry(cc)
            if key == "*" or key not in base:
                raise ValidationError(f"{format_element(key)} is not in {bt.text}", start.span)
            if key in weights:
                raise ValidationError(f"duplicate entry {format_element(key)}", start.span)
            weights[key], _ = _number(cc)
            return key

        _braced(c, item)
        try:
            items = [(e, weights[e]) for e in base if e in weights]
            p = Distribution.from_mapping(name, dict(items))
        except ValueError as exc:
            raise ValidationError(str(exc), nt.span) from None
        self.m.distributions[name] = p
        self.m.dist_base[name] = bt.text
        self.m.order.append(("dist", name))

    def _map_valuation(self, tok: Tok) -> Valuation:
        md = self._lookup(self.m.maps, tok, "map")
        if md.target is not None:
            raise ValidationError(f"map {tok.text} must go into M", tok.span)
        return Valuation(self.m.sets[md.source], self.m.algebra, dict(md.entries), check=False)

    def _decl_block(self, c: _Cursor, kw: Tok) -> None:
        name = self._fresh(self.m.blocks, c.word(), "block")
        c.expect("=")
        kt = c.word("a block kind")
        arg = c.word("a name")
        kind = kt.text
        try:
            if kind == "const":
                blk = B.const(self._map_valuation(arg), FiniteSet(), name)
            elif kind in ("add", "sub"):
                blk = getattr(B, kind)(self._map_valuation(arg), name)
            elif kind == "reindex":
                md = self._lookup(self.m.maps, arg, "map")
                if md.target is None:
                    raise ValidationError(f"map {arg.text} must go into a set", arg.span)
                blk = B.reindex(dict(md.entries), self.m.sets[md.target],
                                self.m.sets[md.source], name)
            elif kind in ("minrel", "maxrel"):
                rd = self._lookup(self.m.relations, arg, "relation")
                blk = getattr(B, kind)(rd.pairs, self.m.sets[rd.left],
                                       self.m.sets[rd.right], name)
            elif kind == "expect":
                ds = self._set(arg)
                if arg.text not in self.m.dist_base:
                    raise ValidationError(f"set {arg.text} is not a set of distributions",
                                          arg.span)
                blk = B.expect(self.m.sets[self.m.dist_base[arg.text]], ds, name)
            else:
                raise ParseError(f"unknown block kind {kind!r}", kt.span)
        except B.BlockError as exc:
            raise ValidationError(f"block {name}: {exc}", kt.span) from None
        if not B.algebra_ok(blk, self._need_algebra(kt)):
            raise ValidationError(f"block {name} is not available over {self.m.algebra}", kt.span)
        self.m.blocks[name] = blk
        self.m.order.append(("block", name))

    # diagram expressions: ';' binds weaker than '|', both associate to the left
    def _expr(self, c: _Cursor) -> Diagram:
        d = self._tensor(c)
        while c.accept(";"):
            d = Seq(d, self._tensor(c))
        return d

    def _tensor(self, c: _Cursor) -> Diagram:
        d = self._atom(c)
        while c.accept("|"):
            d = Tensor(d, self._atom(c))
        return d

    def _atom(self, c: _Cursor) -> Diagram:
        if c.accept("("):
            d = self._expr(c)
            c.expect(")")
            return d
        t = c.word("a diagram")
        if t.text == "id":
            return Id(self._set(c.word("a set name")))
        if t.text == "sym":
            a = self._set(c.word("a set name"))
            return Sym(a, self._set(c.word("a set name")))
        if t.text == "dup":
            return Dup(self._set(c.word("a set name")))
        if t.text == "end":
            return Disch(self._set(c.word("a set name")))
        if t.text in self.m.diagrams:
            return self.m.diagrams[t.text]
        if t.text in self.m.blocks:
            return BlockNode(self.m.blocks[t.text])
        raise ValidationError(f"unknown block or diagram {t.text!r}", t.span)

    def _decl_diagram(self, c: _Cursor, kw: Tok) -> None:
        nt = c.word()
        name = self._fresh(self.m.diagrams, nt, "diagram")
        c.expect("=")
        d = self._expr(c)
        try:
            typecheck(d)
        except DiagramTypeError as exc:
            raise ValidationError(f"diagram {name}: {exc}", nt.span) from None
        self.m.diagrams[name] = d
        self.m.order.append(("diagram", name))

    def _decl_valuation(self, c: _Cursor, kw: Tok) -> None:
        nt = c.word()
        name = self._fresh(self.m.valuations, nt, "valuation")
        c.expect(":")
        st = c.word("a set name")
        self.m.valuations[name] = _valuation_body(c, self._set(st), st.text,
                                                  self._need_algebra(st), self._value,
                                                  lambda e: self._resolve(e, st.text))
        self.m.order.append(("valuation", name))


def _valuation_body(c: _Cursor, dom: FiniteSet, dom_name: str, alg: MVAlgebra,
                    value, resolve=lambda e: e) -> Valuation:
    """``{ el: v, ... }`` with ``*: v`` setting the default (0 otherwise)."""
    vals = {}
    default = [alg.bottom]

    def item(cc):
        key, start = _entry(cc)
        v = value(cc)
        if key == "*":
            default[0] = v
            return key
        key = resolve(key)
        if key not in dom:
            raise ValidationError(f"{format_element(key)} is not in {dom_name}", start.span)
        if key in vals:
            raise ValidationError(f"duplicate entry {format_element(key)}", start.span)
        vals[key] = v
        return key

    _braced(c, item)
    return Valuation(dom, alg, {e: vals.get(e, default[0]) for e in dom}, check=False)


def parse_model(text: str, file: str = "<model>") -> Model:
    return _ModelParser(file).parse(text)


# printing

def _fmt_value(v) -> str:
    return format_number(v)


def _fmt_elems(elems) -> str:
    return "{ " + ", ".join(format_element(e) for e in elems) + " }" if elems else "{}"


def _set_name(m: Model, s: FiniteSet) -> str:
    for name, t in m.sets.items():
        if t == s:
            return name
    raise ValueError(f"no declared set equals {s!r}")


def _print_expr(m: Model, d: Diagram) -> str:
    if isinstance(d, BlockNode):
        return d.block.name
    if isinstance(d, Id):
        return f"id {_set_name(m, d.carrier)}"
    if isinstance(d, Sym):
        return f"sym {_set_name(m, d.left)} {_set_name(m, d.right)}"
    if isinstance(d, Dup):
        return f"dup {_set_name(m, d.carrier)}"
    if isinstance(d, Disch):
        return f"end {_set_name(m, d.carrier)}"
    if isinstance(d, Seq):
        return f"({_print_expr(m, d.first)} ; {_print_expr(m, d.second)})"
    if isinstance(d, Tensor):
        return f"({_print_expr(m, d.left)} | {_print_expr(m, d.right)})"
    raise TypeError(f"not a diagram: {d!r}")


def _map_of_block(m: Model, b: B.Block) -> str:
    for name, md in m.maps.items():
        if b.kind == B.BlockKind.REINDEX:
            if md.target is not None and dict(md.entries) == dict(b.param) \
                    and m.sets[md.source] == b.output:
                return name
        elif md.target is None and m.sets[md.source] == b.param.domain \
                and dict(md.entries) == b.param.as_dict():
            return name
    raise ValueError(f"no declared map matches block {b.name}")


def print_model(m: Model) -> str:
    """Render ``m`` in the input syntax; every set is printed explicitly."""
    lines = []
    for kind, name in m.order:
        if kind == "algebra":
            lines.append(f"algebra {m.algebra.kind} {m.algebra.k}")
        elif kind == "set":
            s = m.sets[name]
            if s.elements and all(isinstance(e, Distribution) for e in s):
                lines.append(f"set {name} = dists {_fmt_elems(s)}")
            else:
                lines.append(f"set {name} = {_fmt_elems(s)}")
        elif kind == "map":
            md = m.maps[name]
            tgt = "M" if md.target is None else md.target
            body = ", ".join(f"{format_element(e)}: "
                             f"{_fmt_value(v) if md.target is None else format_element(v)}"
                             for e, v in md.entries)
            lines.append(f"map {name} : {md.source} -> {tgt} {{ {body} }}")
        elif kind == "rel":
            rd = m.relations[name]
            lines.append(f"rel {name} : {rd.left} <-> {rd.right} {_fmt_elems(rd.pairs)}")
        elif kind == "dist":
            p = m.distributions[name]
            body = ", ".join(f"{format_element(e)}: {_fmt_value(w)}" for e, w in p.items())
            lines.append(f"dist {name} on {m.dist_base[name]} {{ {body} }}")
        elif kind == "block":
            b = m.blocks[name]
            if b.kind in (B.BlockKind.MINREL, B.BlockKind.MAXREL):
                arg = next(n for n, rd in m.relations.items()
                           if frozenset(rd.pairs) == b.param
                           and m.sets[rd.left] == b.input and m.sets[rd.right] == b.output)
            elif b.kind == B.BlockKind.EXPECT:
                arg = _set_name(m, b.output)
            else:
                arg = _map_of_block(m, b)
            lines.append(f"block {name} = {b.kind.value} {arg}")
        elif kind == "diagram":
            lines.append(f"diagram {name} = {_print_expr(m, m.diagrams[name])}")
        elif kind == "valuation":
            v = m.valuations[name]
            body = ", ".join(f"{format_element(e)}: {_fmt_value(x)}" for e, x in v.items())
            lines.append(f"valuation {name} : {_set_name(m, v.domain)} {{ {body} }}")
    return "\n".join(lines) + "\n"


# transition systems

@dataclass
class SystemFile:
    kind: str  # "mc", "lmc" or "nts"
    system: Any
    candidates: dict


def _states_line(c: _Cursor) -> list:
    out = []
    while c.peek.kind != "eol":
        out.append(c.word("a state").text)
    return out


def parse_system(text: str, kind: str, file: str = "<system>") -> SystemFile:
    """Parse a ``.mc``, ``.lmc`` or ``.nts`` description.

    Lines: ``states s1 s2 ...``, ``terminal s ...`` (mc), ``label s A`` (lmc),
    ``edge s -> t prob p/q`` (mc, lmc) or ``edge s -> t`` (nts), and
    ``candidate NAME { el: v, ... }`` over states (mc) or state pairs.
    """
    from .liftings import UNIT, LabelledMarkovChain, MarkovChain, NondetTS

    if kind not in ("mc", "lmc", "nts"):
        raise ValueError(f"unknown system kind {kind!r}")
    states: list = []
    states_tok = None
    terminal: set = set()
    labels: dict = {}
    edges: dict = {}
    pending: list = []  # candidate lines, parsed once the states are known
    for _, toks in _lines(text, file):
        c = _Cursor(toks)
        kw = c.word("a keyword")
        if kw.text == "states":
            if states_tok is not None:
                raise ParseError("states declared twice", kw.span)
            states_tok = kw
            states = _states_line(c)
            if len(set(states)) != len(states):
                raise ValidationError("duplicate state", kw.span)
            if not states:
                raise ValidationError("no states declared", kw.span)
        elif kw.text == "terminal" and kind == "mc":
            for s in _states_line(c):
                terminal.add(s)
        elif kw.text == "label" and kind == "lmc":
            s = c.word("a state")
            lab = c.word("a label")
            if s.text in labels:
                raise ValidationError(f"state {s.text} labelled twice", s.span)
            labels[s.text] = lab.text
        elif kw.text == "edge":
            s = c.word("a state")
            c.expect("->")
            t = c.word("a state")
            if kind == "nts":
                edges.setdefault(s.text, {})[t.text] = None
            else:
                c.expect("prob")
                w, wt = _number(c)
                row = edges.setdefault(s.text, {})
                if t.text in row:
                    raise ValidationError(f"duplicate edge {s.text} -> {t.text}", t.span)
                row[t.text] = (w, wt)
            for tok in (s, t):
                if states_tok is not None and tok.text not in states:
                    raise ValidationError(f"unknown state {tok.text!r}", tok.span)
        elif kw.text == "candidate":
            pending.append((c, kw))
            continue
        else:
            raise ParseError(f"unknown keyword {kw.text!r}", kw.span)
        c.end()
    if states_tok is None:
        raise ValidationError("missing 'states' line", SourceSpan(file, 1, 1))
    S = FiniteSet(states)
    for s in list(terminal) + list(labels) + list(edges):
        if s not in S:
            raise ValidationError(f"unknown state {s!r}", states_tok.span)
    try:
        if kind == "nts":
            system = NondetTS(S, {s: frozenset(edges.get(s, {})) for s in S})
        else:
            dists = {}
            for s, row in edges.items():
                try:
                    dists[s] = Distribution.from_mapping(
                        f"eta({s})", {t: w for t, (w, _) in row.items()})
                except ValueError as exc:
                    tok = next(iter(row.values()))[1]
                    raise ValidationError(str(exc), tok.span) from None
            if kind == "mc":
                system = MarkovChain(S, frozenset(terminal), dists)
            else:
                system = LabelledMarkovChain(S, labels, dists)
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc), states_tok.span) from None
    dom = S if kind == "mc" else S.product(S)

    def value(cc):
        v, t = _number(cc)
        try:
            return UNIT.coerce(v)
        except ValueError as exc:
            raise ValidationError(str(exc), t.span) from None

    candidates = {}
    for c, kw in pending:
        nt = c.word("a candidate name")
        if nt.text in candidates:
            raise ValidationError(f"duplicate candidate {nt.text!r}", nt.span)
        candidates[nt.text] = _valuation_body(c, dom, "the candidate domain", UNIT, value)
        c.end()
    return SystemFile(kind, system, candidates)


def system_kind(path: str) -> str:
    for ext in ("lmc", "nts", "mc"):
        if path.endswith("." + ext):
            return ext
    raise ValueError(f"cannot tell the system kind of {path!r}; use .mc, .lmc or .nts")
