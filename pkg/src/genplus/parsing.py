"""Text grammars for groups, spaces, homomorphisms and matrix literals.

::

    group { gens: a b; rels: a^2 b^3 (a*b)^5 }
    space { group: group { gens: a; rels: a^5 }; cells2: a^5 1; aspherical: false }
    hom { to: group { gens: a; rels: a^2 }; a -> a; kernel: a^2 }
    Z[i]: [[3, 2-1i], [2+1i, 2]]

Relators in a list are separated by whitespace; inside a word, factors are
joined with ``*``.  ``1`` is the empty word.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .groups import GroupHom, Presentation, Word, format_word
from .matrix import MatrixR
from .rings import RingError, parse_ring


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[{}();:*^,\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), *_position(text, pos)))
        pos = m.end()
    tokens.append(Token("eof", "", *_position(text, len(text))))
    return tokens


@dataclass(frozen=True)
class _Factor:
    item: object  # Token (name / "1") or tuple of factors
    exponent: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def accept(self, text: str) -> Token | None:
        if self.tok.text == text and self.tok.kind != "eof":
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # words ---------------------------------------------------------------

    def word(self) -> tuple[_Factor, ...]:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return tuple(factors)

    def factor(self) -> _Factor:
        t = self.tok
        if t.text == "(":
            self.i += 1
            item = self.word()
            self.expect(")")
        elif t.kind == "name" or t.text == "1":
            self.i += 1
            item = t
        else:
            raise self.error(f"expected a word, found {t.text or 'end of input'!r}")
        exponent = 1
        caret = self.accept("^")
        if caret:
            if self.tok.kind != "int":
                raise self.error("expected an integer exponent after '^'", caret)
            exponent = int(self.tok.text)
            self.i += 1
        return _Factor(item, exponent)

    def word_list(self, stop: Sequence[str] = (";", "}")) -> list[tuple[_Factor, ...]]:
        out = []
        while self.tok.text not in stop and self.tok.kind != "eof":
            out.append(self.word())
        return out

    # blocks --------------------------------------------------------------

    def fields(self, keyword: str, handlers: dict, arrow_handler=None) -> None:
        self.expect(keyword)
        self.expect("{")
        seen = set()
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated block, expected '}'")
            key = self.name()
            if arrow_handler is not None and self.tok.kind == "arrow":
                self.i += 1
                arrow_handler(key, self.word())
            else:
                if key.text not in handlers:
                    raise self.error(f"unknown field {key.text!r} in {keyword}", key)
                if key.text in seen:
                    raise self.error(f"duplicate field {key.text!r}", key)
                seen.add(key.text)
                self.expect(":")
                handlers[key.text](key)
            if not self.accept(";") and self.tok.text != "}":
                raise self.error(f"expected ';' or '}}', found {self.tok.text or 'end of input'!r}")

    def group(self) -> Presentation:
        gens: list[Token] = []
        rels: list = []

        def gens_field(_):
            while self.tok.kind == "name":
                gens.append(self.name())

        def rels_field(_):
            rels.extend(self.word_list())

        self.fields("group", {"gens": gens_field, "rels": rels_field})
        names = [t.text for t in gens]
        for k, t in enumerate(gens):
            if t.text in names[:k]:
                raise self.error(f"duplicate generator {t.text!r}", t)
        return Presentation(tuple(names), tuple(resolve_word(w, names) for w in rels))

    def boolean(self) -> bool:
        t = self.name()
        if t.text not in ("true", "false"):
            raise self.error("expected true or false", t)
        return t.text == "true"


def _expand(factors, names) -> list:
    letters = []
    for f in factors:
        if isinstance(f.item, Token):
            if f.item.text == "1":
                inner = []
            elif f.item.text in names:
                inner = [(names.index(f.item.text), 1)]
            else:
                raise ParseError(f"unknown generator {f.item.text!r}", f.item.line, f.item.column)
        else:
            inner = _expand(f.item, names)
        base = inner if f.exponent >= 0 else [(g, -s) for g, s in reversed(inner)]
        letters.extend(base * abs(f.exponent))
    return letters


def resolve_word(factors, names: Sequence[str]) -> Word:
    return Word(tuple(_expand(factors, list(names))))


def _finish(p: _Parser) -> None:
    if p.tok.kind != "eof":
        raise p.error(f"unexpected trailing input {p.tok.text!r}")


# -- public entry points --------------------------------------------------


def parse_word(text: str, names: Sequence[str]) -> Word:
    p = _Parser(text)
    w = p.word()
    _finish(p)
    return resolve_word(w, names)


def parse_words(text: str, names: Sequence[str]) -> list[Word]:
    p = _Parser(text)
    ws = p.word_list(stop=())
    _finish(p)
    return [resolve_word(w, names) for w in ws]


def parse_group(text: str) -> Presentation:
    p = _Parser(text)
    P = p.group()
    _finish(p)
    return P


@dataclass(frozen=True)
class SpaceSpec:
    """Parsed ``space { ... }`` block; turned into a SpaceModel by the homology layer."""

    group: Presentation
    cells2: tuple[Word, ...] = ()
    aspherical: bool = False

    def __str__(self) -> str:
        cells = " ".join(format_word(w, self.group.generators) for w in self.cells2)
        return (f"space {{ group: {self.group}; cells2: {cells}; "
                f"aspherical: {'true' if self.aspherical else 'false'} }}")


def parse_space(text: str) -> SpaceSpec:
    p = _Parser(text)
    out: dict = {}

    def group_field(_):
        out["group"] = p.group()

    def cells_field(key):
        out["cells2"] = (key, p.word_list())

    def asph_field(_):
        out["aspherical"] = p.boolean()

    p.fields("space", {"group": group_field, "cells2": cells_field, "aspherical": asph_field})
    _finish(p)
    if "group" not in out:
        raise ParseError("space needs a 'group' field", 1, 1)
    G = out["group"]
    cells = ()
    if "cells2" in out:
        cells = tuple(resolve_word(w, G.generators) for w in out["cells2"][1])
    return SpaceSpec(G, cells, out.get("aspherical", False))


@dataclass(frozen=True)
class HomSpec:
    """Parsed ``hom { ... }`` block: the map plus kernel normal generators."""

    hom: GroupHom
    kernel: tuple[Word, ...] = ()

    def __str__(self) -> str:
        h = self.hom
        parts = [f"from: {h.source}", f"to: {h.target}"]
        parts += [f"{n} -> {format_word(w, h.target.generators)}"
                  for n, w in zip(h.source.generators, h.images)]
        if self.kernel:
            parts.append("kernel: " + " ".join(format_word(w, h.source.generators) for w in self.kernel))
        if h.certified:
            parts.append("certified: true")
        return "hom { " + "; ".join(parts) + " }"


def parse_hom(text: str, source: Presentation | None = None) -> HomSpec:
    """Parse a homomorphism block; ``source`` is required when there is no ``from:`` field."""
    p = _Parser(text)
    out: dict = {}
    arrows: list[tuple[Token, tuple]] = []

    def from_field(_):
        out["from"] = p.group()

    def to_field(_):
        out["to"] = p.group()

    def kernel_field(_):
        out["kernel"] = p.word_list()

    def cert_field(_):
        out["certified"] = p.boolean()

    p.fields("hom", {"from": from_field, "to": to_field, "kernel": kernel_field,
                     "certified": cert_field}, arrow_handler=lambda k, w: arrows.append((k, w)))
    _finish(p)
    if "to" not in out:
        raise ParseError("hom needs a 'to' field", 1, 1)
    src = out.get("from", source)
    if src is None:
        raise ParseError("hom needs a 'from' field or a source presentation", 1, 1)
    target = out["to"]
    images: dict[str, Word] = {}
    for key, w in arrows:
        if key.text not in src.generators:
            raise ParseError(f"{key.text!r} is not a source generator", key.line, key.column)
        if key.text in images:
            raise ParseError(f"duplicate image for {key.text!r}", key.line, key.column)
        images[key.text] = resolve_word(w, target.generators)
    missing = [n for n in src.generators if n not in images]
    if missing:
        raise ParseError(f"no image given for generator(s) {' '.join(missing)}", 1, 1)
    hom = GroupHom(src, target, tuple(images[n] for n in src.generators),
                   certified=out.get("certified", False))
    kernel = tuple(resolve_word(w, src.generators) for w in out.get("kernel", []))
    return HomSpec(hom, kernel)


_MATRIX = re.compile(r"\s*(?P<ring>[^:]*?)\s*:\s*(?P<body>\[.*\])\s*$", re.DOTALL)


def parse_matrix(text: str) -> MatrixR:
    """Parse ``RING: [[...], ...]`` into a :class:`MatrixR`."""
    m = _MATRIX.match(text)
    if not m:
        raise ParseError("expected 'RING: [[...]]'", 1, 1)
    try:
        ring = parse_ring(m.group("ring"))
    except (RingError, ValueError) as exc:
        raise ParseError(str(exc), *_position(text, m.start("ring"))) from None
    body_start = m.start("body")
    body = m.group("body")
    rows: list[list] = []
    depth = 0
    cell_start = None
    row: list = []
    for k, ch in enumerate(body):
        if ch == "[":
            depth += 1
            if depth == 2:
                row = []
                cell_start = k + 1
            elif depth > 2:
                raise ParseError("matrix nesting too deep", *_position(text, body_start + k))
        elif ch in ",]" and depth == 2:
            cell = body[cell_start:k].strip()
            if cell:
                try:
                    row.append(ring.parse(cell))
                except (RingError, ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad entry {cell!r}: {exc}",
                                     *_position(text, body_start + cell_start)) from None
            elif ch == "," or row:
                raise ParseError("empty matrix entry", *_position(text, body_start + k))
            cell_start = k + 1
            if ch == "]":
                depth -= 1
                rows.append(row)
        elif ch == "]":
            depth -= 1
        elif depth == 0 and not ch.isspace():
            raise ParseError(f"unexpected {ch!r}", *_position(text, body_start + k))
        elif depth == 1 and not (ch.isspace() or ch == ","):
            raise ParseError(f"unexpected {ch!r}", *_position(text, body_start + k))
    if depth != 0:
        raise ParseError("unbalanced brackets", *_position(text, len(text)))
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise ParseError("rows have different lengths", 1, 1)
    return MatrixR.from_rows(ring, rows, widths.pop() if widths else 0)


def format_matrix(A: MatrixR) -> str:
    return A.to_literal()
