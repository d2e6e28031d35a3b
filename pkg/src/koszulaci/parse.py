"""Text format for rings, polynomials, and ideals.

Grammar (whitespace-insensitive, UTF-8; the unicode minus and dot are
accepted as aliases for '-' and '*'):

    ring F32003[x,y,z,w];
    ideal (x*y, x*w, (x-y)*z, z^2, x^2+z*w);

Polynomials use integer coefficients, identifiers for variables, and the
operators + - * ^ with parentheses.  parse and print are mutually inverse
on canonical forms.
"""

from __future__ import annotations

import re

from .ring import DEFAULT_CHAR, Ideal, Polynomial, PrimeField, Ring


class ParseError(ValueError):
    def __init__(self, message, pos, text):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[-+*^(),;\[\]]))"
)

_ALIASES = {"−": "-", "‒": "-", "–": "-", "·": "*", "⋅": "*"}


def _tokenize(text: str):
    for bad, good in _ALIASES.items():
        text = text.replace(bad, good)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", pos, text)
        if m.lastgroup == "int":
            tokens.append(("int", int(m.group("int")), m.start("int")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens, text


class _Parser:
    def __init__(self, text, ring=None):
        self.tokens, self.text = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos, self.text)

    def fail(self, message):
        raise ParseError(message, self.peek()[2], self.text)

    # polynomial := term (('+'|'-') term)*  with optional leading sign
    def polynomial(self) -> Polynomial:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        elif self.peek()[1] == "+":
            self.next()
        poly = self.term().scale(sign)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = self.term()
            poly = poly + t if op == "+" else poly - t
        return poly

    # term := factor ('*' factor)*
    def term(self) -> Polynomial:
        poly = self.factor()
        while self.peek()[1] == "*":
            self.next()
            poly = poly * self.factor()
        return poly

    # factor := atom ('^' int)?
    def factor(self) -> Polynomial:
        poly = self.atom()
        if self.peek()[1] == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise ParseError("expected integer exponent", pos, self.text)
            poly = poly**val
        return poly

    def atom(self) -> Polynomial:
        kind, val, pos = self.next()
        if kind == "int":
            return self.ring.constant(val)
        if kind == "name":
            try:
                i = self.ring.names.index(val)
            except ValueError:
                raise ParseError(f"unknown variable {val!r}", pos, self.text) from None
            return self.ring.variable(i)
        if val == "(":
            poly = self.polynomial()
            self.expect(")")
            return poly
        raise ParseError(f"unexpected token {val!r}", pos, self.text)

    def ring_header(self, default_char=None) -> Ring:
        self.expect("ring")
        kind, val, pos = self.next()
        if kind != "name" or not re.fullmatch(r"F(p|\d+)", val):
            raise ParseError("expected field name like F32003", pos, self.text)
        if val == "Fp":
            char = default_char or DEFAULT_CHAR
        else:
            char = int(val[1:])
        self.expect("[")
        names = []
        while True:
            kind, val, pos = self.next()
            if kind != "name":
                raise ParseError("expected variable name", pos, self.text)
            names.append(val)
            kind, val, pos = self.next()
            if val == "]":
                break
            if val != ",":
                raise ParseError("expected ',' or ']'", pos, self.text)
        self.expect(";")
        return Ring(PrimeField(char), tuple(names))

    def ideal_body(self) -> Ideal:
        self.expect("ideal")
        self.expect("(")
        gens = []
        if self.peek()[1] != ")":
            gens.append(self.polynomial())
            while self.peek()[1] == ",":
                self.next()
                gens.append(self.polynomial())
        self.expect(")")
        self.expect(";")
        return Ideal(self.ring, tuple(gens))


def parse_polynomial(source: str, ring: Ring) -> Polynomial:
    parser = _Parser(source, ring)
    poly = parser.polynomial()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", pos, parser.text)
    return poly


def parse_ideal_file(source: str, default_char=None):
    """Parse a full input: ring header then ideal body.  Returns (ring, ideal)."""
    parser = _Parser(source)
    parser.ring = parser.ring_header(default_char)
    idl = parser.ideal_body()
    return parser.ring, idl


def polynomial_to_string(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    field = f.ring.field
    names = f.ring.names
    chunks = []
    for m, c in f.terms:
        c = field.balanced(c)
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(c)] + factors)
        chunks.append((sign, body))
    sign, body = chunks[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def ideal_to_file(idl: Ideal) -> str:
    ring = idl.ring
    header = f"ring F{ring.p}[{','.join(ring.names)}];"
    body = "ideal (" + ", ".join(str(g) for g in idl.gens) + ");"
    return header + "\n" + body + "\n"
