"""Sparse multivariate polynomials with exact rational coefficients.

Used for presentations (relations) and dual socle polynomials.  The
monomial order helpers implement the local degree order used everywhere in
the package: lower total degree first, ties broken by degree reverse
lexicographic order with the larger monomial first.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction

Exponent = tuple[int, ...]


class Poly:
    """A polynomial in ``nvars`` variables, stored as ``{exponent: Fraction}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = self.terms.get(tuple(e), Fraction(0)) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = Poly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (the m-adic order); -1 for zero."""
        return min((sum(e) for e in self.terms), default=-1)

    def truncate(self, n: int) -> "Poly":
        """Drop all terms of total degree >= n."""
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) < n})

    def contract(self, u: Exponent) -> "Poly":
        """Contraction ``x^u o F`` (divided-power action)."""
        out = {}
        for e, c in self.terms.items():
            if all(a >= b for a, b in zip(e, u)):
                out[tuple(a - b for a, b in zip(e, u))] = c
        return Poly(self.nvars, out)

    def format(self, names) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=monomial_key):
            c = self.terms[e]
            mono = format_monomial(e, names)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self.format([f'x{i}' for i in range(self.nvars)])})"


def format_monomial(e: Exponent, names) -> str:
    parts = []
    for name, a in zip(names, e):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) if parts else "1"


def monomial_key(e: Exponent):
    """Sort key: degree ascending, then degrevlex with the larger monomial first."""
    return (sum(e), tuple(reversed(e)))


def monomials_below(nvars: int, n: int) -> list[Exponent]:
    """All monomials of total degree < n, sorted by :func:`monomial_key`."""
    out = []
    for d in range(n):
        out.extend(monomials_of_degree(nvars, d))
    return sorted(out, key=monomial_key)


def monomials_of_degree(nvars: int, d: int) -> list[Exponent]:
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for c in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, key=monomial_key)


# ---------------------------------------------------------------------------
# expression parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1)
        num, name, sym = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            tokens.append(("num", int(num), col))
        elif name is not None:
            tokens.append(("name", name, col))
        else:
            tokens.append(("sym", sym, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


def parse_poly(text: str, names) -> Poly:
    """Parse an expression with ``+ - * / ^``, parentheses, integers and variable names.

    Juxtaposition such as ``2x`` or ``x y`` is accepted as multiplication.
    Division is only allowed by integer constants.
    """
    names = list(names)
    index = {n: i for i, n in enumerate(names)}
    nv = len(names)
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    def expect(sym):
        t = take()
        if t[0] != "sym" or t[1] != sym:
            raise ParseError(f"expected {sym!r}", column=t[2])

    def expr():
        t = peek()
        sign = 1
        if t[0] == "sym" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        acc = term() * sign
        while True:
            t = peek()
            if t[0] == "sym" and t[1] in "+-":
                take()
                rhs = term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term():
        acc = power()
        while True:
            t = peek()
            if t[0] == "sym" and t[1] == "*":
                take()
                acc = acc * power()
            elif t[0] == "sym" and t[1] == "/":
                take()
                d = take()
                if d[0] != "num" or d[1] == 0:
                    raise ParseError("division only by a nonzero integer", column=d[2])
                acc = acc * Fraction(1, d[1])
            elif t[0] in ("num", "name") or (t[0] == "sym" and t[1] == "("):
                acc = acc * power()
            else:
                return acc

    def power():
        base = atom()
        t = peek()
        if t[0] == "sym" and t[1] in ("^",):
            take()
            e = take()
            if e[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", column=e[2])
            return base ** e[1]
        if t[0] == "sym" and t[1] == "*" and toks[pos + 1][0] == "sym" and toks[pos + 1][1] == "*":
            take()
            take()
            e = take()
            if e[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", column=e[2])
            return base ** e[1]
        return base

    def atom():
        t = take()
        if t[0] == "num":
            return Poly.constant(nv, t[1])
        if t[0] == "name":
            if t[1] not in index:
                raise ParseError(f"unknown variable {t[1]!r}", column=t[2])
            return Poly.variable(nv, index[t[1]])
        if t[0] == "sym" and t[1] == "(":
            inner = expr()
            expect(")")
            return inner
        raise ParseError(f"unexpected token {t[1]!r}", column=t[2])

    result = expr()
    t = peek()
    if t[0] != "end":
        raise ParseError(f"unexpected token {t[1]!r}", column=t[2])
    return result
