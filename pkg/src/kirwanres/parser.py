"""Text grammar for polynomials and factored rational functions.

Polynomials::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | primary ['^' INT]
    primary := NUMBER | VAR | '(' expr ')'

``NUMBER`` is an integer or a rational literal ``a/b``; ``VAR`` is ``X`` or
``Y1`` .. ``Ym``.  Rational functions add one optional ``/ denom`` suffix
where ``denom`` is a ``*``-product of powers of constants and homogeneous
linear forms, e.g. ``X/((X+Y1)*(X-Y1)^2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import FactoredRational, LinForm, Poly
from .errors import ParseError

__all__ = ["parse_poly", "print_poly", "parse_fraction", "print_fraction", "parse_rational"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>X|Y\d+)|(?P<op>[-+*^()/])|(?P<bad>\S))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break  # trailing whitespace
        kind = mt.lastgroup
        start = mt.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {mt.group(kind)!r}", text, start)
        tokens.append((kind, mt.group(kind), start))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, m):
        self.text = text
        self.m = m
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def expect(self, value):
        tok = self.next()
        if tok[1] != value or tok[0] == "num":
            raise self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def at_op(self, *ops):
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def expr(self):
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.next()[1] == "-" else 1
        result = self.term().scale(sign)
        while self.at_op("+", "-"):
            op = self.next()[1]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self):
        result = self.factor()
        while self.at_op("*"):
            self.next()
            result = result * self.factor()
        return result

    def factor(self):
        if self.at_op("-"):
            self.next()
            return -self.factor()
        base = self.primary()
        if self.at_op("^"):
            self.next()
            base = base ** self.exponent()
        return base

    def exponent(self):
        tok = self.next()
        if tok[0] != "num" or "/" in tok[1]:
            raise self.error("exponent must be a nonnegative integer", tok)
        return int(tok[1])

    def primary(self):
        tok = self.next()
        kind, value, _ = tok
        if kind == "num":
            if re.search(r"/0+$", value):
                raise self.error("zero denominator", tok)
            return Poly.const(self.m, Fraction(value))
        if kind == "var":
            if value == "X":
                return Poly.var(self.m, 0)
            i = int(value[1:])
            if not 1 <= i <= self.m:
                raise self.error(f"unknown variable {value} (m={self.m})", tok)
            return Poly.var(self.m, i)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {value or 'end of input'!r}", tok)

    def denominator(self):
        """Product of constants and linear-form powers; returns (scale, factors)."""
        scale = Fraction(1)
        factors = []
        while True:
            s, f = self.denominator_factor()
            scale *= s
            factors.extend(f)
            if not self.at_op("*"):
                return scale, factors
            self.next()

    def denominator_factor(self):
        tok = self.peek()
        if self.at_op("("):
            # either a parenthesized linear form or a parenthesized product
            save = self.i
            self.next()
            base = self.expr()
            if self.at_op(")") and (base.is_constant() or base.is_homogeneous(1)):
                self.next()
            else:
                self.i = save + 1
                scale, factors = self.denominator()
                self.expect(")")
                k = self.optional_exponent()
                return scale**k, [(l, j * k) for l, j in factors if k]
        else:
            base = self.primary()
        k = self.optional_exponent()
        if base.is_zero():
            raise self.error("division by zero", tok)
        if base.is_constant():
            return base.constant_term() ** k, []
        try:
            l = LinForm.from_poly(base)
        except ValueError:
            raise self.error("denominator factors must be homogeneous linear forms", tok) from None
        return Fraction(1), [(l, k)] if k else []

    def optional_exponent(self):
        if self.at_op("^"):
            self.next()
            return self.exponent()
        return 1

    def finish(self):
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}", tok)


def parse_poly(text: str, m: int) -> Poly:
    p = _Parser(text, m)
    result = p.expr()
    p.finish()
    return result


def parse_fraction(text: str, m: int) -> FactoredRational:
    p = _Parser(text, m)
    num = p.expr()
    factors = []
    if p.at_op("/"):
        p.next()
        scale, factors = p.denominator()
        num = num.scale(1 / scale)
    p.finish()
    return FactoredRational(num, factors)


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or an integer (string or int) into a ``Fraction``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not re.fullmatch(r"\s*[-+]?\d+(/\d+)?\s*", text):
        raise ParseError(f"not a rational literal: {text!r}")
    if re.search(r"/0+\s*$", text):
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(text.strip())


def _var_name(i):
    return "X" if i == 0 else f"Y{i}"


def _monomial(exps):
    parts = []
    for i, k in enumerate(exps):
        if k == 1:
            parts.append(_var_name(i))
        elif k:
            parts.append(f"{_var_name(i)}^{k}")
    return "*".join(parts)


def _term_order(item):
    exps = item[0]
    return (-sum(exps), tuple(-e for e in exps))


def print_poly(p: Poly) -> str:
    """Canonical text; terms in graded-lex order (highest degree first)."""
    if p.is_zero():
        return "0"
    out = []
    for exps, c in sorted(p.terms.items(), key=_term_order):
        mono = _monomial(exps)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


def print_fraction(h: FactoredRational) -> str:
    num = print_poly(h.num)
    if not h.den:
        return num
    parts = []
    for l, k in h.den:
        s = f"({print_poly(l.to_poly())})"
        parts.append(s if k == 1 else f"{s}^{k}")
    den = parts[0] if len(parts) == 1 else "(" + "*".join(parts) + ")"
    return f"({num})/{den}"
