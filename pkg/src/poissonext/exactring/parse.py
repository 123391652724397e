"""Recursive-descent parser for the polynomial text grammar.

    poly   := term (('+'|'-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := ident ('^' nat)?
    coeff  := rat | rat 'i' | '(' rat ('+'|'-') rat 'i' ')'
    rat    := int ('/' nat)?

Whitespace is ignored.  A leading sign on the first term is accepted.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .scalar import GaussianRational, scalar, scalar_from_parts
from .space import VariableSpace

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)(?P<imag>i(?![A-Za-z0-9_]))?|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    def __init__(self, message, text="", pos=0):
        self.pos = pos
        self.text = text
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} at line {line}, column {col}")


def tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup) if m.lastgroup != "imag" else m.start("num")
        if m.group("num") is not None:
            toks.append(("imag" if m.group("imag") else "num", m.group("num"), start))
        elif m.group("ident") is not None:
            toks.append(("ident", m.group("ident"), start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("eof", "", n))
    return toks


class Parser:
    def __init__(self, text: str, space: VariableSpace | None = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.space = space

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def accept(self, op):
        t = self.peek()
        if t[0] == "op" and t[1] == op:
            self.i += 1
            return True
        return False

    def expect(self, op):
        if not self.accept(op):
            self.error(f"expected {op!r}")

    def at_end(self):
        return self.peek()[0] == "eof"

    # grammar
    def rat(self):
        t = self.next()
        if t[0] != "num":
            self.error("expected integer", t)
        val = Fraction(int(t[1]))
        if self.accept("/"):
            d = self.next()
            if d[0] != "num":
                self.error("expected denominator", d)
            if int(d[1]) == 0:
                self.error("zero denominator", d)
            val = val / int(d[1])
        return val

    def rat_or_imag(self):
        """rat, or rat 'i'.  The 'i' may follow the integer or the denominator."""
        t = self.next()
        if t[0] not in ("num", "imag"):
            self.error("expected number", t)
        val = Fraction(int(t[1]))
        imag = t[0] == "imag"
        if not imag and self.peek()[0] == "op" and self.peek()[1] == "/" and self.peek(1)[0] in ("num", "imag"):
            self.next()
            d = self.next()
            if int(d[1]) == 0:
                self.error("zero denominator", d)
            val = val / int(d[1])
            imag = d[0] == "imag"
        return (scalar_from_parts(0, val) if imag else scalar(val)), imag

    def is_complex_paren(self):
        # '(' rat ('+'|'-') rat 'i' ')'
        j = self.i
        toks = self.toks
        if not (toks[j][0] == "op" and toks[j][1] == "("):
            return False
        j += 1
        if toks[j][0] == "op" and toks[j][1] == "-":
            j += 1
        if toks[j][0] != "num":
            return False
        j += 1
        if toks[j][0] == "op" and toks[j][1] == "/":
            j += 2
        if not (toks[j][0] == "op" and toks[j][1] in "+-"):
            return False
        j += 1
        if toks[j][0] == "imag":
            j += 1
        elif toks[j][0] == "num" and toks[j + 1][1] == "/" and toks[j + 2][0] == "imag":
            j += 3
        else:
            return False
        return toks[j][0] == "op" and toks[j][1] == ")"

    def coeff(self):
        if self.is_complex_paren():
            self.expect("(")
            neg = self.accept("-")
            re_part = self.rat()
            if neg:
                re_part = -re_part
            sign = -1 if self.next()[1] == "-" else 1
            im, _ = self.rat_or_imag()
            self.expect(")")
            return scalar_from_parts(re_part, sign * im.im)
        val, _ = self.rat_or_imag()
        return val

    def factor(self):
        from .polynomial import Polynomial

        t = self.next()
        if t[0] != "ident":
            self.error("expected variable", t)
        if self.space is None:
            self.error("no variable space for identifiers", t)
        if t[1] not in self.space:
            self.error(f"unknown variable {t[1]!r}", t)
        p = Polynomial.variable(self.space, t[1])
        if self.accept("^"):
            e = self.next()
            if e[0] != "num":
                self.error("expected exponent", e)
            p = p ** int(e[1])
        return p

    def term(self):
        from .polynomial import Polynomial

        t = self.peek()
        if t[0] in ("num", "imag") or self.is_complex_paren():
            if self.space is None:
                self.error("no variable space for polynomial")
            result = Polynomial.const(self.space, self.coeff())
        else:
            result = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*" and self.peek(1)[0] == "ident" and not self.stop_ident(self.peek(1)[1]):
            self.next()
            result = result * self.factor()
        return result

    def stop_ident(self, name):
        """Hook for the multivector grammar: identifiers that end a polynomial."""
        return False

    def poly(self):
        from .polynomial import Polynomial

        neg = False
        if self.accept("-"):
            neg = True
        elif self.accept("+"):
            pass
        result = self.term()
        if neg:
            result = -result
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = self.next()[1]
            t = self.term()
            result = result + t if sign == "+" else result - t
        return result


def parse_polynomial(text: str, space: VariableSpace):
    p = Parser(text, space)
    result = p.poly()
    if not p.at_end():
        p.error("unexpected trailing input")
    return result


def parse_scalar(text: str):
    p = Parser(text)
    neg = p.accept("-")
    val = p.coeff()
    if not p.at_end():
        p.error("unexpected trailing input")
    return -val if neg else val


def space_for(text: str, extra=()) -> VariableSpace:
    """Variable space made of the identifiers in ``text`` (order of appearance)."""
    names = list(extra)
    for kind, val, _ in tokenize(text):
        if kind == "ident" and val not in names:
            names.append(val)
    return VariableSpace(names)
