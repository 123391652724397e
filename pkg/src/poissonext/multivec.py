"""Polynomial multivector fields.

A multivector of degree k is a finite sum  f_I * dv_{i1}^...^dv_{ik}  where the
skew factors dv stand for the anti-commuting symbols d/dv and I is strictly
increasing.  Signs from reordering are folded into the coefficient.
"""
from __future__ import annotations

from itertools import combinations

from .exactring import Polynomial, StructuralError, VariableSpace
from .exactring.parse import Parser, ParseError, tokenize


def normalize(indices):
    """Sort a list of skew-factor positions.

    Returns ``(sorted_tuple, sign)``; a repeated index gives ``(None, 0)``.
    """
    idx = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


_MERGE_CACHE: dict = {}


def merge(s, t):
    """Wedge of two sorted skew monomials: ``(sorted, sign)`` or ``(None, 0)``."""
    key = (s, t)
    hit = _MERGE_CACHE.get(key)
    if hit is not None:
        return hit
    if set(s) & set(t):
        res = (None, 0)
    else:
        inversions = 0
        for q in t:
            for p in s:
                if p > q:
                    inversions += 1
        res = (tuple(sorted(s + t)), -1 if inversions & 1 else 1)
    if len(_MERGE_CACHE) > 500000:
        _MERGE_CACHE.clear()
    _MERGE_CACHE[key] = res
    return res


class Multivector:
    """Immutable multivector field of a fixed degree."""

    __slots__ = ("space", "degree", "terms")

    def __init__(self, space: VariableSpace, degree: int, terms=None):
        self.space = space
        self.degree = degree
        clean = {}
        for key, coeff in (terms or {}).items():
            key, sign = normalize(key)
            if key is None:
                continue
            if len(key) != degree:
                raise StructuralError(f"skew monomial of length {len(key)} in a degree-{degree} multivector")
            if not isinstance(coeff, Polynomial):
                coeff = Polynomial.const(space, coeff)
            elif coeff.space != space:
                raise StructuralError("coefficient over a different variable space")
            if sign < 0:
                coeff = -coeff
            if key in clean:
                coeff = clean[key] + coeff
            if coeff:
                clean[key] = coeff
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def _raw(cls, space, degree, terms):
        obj = object.__new__(cls)
        obj.space = space
        obj.degree = degree
        obj.terms = terms
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, space, degree):
        return cls._raw(space, degree, {})

    @classmethod
    def function(cls, f: Polynomial):
        return cls._raw(f.space, 0, {(): f} if f else {})

    @classmethod
    def basis(cls, space, *names, coeff=1):
        idx = [space.index(n) for n in names]
        return cls(space, len(idx), {tuple(idx): coeff})

    @classmethod
    def from_pairs(cls, space, entries):
        """Build from ``{(name, ...): coefficient}``."""
        terms = {}
        for names, c in entries.items():
            key, sign = normalize([space.index(n) for n in names])
            if key is None:
                continue
            if not isinstance(c, Polynomial):
                c = Polynomial.const(space, c)
            c = c if sign > 0 else -c
            terms[key] = terms[key] + c if key in terms else c
        degree = len(next(iter(entries))) if entries else 0
        return cls(space, degree, terms)

    # queries ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms ordered by skew monomial."""
        return sorted(self.terms.items())

    def coeff(self, *names) -> Polynomial:
        """Coefficient of dv_1^...^dv_k for the given (possibly unsorted) names."""
        key, sign = normalize([self.space.index(n) for n in names])
        if key is None:
            return Polynomial.zero(self.space)
        c = self.terms.get(key)
        if c is None:
            return Polynomial.zero(self.space)
        return c if sign > 0 else -c

    def support(self):
        return [tuple(self.space.names[i] for i in key) for key, _ in self.items()]

    def n_monomials(self) -> int:
        return sum(len(c) for c in self.terms.values())

    def is_template(self):
        return any(c.is_template() for c in self.terms.values())

    def unknowns(self):
        out = set()
        for c in self.terms.values():
            out |= c.unknowns()
        return out

    # arithmetic -------------------------------------------------------
    def _same(self, other):
        if self.space is not other.space and self.space != other.space:
            raise StructuralError("multivectors over different variable spaces")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._same(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise StructuralError("cannot add multivectors of different degree")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            if k in terms:
                s = terms[k] + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
            else:
                terms[k] = c
        return Multivector._raw(self.space, self.degree, terms)

    def __neg__(self):
        return Multivector._raw(self.space, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        """Multiply every coefficient by a scalar or polynomial."""
        terms = {}
        for k, c in self.terms.items():
            p = c * factor
            if p:
                terms[k] = p
        return Multivector._raw(self.space, self.degree, terms)

    def __mul__(self, factor):
        if isinstance(factor, Multivector):
            return wedge(self, factor)
        return self.scale(factor)

    def __rmul__(self, factor):
        return self.scale(factor)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, Multivector):
            if not self.terms and not other.terms:
                return self.space == other.space
            return self.space == other.space and self.degree == other.degree and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def map_coefficients(self, f):
        return Multivector(self.space, self.degree, {k: f(c) for k, c in self.terms.items()})

    def substitute_unknowns(self, values):
        return self.map_coefficients(lambda c: c.substitute_unknowns(values))

    def grade_parts(self, grading: str = "total", skew_weights=None):
        """Split by coefficient degree plus optional weights on skew factors."""
        parts = {}
        for k, c in self.terms.items():
            shift = sum(skew_weights[i] for i in k) if skew_weights is not None else 0
            for d, piece in c.grade_parts(grading).items():
                parts.setdefault(d + shift, {})[k] = piece
        return {d: Multivector._raw(self.space, self.degree, t) for d, t in sorted(parts.items())}

    def homogeneous_part(self, degree: int, grading: str = "total"):
        return self.grade_parts(grading).get(degree, Multivector.zero(self.space, self.degree))

    def embed(self, space):
        idx = [space.index(n) for n in self.space.names]
        return Multivector(
            space, self.degree, {tuple(idx[i] for i in k): c.embed(space) for k, c in self.terms.items()}
        )

    def restrict(self, space):
        idx = {i: space.index(n) for i, n in enumerate(self.space.names) if n in space}
        terms = {}
        for k, c in self.terms.items():
            if any(i not in idx for i in k):
                raise StructuralError("skew factor outside target space")
            terms[tuple(idx[i] for i in k)] = c.restrict(space)
        return Multivector(space, self.degree, terms)

    def __str__(self):
        return format_multivector(self)

    def __repr__(self):
        return f"Multivector(degree={self.degree}, terms={len(self.terms)})"


# operations ------------------------------------------------------------

def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._same(b)
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            key, sign = merge(ka, kb)
            if key is None:
                continue
            p = ca * cb
            if sign < 0:
                p = -p
            if key in out:
                p = out[key] + p
                if not p:
                    del out[key]
                    continue
            if p:
                out[key] = p
    return Multivector._raw(a.space, a.degree + b.degree, out)


def skew_partial(a: Multivector, var) -> Multivector:
    """Right derivative by the skew factor of ``var``.

    d(xi_1...xi_d)/d(xi_k) = (-1)^(d-k) xi_1...^xi_k...xi_d
    """
    i = var if isinstance(var, int) else a.space.index(var)
    d = a.degree
    out = {}
    for k, c in a.terms.items():
        if i in k:
            pos = k.index(i) + 1
            rest = k[: pos - 1] + k[pos:]
            out[rest] = c if (d - pos) % 2 == 0 else -c
    return Multivector._raw(a.space, max(d - 1, 0), out)


def left_skew_partial(a: Multivector, var) -> Multivector:
    """Left derivative: d(xi_1...xi_d)/d(xi_k) = (-1)^(k-1) (...)."""
    i = var if isinstance(var, int) else a.space.index(var)
    out = {}
    for k, c in a.terms.items():
        if i in k:
            pos = k.index(i)
            rest = k[:pos] + k[pos + 1 :]
            out[rest] = c if pos % 2 == 0 else -c
    return Multivector._raw(a.space, max(a.degree - 1, 0), out)


def coefficient_partial(a: Multivector, var) -> Multivector:
    """Differentiate every coefficient by the even variable ``var``."""
    i = var if isinstance(var, int) else a.space.index(var)
    out = {}
    for k, c in a.terms.items():
        p = c.diff(i)
        if p:
            out[k] = p
    return Multivector._raw(a.space, a.degree, out)


def _form_potential(space, f):
    if isinstance(f, str):
        return Polynomial.variable(space, f)
    if isinstance(f, Polynomial):
        if f.space != space:
            raise StructuralError("form potential over a different variable space")
        return f
    raise TypeError("exact one-forms are given by their potential (Polynomial or variable name)")


def interior(a: Multivector, f) -> Multivector:
    """Insert the exact form df into the first slot."""
    f = _form_potential(a.space, f)
    grads = [(a.space.index(name), f.diff(name)) for name in f.variables()]
    out = None
    for i, g in grads:
        piece = left_skew_partial(a, i).scale(g)
        out = piece if out is None else out + piece
    if out is None:
        return Multivector.zero(a.space, max(a.degree - 1, 0))
    return out


def contract(a: Multivector, forms) -> Multivector:
    """Evaluate ``a`` on exact one-forms df_1, ..., df_k in order.

    For a bivector, ``contract(pi, [f, g])`` is the function {f, g}_pi
    (returned as a degree-0 multivector).
    """
    forms = list(forms)
    if len(forms) > a.degree:
        raise StructuralError(f"{len(forms)} forms for a degree-{a.degree} multivector")
    out = a
    for f in forms:
        out = interior(out, f)
    return out


def evaluate(a: Multivector, forms) -> Polynomial:
    """Full contraction as a polynomial (``len(forms) == degree``)."""
    if len(forms) != a.degree:
        raise StructuralError("full evaluation needs exactly degree-many forms")
    r = contract(a, forms)
    return r.terms.get((), Polynomial.zero(a.space))


# three-variable calculus ------------------------------------------------

def _require3(x: Multivector):
    if len(x.space) != 3:
        raise StructuralError("vector calculus operations need exactly three variables")


def star(x: Multivector) -> Multivector:
    """Complement map d_I -> eps(I, J) d_J on three variables (an involution)."""
    _require3(x)
    out = {}
    for k, c in x.terms.items():
        comp = tuple(i for i in range(3) if i not in k)
        _, sign = normalize(k + comp)
        out[comp] = c if sign > 0 else -c
    return Multivector._raw(x.space, 3 - x.degree, out)


def div(x: Multivector) -> Multivector:
    _require3(x)
    if x.degree != 1:
        raise StructuralError("div takes a vector field")
    total = Polynomial.zero(x.space)
    for (i,), c in x.terms.items():
        total = total + c.diff(i)
    return Multivector.function(total)


def curl(x: Multivector) -> Multivector:
    """Curl of f du^dv + g dw^du + h dv^dw; equals star(d(star x))."""
    _require3(x)
    if x.degree != 2:
        raise StructuralError("curl takes a bivector field")
    f = x.terms.get((0, 1), Polynomial.zero(x.space))
    g = -x.terms.get((0, 2), Polynomial.zero(x.space))
    h = x.terms.get((1, 2), Polynomial.zero(x.space))
    return Multivector(
        x.space,
        1,
        {
            (0,): f.diff(1) - g.diff(2),
            (1,): h.diff(2) - f.diff(0),
            (2,): g.diff(0) - h.diff(1),
        },
    )


def grad3(x: Multivector) -> Multivector:
    _require3(x)
    if x.degree != 3:
        raise StructuralError("grad3 takes a trivector field")
    f = x.terms.get((0, 1, 2), Polynomial.zero(x.space))
    return Multivector(x.space, 2, {(0, 1): f.diff(2), (2, 0): f.diff(1), (1, 2): f.diff(0)})


def threefold_ops(kind: str, x: Multivector) -> Multivector:
    ops = {"div": div, "curl": curl, "grad3": grad3, "star": star}
    try:
        return ops[kind](x)
    except KeyError:
        raise ValueError(f"unknown operation {kind!r}") from None


def vector_components(x: Multivector):
    """(u, v, w) components of a vector field, or of a bivector read through star."""
    _require3(x)
    if x.degree == 2:
        x = star(x)
    if x.degree != 1:
        raise StructuralError("expected a vector or bivector field")
    z = Polynomial.zero(x.space)
    return tuple(x.terms.get((i,), z) for i in range(3))


# text ------------------------------------------------------------------

def format_multivector(x: Multivector) -> str:
    if not x.terms:
        return "0"
    parts = []
    for k, c in x.items():
        d = "^".join("d" + x.space.names[i] for i in k)
        body = f"({c})" + (f"*{d}" if d else "")
        parts.append(body)
    return " + ".join(parts)


class _MVParser(Parser):
    def dfactor(self):
        t = self.next()
        if t[0] != "ident" or not t[1].startswith("d") or t[1][1:] not in self.space:
            self.error("expected a differential d<variable>", t)
        return self.space.index(t[1][1:])

    def dpart(self):
        idx = [self.dfactor()]
        while self.accept("^"):
            idx.append(self.dfactor())
        return idx

    def is_d(self, tok):
        return tok[0] == "ident" and tok[1].startswith("d") and tok[1][1:] in self.space

    def mvterm(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "(" and not self.is_complex_paren():
            self.next()
            c = self.poly()
            self.expect(")")
            if self.accept("*"):
                return c, self.dpart()
            return c, []
        if self.is_d(t) and (self.peek(1)[0] == "eof" or self.peek(1)[1] in "+-^"):
            return Polynomial.const(self.space, 1), self.dpart()
        self.error("expected '(' polynomial ')' '*' differentials")

    def multivector(self):
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        if self.at_end():
            self.error("empty multivector")
        if self.peek()[0] == "num" and self.peek()[1] == "0" and self.peek(1)[0] == "eof":
            self.next()
            return None
        c, idx = self.mvterm()
        terms.append((c if sign > 0 else -c, idx))
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            s = self.next()[1]
            c, idx = self.mvterm()
            terms.append((c if s == "+" else -c, idx))
        return terms


def parse_multivector(text: str, space: VariableSpace, degree: int | None = None) -> Multivector:
    """Parse ``(poly)*da^db + ...``.  ``0`` parses to the zero multivector."""
    p = _MVParser(text, space)
    terms = p.multivector()
    if not p.at_end():
        p.error("unexpected trailing input")
    if terms is None:
        return Multivector.zero(space, degree or 0)
    degs = {len(idx) for _, idx in terms}
    if len(degs) != 1:
        raise ParseError("mixed multivector degrees", text, 0)
    deg = degs.pop()
    if degree is not None and degree != deg:
        raise ParseError(f"expected degree {degree}, found {deg}", text, 0)
    acc = {}
    for c, idx in terms:
        key, sign = normalize(idx)
        if key is None:
            continue
        c = c if sign > 0 else -c
        acc[key] = acc[key] + c if key in acc else c
    return Multivector(space, deg, acc)


def identifiers(text: str):
    """Variable names mentioned in a multivector text (order of first use)."""
    names = []
    for kind, val, _ in tokenize(text):
        if kind != "ident":
            continue
        name = val
        if name.startswith("d") and len(name) > 1:
            name = name[1:]
        if name not in names:
            names.append(name)
    return names


def skew_basis(space: VariableSpace, degree: int):
    return list(combinations(range(len(space)), degree))
