"""Sparse multivariate polynomials over a :class:`VariableSpace`.

Terms map dense exponent tuples to coefficients.  Coefficients are exact
scalars, or :class:`AffineExpression` values in template mode.
"""
from __future__ import annotations

from operator import add

from .affine import AffineExpression, coefficient
from .scalar import format_scalar, GaussianRational
from .space import StructuralError, VariableSpace


def _check(a, b):
    if a.space is not b.space and a.space != b.space:
        raise StructuralError("polynomials over different variable spaces")


def grlex_key(exps):
    """Sort key realising graded-lex order (largest first when used ascending)."""
    return (-sum(exps), tuple(-e for e in exps))


class Polynomial:
    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VariableSpace, terms=None):
        self.space = space
        clean = {}
        n = len(space)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise StructuralError("exponent vector length does not match variable count")
            c = coefficient(c)
            if c:
                prev = clean.get(exps)
                if prev is not None:
                    c = coefficient(prev + c)
                    if not c:
                        del clean[exps]
                        continue
                clean[exps] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, space, terms):
        obj = object.__new__(cls)
        obj.space = space
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, space):
        return cls._raw(space, {})

    @classmethod
    def const(cls, space, c):
        c = coefficient(c)
        return cls._raw(space, {(0,) * len(space): c} if c else {})

    @classmethod
    def variable(cls, space, name):
        i = space.index(name)
        e = [0] * len(space)
        e[i] = 1
        return cls._raw(space, {tuple(e): 1})

    @classmethod
    def monomial(cls, space, exps, c=1):
        return cls(space, {tuple(exps): c})

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms in canonical graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def degree(self, grading: str = "total"):
        """Maximal degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        w = self.space.weights(grading)
        return max(sum(e * x for e, x in zip(exps, w)) for exps in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.space), 0)

    def is_constant(self) -> bool:
        z = (0,) * len(self.space)
        return all(e == z for e in self.terms)

    def variables(self):
        used = set()
        for exps in self.terms:
            used.update(i for i, e in enumerate(exps) if e)
        return [self.space.names[i] for i in sorted(used)]

    def is_template(self) -> bool:
        return any(isinstance(c, AffineExpression) for c in self.terms.values())

    def unknowns(self):
        out = set()
        for c in self.terms.values():
            if isinstance(c, AffineExpression):
                out |= c.unknowns()
        return out

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            _check(self, other)
            return other
        return Polynomial.const(self.space, other)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.const(self.space, other)
            except TypeError:
                return NotImplemented
        _check(self, other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            prev = terms.get(e)
            if prev is None:
                terms[e] = c
            else:
                s = coefficient(prev + c)
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial._raw(self.space, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.const(self.space, other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = coefficient(c)
        if not c:
            return Polynomial.zero(self.space)
        terms = {}
        for e, v in self.terms.items():
            p = coefficient(v * c)
            if p:
                terms[e] = p
        return Polynomial._raw(self.space, terms)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        _check(self, other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
            swap = True
        else:
            swap = False
        out = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(map(add, e1, e2))
                c = c2 * c1 if swap else c1 * c2
                prev = get(e)
                out[e] = c if prev is None else prev + c
        terms = {}
        for e, c in out.items():
            c = coefficient(c)
            if c:
                terms[e] = c
        return Polynomial._raw(self.space, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.const(self.space, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.space is other.space or self.space == other.space) and self.terms == other.terms
        try:
            return self.terms == Polynomial.const(self.space, other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    # calculus and structure ---------------------------------------------
    def diff(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.space.index(name_or_index)
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                terms[ne] = c if k == 1 else coefficient(c * k)
        return Polynomial._raw(self.space, terms)

    def grade_parts(self, grading: str = "total"):
        """Split into homogeneous parts keyed by degree in ``grading``."""
        w = self.space.weights(grading)
        parts = {}
        for e, c in self.terms.items():
            d = sum(x * y for x, y in zip(e, w))
            parts.setdefault(d, {})[e] = c
        return {d: Polynomial._raw(self.space, t) for d, t in sorted(parts.items())}

    def homogeneous_part(self, degree: int, grading: str = "total"):
        return self.grade_parts(grading).get(degree, Polynomial.zero(self.space))

    def is_homogeneous(self, grading: str = "total") -> bool:
        return len(self.grade_parts(grading)) <= 1

    def map_coefficients(self, f):
        return Polynomial(self.space, {e: f(c) for e, c in self.terms.items()})

    def substitute_unknowns(self, values):
        def sub(c):
            return c.substitute(values) if isinstance(c, AffineExpression) else c

        return self.map_coefficients(sub)

    def coefficient_of(self, exps):
        return self.terms.get(tuple(exps), 0)

    def substitute(self, assignment, target: VariableSpace | None = None):
        """Ring homomorphism sending each variable to a polynomial over ``target``."""
        return substitute(self, assignment, target)

    def embed(self, space: VariableSpace):
        """Re-express over a larger space containing all our variables."""
        idx = [space.index(n) for n in self.space.names]
        n = len(space)
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[idx[i]] = k
            terms[tuple(ne)] = c
        return Polynomial._raw(space, terms)

    def restrict(self, space: VariableSpace):
        """Inverse of :meth:`embed`; fails if a variable outside ``space`` occurs."""
        pos = []
        for i, name in enumerate(self.space.names):
            pos.append(space._index.get(name))
        n = len(space)
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise StructuralError(f"variable {self.space.names[i]!r} not in target space")
                    ne[j] = k
            terms[tuple(ne)] = c
        return Polynomial._raw(space, terms)

    # text -------------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def _monomial_text(names, exps):
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.items():
        mono = _monomial_text(p.space.names, exps)
        if isinstance(c, AffineExpression):
            body = f"({c})"
            sign = "+"
            txt = body + (f"*{mono}" if mono else "")
        elif isinstance(c, GaussianRational):
            # a purely imaginary coefficient carries its own sign
            sign = "-" if c.re == 0 and c.im < 0 else "+"
            cs = format_scalar(-c if sign == "-" else c)
            txt = cs + (f"*{mono}" if mono else "")
        else:
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if mono and a == 1:
                txt = mono
            else:
                txt = format_scalar(a) + (f"*{mono}" if mono else "")
        out.append((sign, txt))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, txt in out[1:]:
        s += f" {sign} {txt}"
    return s


def substitute(p: Polynomial, assignment, target: VariableSpace | None = None) -> Polynomial:
    """Compose ``p`` with ``assignment`` (variable name -> Polynomial over target)."""
    if target is None:
        vals = list(assignment.values())
        if not vals:
            raise StructuralError("empty assignment needs an explicit target space")
        target = vals[0].space
    images = []
    for i, name in enumerate(p.space.names):
        img = assignment.get(name)
        images.append(img)
    used = set()
    for e in p.terms:
        used.update(i for i, k in enumerate(e) if k)
    for i in used:
        if images[i] is None:
            raise StructuralError(f"variable {p.space.names[i]!r} is not assigned")
        if not isinstance(images[i], Polynomial):
            images[i] = Polynomial.const(target, images[i])
        elif images[i].space != target:
            raise StructuralError("assignment images must share one target space")
    powers = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    result = Polynomial.zero(target)
    for e, c in p.terms.items():
        term = Polynomial.const(target, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result
