"""Affine-linear expressions in named unknowns, and exact linear solving."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .scalar import GaussianRational, format_scalar, inverse, is_scalar, scalar


class NonlinearError(ArithmeticError):
    """Product of two expressions that both depend on unknowns."""


def natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


class AffineExpression:
    """constant + sum(coeff * unknown); immutable, zero coefficients never stored."""

    __slots__ = ("constant", "linear")

    def __init__(self, constant=0, linear=None):
        self.constant = scalar(constant)
        lin = {}
        for k, v in (linear or {}).items():
            v = scalar(v)
            if v:
                lin[k] = v
        self.linear = lin

    @classmethod
    def unknown(cls, name: str) -> "AffineExpression":
        return cls(0, {name: 1})

    @classmethod
    def _raw(cls, constant, linear):
        obj = object.__new__(cls)
        obj.constant = constant
        obj.linear = linear
        return obj

    def unknowns(self):
        return set(self.linear)

    def is_constant(self) -> bool:
        return not self.linear

    def __bool__(self):
        return bool(self.constant) or bool(self.linear)

    def __add__(self, other):
        if isinstance(other, AffineExpression):
            lin = dict(self.linear)
            for k, v in other.linear.items():
                s = lin.get(k, 0) + v
                if s:
                    lin[k] = s
                else:
                    lin.pop(k, None)
            return coefficient(AffineExpression._raw(scalar(self.constant + other.constant), lin))
        if is_scalar(other):
            return AffineExpression._raw(scalar(self.constant + other), dict(self.linear))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return AffineExpression._raw(-self.constant, {k: -v for k, v in self.linear.items()})

    def __sub__(self, other):
        if isinstance(other, AffineExpression) or is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AffineExpression):
            if other.is_constant():
                other = other.constant
            elif self.is_constant():
                return other * self.constant
            else:
                raise NonlinearError("product of two non-constant affine expressions")
        if is_scalar(other):
            if not other:
                return 0
            return AffineExpression._raw(
                scalar(self.constant * other), {k: scalar(v * other) for k, v in self.linear.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * inverse(other)

    def __eq__(self, other):
        if isinstance(other, AffineExpression):
            return self.constant == other.constant and self.linear == other.linear
        if is_scalar(other):
            return not self.linear and self.constant == other
        return NotImplemented

    def __hash__(self):
        return hash((self.constant, frozenset(self.linear.items())))

    def substitute(self, values):
        """Replace unknowns by scalars or affine expressions."""
        out = self.constant
        for k, v in self.linear.items():
            out = out + v * (values[k] if k in values else AffineExpression.unknown(k))
        return coefficient(out)

    def __repr__(self):
        return f"AffineExpression({self})"

    def __str__(self):
        parts = []
        for k in sorted(self.linear, key=natural_key):
            c = self.linear[k]
            parts.append(_signed(c, k))
        if self.constant or not parts:
            parts.append(_signed(self.constant, None))
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _signed(c, name):
    if isinstance(c, GaussianRational):
        body = format_scalar(c)
        return f"+{body}" + (f"*{name}" if name else "")
    neg = c < 0
    a = -c if neg else c
    if name is None:
        body = format_scalar(a)
    elif a == 1:
        body = name
    else:
        body = f"{format_scalar(a)}*{name}"
    return ("-" if neg else "+") + body


def coefficient(x):
    """Canonical coefficient: scalar, or AffineExpression only if it has unknowns."""
    if isinstance(x, AffineExpression):
        return x.constant if not x.linear else x
    return scalar(x)


@dataclass
class LinearSystem:
    """Equations ``expr == 0``."""

    equations: list = field(default_factory=list)

    def add(self, expr):
        expr = coefficient(expr)
        if isinstance(expr, AffineExpression) or expr:
            self.equations.append(expr if isinstance(expr, AffineExpression) else AffineExpression(expr))

    def extend(self, exprs):
        for e in exprs:
            self.add(e)

    def unknowns(self):
        out = set()
        for e in self.equations:
            out |= e.unknowns()
        return out

    def __len__(self):
        return len(self.equations)

    def substitute(self, values) -> "LinearSystem":
        sys = LinearSystem()
        sys.extend(e.substitute(values) for e in self.equations)
        return sys

    def residuals(self, values):
        return [coefficient(e.substitute(values)) for e in self.equations]


@dataclass
class Inconsistent:
    equations: list

    def __bool__(self):
        return False


@dataclass
class Solution:
    assignments: dict
    free: list

    def __bool__(self):
        return True

    def values(self, free_values=None):
        """Concrete assignment; free unknowns default to zero."""
        fv = {k: 0 for k in self.free}
        fv.update(free_values or {})
        out = dict(fv)
        for k, e in self.assignments.items():
            out[k] = coefficient(e.substitute(fv) if isinstance(e, AffineExpression) else e)
        return out


def _row_of(expr):
    if isinstance(expr, AffineExpression):
        return dict(expr.linear), expr.constant
    return {}, scalar(expr)


def _normalise(row, const):
    """Clear denominators and divide by content when all entries are rational."""
    vals = list(row.values()) + [const]
    if any(isinstance(v, GaussianRational) for v in vals):
        return row, const
    den = 1
    for v in vals:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    if den != 1:
        row = {k: scalar(v * den) for k, v in row.items()}
        const = scalar(const * den)
    g = 0
    for v in list(row.values()) + [const]:
        g = gcd(g, int(v))
    if g > 1:
        row = {k: v // g for k, v in row.items()}
        const = const // g
    return row, const


def solve_linear(system, order=None):
    """Exact fraction-free Gauss-Jordan elimination.

    Pivot equation: fewest unknowns, ties broken by equation index.  Pivot
    unknown within it: first in ``order`` (default natural name order).
    Returns :class:`Solution` or :class:`Inconsistent`.
    """
    eqs = system.equations if isinstance(system, LinearSystem) else list(system)
    rank = {}
    if order is not None:
        rank = {u: i for i, u in enumerate(order)}

    def ukey(u):
        return (rank.get(u, len(rank)), natural_key(u))

    rows = {}
    for i, e in enumerate(eqs):
        r, c = _normalise(*_row_of(e))
        rows[i] = (r, c)
    occurs = {}
    for i, (r, _) in rows.items():
        for u in r:
            occurs.setdefault(u, set()).add(i)

    pivots = {}
    active = set(rows)
    bad = []
    while active:
        i = min(active, key=lambda j: (len(rows[j][0]), j))
        active.discard(i)
        r, c = rows[i]
        if not r:
            if c:
                bad.append(eqs[i])
            continue
        u = min(r, key=ukey)
        p = r[u]
        for j in list(occurs.get(u, ())):
            if j == i:
                continue
            rj, cj = rows[j]
            q = rj[u]
            new = {}
            for k, v in rj.items():
                new[k] = scalar(v * p)
            for k, v in r.items():
                s = new.get(k, 0) - q * v
                s = scalar(s)
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            newc = scalar(cj * p - q * c)
            for k in rj:
                if k not in new:
                    occurs[k].discard(j)
            for k in new:
                occurs.setdefault(k, set()).add(j)
            rows[j] = _normalise(new, newc)
        pivots[u] = i
    if bad:
        return Inconsistent(bad)
    assignments = {}
    pivot_set = set(pivots)
    free = set()
    for u, i in pivots.items():
        r, c = rows[i]
        p = r[u]
        inv = inverse(p)
        lin = {}
        for k, v in r.items():
            if k == u:
                continue
            free.add(k)
            lin[k] = scalar(-v * inv)
        assignments[u] = coefficient(AffineExpression._raw(scalar(-c * inv), lin))
    free -= pivot_set
    for e in eqs:
        if isinstance(e, AffineExpression):
            free |= e.unknowns() - pivot_set
    ordered = {u: assignments[u] for u in sorted(assignments, key=natural_key)}
    return Solution(ordered, sorted(free, key=natural_key))
