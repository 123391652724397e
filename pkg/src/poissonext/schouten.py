"""Schouten-Nijenhuis bracket and the checks built on it.

Local formula (super Poisson bracket, right derivatives in the odd variables):

    [A, B] = sum_i  dA/dxi_i ^ dB/dx_i  -  (-1)^((a-1)(b-1)) dB/dxi_i ^ dA/dx_i

For bivectors this gives [pi, pi] = 2 sum_i dpi/dxi_i ^ dpi/dx_i; for vector
fields it is the Lie bracket X(Y) - Y(X).
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .exactring import Polynomial, StructuralError
from .exactring.affine import coefficient
from .multivec import (
    Multivector,
    curl,
    evaluate,
    grad3,
    merge,
    star,
    vector_components,
)

# flat kernel -------------------------------------------------------------
# Exponent vectors are packed into one Python int (fixed-width bit fields), so a
# monomial product is a single integer addition.


def _bits_for(max_exp):
    return max(8, int(max_exp).bit_length() + 1)


def _max_exponent(mv):
    m = 0
    for c in mv.terms.values():
        for e in c.terms:
            if e:
                m = max(m, max(e))
    return m


def _pack(e, bits):
    p = 0
    for k in reversed(e):
        p = (p << bits) | k
    return p


def _unpack(p, n, bits):
    mask = (1 << bits) - 1
    out = []
    for _ in range(n):
        out.append(p & mask)
        p >>= bits
    return tuple(out)


def _odd_parts(mv):
    """var -> list of (rest_key, packed, signed coeff) for the right derivative."""
    d = mv.degree
    out = {}
    for key, poly in mv._flat:
        for pos, i in enumerate(key, start=1):
            rest = key[: pos - 1] + key[pos:]
            neg = (d - pos) % 2 == 1
            lst = out.setdefault(i, [])
            for p, c in poly:
                lst.append((rest, p, -c if neg else c))
    return out


def _even_parts(mv, bits):
    """var -> list of (key, packed, coeff) for the coefficient derivative."""
    n = len(mv.space)
    mask = (1 << bits) - 1
    out = {}
    for key, poly in mv._flat:
        for p, c in poly:
            q = p
            for i in range(n):
                k = q & mask
                q >>= bits
                if k:
                    out.setdefault(i, []).append((key, p - (1 << (bits * i)), c * k if k != 1 else c))
                if not q:
                    break
    return out


class _Flat:
    __slots__ = ("space", "degree", "_flat")

    def __init__(self, mv, bits):
        self.space = mv.space
        self.degree = mv.degree
        self._flat = [(k, [(_pack(e, bits), c) for e, c in poly.terms.items()]) for k, poly in mv.terms.items()]


def _pair_products(odd, even, variables, sign, acc):
    for i in variables:
        left = odd.get(i)
        right = even.get(i)
        if not left or not right:
            continue
        for k1, p1, c1 in left:
            for k2, p2, c2 in right:
                key, s = merge(k1, k2)
                if key is None:
                    continue
                c = c1 * c2
                if s * sign < 0:
                    c = -c
                slot = acc.get(key)
                if slot is None:
                    acc[key] = {p1 + p2: c}
                else:
                    p = p1 + p2
                    prev = slot.get(p)
                    slot[p] = c if prev is None else prev + c
    return acc


def _work(args):
    odd_a, even_b, odd_b, even_a, variables, sign2, same = args
    acc = {}
    _pair_products(odd_a, even_b, variables, 1, acc)
    if not same:
        _pair_products(odd_b, even_a, variables, sign2, acc)
    return acc


def _merge_into(total, part):
    for key, slot in part.items():
        tslot = total.get(key)
        if tslot is None:
            total[key] = slot
            continue
        for p, c in slot.items():
            prev = tslot.get(p)
            tslot[p] = c if prev is None else prev + c


def default_jobs():
    env = os.environ.get("POISSONEXT_JOBS")
    return int(env) if env else 1


def schouten_bracket(a: Multivector, b: Multivector, jobs: int | None = None) -> Multivector:
    """Schouten-Nijenhuis bracket of two multivector fields.

    ``jobs > 1`` splits the sum over variables across worker processes; the
    merge is exact, so the result does not depend on the worker count.
    """
    a._same(b)
    space = a.space
    n = len(space)
    deg = a.degree + b.degree - 1
    if deg < 0 or not a.terms or not b.terms:
        return Multivector.zero(space, max(deg, 0))
    bits = _bits_for(_max_exponent(a) + _max_exponent(b))
    same = a is b or a == b
    fa = _Flat(a, bits)
    fb = fa if same else _Flat(b, bits)
    odd_a = _odd_parts(fa)
    even_b = _even_parts(fb, bits)
    if same:
        odd_b, even_a = odd_a, even_b
    else:
        odd_b = _odd_parts(fb)
        even_a = _even_parts(fa, bits)
    # second sum carries -(-1)^((a-1)(b-1))
    sign2 = -1 if ((a.degree - 1) * (b.degree - 1)) % 2 == 0 else 1
    if same and sign2 < 0:
        # the two sums cancel identically
        return Multivector.zero(space, deg)
    variables = list(range(n))
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and n > 1:
        chunks = [variables[i::jobs] for i in range(jobs)]
        tasks = [(odd_a, even_b, odd_b, even_a, ch, sign2, same) for ch in chunks if ch]
        total = {}
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_work, tasks):
                _merge_into(total, part)
    else:
        total = _work((odd_a, even_b, odd_b, even_a, variables, sign2, same))
    terms = {}
    for key, slot in total.items():
        pterms = {}
        for p, c in slot.items():
            if same:
                c = c * 2
            c = coefficient(c)
            if c:
                pterms[_unpack(p, n, bits)] = c
        if pterms:
            terms[key] = Polynomial._raw(space, pterms)
    return Multivector._raw(space, deg, terms)


def jacobiator(pi: Multivector, jobs: int | None = None) -> Multivector:
    """[pi, pi]; zero exactly when pi is a Poisson bivector."""
    if pi.degree != 2:
        raise StructuralError("jacobiator needs a bivector")
    return schouten_bracket(pi, pi, jobs=jobs)


def is_poisson(pi: Multivector, jobs: int | None = None) -> bool:
    return jacobiator(pi, jobs=jobs).is_zero()


def bracket(pi: Multivector, f, g) -> Polynomial:
    """{f, g}_pi = pi(df, dg)."""
    return evaluate(pi, [f, g])


# graded pieces ------------------------------------------------------------

def degree_components(pi: Multivector, grading: str = "total"):
    return pi.grade_parts(grading)


def graded_cascade(pi: Multivector, kmax: int | None = None, jobs: int | None = None):
    """[sum_{i+j=k+1} [pi^i, pi^j] for k = 1..kmax], pi^i the degree-i part."""
    if pi.degree != 2:
        raise StructuralError("cascade needs a bivector")
    parts = pi.grade_parts("total")
    if 0 in parts:
        raise StructuralError("bivector has a constant part; cascade needs pi^0 = 0")
    top = max(parts) if parts else 1
    if kmax is None:
        kmax = 2 * top - 1
    out = []
    for k in range(1, kmax + 1):
        acc = Multivector.zero(pi.space, 3)
        for i in sorted(parts):
            j = k + 1 - i
            if j < i or j not in parts:
                continue
            term = schouten_bracket(parts[i], parts[j], jobs=jobs)
            acc = acc + (term if i == j else term.scale(2))
        out.append(acc)
    return out


def w_decompose(x: Multivector, grading: str = "W"):
    """Split by W-degree: coefficient W-degree minus the W-weights of the skew factors."""
    w = x.space.weights(grading)
    return x.grade_parts(grading, skew_weights=[-k for k in w])


# three-variable formulas -----------------------------------------------------

def dot(u, v):
    return sum((p * q for p, q in zip(u, v)), Polynomial.zero(u[0].space))


def bivector_bracket_3d(a: Multivector, b: Multivector) -> Multivector:
    """A . Curl(B) + Curl(A) . B as a trivector (bivectors read through star).

    With the sign convention of ``schouten_bracket`` this is -[A, B].
    """
    va = vector_components(a)
    vb = vector_components(b)
    ca = vector_components(curl(a))
    cb = vector_components(curl(b))
    f = dot(va, cb) + dot(ca, vb)
    return Multivector(a.space, 3, {(0, 1, 2): f})


def _one_form(space, alpha):
    if isinstance(alpha, Multivector):
        return vector_components(alpha)
    comps = []
    for c in alpha:
        comps.append(c if isinstance(c, Polynomial) else Polynomial.const(space, c))
    if len(comps) != 3:
        raise StructuralError("a one-form on three variables has three components")
    return tuple(comps)


@dataclass
class CriterionResult:
    holds: bool
    criterion_value: Polynomial
    jacobiator: Multivector
    bivector: Multivector

    @property
    def agree(self):
        return self.holds == self.criterion_value.is_zero()


def phi_bivector(phi: Polynomial) -> Multivector:
    """grad3(star(phi)): the Poisson bivector with Casimir phi."""
    return grad3(star(Multivector.function(phi)))


def c3_extension_criterion(phi: Polynomial, alpha) -> CriterionResult:
    """Test whether pi + phi*star(alpha) is Poisson, pi = grad3(star(phi)).

    The criterion is the 3-form (d phi + phi alpha) ^ d alpha, returned as the
    coefficient of du^dv^dw.  Its vanishing is compared with the direct
    jacobiator.
    """
    space = phi.space
    if len(space) != 3:
        raise StructuralError("the criterion lives on three variables")
    a = _one_form(space, alpha)
    alpha_vec = Multivector(space, 1, {(i,): c for i, c in enumerate(a)})
    pi = phi_bivector(phi) + star(alpha_vec).scale(phi)
    dphi = [phi.diff(i) for i in range(3)]
    # d(alpha) as a vector through star: curl of the 1-form
    u, v, w = 0, 1, 2
    da = (
        a[w].diff(v) - a[v].diff(w),
        a[u].diff(w) - a[w].diff(u),
        a[v].diff(u) - a[u].diff(v),
    )
    theta = [dphi[i] + phi * a[i] for i in range(3)]
    value = dot(theta, da)
    jac = jacobiator(pi)
    return CriterionResult(jac.is_zero(), value, jac, pi)
