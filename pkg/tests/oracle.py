"""Independent reference computations for the tests, written with sympy.

Nothing here calls into the package's arithmetic: values are converted to
sympy once and every identity is re-derived from textbook formulas.
"""
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product

import sympy as sp

from poissonext.exactring import GaussianRational


def to_sympy_scalar(c):
    if isinstance(c, GaussianRational):
        return sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
    if isinstance(c, Fraction):
        return sp.Rational(c.numerator, c.denominator)
    return sp.Integer(c)


def symbols_for(space):
    return sp.symbols(list(space.names))


def to_sympy(p, syms=None):
    """Polynomial -> sympy expression."""
    syms = syms or symbols_for(p.space)
    out = sp.Integer(0)
    for e, c in p.terms.items():
        mono = sp.Integer(1)
        for s, k in zip(syms, e):
            if k:
                mono *= s**k
        out += to_sympy_scalar(c) * mono
    return sp.expand(out)


def mv_to_sympy(x, syms=None):
    """Multivector -> {sorted index tuple: sympy expr}."""
    syms = syms or symbols_for(x.space)
    return {k: to_sympy(c, syms) for k, c in x.terms.items()}


def clean(d):
    out = {}
    for k, v in d.items():
        v = sp.expand(v)
        if v != 0:
            out[k] = v
    return out


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` by brute-force inversion count."""
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def wedge(a, b):
    """Wedge of {index tuple: expr} dicts (each tuple sorted)."""
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            if set(ka) & set(kb):
                continue
            seq = ka + kb
            key = tuple(sorted(seq))
            out[key] = out.get(key, 0) + perm_sign(seq) * ca * cb
    return clean(out)


def add(*ds):
    out = {}
    for d in ds:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return clean(out)


def scale(d, c):
    return clean({k: c * v for k, v in d.items()})


def lie_bracket(X, Y, syms):
    """[X, Y] of vector fields given as {i: expr}: X(Y) - Y(X)."""
    out = {}
    for k in set(X) | set(Y):
        val = sum(X[i] * sp.diff(Y.get(k, 0), syms[i]) for i in X) - sum(Y[i] * sp.diff(X.get(k, 0), syms[i]) for i in Y)
        out[k] = val
    return {k: v for k, v in ((k, sp.expand(v)) for k, v in out.items()) if v != 0}


def _factors(key, coeff):
    """f d_{i1}^...^d_{ik} as a wedge of vector fields (f on the first)."""
    return [{key[0]: coeff}] + [{i: sp.Integer(1)} for i in key[1:]]


def _vf_as_mv(X):
    return {(i,): c for i, c in X.items()}


def _wedge_all(fields):
    out = {(): sp.Integer(1)}
    for X in fields:
        out = wedge(out, _vf_as_mv(X))
    return out


def schouten_decomposable(A, B, syms):
    """Schouten bracket of multivectors of degree >= 1 via

        [X1^..^Xp, Y1^..^Yq] = sum (-1)^(i+j) [Xi, Yj] ^ X1..^Xi..^Xp ^ Y1..^Yj..^Yq

    applied term by term (bilinearity).
    """
    out = {}
    for ka, ca in A.items():
        Xs = _factors(ka, ca)
        for kb, cb in B.items():
            Ys = _factors(kb, cb)
            for i, X in enumerate(Xs):
                for j, Y in enumerate(Ys):
                    br = lie_bracket(X, Y, syms)
                    if not br:
                        continue
                    rest = _wedge_all(Xs[:i] + Xs[i + 1 :] + Ys[:j] + Ys[j + 1 :])
                    term = scale(wedge(_vf_as_mv(br), rest), (-1) ** (i + j))
                    out = add(out, term)
    return out


def poisson_bracket(pi, f, g, syms):
    """{f, g} = sum pi^{ij} f_i g_j for pi given as {(i, j): expr}, i < j."""
    out = sp.Integer(0)
    for (i, j), c in pi.items():
        out += c * (sp.diff(f, syms[i]) * sp.diff(g, syms[j]) - sp.diff(f, syms[j]) * sp.diff(g, syms[i]))
    return sp.expand(out)


def trivector_on(J, f, g, h, syms):
    """J(df, dg, dh) = sum_{i<j<k} J^{ijk} det[grad f, grad g, grad h]_{ijk}."""
    out = sp.Integer(0)
    for (i, j, k), c in J.items():
        m = sp.Matrix([[sp.diff(u, syms[a]) for a in (i, j, k)] for u in (f, g, h)])
        out += c * m.det()
    return sp.expand(out)


def naive_product(p, q):
    """Term-by-term product of {exps: coeff} dicts, O(n*m)."""
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def brute_resonant(eigs, k, max_degree):
    """All exponent vectors of degree 2..max_degree with sum(e_i l_i) = l_k."""
    m = len(eigs)
    out = set()
    for e in product(range(max_degree + 1), repeat=m):
        if 2 <= sum(e) <= max_degree and sum(a * b for a, b in zip(e, eigs)) == eigs[k]:
            out.add(e)
    return out


def invariant_monomials(n, degree):
    """Exponent vectors (a, b, c, d) of z^a zb^b w^c wb^d with a - b + c - d = 0 mod n."""
    out = []
    for e in product(range(degree + 1), repeat=4):
        if sum(e) == degree and (e[0] - e[1] + e[2] - e[3]) % n == 0:
            out.append(e)
    return out


def sl2_weights_tensor(n, kind):
    """Weight multiset of V_n (x) V_n or V_n ^ V_n by counting index pairs."""
    ws = [n - 2 * k for k in range(n + 1)]
    if kind == "tensor":
        return [a + b for a in ws for b in ws]
    return [ws[i] + ws[j] for i in range(n + 1) for j in range(i + 1, n + 1)]


def peel(weights):
    """Decompose a weight multiset by repeatedly removing the highest string."""
    from collections import Counter

    w = Counter(weights)
    out = Counter()
    while any(v > 0 for v in w.values()):
        top = max(k for k, v in w.items() if v > 0)
        out[top] += 1
        for j in range(-top, top + 1, 2):
            w[j] -= 1
    return out


def sorting_sign_by_permutations(seq):
    """Sign via an explicit search over permutations (small inputs only)."""
    target = tuple(sorted(seq))
    for perm in permutations(range(len(seq))):
        if tuple(seq[i] for i in perm) == target:
            return perm_sign(list(perm))
    raise AssertionError("unreachable")


__all__ = [
    "add",
    "brute_resonant",
    "combinations_with_replacement",
    "invariant_monomials",
    "lie_bracket",
    "mv_to_sympy",
    "naive_product",
    "peel",
    "poisson_bracket",
    "schouten_decomposable",
    "sl2_weights_tensor",
    "symbols_for",
    "to_sympy",
    "trivector_on",
    "wedge",
]
