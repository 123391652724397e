"""Degree-by-degree Poisson extension of the quotient bracket of V/Z_n."""
from __future__ import annotations

from dataclasses import dataclass, field

from .exactring import AffineExpression, LinearSystem, Polynomial, StructuralError, VariableSpace, inverse, solve_linear
from .exactring.affine import coefficient, natural_key
from .exactring.polynomial import grlex_key
from .invariants import QuotientPresentation, ideal_generators, lie_poisson_bracket_of, target_space
from .multivec import Multivector, normalize
from .schouten import schouten_bracket


def build_beta1(n: int, space: VariableSpace | None = None) -> Multivector:
    """Lie-Poisson bivector of the cotangent Lie algebra (pulled back and rewritten)."""
    T = target_space(n)
    table = lie_poisson_bracket_of(n, T)
    terms = {}
    for (u, v), c in table.items():
        if u[0] == "x" and v[0] == "y":
            continue  # carried by the nonlinear summand
        terms[(T.index(u), T.index(v))] = c
    b = Multivector(T, 2, terms)
    return b if space is None else b.embed(space)


def beta_top_entry(n: int, i: int, j: int, T: VariableSpace) -> Polynomial:
    """beta^{n-1}(dx_i, dy_j)."""
    a0, a1, a2, a3 = (T.var(f"a{k}") for k in range(4))

    def pw(p, k):
        return p ** k if k >= 0 else Polynomial.zero(T)

    if i >= j:
        return (pw(a0, j) * pw(a1, n - i - 1)).scale((n - i) * (n - j)) * pw(a3, i - j) + (
            pw(a0, j - 1) * pw(a1, n - i)
        ).scale(i * j) * pw(a3, i - j)
    return (pw(a0, i) * pw(a1, n - j - 1)).scale((n - i) * (n - j)) * pw(a2, j - i) + (
        pw(a0, i - 1) * pw(a1, n - j)
    ).scale(i * j) * pw(a2, j - i)


def reduce_mod_c(p: Polynomial) -> Polynomial:
    """Normal form modulo C = a0*a1 - a2*a3: trade every a0*a1 for a2*a3."""
    S = p.space
    i0, i1, i2, i3 = (S.index(f"a{k}") for k in range(4))
    terms = {}
    for e, c in p.terms.items():
        m = min(e[i0], e[i1])
        if m:
            e = list(e)
            e[i0] -= m
            e[i1] -= m
            e[i2] += m
            e[i3] += m
            e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return Polynomial(S, terms)


def build_beta_top(n: int, space: VariableSpace | None = None, reduce: bool = True) -> Multivector:
    """beta^{n-1}; with ``reduce`` the coefficients are put in normal form mod C."""
    T = target_space(n)
    terms = {}
    for i in range(n + 1):
        for j in range(n + 1):
            c = beta_top_entry(n, i, j, T)
            terms[(T.index(f"x{i}"), T.index(f"y{j}"))] = reduce_mod_c(c) if reduce else c
    b = Multivector(T, 2, terms)
    return b if space is None else b.embed(space)


def build_beta(n: int, space: VariableSpace | None = None, reduce: bool = True) -> Multivector:
    """beta = beta^1 + beta^{n-1} (for n = 2 both summands are linear)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return build_beta1(n, space) + build_beta_top(n, space, reduce)


# the 78-variable embedding space ---------------------------------------------

Z_BLOCKS = ("aa", "ax", "ay", "xx", "yy", "xy")


def z_name(u: str, v: str) -> str:
    """Coordinate of g^g dual to u^v: a2^x1 -> ax21."""
    return u[0] + v[0] + u[1:] + v[1:]


def z_pairs(n: int):
    """Ordered pairs (u, v), u before v in the target order, grouped by block."""
    names = list(target_space(n).names)
    pairs = [(names[i], names[j]) for i in range(len(names)) for j in range(i + 1, len(names))]
    rank = {b: k for k, b in enumerate(Z_BLOCKS)}
    return sorted(pairs, key=lambda p: rank[p[0][0] + p[1][0]])


def big_space(n: int) -> VariableSpace:
    """Target variables followed by one coordinate per basis element of g^g."""
    T = target_space(n)
    pairs = z_pairs(n)
    names = list(T.names) + [z_name(u, v) for u, v in pairs]
    grads = {}
    for g in ("t", "H", "W"):
        w = dict(zip(T.names, T.weights(g)))
        for u, v in pairs:
            w[z_name(u, v)] = w[u] + w[v]
        grads[g] = w
    return VariableSpace(names, grads)


def _linear_wedge(p: Polynomial, q: Polynomial, pair_index) -> Polynomial:
    """p^q for linear forms p, q in the g-coordinates, written in Z-coordinates."""
    S = p.space
    out = {}
    zero = (0,) * len(S)
    for e1, c1 in p.terms.items():
        i = e1.index(1)
        for e2, c2 in q.terms.items():
            j = e2.index(1)
            if i == j:
                continue
            z, sign = pair_index[(i, j)] if i < j else pair_index[(j, i)]
            if i > j:
                sign = -sign
            e = list(zero)
            e[z] = 1
            e = tuple(e)
            out[e] = out.get(e, 0) + sign * c1 * c2
    return Polynomial(S, out)


def _pair_index(n, S):
    return {(S.index(u), S.index(v)): (S.index(z_name(u, v)), 1) for u, v in z_pairs(n)}


def build_alpha_rho(n: int, space: VariableSpace | None = None) -> Multivector:
    """Coadjoint-type action of g on Z = g^g:  {u, p^q} = {u,p}^q + p^{u,q}."""
    S = space or big_space(n)
    b1 = build_beta1(n, S)
    T = target_space(n)
    pidx = _pair_index(n, S)
    g = list(T.names)

    def br(u, v):
        return b1.coeff(u, v)

    terms = {}
    for u in g:
        for p, q in z_pairs(n):
            c = _linear_wedge(br(u, p), S.var(q), pidx) + _linear_wedge(S.var(p), br(u, q), pidx)
            if c:
                terms[(S.index(u), S.index(z_name(p, q)))] = c
    return Multivector(S, 2, terms)


def _as_coefficient(c):
    if isinstance(c, str):
        return AffineExpression.unknown(c)
    return c


def build_alpha_c(n: int, scalars, space: VariableSpace | None = None) -> Multivector:
    """Block-scalar identity cocycle: (du, dv) -> lambda_block * (uv).

    ``scalars`` maps every block name of ``Z_BLOCKS`` to a scalar, or to an
    unknown name (template mode).
    """
    S = space or big_space(n)
    missing = [b for b in Z_BLOCKS if b not in scalars]
    if missing:
        raise StructuralError(f"no cocycle scalar for block(s) {', '.join(missing)}")
    terms = {}
    for u, v in z_pairs(n):
        lam = _as_coefficient(scalars[u[0] + v[0]])
        if not isinstance(lam, AffineExpression) and not lam:
            continue
        z = S.var(z_name(u, v))
        terms[(S.index(u), S.index(v))] = z.map_coefficients(lambda c, lam=lam: lam * c)
    return Multivector(S, 2, terms)


def build_alpha1(n: int, cocycle_scalars, space: VariableSpace | None = None) -> Multivector:
    """alpha^1 = alpha^1_rho + alpha^1_c."""
    S = space or big_space(n)
    return build_alpha_rho(n, S) + build_alpha_c(n, cocycle_scalars, S)


# scalars of the first-order cocycle: zero on the blocks involving gl2, one scalar
# each on xx, xy, yy (any values satisfy the degree-1 conditions)
DEFAULT_COCYCLE = {"aa": 0, "ax": 0, "ay": 0, "xx": 1, "xy": 1, "yy": 1}


# the quadratic template ----------------------------------------------------------

def quadratic_generators(n: int, space: VariableSpace | None = None):
    """Quadratic ideal generators with the labels of the t/H-degree table.

    A_l, Abar_l as in the ideal family; the B's are relabelled from 0, so that
    B_l here is B_{l+1} of the family listing (same for Bbar).
    """
    T = target_space(n)
    fam = ideal_generators(n, T)
    out = {"C": fam["C"][0][1]}
    for kind in ("A", "Abar"):
        for label, p in fam[kind]:
            out[label] = p
    for kind in ("B", "Bbar"):
        for label, p in fam[kind]:
            k = int(label[len(kind):])
            out[f"{kind}{k - 1}"] = p
    if space is not None:
        out = {k: p.embed(space) for k, p in out.items()}
    return out


# (first-variable kind, Z block, coefficient span): Span{A_l, B_l} or Span{Abar_l, Bbar_l}
TEMPLATE_RULES = (("x", "yy", "A"), ("x", "xy", "Abar"), ("y", "xx", "Abar"), ("y", "xy", "A"))


def alpha2_template(n: int, space: VariableSpace | None = None, rules=TEMPLATE_RULES, diagonal: bool = True):
    """alpha^2 with unknown coefficients, after the H-grading and support reductions.

    * alpha^2(dx_k, dy_k) = l_k * C; alpha^2(dx_i, dx_j) = alpha^2(dy_i, dy_j) = 0;
    * alpha^2(du, dZ) for the (kind, block) pairs of ``rules`` is a combination
      of the A/B (or Abar/Bbar) generators of matching H-degree;
    * every entry with an sl2 or Z coordinate on both sides vanishes.

    Unknowns are numbered K1, K2, ... in the order: first variable x0..xn,
    y0..yn; Z coordinate in space order; A before B.
    Returns (template, list of unknown names).
    """
    S = space or big_space(n)
    gens = quadratic_generators(n, S)
    H = dict(zip(S.names, S.weights("H")))
    hdeg = {k: p.degree("H") for k, p in gens.items()}
    terms = {}
    unknowns = []
    if diagonal:
        for k in range(n + 1):
            name = f"l{k}"
            unknowns.append(name)
            terms[(S.index(f"x{k}"), S.index(f"y{k}"))] = gens["C"].map_coefficients(
                lambda c, u=AffineExpression.unknown(name): u * c
            )
    counter = 0
    firsts = [f"x{k}" for k in range(n + 1)] + [f"y{k}" for k in range(n + 1)]
    znames = S.names[len(target_space(n)) :]
    for u in firsts:
        for z in znames:
            fam = [r[2] for r in rules if r[0] == u[0] and r[1] == z[:2]]
            if not fam:
                continue
            want = H[u] + H[z]
            span = fam[0]
            bspan = "B" if span == "A" else "Bbar"
            labels = [f"{span}{l}" for l in range(n + 1) if hdeg[f"{span}{l}"] == want]
            labels += [f"{bspan}{l}" for l in range(n - 1) if hdeg[f"{bspan}{l}"] == want]
            if not labels:
                continue
            coeff = Polynomial.zero(S)
            for lab in labels:
                counter += 1
                name = f"K{counter}"
                unknowns.append(name)
                coeff = coeff + gens[lab].map_coefficients(lambda c, u=AffineExpression.unknown(name): u * c)
            key, sign = (S.index(u), S.index(z)), 1
            terms[key] = coeff
    return Multivector(S, 2, terms), unknowns


def template_layout(n: int, space: VariableSpace | None = None, rules=TEMPLATE_RULES):
    """Readable layout of the template: [(u, z, [(unknown, generator label), ...])]."""
    S = space or big_space(n)
    tmpl, _ = alpha2_template(n, S, rules)
    gens = quadratic_generators(n, S)
    out = []
    for key, poly in tmpl.items():
        u, z = (S.names[i] for i in key)
        by_unknown = {}
        for e, c in poly.terms.items():
            for name, v in c.linear.items():
                by_unknown.setdefault(name, {})[e] = v
        entry = []
        for name in sorted(by_unknown, key=natural_key):
            p = Polynomial(S, by_unknown[name])
            label = next(k for k, g in gens.items() if g == p)
            entry.append((name, label))
        out.append((u, z, entry))
    return out


# equation extraction -------------------------------------------------------------

def _triple_key(space, triple):
    idx = [space.index(v) for v in triple]
    key, sign = normalize(idx)
    if key is None:
        raise StructuralError(f"repeated variable in triple {triple}")
    return key, sign


def triples_of(x: Multivector):
    """Support of a trivector as name triples, in canonical order."""
    return [tuple(x.space.names[i] for i in k) for k, _ in x.items()]


def extract_equations(pi1: Multivector, pi2: Multivector, triples=None, bracket=None) -> LinearSystem:
    """Coefficient equations of [pi1, pi2] contracted with coordinate triples.

    ``triples=None`` takes the whole support.  ``bracket`` may carry a
    precomputed [pi1, pi2].
    """
    br = schouten_bracket(pi1, pi2) if bracket is None else bracket
    S = br.space
    keys = [k for k, _ in br.items()] if triples is None else [_triple_key(S, t)[0] for t in triples]
    system = LinearSystem()
    for key in keys:
        poly = br.terms.get(key)
        if poly is None:
            continue
        for _, c in poly.items():
            system.add(c)
    return system


def parametric_equations(pi1_parts, pi2: Multivector, triples):
    """Equations whose coefficients are bilinear in parameters and unknowns.

    ``pi1_parts`` maps a parameter name (or 1 for the fixed part) to the
    matching summand of pi^1.  Each equation is returned as a dict
    parameter -> AffineExpression; the equation reads sum(param * expr) = 0.
    """
    S = pi2.space
    brackets = {p: schouten_bracket(part, pi2) for p, part in pi1_parts.items()}
    out = []
    for t in triples:
        key, _ = _triple_key(S, t)
        monos = {}
        for p, br in brackets.items():
            poly = br.terms.get(key)
            if poly is None:
                continue
            for e, c in poly.terms.items():
                monos.setdefault(e, {})[p] = c
        for e in sorted(monos, key=grlex_key):
            out.append((t, e, monos[e]))
    return out


# waves and the end-to-end problem --------------------------------------------------

def _dedupe(system: LinearSystem) -> LinearSystem:
    """Drop repeated equations (equal up to a nonzero rational factor)."""
    seen = set()
    out = LinearSystem()
    for e in system.equations:
        if not isinstance(e, AffineExpression):
            out.add(e)
            continue
        items = sorted(e.linear.items(), key=lambda kv: natural_key(kv[0]))
        lead = inverse(items[0][1] if items else e.constant)
        key = (tuple((k, v * lead) for k, v in items), e.constant * lead)
        if key not in seen:
            seen.add(key)
            out.add(e)
    return out


def compose(assign: dict, sol) -> dict:
    """Fold a later solution into earlier pivot expressions."""
    out = {}
    for u, e in assign.items():
        out[u] = e.substitute(sol.assignments) if isinstance(e, AffineExpression) else e
    out.update(sol.assignments)
    return out


@dataclass
class WaveResult:
    name: str
    triples: int
    equations: int
    consistent: bool
    eliminated: list
    inconsistent: list = field(default_factory=list)


@dataclass
class ExtensionProblem:
    """Everything the degree-2 solve needs, for V/Z_n embedded in (g x g^g)^*."""

    n: int
    quotient: QuotientPresentation
    space: VariableSpace
    beta: Multivector
    alpha1: Multivector
    alpha2_template: Multivector
    unknowns: list

    @classmethod
    def build(cls, n: int = 3, cocycle=None, rules=TEMPLATE_RULES):
        S = big_space(n)
        q = QuotientPresentation.build(n)
        beta = build_beta(n, S)
        alpha1 = build_alpha1(n, cocycle or DEFAULT_COCYCLE, S)
        tmpl, unknowns = alpha2_template(n, S, rules)
        return cls(n, q, S, beta, alpha1, tmpl, unknowns)

    @property
    def beta1(self):
        return self.beta.homogeneous_part(1)

    @property
    def pi1(self):
        return self.beta1 + self.alpha1

    @property
    def pi2(self):
        return self.beta.homogeneous_part(2) + self.alpha2_template

    def g_names(self):
        return set(self.quotient.target.names)

    def waves(self, bracket=None):
        """Triples of the three waves: support of [beta, beta]; other g-triples; the rest."""
        from .schouten import jacobiator

        br = bracket if bracket is not None else schouten_bracket(self.pi1, self.pi2)
        first = triples_of(jacobiator(self.beta))
        g = self.g_names()
        support = triples_of(br)
        done = set(first)
        second = [t for t in support if set(t) <= g and t not in done]
        third = [t for t in support if not set(t) <= g]
        return [("support", first), ("g-triples", second), ("mixed", third)]

    def solve(self, waves: int = 3, progress=None, triples=None):
        """Extract and solve wave by wave; stops at the first inconsistent wave.

        ``triples`` replaces the waves by a single custom one.
        Returns (assignment, free unknowns, [WaveResult]).
        """
        br = schouten_bracket(self.pi1, self.pi2)
        assign = {}
        results = []
        plan = self.waves(br)[:waves] if triples is None else [("custom", list(triples))]
        for name, triples in plan:
            system = extract_equations(self.pi1, self.pi2, triples, bracket=br)
            if assign:
                system = system.substitute(assign)
            system = _dedupe(system)
            sol = solve_linear(system)
            if not sol:
                results.append(WaveResult(name, len(triples), len(system), False, [], list(sol.equations)))
                if progress:
                    progress(results[-1])
                break
            assign = compose(assign, sol)
            results.append(WaveResult(name, len(triples), len(system), True, list(sol.assignments)))
            if progress:
                progress(results[-1])
        solved = set(assign)
        free = [u for u in self.unknowns if u not in solved]
        return assign, free, results

    def instantiate(self, assign, free_values=None) -> Multivector:
        """Concrete pi = pi^1 + beta^2 + alpha^2 (free unknowns default to zero)."""
        values = {u: 0 for u in self.unknowns}
        values.update(free_values or {})
        for u, e in assign.items():
            values[u] = e.substitute(values) if isinstance(e, AffineExpression) else e
        alpha2 = self.alpha2_template.substitute_unknowns(values)
        return self.pi1 + self.beta.homogeneous_part(2) + alpha2


# checks and reports ----------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: str | None = None

    def as_dict(self):
        return {"check": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail, "witness": self.witness}


def witness_term(x: Multivector) -> str | None:
    """First term of a multivector in canonical order, as text."""
    if x.is_zero():
        return None
    key, poly = x.items()[0]
    e, c = poly.items()[0]
    mono = Polynomial(x.space, {e: c})
    return f"({mono})*" + "^".join("d" + x.space.names[i] for i in key)


def _ratio(p: Polynomial, q: Polynomial):
    """lambda with p == lambda*q, or None."""
    if q.is_zero():
        return 0 if p.is_zero() else None
    e = max(q.terms, key=grlex_key)
    lam = p.terms[e] * inverse(q.terms[e]) if e in p.terms else 0
    if lam == 0:
        return 0 if p.is_zero() else None
    return lam if q.scale(lam) == p else None


def pullback_check(pi: Multivector, hilbert: dict, source_bracket, pairs=None, normalize_on=None):
    """Compare pullbacks of pi(du, dv) with the source brackets of the pullbacks.

    ``hilbert`` maps variable names to source polynomials (missing names map to
    zero).  With ``normalize_on = (u, v)`` one global scale is fixed by that
    pair and applied to every other pair; otherwise the scale is 1.
    Returns (ok, scale, first failing pair or None).
    """
    from .exactring import substitute

    S = pi.space
    src = next(iter(hilbert.values())).space
    full = {name: hilbert.get(name, Polynomial.zero(src)) for name in S.names}

    def pb(p):
        return substitute(p, full, src)

    names = list(S.names)
    if pairs is None:
        pairs = [(names[i], names[j]) for i in range(len(names)) for j in range(i + 1, len(names))]
    scale = 1
    if normalize_on is not None:
        u, v = normalize_on
        scale = _ratio(pb(pi.coeff(u, v)), source_bracket(full[u], full[v]))
        if not scale:
            return False, None, normalize_on
    for u, v in pairs:
        lhs = pb(pi.coeff(u, v))
        rhs = source_bracket(full[u], full[v])
        if lhs != rhs.scale(scale):
            return False, scale, (u, v)
    return True, scale, None


@dataclass
class ExtensionReport:
    jacobiator_zero: bool
    pullback_compatible: bool
    support_triples: list
    cascade: list
    solved_unknowns: list = field(default_factory=list)
    free_unknowns: list = field(default_factory=list)
    scale: object = 1
    witness: str | None = None
    terms: int = 0
    variables: int = 0

    def __post_init__(self):
        if self.jacobiator_zero and not all(self.cascade):
            raise AssertionError("zero jacobiator with a nonzero cascade entry")

    def checks(self):
        out = [
            Check(
                "jacobiator",
                self.jacobiator_zero,
                f"zero ({self.variables} vars, {self.terms} terms)"
                if self.jacobiator_zero
                else f"nonzero on {len(self.support_triples)} triples",
                self.witness,
            ),
            Check("pullback", self.pullback_compatible, f"scale {self.scale}"),
        ]
        for k, ok in enumerate(self.cascade, start=1):
            out.append(Check(f"cascade k={k}", ok, "zero" if ok else "nonzero"))
        return out

    @property
    def passed(self):
        return self.jacobiator_zero and self.pullback_compatible


def verify_extension(pi: Multivector, problem: ExtensionProblem | None = None, scale_normalize: bool = True, solved=(), free=(), jobs=None) -> ExtensionReport:
    """Jacobiator, pullback compatibility (Z coordinates map to 0) and the degree cascade.

    With ``scale_normalize`` the global scale of pi is fixed by its (a2, a3)
    entry; otherwise pi must match the quotient bracket exactly.
    """
    from .invariants import source_bracket
    from .schouten import graded_cascade, jacobiator

    if pi.unknowns():
        raise StructuralError("verify_extension needs a concrete bivector")
    n = problem.n if problem is not None else (sum(1 for v in pi.space.names if v[0] == "x" and v[1:].isdigit()) - 1)
    q = problem.quotient if problem is not None else QuotientPresentation.build(n)
    J = jacobiator(pi, jobs=jobs)
    ok, scale, _ = pullback_check(pi, q.hilbert_map, source_bracket, normalize_on=("a2", "a3") if scale_normalize else None)
    cascade = [c.is_zero() for c in graded_cascade(pi, jobs=jobs)]
    return ExtensionReport(
        J.is_zero(),
        ok,
        triples_of(J),
        cascade,
        list(solved),
        list(free),
        scale,
        witness_term(J),
        len(pi),
        len(pi.space),
    )


# degree-one conditions ----------------------------------------------------------------

def _linear_table(x: Multivector):
    """{(i, j): {k: c}} for a bivector with linear coefficients."""
    out = {}
    for key, poly in x.terms.items():
        row = {}
        for e, c in poly.terms.items():
            if sum(e) != 1:
                raise StructuralError("degree1_conditions needs linear bivectors")
            row[e.index(1)] = c
        out[key] = row
    return out


def _bracket_of(table, i, j):
    if i == j:
        return {}
    if i < j:
        return table.get((i, j), {})
    return {k: -c for k, c in table.get((j, i), {}).items()}


def _jacobi_defect(table, i, j, k):
    """Coefficients of [[i,j],k] + [[j,k],i] + [[k,i],j] in the linear Lie algebra."""
    out = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for m, s in _bracket_of(table, a, b).items():
            for r, t in _bracket_of(table, m, c).items():
                out[r] = out.get(r, 0) + s * t
    return {r: v for r, v in out.items() if v}


CONDITION_NAMES = {
    1: "Z bracket satisfies Jacobi",
    2: "rho_Z acts by derivations",
    3: "rho_Z is a representation modulo inner derivations",
    4: "c is a cocycle",
}


@dataclass
class Degree1Report:
    conditions: dict  # k -> (holds by the Schouten split, holds by structure constants)
    bracket_zero: bool
    abelian: bool

    @property
    def agree(self):
        return all(a == b for a, b in self.conditions.values()) and self.bracket_zero == all(
            a for a, _ in self.conditions.values()
        )

    def holds(self, k):
        return self.conditions[k][0]


def z_variables(beta1: Multivector, alpha1: Multivector):
    """Variables neither carrying a skew factor of beta^1 nor appearing in its coefficients."""
    used = set()
    for key, c in beta1.terms.items():
        used |= set(key)
        for e in c.terms:
            used |= {i for i, k in enumerate(e) if k}
    return [i for i in range(len(alpha1.space)) if i not in used]


def degree1_conditions(alpha1: Multivector, beta1: Multivector, z=None) -> Degree1Report:
    """The four conditions for [pi^1, pi^1] = 0, pi^1 = beta^1 + alpha^1.

    Condition k is read off the components of [pi^1, pi^1] on triples with
    4 - k coordinates of Z (3 for the Z bracket, 0 for the cocycle).  It is
    cross-checked against the Jacobi identity of the Lie algebra whose
    structure constants are the coefficients of pi^1.
    """
    from itertools import combinations

    from .schouten import jacobiator

    S = alpha1.space
    pi1 = beta1 + alpha1
    table = _linear_table(pi1)
    zset = set(z_variables(beta1, alpha1) if z is None else (S.index(v) if isinstance(v, str) else v for v in z))
    J = jacobiator(pi1)
    split = {k: True for k in range(1, 5)}
    for key in J.terms:
        nz = sum(1 for i in key if i in zset)
        split[4 - nz] = False
    direct = {k: True for k in range(1, 5)}
    # only triples where some bracket is defined can fail
    active = sorted({i for key in table for i in key})
    for i, j, k in combinations(active, 3):
        if _jacobi_defect(table, i, j, k):
            nz = sum(1 for v in (i, j, k) if v in zset)
            direct[4 - nz] = False
    abelian = not any(set(key) <= zset for key in table)
    return Degree1Report({k: (split[k], direct[k]) for k in range(1, 5)}, J.is_zero(), abelian)


def cocycle_family(n: int = 3, space: VariableSpace | None = None):
    """Solve [pi^1, pi^1] = 0 with one unknown scalar per Z coordinate.

    alpha^1_c(du, dv) = L_{uv} * (uv).  Returns the Solution (pivots in terms
    of the free L's).
    """
    from .schouten import schouten_bracket as sb

    S = space or big_space(n)
    pi0 = build_beta1(n, S) + build_alpha_rho(n, S)
    terms = {}
    for u, v in z_pairs(n):
        z = z_name(u, v)
        terms[(S.index(u), S.index(v))] = S.var(z).map_coefficients(lambda c, z=z: AffineExpression.unknown("L_" + z) * c)
    ac = Multivector(S, 2, terms)
    system = LinearSystem()
    for poly in sb(pi0, ac).terms.values():
        for _, c in poly.items():
            system.add(c)
    return solve_linear(_dedupe(system))


# membership of a concrete bivector in the template family ------------------------------

def _decompose(p: Polynomial, basis):
    """Coefficients of p in the span of ``basis`` ({label: poly}), or None."""
    system = LinearSystem()
    monos = set(p.terms)
    for g in basis.values():
        monos |= set(g.terms)
    for e in monos:
        expr = AffineExpression(-p.terms.get(e, 0))
        for label, g in basis.items():
            c = g.terms.get(e)
            if c:
                expr = expr + AffineExpression.unknown(label) * c
        system.add(expr)
    sol = solve_linear(system)
    if not sol:
        return None
    return sol.values()


@dataclass
class MembershipReport:
    in_template: bool
    values: dict
    outside: list  # (u, v) entries of alpha^2 outside the template support
    violated: list  # equations not satisfied by the extracted values
    equations: int

    @property
    def member(self):
        return self.in_template and not self.violated


def family_membership(pi: Multivector, problem: ExtensionProblem, scale=None, triples=None) -> MembershipReport:
    """Read template unknowns off pi's quadratic part and test every extracted equation.

    pi is divided by ``scale`` (default: its (a2, a3) normalisation).  The
    equations are built with pi's own linear part, so the first-order data of
    pi is used as given.
    """
    from .invariants import source_bracket

    S = problem.space
    pi = pi.embed(S) if pi.space.names == S.names and pi.space != S else pi
    if scale is None:
        _, scale, _ = pullback_check(pi, problem.quotient.hilbert_map, source_bracket, pairs=[], normalize_on=("a2", "a3"))
    pi = pi.scale(inverse(scale)) if scale != 1 else pi
    parts = pi.grade_parts("total")
    lin = parts.get(1, Multivector.zero(S, 2))
    alpha2 = parts.get(2, Multivector.zero(S, 2)) - problem.beta.homogeneous_part(2)
    gens = quadratic_generators(problem.n, S)
    layout = {(S.index(u), S.index(z)): entry for u, z, entry in template_layout(problem.n, S)}
    values = {}
    outside = []
    for k in range(problem.n + 1):
        key = (S.index(f"x{k}"), S.index(f"y{k}"))
        got = _decompose(alpha2.terms.get(key, Polynomial.zero(S)), {f"l{k}": gens["C"]})
        if got is None:
            outside.append((f"x{k}", f"y{k}"))
        else:
            values.update(got)
    diag = {(S.index(f"x{k}"), S.index(f"y{k}")) for k in range(problem.n + 1)}
    for key, poly in alpha2.items():
        if key in diag:
            continue
        entry = layout.get(key)
        got = None if entry is None else _decompose(poly, {u: gens[lab] for u, lab in entry})
        if got is None:
            outside.append(tuple(S.names[i] for i in key))
        else:
            values.update(got)
    for u in problem.unknowns:
        values.setdefault(u, 0)
    sub = ExtensionProblem(problem.n, problem.quotient, S, problem.beta, lin - problem.beta1, problem.alpha2_template, problem.unknowns)
    br = schouten_bracket(sub.pi1, sub.pi2)
    system = _dedupe(extract_equations(sub.pi1, sub.pi2, triples, bracket=br))
    violated = [e for e in system.equations if coefficient(e.substitute(values))]
    return MembershipReport(not outside, values, outside, violated, len(system))


# facts about beta and alpha ----------------------------------------------------------

def facts_report(pi: Multivector, n: int = 3, scale=1):
    """Facts 1-3 for alpha = pi/scale - beta on the target coordinates.

    Fact 1: alpha^k(da_i, da_j) = 0.  Fact 2: alpha^k_d(dt, dw) = 0 for
    d in {-2, -1, 0}, t = a0 + a1.  Fact 3: alpha^k_{-2}(dw_i, dw_j) is C times
    a polynomial in the gl2 coordinates.  Returns [Check].
    """
    from .schouten import w_decompose

    T = target_space(n)
    if pi.space != T:
        pi = _drop_outside(pi, T)
    beta = build_beta(n, T)
    alpha = (pi.scale(inverse(scale)) if scale != 1 else pi) - beta
    a = [f"a{i}" for i in range(4)]
    w = [v for v in T.names if v[0] in "xy"]
    gl2 = {T.index(v) for v in a}
    C = quadratic_generators(n, T)["C"]
    out = []
    bad = [(u, v) for i, u in enumerate(a) for v in a[i + 1 :] if alpha.coeff(u, v)]
    out.append(Check("fact 1: alpha(da_i, da_j) = 0", not bad, "", str(bad[0]) if bad else None))
    bad = []
    for k, part in alpha.grade_parts("total").items():
        wparts = w_decompose(part)
        for d in (-2, -1, 0):
            piece = wparts.get(d)
            if piece is None:
                continue
            for v in w:
                if piece.coeff("a0", v) + piece.coeff("a1", v):
                    bad.append((k, d, v))
    out.append(Check("fact 2: alpha_d(dt, dw) = 0, d = -2, -1, 0", not bad, "", str(bad[0]) if bad else None))
    bad = []
    for k, part in alpha.grade_parts("total").items():
        piece = w_decompose(part).get(-2)
        if piece is None:
            continue
        for key, poly in piece.terms.items():
            if not all(i in gl2 for i in key) and any(T.names[i][0] in "xy" for i in key):
                quo = _divide_by(poly, C)
                if quo is None or any(e[i] for e in quo.terms for i in range(len(T)) if i not in gl2):
                    bad.append((k, tuple(T.names[i] for i in key)))
    out.append(Check("fact 3: alpha_{-2}(dw_i, dw_j) in C*Sym(gl2)", not bad, "", str(bad[0]) if bad else None))
    return out


def _drop_outside(pi: Multivector, T: VariableSpace) -> Multivector:
    """Restrict to the target coordinates, setting the others to zero."""
    keep = {i: T.index(v) for i, v in enumerate(pi.space.names) if v in T}
    terms = {}
    for key, poly in pi.terms.items():
        if not all(i in keep for i in key):
            continue
        pt = {}
        for e, c in poly.terms.items():
            if any(e[i] for i in range(len(e)) if i not in keep):
                continue
            ne = [0] * len(T)
            for i, j in keep.items():
                ne[j] = e[i]
            pt[tuple(ne)] = c
        if pt:
            terms[tuple(keep[i] for i in key)] = Polynomial(T, pt)
    return Multivector(T, pi.degree, terms)


def _divide_by(p: Polynomial, d: Polynomial):
    """Exact quotient p / d by leading-term division, or None."""
    q = Polynomial.zero(p.space)
    r = p
    ld = max(d.terms, key=grlex_key)
    while r:
        lr = max(r.terms, key=grlex_key)
        diff = tuple(a - b for a, b in zip(lr, ld))
        if min(diff) < 0:
            return None
        t = Polynomial(p.space, {diff: r.terms[lr] * inverse(d.terms[ld])})
        q = q + t
        r = r - t * d
    return q


def t_degree_preserved(n: int):
    """{t, b(dx_j, dy_k)}_1 = b(d{t, x_j}_1, dy_k) + b(dx_j, d{t, y_k}_1) for b = beta^{n-1}.

    Returns the list of (j, k) where it fails (empty when it holds).
    """
    from .multivec import evaluate

    T = target_space(n)
    b1 = build_beta1(n, T)
    top = build_beta_top(n, T)
    t = T.var("a0") + T.var("a1")

    def br1(f, g):
        return evaluate(b1, [f, g])

    def b(f, g):
        return evaluate(top, [f, g])

    bad = []
    for j in range(n + 1):
        for k in range(n + 1):
            x, y = T.var(f"x{j}"), T.var(f"y{k}")
            if br1(t, b(x, y)) != b(br1(t, x), y) + b(x, br1(t, y)):
                bad.append((j, k))
    return bad
