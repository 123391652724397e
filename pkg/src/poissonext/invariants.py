"""Cyclic symplectic quotients V/Z_n: invariants, Hilbert map, defining ideal,
gl2 actions and sl2 weight diagnostics, resonant monomials."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

from .exactring import (
    GaussianRational,
    Polynomial,
    StructuralError,
    VariableSpace,
    parse_polynomial,
    scalar,
    substitute,
)
from .exactring.scalar import inverse

SOURCE_NAMES = ("z", "zb", "w", "wb")
ZN_WEIGHTS = (1, -1, 1, -1)
# Bracket scale of the unnormalised Kaehler convention: {z, zb} = -2i before
# rescaling by -1/(2i).
KAHLER_SCALE = GaussianRational(0, -2)


def source_space():
    return VariableSpace(SOURCE_NAMES, {"t": (1, -1, 1, -1), "H": (1, -1, -1, 1)})


def source_bracket(f: Polynomial, g: Polynomial, scale=1) -> Polynomial:
    """{f, g} with {z, zb} = {w, wb} = scale."""
    out = (
        f.diff("z") * g.diff("zb")
        - f.diff("zb") * g.diff("z")
        + f.diff("w") * g.diff("wb")
        - f.diff("wb") * g.diff("w")
    )
    return out if scale == 1 else out.scale(scale)


# diagonal actions --------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalAction:
    """Per-variable integer weights, modulo ``modulus`` (``None`` = torus, over Z)."""

    weights: tuple
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    def weight(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def monomial_invariant(self, exps) -> bool:
        wt = self.weight(exps)
        return wt == 0 if self.modulus is None else wt % self.modulus == 0


def zn_action(n: int) -> DiagonalAction:
    return DiagonalAction(ZN_WEIGHTS, n)


def is_invariant(action: DiagonalAction, p: Polynomial) -> bool:
    if len(action.weights) != len(p.space):
        raise StructuralError("action weights do not match the variable count")
    return all(action.monomial_invariant(e) for e in p.terms)


# Hilbert basis ----------------------------------------------------------------

def target_names(n: int):
    return [f"a{i}" for i in range(4)] + [f"x{k}" for k in range(n + 1)] + [f"y{k}" for k in range(n + 1)]


def _source_monomial(space, a=0, b=0, c=0, d=0):
    return Polynomial.monomial(space, (a, b, c, d))


def hilbert_basis_zn(n: int, space: VariableSpace | None = None):
    """zz_b, ww_b, z_b w, z w_b, then x_k = z^k w^(n-k), then y_k = z_b^k w_b^(n-k)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    S = space or source_space()
    out = [
        _source_monomial(S, 1, 1, 0, 0),
        _source_monomial(S, 0, 0, 1, 1),
        _source_monomial(S, 0, 1, 1, 0),
        _source_monomial(S, 1, 0, 0, 1),
    ]
    out += [_source_monomial(S, k, 0, n - k, 0) for k in range(n + 1)]
    out += [_source_monomial(S, 0, k, 0, n - k) for k in range(n + 1)]
    return out


def hilbert_map(n: int, space: VariableSpace | None = None):
    """Target variable name -> source polynomial."""
    return dict(zip(target_names(n), hilbert_basis_zn(n, space)))


def lie_poisson_weights(n: int):
    """t-, H- and W-weights of the target variables under s.f = {s, f}_1."""
    t = {"a0": 0, "a1": 0, "a2": 0, "a3": 0}
    H = {"a0": 0, "a1": 0, "a2": 2, "a3": -2}
    W = {"a0": 0, "a1": 0, "a2": 0, "a3": 0}
    for k in range(n + 1):
        t[f"x{k}"], H[f"x{k}"], W[f"x{k}"] = -n, n - 2 * k, 1
        t[f"y{k}"], H[f"y{k}"], W[f"y{k}"] = n, 2 * k - n, 1
    return {"t": t, "H": H, "W": W}


def target_space(n: int, weights=None) -> VariableSpace:
    names = target_names(n)
    w = weights or lie_poisson_weights(n)
    return VariableSpace(names, {g: {v: w[g][v] for v in names} for g in ("t", "H", "W")})


def rewrite_in_generators(m, n: int, target: VariableSpace | None = None) -> Polynomial:
    """Write an invariant source monomial as a monomial in the Hilbert-basis symbols.

    ``m`` is a source monomial (Polynomial with one term, coefficient kept) or an
    exponent tuple (a, b, c, d) for z^a zb^b w^c wb^d.
    """
    T = target or target_space(n)
    if isinstance(m, Polynomial):
        if len(m.terms) != 1:
            raise ValueError("expected a single monomial")
        (exps, coeff), = m.terms.items()
    else:
        exps, coeff = tuple(m), 1
    a, b, c, d = exps
    if (a - b + c - d) % n:
        raise ValueError("monomial is not Z_n-invariant")
    out = Counter()
    p, q = min(a, b), min(c, d)
    out["a0"] += p
    out["a1"] += q
    a, b, c, d = a - p, b - p, c - q, d - q
    # now at most one of (a, b) and at most one of (c, d) is nonzero
    if a and d:  # z^a wb^d: pair as (z wb) = a3
        r = min(a, d)
        out["a3"] += r
        a, d = a - r, d - r
    elif b and c:  # zb^b w^c: pair as (zb w) = a2
        r = min(b, c)
        out["a2"] += r
        b, c = b - r, c - r
    if a or c:
        # z^a w^c with a + c = 0 mod n (Hilbert case 2)
        ka, ra = divmod(a, n)
        kc, rc = divmod(c, n)
        out[f"x{n}"] += ka
        out["x0"] += kc
        if ra or rc:
            out[f"x{ra}"] += 1
    if b or d:
        kb, rb = divmod(b, n)
        kd, rd = divmod(d, n)
        out[f"y{n}"] += kb
        out["y0"] += kd
        if rb or rd:
            out[f"y{rb}"] += 1
    e = [0] * len(T)
    for name, k in out.items():
        if k:
            e[T.index(name)] += k
    return Polynomial.monomial(T, e, coeff)


def expand(p: Polynomial, n: int, source: VariableSpace | None = None) -> Polynomial:
    """Pull a target polynomial back along the Hilbert map."""
    S = source or source_space()
    hmap = hilbert_map(n, S)
    assignment = {name: hmap.get(name, Polynomial.zero(S)) for name in p.space.names}
    return substitute(p, assignment, S)


# defining ideal ---------------------------------------------------------------

def ideal_generators(n: int, target: VariableSpace | None = None):
    """Generators of the defining ideal, keyed by family.

    Each family is a list of (label, Polynomial); the two M_ij branches are
    tagged ``M_ij[ge]`` (i >= j) and ``M_ij[le]`` (i <= j).
    """
    T = target or target_space(n)
    v = T.var

    def x(k):
        return v(f"x{k}") if 0 <= k <= n else Polynomial.zero(T)

    def y(k):
        return v(f"y{k}") if 0 <= k <= n else Polynomial.zero(T)

    a0, a1, a2, a3 = (v(f"a{i}") for i in range(4))
    fam = {}
    fam["C"] = [("C", a0 * a1 - a2 * a3)]
    fam["A"] = [(f"A{k}", (a0 * y(k) - a3 * y(k + 1)).scale(n - k) + (a1 * y(k) - a2 * y(k - 1)).scale(k)) for k in range(n + 1)]
    fam["B"] = [(f"B{k}", (a0 * y(k) - a1 * y(k)) + (a2 * y(k - 1) - a3 * y(k + 1))) for k in range(1, n)]
    fam["Abar"] = [(f"Abar{k}", (a0 * x(k) - a2 * x(k + 1)).scale(n - k) + (a1 * x(k) - a3 * x(k - 1)).scale(k)) for k in range(n + 1)]
    fam["Bbar"] = [(f"Bbar{k}", (a0 * x(k) - a1 * x(k)) + (a3 * x(k - 1) - a2 * x(k + 1))) for k in range(1, n)]
    D, Dbar = [], []
    for i, j, k in product(range(n + 1), repeat=3):
        l = i + j - k
        if not 0 <= l <= n:
            continue
        pd = y(i) * y(j) - y(k) * y(l)
        if pd:
            D.append((f"D{i}{j}{k}", pd))
        pdb = x(i) * x(j) - x(k) * x(l)
        if pdb:
            Dbar.append((f"Dbar{i}{j}{k}", pdb))
    fam["D"] = D
    fam["Dbar"] = Dbar
    M = []
    for i in range(n + 1):
        for j in range(i + 1):
            M.append((f"M{i}{j}[ge]", x(i) * y(j) - a0 ** j * a1 ** (n - i) * a3 ** (i - j)))
    for i in range(n + 1):
        for j in range(i, n + 1):
            M.append((f"M{i}{j}[le]", x(i) * y(j) - a0 ** i * a1 ** (n - j) * a2 ** (j - i)))
    fam["M"] = M
    return fam


def table_h_degree(label: str, n: int) -> int:
    """H-degree column of the ideal-generator table, keyed by generator label."""
    import re

    m = re.fullmatch(r"(C|A|B|Abar|Bbar|D|Dbar|M)(\d*)(?:\[(ge|le)\])?", label)
    kind, digits = m.group(1), m.group(2)
    if kind == "C":
        return 0
    if kind in ("A", "B"):
        return 2 * int(digits) - n
    if kind in ("Abar", "Bbar"):
        return n - 2 * int(digits)
    if kind in ("D", "Dbar"):
        i, j = int(digits[0]), int(digits[1])
        # the table prints (i+j)-2n; the degree of y_i y_j is 2(i+j)-2n
        return 2 * (i + j) - 2 * n if kind == "D" else 2 * n - 2 * (i + j)
    i, j = int(digits[0]), int(digits[1])
    return 2 * (j - i)


@dataclass
class QuotientPresentation:
    n: int
    source: VariableSpace
    target: VariableSpace
    hilbert_map: dict
    ideal: dict = field(default_factory=dict)

    @classmethod
    def build(cls, n: int):
        S = source_space()
        T = target_space(n)
        return cls(n, S, T, hilbert_map(n, S), ideal_generators(n, T))

    def pullback(self, p: Polynomial) -> Polynomial:
        assignment = {name: self.hilbert_map.get(name, Polynomial.zero(self.source)) for name in p.space.names}
        return substitute(p, assignment, self.source)

    def generators(self):
        for fam in self.ideal.values():
            yield from fam

    # fixture format ----------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"# quotient presentation V/Z_{self.n}", f"n = {self.n}", "", "[map]"]
        for name in self.target.names:
            lines.append(f"{name} = {self.hilbert_map[name]}")
        lines += ["", "[gradings]"]
        for g in ("t", "H", "W"):
            w = self.target.weights(g)
            lines.append(f"{g} = " + ", ".join(f"{v}:{k}" for v, k in zip(self.target.names, w)))
        lines += ["", "[ideal]"]
        for fam, gens in self.ideal.items():
            for label, p in gens:
                lines.append(f"{label} = {p}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str):
        section = None
        n = None
        raw = {"map": [], "gradings": [], "ideal": []}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip()
                if section not in raw:
                    raise ValueError(f"line {lineno}: unknown section [{section}]")
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: expected 'name = value'")
            key, val = key.strip(), val.strip()
            if section is None:
                if key == "n":
                    n = int(val)
                continue
            raw[section].append((lineno, key, val))
        if n is None:
            raise ValueError("missing 'n = ...' header")
        S = source_space()
        names = [k for _, k, _ in raw["map"]]
        grads = {}
        for lineno, g, val in raw["gradings"]:
            grads[g] = {}
            for item in val.split(","):
                v, _, k = item.partition(":")
                grads[g][v.strip()] = int(k)
        T = VariableSpace(names, grads)
        hmap = {k: parse_polynomial(v, S) for _, k, v in raw["map"]}
        fam = {}
        for _, label, val in raw["ideal"]:
            kind = label.split("[")[0].rstrip("0123456789")
            fam.setdefault(kind, []).append((label, parse_polynomial(val, T)))
        return cls(n, S, T, hmap, fam)


def kernel_member(q: QuotientPresentation, p: Polynomial) -> bool:
    return q.pullback(p).is_zero()


# Lie-Poisson structure and gl2 actions -------------------------------------------

def lie_poisson_bracket_of(n: int, target: VariableSpace | None = None):
    """Structure table {u, v}_1 for target coordinates, derived by pulling back.

    Only pairs whose source bracket is quadratic (hence a linear combination of
    generators) are returned.
    """
    T = target or target_space(n)
    S = source_space()
    hmap = hilbert_map(n, S)
    out = {}
    names = T.names
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            br = source_bracket(hmap[u], hmap[v])
            if br.is_zero():
                continue
            lin = Polynomial.zero(T)
            for exps, c in br.terms.items():
                lin = lin + rewrite_in_generators(Polynomial.monomial(S, exps, c), n, T)
            if lin.degree() == 1 and lin.is_homogeneous():
                out[(u, v)] = lin
    return out


@dataclass
class LieAlgebraTable:
    """Structure constants [e_i, e_j] as linear polynomials in the basis names."""

    space: VariableSpace
    table: dict

    @classmethod
    def from_bivector(cls, beta1):
        table = {}
        S = beta1.space
        for key, c in beta1.terms.items():
            u, v = (S.names[i] for i in key)
            table[(u, v)] = c
        return cls(S, table)

    def bracket(self, u: str, v: str) -> Polynomial:
        if (u, v) in self.table:
            return self.table[(u, v)]
        if (v, u) in self.table:
            return -self.table[(v, u)]
        return Polynomial.zero(self.space)

    def bracket_poly(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """Extend to linear combinations (bilinearly)."""
        out = Polynomial.zero(self.space)
        for e1, c1 in f.terms.items():
            u = self.space.names[e1.index(1)]
            for e2, c2 in g.terms.items():
                v = self.space.names[e2.index(1)]
                out = out + self.bracket(u, v).scale(c1 * c2)
        return out

    def antisymmetric(self) -> bool:
        return all(u != v for u, v in self.table)

    def jacobi_defects(self):
        names = self.space.names
        bad = []
        for i, u in enumerate(names):
            for j in range(i + 1, len(names)):
                for k in range(j + 1, len(names)):
                    v, w = names[j], names[k]
                    s = (
                        self.bracket_poly(self.space.var(u), self.bracket(v, w))
                        + self.bracket_poly(self.space.var(v), self.bracket(w, u))
                        + self.bracket_poly(self.space.var(w), self.bracket(u, v))
                    )
                    if s:
                        bad.append((u, v, w, s))
        return bad


def tabulated_lie_poisson_table(n: int, target: VariableSpace | None = None):
    """The a-row entries of the Lie-Poisson table in its reference tabulation.

    Keys are (row, column) names; values are the tabulated entries {row, column}.
    The entries pairing a0/a1 with a2/a3 carry the opposite sign to
    :func:`lie_poisson_bracket_of`; kept verbatim for comparison.
    """
    T = target or target_space(n)
    v = T.var

    def x(k):
        return v(f"x{k}") if 0 <= k <= n else Polynomial.zero(T)

    def y(k):
        return v(f"y{k}") if 0 <= k <= n else Polynomial.zero(T)

    a0, a1, a2, a3 = (v(f"a{i}") for i in range(4))
    t = {
        ("a0", "a2"): -a2, ("a0", "a3"): a3,
        ("a1", "a2"): a2, ("a1", "a3"): -a3,
        ("a2", "a0"): a2, ("a2", "a1"): -a2, ("a2", "a3"): a0 - a1,
        ("a3", "a0"): -a3, ("a3", "a1"): a3, ("a3", "a2"): a1 - a0,
    }
    for k in range(n + 1):
        t[("a0", f"x{k}")] = x(k).scale(-k)
        t[("a1", f"x{k}")] = x(k).scale(-(n - k))
        t[("a2", f"x{k}")] = x(k - 1).scale(-k)
        t[("a3", f"x{k}")] = x(k + 1).scale(-(n - k))
        t[("a0", f"y{k}")] = y(k).scale(k)
        t[("a1", f"y{k}")] = y(k).scale(n - k)
        t[("a2", f"y{k}")] = y(k + 1).scale(n - k)
        t[("a3", f"y{k}")] = y(k - 1).scale(k)
    return t


GL2 = {"t": ("a0", "a1", 1), "H": ("a0", "a1", -1), "E": ("a2",), "F": ("a3",)}


def gl2_element(gen: str, side: str, n: int, space: VariableSpace):
    if gen not in GL2:
        raise ValueError(f"unknown gl2 generator {gen!r}")
    if side == "source":
        z, zb, w, wb = (space.var(s) for s in SOURCE_NAMES)
        return {"t": z * zb + w * wb, "H": z * zb - w * wb, "E": zb * w, "F": z * wb}[gen]
    a = {k: space.var(k) for k in ("a0", "a1", "a2", "a3")}
    return {"t": a["a0"] + a["a1"], "H": a["a0"] - a["a1"], "E": a["a2"], "F": a["a3"]}[gen]


def gl2_action(gen: str, p: Polynomial, side: str = "target", n: int | None = None, convention: str | None = None, beta1=None):
    """Hamiltonian action of t, H, E, F.

    source: s.f = {f, s} for the quadratic Hamiltonians zz_b +- ww_b, z_b w, z w_b.
    target: s.f = {s, f}_1 for s in span{a0 +- a1, a2, a3}; this is the
    convention under which the degree columns of the generator tables hold and
    [E, F] acts as H.  ``convention`` ('left' = {s, f}, 'right' = {f, s})
    overrides the default.
    """
    if side == "source":
        if tuple(p.space.names) != SOURCE_NAMES:
            raise StructuralError("source action needs the (z, zb, w, wb) space")
        s = gl2_element(gen, side, 0, p.space)
        conv = convention or "right"
        return source_bracket(p, s) if conv == "right" else source_bracket(s, p)
    if side != "target":
        raise ValueError("side must be 'source' or 'target'")
    if n is None:
        n = sum(1 for v in p.space.names if v.startswith("x") and v[1:].isdigit()) - 1
    if beta1 is None:
        beta1 = _beta1_cache(n, p.space)
    s = gl2_element(gen, side, n, p.space)
    from .multivec import evaluate

    conv = convention or "left"
    return evaluate(beta1, [s, p]) if conv == "left" else evaluate(beta1, [p, s])


_BETA1 = {}


def _beta1_cache(n, space):
    key = (n, space)
    if key not in _BETA1:
        from .extender import build_beta1

        T = target_space(n)
        b = build_beta1(n)
        _BETA1[key] = b if space == T else b.embed(space)
    return _BETA1[key]


# sl2 weight diagnostics ----------------------------------------------------------

def _rank(vectors):
    """Rank of a list of sparse vectors (dicts) over Q(i), exact."""
    rows = [dict(v) for v in vectors if v]
    rank = 0
    pivots = {}
    for row in rows:
        row = dict(row)
        for col, prow in pivots.items():
            if col in row:
                f = row[col]
                for k, val in prow.items():
                    nv = scalar(row.get(k, 0) - f * val)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if row:
            col = min(row)
            inv = inverse(row[col])
            row = {k: scalar(val * inv) for k, val in row.items()}
            for c2, prow in pivots.items():
                if col in prow:
                    f = prow[col]
                    for k, val in row.items():
                        nv = scalar(prow.get(k, 0) - f * val)
                        if nv:
                            prow[k] = nv
                        else:
                            prow.pop(k, None)
            pivots[col] = row
            rank += 1
    return rank


def _vec(p: Polynomial):
    return dict(p.terms)


def weight_spaces(span, grading: str = "H"):
    """H-weight -> list of homogeneous components of the span's elements."""
    parts = {}
    for p in span:
        for d, q in p.grade_parts(grading).items():
            parts.setdefault(d, []).append(q)
    return parts


def rep_diagnose(span, side: str = "target", n: int | None = None):
    """Multiset {d: multiplicity} of irreducible sl2 summands V_d in span(span).

    Weight multiplicities are read off the H-grading; each claimed highest
    weight count is confirmed by the dimension of ker(E) on that weight space.
    """
    span = [p for p in span if p]
    if not span:
        return Counter()
    if side not in ("source", "target"):
        raise ValueError("side must be 'source' or 'target'")
    # the H-grading of the source space is the {f, s} eigenvalue; weights here
    # are taken for the representation s.f = {s, f}
    sign = -1 if side == "source" else 1
    total = _rank([_vec(p) for p in span])
    parts = {sign * d: qs for d, qs in weight_spaces(span, "H").items()}
    dims = {d: _rank([_vec(q) for q in qs]) for d, qs in parts.items()}
    if sum(dims.values()) != total:
        raise ValueError("span is not stable under H")
    if any(d % 1 for d in dims):
        raise ValueError("non-integral H-weights")
    out = Counter()
    for d, m in dims.items():
        if d < 0:
            continue
        hw = m - dims.get(d + 2, 0)
        if hw < 0:
            raise ValueError("weight multiplicities are not those of an sl2-module")
        if hw:
            # highest-weight vectors: kernel of E restricted to the weight space
            qs = parts[d]
            images = [_vec(gl2_action("E", q, side, n=n, convention="left")) for q in qs]
            basis_rank = dims[d]
            img_rank = _rank(images)
            if basis_rank - img_rank != hw:
                raise ValueError(f"E-kernel check failed at weight {d}")
            out[d] += hw
    if sum((d + 1) * k for d, k in out.items()) != total:
        raise ValueError("weights are not symmetric under d -> -d")
    return out


def weight_multiset_decomposition(weights) -> Counter:
    """Peel highest weights off an sl2 weight multiset."""
    w = Counter(weights)
    out = Counter()
    while +w:
        top = max(k for k, v in w.items() if v > 0)
        if top < 0:
            raise ValueError("not the weight multiset of an sl2-module")
        out[top] += 1
        for j in range(top, -top - 1, -2):
            w[j] -= 1
            if w[j] < 0:
                raise ValueError("not the weight multiset of an sl2-module")
    return out


def vn_weights(n: int):
    return [n - 2 * k for k in range(n + 1)]


def tensor_square_decomposition(n: int) -> Counter:
    w = [a + b for a in vn_weights(n) for b in vn_weights(n)]
    return weight_multiset_decomposition(w)


def wedge_square_decomposition(n: int) -> Counter:
    ws = vn_weights(n)
    w = [ws[i] + ws[j] for i in range(n + 1) for j in range(i + 1, n + 1)]
    return weight_multiset_decomposition(w)


def sym_square_decomposition(n: int) -> Counter:
    ws = vn_weights(n)
    w = [ws[i] + ws[j] for i in range(n + 1) for j in range(i, n + 1)]
    return weight_multiset_decomposition(w)


# resonance --------------------------------------------------------------------------

def resonant_monomials(eigenvalues, k: int, max_degree: int):
    """Exponent vectors of total degree 2..max_degree with sum(k_i l_i) = l_k."""
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    lam = list(eigenvalues)
    target = lam[k]
    out = []
    m = len(lam)
    for deg in range(2, max_degree + 1):
        for combo in combinations_with_replacement(range(m), deg):
            if sum(lam[i] for i in combo) == target:
                e = [0] * m
                for i in combo:
                    e[i] += 1
                out.append(tuple(e))
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out
