"""Hypothesis strategies for random polynomials and multivectors."""
from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from poissonext.exactring import GaussianRational, Polynomial, VariableSpace
from poissonext.multivec import Multivector

SPACE4 = VariableSpace(["p", "q", "r", "s"], {"t": (1, -1, 2, 0), "W": (0, 1, 1, 2)})
SPACE3 = VariableSpace(["u", "v", "w"])

rationals = st.builds(
    Fraction,
    st.integers(-20, 20),
    st.integers(1, 20),
).filter(bool)

gaussians = st.one_of(
    rationals,
    st.builds(GaussianRational, rationals, rationals),
)


def exponents(space, max_deg):
    n = len(space)
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(tuple).filter(lambda e: sum(e) <= max_deg)


def polynomials(space=SPACE4, max_terms=6, max_deg=3, coeffs=rationals):
    return st.dictionaries(exponents(space, max_deg), coeffs, max_size=max_terms).map(lambda d: Polynomial(space, d))


def multivectors(space=SPACE4, degree=None, max_terms=3, max_deg=2, coeffs=rationals):
    """Random multivector of the given (or a random 0..3) degree."""
    if degree is None:
        return st.integers(0, min(3, len(space))).flatmap(lambda d: multivectors(space, d, max_terms, max_deg, coeffs))
    keys = list(combinations(range(len(space)), degree))
    return st.dictionaries(
        st.sampled_from(keys),
        polynomials(space, 2, max_deg, coeffs),
        max_size=max_terms,
    ).map(lambda d: Multivector(space, degree, d))


def linear_vector_fields(space=SPACE4):
    """X = sum_i (sum_j m_ij x_j) d_i with small integer matrix m."""
    n = len(space)
    return st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda m: Multivector(
            space,
            1,
            {(i,): Polynomial(space, {tuple(int(k == j) for k in range(n)): m[i][j] for j in range(n) if m[i][j]}) for i in range(n)},
        )
    )


def sparse_polynomials(space, max_terms=4, max_deg=3, coeffs=rationals):
    """Polynomials on many variables: each monomial is a short list of variable indices."""
    mono = st.lists(st.integers(0, len(space) - 1), max_size=max_deg).map(
        lambda idx: tuple(idx.count(i) for i in range(len(space)))
    )
    return st.dictionaries(mono, coeffs, max_size=max_terms).map(lambda d: Polynomial(space, d))
