"""Exact scalars, graded polynomials, affine expressions and linear solving."""
from .affine import (
    AffineExpression,
    Inconsistent,
    LinearSystem,
    NonlinearError,
    Solution,
    coefficient,
    solve_linear,
)
from .parse import ParseError, parse_polynomial, parse_scalar, space_for
from .polynomial import Polynomial, substitute
from .scalar import I, GaussianRational, format_scalar, inverse, scalar
from .space import StructuralError, VariableSpace


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.space != b.space:
        raise StructuralError("polynomials over different variable spaces")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def grade_parts(p: Polynomial, grading: str = "total"):
    return p.grade_parts(grading)


__all__ = [
    "AffineExpression",
    "GaussianRational",
    "I",
    "Inconsistent",
    "LinearSystem",
    "NonlinearError",
    "ParseError",
    "Polynomial",
    "Solution",
    "StructuralError",
    "VariableSpace",
    "coefficient",
    "format_scalar",
    "grade_parts",
    "inverse",
    "parse_polynomial",
    "parse_scalar",
    "poly_arith",
    "scalar",
    "solve_linear",
    "space_for",
    "substitute",
]
