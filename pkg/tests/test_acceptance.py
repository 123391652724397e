"""Acceptance criteria 1-9, one test each, each printing a single PASS/FAIL line.

Criteria 4, 5 and item 4 of criterion 8 do not hold as stated.  Their tests
assert the statement literally and are strict xfails; the companion tests
pin the outcome that is actually observed.
"""
import time
from collections import Counter
from itertools import combinations_with_replacement
from pathlib import Path

import pytest

import test_invariants as ti
import test_multivec as tm
import test_schouten as ts
from oracle import peel, sl2_weights_tensor
from poissonext.cli import main
from poissonext.demos import data_file, parse_fixture
from poissonext.exactring import parse_polynomial
from poissonext.extender import (
    ExtensionProblem,
    _ratio,
    build_beta,
    build_beta1,
    build_beta_top,
    facts_report,
    family_membership,
    quadratic_generators,
    t_degree_preserved,
    triples_of,
    verify_extension,
)
from poissonext.invariants import (
    QuotientPresentation,
    gl2_action,
    hilbert_basis_zn,
    ideal_generators,
    kernel_member,
    rep_diagnose,
    resonant_monomials,
    target_space,
    tensor_square_decomposition,
    wedge_square_decomposition,
)
from poissonext.multivec import parse_multivector
from poissonext.schouten import jacobiator, w_decompose

DATA = Path(__file__).parent / "data"


@pytest.fixture
def report(capsys):
    t0 = time.perf_counter()

    def emit(n, ok, detail):
        dt = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  [{dt:.2f} s]")
        return dt

    return emit


@pytest.fixture(scope="module")
def problem():
    return ExtensionProblem.build(3)


@pytest.fixture(scope="module")
def pi78(problem):
    return parse_fixture(data_file("z3-pi78.txt").read_text())[0].bivector.embed(problem.space)


# 1 ------------------------------------------------------------------------------------

FIXTURES = {
    "orbifold-2d-zn": 5,
    "kleinian-an": 5,
    "kleinian-d": 4,
    "kleinian-e6": 1,
    "kleinian-e7": 1,
    "kleinian-e8": 1,
    "resonance-ab": 2,
}


def test_criterion_1(report):
    t0 = time.perf_counter()
    nonzero = []
    count = 0
    for name, k in FIXTURES.items():
        secs = parse_fixture(data_file(name + ".txt").read_text())
        assert len(secs) == k, name
        for sec in secs:
            count += 1
            if not jacobiator(sec.bivector).is_zero():
                nonzero.append(sec.name)
    dt = time.perf_counter() - t0
    ok = not nonzero and dt < 1
    report(1, ok, f"{count} explicit brackets, jacobiator exactly zero on all")
    assert not nonzero
    assert dt < 1


# 2 ------------------------------------------------------------------------------------


def test_criterion_2(report):
    t0 = time.perf_counter()
    q = QuotientPresentation.build(3)
    listed = "z*zb, w*wb, zb*w, z*wb, w^3, z*w^2, z^2*w, z^3, wb^3, zb*wb^2, zb^2*wb, zb^3"
    gens_ok = hilbert_basis_zn(3) == [parse_polynomial(t, q.source) for t in listed.split(", ")]
    ideal = list(q.generators())
    outside = [label for label, p in ideal if not kernel_member(q, p)]
    T = q.target
    quad = quadratic_generators(3)
    wrong = []
    for label, (text, h, t) in ti.DEGREE_TABLE.items():
        p = parse_polynomial(text, T)
        if quad[label] != p or gl2_action("H", p) != p.scale(h) or gl2_action("t", p) != p.scale(t):
            wrong.append(label)
    dt = time.perf_counter() - t0
    ok = gens_ok and not outside and not wrong and dt < 1
    report(2, ok, f"12 generators, {len(ideal)} ideal generators in the kernel, {len(ti.DEGREE_TABLE)} degree rows")
    assert gens_ok and not outside and not wrong
    assert dt < 1


# 3 ------------------------------------------------------------------------------------


def test_criterion_3(report):
    t0 = time.perf_counter()
    T = target_space(3)
    b1 = parse_multivector((DATA / "beta1_listing.mv").read_text(), T, 2)
    b2 = parse_multivector((DATA / "beta2_listing.mv").read_text(), T, 2)
    beta = build_beta(3)
    listing_ok = beta == b1 + b2
    closed = jacobiator(build_beta1(3)).is_zero() and jacobiator(build_beta_top(3)).is_zero()
    J = jacobiator(beta)
    support_ok = sorted(triples_of(J)) == sorted(ts.SUPPORT_TRIPLES)
    ref = parse_multivector((DATA / "beta_jacobiator_display.mv").read_text(), T, 3)
    scales = {_ratio(J.terms[k], ref.terms[k]) for k in ref.terms}
    scale_ok = set(J.terms) == set(ref.terms) and len(scales) == 1 and None not in scales and 0 not in scales
    dt = time.perf_counter() - t0
    ok = listing_ok and closed and support_ok and scale_ok and dt < 2
    report(3, ok, f"beta matches the listings, support 28 triples, global scale {next(iter(scales))}")
    assert listing_ok and closed and support_ok and scale_ok
    assert dt < 2


# 4 ------------------------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason="the 78-variable bivector has a nonzero jacobiator")
def test_criterion_4(report, problem, pi78):
    t0 = time.perf_counter()
    rep = verify_extension(pi78, problem, jobs=1)
    t1 = time.perf_counter() - t0
    t0 = time.perf_counter()
    verify_extension(pi78, problem, jobs=4)
    t4 = time.perf_counter() - t0
    ok = rep.jacobiator_zero and rep.pullback_compatible and t1 < 30 and t4 < 10
    report(4, ok, f"jacobiator nonzero on {len(rep.support_triples)} triples (witness {rep.witness}); "
           f"pullback compatible with scale {rep.scale}; {t1:.1f} s / {t4:.1f} s with 4 workers")
    assert rep.jacobiator_zero
    assert rep.pullback_compatible


def test_criterion_4_observed(problem, pi78):
    t0 = time.perf_counter()
    rep = verify_extension(pi78, problem, jobs=1)
    assert time.perf_counter() - t0 < 30
    assert rep.pullback_compatible and rep.scale == 60
    assert not rep.jacobiator_zero and len(rep.support_triples) == 8540
    t0 = time.perf_counter()
    assert verify_extension(pi78, problem, jobs=4).support_triples == rep.support_triples
    assert time.perf_counter() - t0 < 10


# 5 ------------------------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason="the third wave of equations is inconsistent")
def test_criterion_5(report, capsys, problem, pi78):
    t0 = time.perf_counter()
    code = main(["extend", "3"])
    capsys.readouterr()
    m = family_membership(pi78, problem)
    dt = time.perf_counter() - t0
    ok = code == 0 and m.member and dt < 300
    report(5, ok, f"extend 3 exits {code} (inconsistent system); the 78-variable bivector "
           f"violates {len(m.violated)} of {m.equations} extracted equations")
    assert code == 0
    assert m.member


def test_criterion_5_observed(problem, pi78):
    _, _, results = problem.solve(waves=3)
    assert [r.consistent for r in results] == [True, True, False]
    m = family_membership(pi78, problem)
    assert m.in_template and len(m.violated) == 2812 and m.equations == 2937


# 6 ------------------------------------------------------------------------------------

AXIOM_SUITES = [
    ts.test_graded_skew_symmetry,
    ts.test_graded_leibniz,
    ts.test_graded_jacobi,
    ts.test_jacobiator_cyclic_formula,
    ts.test_two_bivector_formula,
    tm.test_div_curl_is_zero,
    tm.test_curl_grad3_is_zero,
]


def test_criterion_6(report):
    t0 = time.perf_counter()
    for suite in AXIOM_SUITES:
        assert suite.hypothesis.inner_test  # a property test, 200 examples each
        suite()
    dt = time.perf_counter() - t0
    report(6, dt < 30, f"{len(AXIOM_SUITES)} property suites x 200 instances; "
           "the two-bivector formula equals -[A, B] under [X, Y] = Lie bracket")
    assert dt < 30


# 7 ------------------------------------------------------------------------------------


def test_criterion_7(report, problem, pi78):
    t0 = time.perf_counter()
    w_ok = w_decompose(build_beta(3)) == {-2: build_beta_top(3), 0: build_beta1(3)}
    ts.test_no_w_component_below_minus_p()
    t_ok = t_degree_preserved(3) == [] and t_degree_preserved(5) == []
    # no wave-3 solution exists; check the facts on the two-wave solution and on the 78-variable bivector
    assign, _, _ = problem.solve(waves=2)
    facts = facts_report(problem.instantiate(assign), 3) + facts_report(pi78, 3, scale=60)
    facts_ok = all(c.passed for c in facts)
    dt = time.perf_counter() - t0
    ok = w_ok and t_ok and facts_ok and dt < 10
    report(7, ok, "W-decomposition {-2, 0}, t-degree kept for n = 3, 5, facts 1-3 on the two-wave solution and the 78-variable bivector")
    assert w_ok and t_ok and facts_ok
    assert dt < 10


# 8 ------------------------------------------------------------------------------------


def _span(kind):
    return [p for _, p in ideal_generators(3)[kind]]


def test_criterion_8(report):
    t0 = time.perf_counter()
    n = 3
    items = {
        "C": Counter({0: 1}),
        "A": Counter({n: 1}),
        "Abar": Counter({n: 1}),
        "B": Counter({n - 2: 1}),
        "Bbar": Counter({n - 2: 1}),
        "D": Counter({2 * (n - (2 * k + 1)): 1 for k in range((n - 1) // 2 + 1)}),
        "Dbar": Counter({2 * (n - (2 * k + 1)): 1 for k in range((n - 1) // 2 + 1)}),
        "M": Counter({2 * (n - k): 1 for k in range(n + 1)}),
    }
    got = {kind: rep_diagnose(_span(kind), n=n) for kind in items}
    bad = sorted(kind for kind in items if got[kind] != items[kind])
    cg_ok = all(
        tensor_square_decomposition(m) == peel(sl2_weights_tensor(m, "tensor"))
        and wedge_square_decomposition(m) == peel(sl2_weights_tensor(m, "wedge"))
        for m in range(1, 5)
    )
    ti.test_gl2_commutators()
    dt = time.perf_counter() - t0
    detail = "tensor/wedge squares n <= 4 and EF - FE = H hold"
    if bad:
        detail += f"; {', '.join(bad)} span {dict(got[bad[0]])}, not {dict(items[bad[0]])}"
    report(8, not bad and cg_ok and dt < 10, detail)
    assert cg_ok and dt < 10
    if bad:
        pytest.xfail("item 4 (D family) does not hold as stated")


def test_criterion_8_observed():
    # span{D} is Sym^2 V_3 minus V_6 = V_2: three independent quadrics in y0..y3
    got = rep_diagnose(_span("D"), n=3)
    assert got == Counter({2: 1})
    assert sum((d + 1) * m for d, m in got.items()) == 3
    assert rep_diagnose(_span("Dbar"), n=3) == Counter({2: 1})


# 9 ------------------------------------------------------------------------------------


def _xy_generated(n, top):
    """x_l times products of x_i y_j, as exponent vectors on (x0..xn, y0..yn)."""
    out = set()
    for d in range(0, (top - 1) // 2 + 1):
        for pairs in combinations_with_replacement(range((n + 1) ** 2), d):
            for lead in range(n + 1):
                e = [0] * (2 * n + 2)
                e[lead] += 1
                for p in pairs:
                    e[p // (n + 1)] += 1
                    e[n + 1 + p % (n + 1)] += 1
                if sum(e) >= 2:
                    out.add(tuple(e))
    return out


def test_criterion_9(report):
    t0 = time.perf_counter()
    ti.test_resonance_against_brute_force()
    pattern = []
    for n in (1, 2, 3):
        lam = [1] * (n + 1) + [-1] * (n + 1)
        pattern.append(set(resonant_monomials(lam, 0, 5)) == _xy_generated(n, 5))
    dt = time.perf_counter() - t0
    ok = all(pattern) and dt < 10
    report(9, ok, "brute force on 200 random eigenvalue lists; resonant monomials are x_l times products of x_i y_j for n = 1..3")
    assert all(pattern)
    assert dt < 10
