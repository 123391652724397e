"""Shipped demo fixtures and the checks run on them.

A fixture is an INI-style text file; every section describes one bivector:

    [A2]
    variables = u, v, w
    bivector = (-2*v)*du^dv + (2*w)*du^dw + (4*u)*dv^dw
    casimir = v*w - u^2                 # optional: {f, casimir} = 0 for all f
    source = x, y                       # optional Hilbert map data
    source_scale = 1                    # {s0, s1} = {s2, s3} = ... = scale
    hilbert = x*y; x^2; y^2             # one source polynomial per variable
    variety = v*w - u^2                 # optional: pulls back to zero
    quotient = quotient-z3              # alternative to source/hilbert
    normalize = a2, a3                  # fix the global scale on this pair
    expect = poisson | support 28       # default: poisson
"""
from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field
from importlib import resources

from .exactring import Polynomial, VariableSpace, parse_polynomial, parse_scalar
from .extender import Check, pullback_check, triples_of, witness_term
from .invariants import QuotientPresentation, source_bracket
from .multivec import Multivector, evaluate, parse_multivector
from .schouten import jacobiator

DEMOS = {
    "z3-beta": "beta = beta^1 + beta^2 on the 12 generators of V/Z3",
    "z3-pi78": "degree-2 extension on 78 variables (scale 60)",
    "kleinian-an": "A_n singularities, n = 2..6",
    "kleinian-d": "D_(n+2) singularities, n = 2..5",
    "kleinian-e6": "E6 singularity",
    "kleinian-e7": "E7 singularity",
    "kleinian-e8": "E8 singularity (no Casimir check)",
    "orbifold-2d-zn": "real orbifolds R^2/Z_n, n = 3..7",
    "resonance-ab": "(a,b)-resonance spaces, (a,b) = (1,2), (2,3)",
}


def data_file(name: str):
    return resources.files("poissonext") / "data" / name


def list_demos():
    return list(DEMOS.items())


@dataclass
class Section:
    name: str
    space: VariableSpace
    bivector: Multivector
    casimir: Polynomial | None = None
    hilbert: dict | None = None
    source_scale: object = 1
    variety: Polynomial | None = None
    normalize: tuple | None = None
    expect_support: int | None = None
    notes: list = field(default_factory=list)


def _names(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def parse_fixture(text: str):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    cp.optionxform = str
    cp.read_string(text)
    return [_section(name, cp[name]) for name in cp.sections()]


def _section(name, sec):
    S = VariableSpace(_names(sec["variables"]))
    out = Section(name, S, parse_multivector(sec["bivector"], S, degree=2))
    if "casimir" in sec:
        out.casimir = parse_polynomial(sec["casimir"], S)
    if "quotient" in sec:
        q = QuotientPresentation.from_text(data_file(sec["quotient"] + ".txt").read_text())
        out.hilbert = q.hilbert_map
    elif "hilbert" in sec:
        src = VariableSpace(_names(sec["source"]))
        polys = [parse_polynomial(p, src) for p in sec["hilbert"].split(";")]
        if len(polys) != len(S):
            raise ValueError(f"[{name}] hilbert lists {len(polys)} polynomials for {len(S)} variables")
        out.hilbert = dict(zip(S.names, polys))
        out.source_scale = parse_scalar(sec.get("source_scale", "1"))
    if "variety" in sec:
        out.variety = parse_polynomial(sec["variety"], S)
    if "normalize" in sec:
        out.normalize = tuple(_names(sec["normalize"]))
    expect = sec.get("expect", "poisson").split()
    if expect[0] == "support":
        out.expect_support = int(expect[1])
    if "notes" in sec:
        out.notes = [line.strip() for line in sec["notes"].splitlines() if line.strip()]
    return out


def _pairwise_bracket(scale):
    def br(f, g):
        S = f.space
        names = S.names
        out = Polynomial.zero(S)
        for k in range(0, len(names) - 1, 2):
            p, q = names[k], names[k + 1]
            out = out + f.diff(p) * g.diff(q) - f.diff(q) * g.diff(p)
        return out if scale == 1 else out.scale(scale)

    return br


def run_section(sec: Section, jobs=None, scale_normalize=True):
    pi = sec.bivector
    checks = []
    J = jacobiator(pi, jobs=jobs)
    if sec.expect_support is None:
        ok = J.is_zero()
        detail = f"zero ({len(sec.space)} vars, {len(pi)} terms)" if ok else f"nonzero on {len(J)} triples"
        checks.append(Check("jacobiator", ok, detail, witness_term(J)))
    else:
        ok = len(J) == sec.expect_support
        checks.append(Check("jacobiator", ok, f"nonzero on {len(J)} triples (expected {sec.expect_support})"))
    if sec.casimir is not None:
        bad = [v for v in sec.space.names if evaluate(pi, [v, sec.casimir])]
        checks.append(Check("casimir", not bad, "", f"{{{bad[0]}, casimir}} != 0" if bad else None))
    if sec.hilbert is not None:
        if sec.normalize is not None:
            br = source_bracket
            norm = sec.normalize if scale_normalize else None
        else:
            br = _pairwise_bracket(sec.source_scale)
            norm = None
        ok, scale, bad = pullback_check(pi, sec.hilbert, br, normalize_on=norm)
        detail = f"scale {scale}" if sec.normalize is not None else ""
        checks.append(Check("pullback", ok, detail, f"pair {bad[0]}, {bad[1]}" if bad else None))
    if sec.variety is not None and sec.hilbert is not None:
        from .exactring import substitute

        src = next(iter(sec.hilbert.values())).space
        ok = substitute(sec.variety, sec.hilbert, src).is_zero()
        checks.append(Check("variety", ok))
    return checks


def run_fixture(text: str, jobs=None, scale_normalize=True):
    return [(sec, run_section(sec, jobs, scale_normalize)) for sec in parse_fixture(text)]


def format_report(title: str, results, fmt: str = "text", timing=None) -> str:
    passed = all(c.passed for _, checks in results for c in checks)
    if fmt == "json":
        doc = {
            "report": title,
            "status": "pass" if passed else "fail",
            "sections": [
                {"name": sec.name, "variables": len(sec.space), "terms": len(sec.bivector), "checks": [c.as_dict() for c in checks]}
                for sec, checks in results
            ],
            "timing": timing,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [title]
    for sec, checks in results:
        lines.append(f"[{sec.name}] {len(sec.space)} vars, {len(sec.bivector)} terms")
        for c in checks:
            line = f"  {c.name}: {'pass' if c.passed else 'FAIL'}"
            if c.detail:
                line += f"  {c.detail}"
            if c.witness:
                line += f"  witness {c.witness}"
            lines.append(line)
    lines.append(f"result: {'pass' if passed else 'FAIL'}")
    if timing is not None:
        lines.append(f"time: {timing:.3f} s")
    return "\n".join(lines) + "\n"


def run_demo(name: str, jobs=None, scale_normalize=True, fmt="text", timing=False):
    """(passed, report text) for a shipped demo."""
    import time

    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}")
    t0 = time.perf_counter()
    results = run_fixture(data_file(name + ".txt").read_text(), jobs, scale_normalize)
    dt = time.perf_counter() - t0 if timing else None
    passed = all(c.passed for _, checks in results for c in checks)
    return passed, format_report(f"demo {name}", results, fmt, dt)


def expected_report(name: str) -> str:
    return data_file(name + ".expected").read_text()
