"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 on a mathematical failure,
2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from .exactring import ParseError, StructuralError, VariableSpace, parse_polynomial
from .multivec import format_multivector, identifiers, parse_multivector

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, text):
    sys.stdout.write(text)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def _sn(args):
    return args.scale_normalize == "on"


# fixtures --------------------------------------------------------------------------

def load_bivector_file(text: str):
    """Sections of a fixture file, or a bare bivector (optionally headed by '# variables: ...')."""
    from .demos import Section, parse_fixture

    if re.search(r"^\s*\[[^\]]+\]\s*$", text, re.M):
        return parse_fixture(text)
    names = None
    body = []
    for line in text.splitlines():
        m = re.match(r"\s*#\s*variables\s*:(.*)", line)
        if m:
            names = [v.strip() for v in m.group(1).replace(",", " ").split() if v.strip()]
        elif not line.lstrip().startswith("#"):
            body.append(line)
    body = "\n".join(body).strip()
    space = VariableSpace(names or identifiers(body))
    return [Section("bivector", space, parse_multivector(body, space, degree=2))]


# commands --------------------------------------------------------------------------

def cmd_verify(args):
    from .demos import format_report, run_section
    from .invariants import QuotientPresentation

    t0 = time.perf_counter()
    sections = load_bivector_file(_read(args.file))
    if args.quotient:
        q = QuotientPresentation.from_text(_read(args.quotient))
        for sec in sections:
            sec.hilbert = q.hilbert_map
            sec.normalize = ("a2", "a3")
    results = [(sec, run_section(sec, args.jobs, _sn(args))) for sec in sections]
    dt = time.perf_counter() - t0 if args.timing else None
    _emit(args, format_report(f"verify {args.file}", results, args.format, dt))
    return EXIT_OK if all(c.passed for _, cs in results for c in cs) else EXIT_FAIL


def cmd_jacobiator(args):
    from .schouten import jacobiator

    out = []
    for sec in load_bivector_file(_read(args.file)):
        J = jacobiator(sec.bivector, jobs=args.jobs)
        out.append((sec.name, J))
    if args.format == "json":
        doc = [{"name": n, "zero": J.is_zero(), "terms": len(J), "jacobiator": format_multivector(J)} for n, J in out]
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, "".join(f"[{n}] {format_multivector(J)}\n" for n, J in out))
    return EXIT_OK


_SOURCE_TOKEN = re.compile(r"(zb|wb|z|w)(\d*)")


def parse_source_monomial(text: str, space):
    """'z4w2' shorthand or grammar text like 'z^4*w^2'."""
    if re.fullmatch(r"(?:(?:zb|wb|z|w)\d*)+", text):
        exps = dict.fromkeys(space.names, 0)
        for name, k in _SOURCE_TOKEN.findall(text):
            exps[name] += int(k) if k else 1
        from .exactring import Polynomial

        return Polynomial.monomial(space, tuple(exps[n] for n in space.names))
    return parse_polynomial(text, space)


def cmd_hilbert(args):
    from .invariants import QuotientPresentation, expand, rewrite_in_generators, table_h_degree

    if args.n < 2:
        raise InputError("n must be at least 2")
    q = QuotientPresentation.build(args.n)
    doc = {"n": args.n}
    lines = []
    if args.rewrite:
        m = parse_source_monomial(args.rewrite, q.source)
        try:
            r = rewrite_in_generators(m, args.n, q.target)
        except ValueError as e:
            raise InputError(str(e)) from e
        back = expand(r, args.n, q.source)
        ok = back == m
        doc["rewrite"] = {"monomial": str(m), "generators": str(r), "expansion": str(back), "verified": ok}
        lines += [f"{m} = {r}", f"  expansion: {r} -> {back}", f"  round trip: {'ok' if ok else 'FAIL'}"]
        if not ok:
            _out(args, doc, lines)
            return EXIT_FAIL
    elif args.ideal:
        rows = []
        for fam, gens in q.ideal.items():
            for label, p in gens:
                row = {"label": label, "generator": str(p)}
                if args.degrees:
                    row["t"] = p.degree("t")
                    row["H"] = p.degree("H")
                    row["H_table"] = table_h_degree(label, args.n)
                rows.append(row)
        doc["ideal"] = rows
        for r in rows:
            deg = f"  t={r['t']} H={r['H']}" if args.degrees else ""
            lines.append(f"{r['label']}: {r['generator']}{deg}")
    else:
        rows = []
        for name in q.target.names:
            p = q.hilbert_map[name]
            row = {"name": name, "invariant": str(p)}
            if args.degrees:
                row["t"] = q.target.degree(tuple(int(v == name) for v in q.target.names), "t")
                row["H"] = q.target.degree(tuple(int(v == name) for v in q.target.names), "H")
            rows.append(row)
        doc["generators"] = rows
        lines.append(f"{len(rows)} generators")
        for r in rows:
            deg = f"  t={r['t']} H={r['H']}" if args.degrees else ""
            lines.append(f"{r['name']} = {r['invariant']}{deg}")
    _out(args, doc, lines)
    return EXIT_OK


def _out(args, doc, lines):
    if args.format == "json":
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, "\n".join(lines) + "\n")


def cmd_pullback(args):
    from .invariants import QuotientPresentation, kernel_member

    q = QuotientPresentation.from_text(_read(args.quotient)) if args.quotient else QuotientPresentation.build(args.n)
    p = parse_polynomial(args.poly, q.target)
    back = q.pullback(p)
    member = kernel_member(q, p)
    _out(args, {"polynomial": str(p), "pullback": str(back), "kernel_member": member}, [f"{p} -> {back}", f"kernel member: {'yes' if member else 'no'}"])
    return EXIT_OK


def cmd_resonance(args):
    from .invariants import resonant_monomials

    try:
        lam = [int(v) for v in args.eigenvalues.split(",")]
    except ValueError as e:
        raise InputError("eigenvalues must be comma-separated integers") from e
    if not 0 <= args.k < len(lam):
        raise InputError(f"k must index the eigenvalue list (0..{len(lam) - 1})")
    if args.max_degree < 2:
        raise InputError("max degree must be at least 2")
    monos = resonant_monomials(lam, args.k, args.max_degree)
    _out(args, {"eigenvalues": lam, "k": args.k, "monomials": [list(e) for e in monos]}, [f"{len(monos)} resonant monomials"] + [" ".join(map(str, e)) for e in monos])
    return EXIT_OK


def _read_triples(path):
    out = []
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].replace(",", " ").split()
        if not line:
            continue
        if len(line) != 3:
            raise InputError(f"triple needs three coordinates: {' '.join(line)}")
        out.append(tuple(line))
    return out


def cmd_extend(args):
    from .extender import ExtensionProblem, verify_extension

    if args.n != 3:
        raise InputError("fixture machinery is shipped for n = 3 only")
    P = ExtensionProblem.build(args.n)
    if args.template == "none":
        # beta + alpha^1 with no degree-2 freedom at all
        from .multivec import Multivector

        P.alpha2_template = Multivector.zero(P.space, 2)
        P.unknowns = []
    custom = None
    if args.triples_file:
        custom = _read_triples(args.triples_file)
        bad = [v for t in custom for v in t if v not in P.space]
        if bad:
            raise InputError(f"unknown coordinate {bad[0]!r} in triples file")
    assign, free, results = P.solve(waves=args.waves, triples=custom)
    doc = {"n": args.n, "waves": [], "status": "pass"}
    lines = [f"extend {args.n}: {len(P.unknowns)} template unknowns"]
    for k, r in enumerate(results, start=1):
        nk = sum(1 for u in r.eliminated if u.startswith("K"))
        nl = sum(1 for u in r.eliminated if u.startswith("l"))
        doc["waves"].append(
            {"wave": k, "name": r.name, "triples": r.triples, "equations": r.equations, "consistent": r.consistent,
             "eliminated": len(r.eliminated), "eliminated_K": nk, "eliminated_l": nl,
             "inconsistent": [str(e) for e in r.inconsistent]}
        )
        lines.append(
            f"wave {k} ({r.name}): {r.triples} triples, {r.equations} equations, "
            + (f"eliminated {len(r.eliminated)} unknowns ({nk} K, {nl} l)" if r.consistent else f"INCONSISTENT ({len(r.inconsistent)} equations reduce to a nonzero constant)")
        )
        if not r.consistent:
            shown = r.inconsistent if args.format == "json" else r.inconsistent[:20]
            lines += [f"  {e} = 0" for e in shown]
            if len(r.inconsistent) > len(shown):
                lines.append(f"  ... {len(r.inconsistent) - len(shown)} more (use --format json for the full set)")
    if not results[-1].consistent:
        doc["status"] = "inconsistent"
        _out(args, doc, lines + ["result: FAIL (inconsistent system)"])
        return EXIT_FAIL
    lines.append(f"free unknowns: {len(free)} (set to 0)")
    doc["free"] = free
    if len(results) < 3 and custom is None:
        doc["status"] = "partial"
        _out(args, doc, lines + ["result: partial (later waves not run)"])
        return EXIT_OK
    pi = P.instantiate(assign)
    rep = verify_extension(pi, P, scale_normalize=_sn(args), solved=list(assign), free=free, jobs=args.jobs)
    for c in rep.checks():
        lines.append(f"  {c.name}: {'pass' if c.passed else 'FAIL'}  {c.detail}" + (f"  witness {c.witness}" if c.witness else ""))
    doc["checks"] = [c.as_dict() for c in rep.checks()]
    if args.emit_solution:
        Path(args.emit_solution).write_text("# variables: " + ", ".join(P.space.names) + "\n" + format_multivector(pi) + "\n")
        lines.append(f"solution written to {args.emit_solution}")
    ok = rep.passed
    doc["status"] = "pass" if ok else "fail"
    _out(args, doc, lines + [f"result: {'pass' if ok else 'FAIL'}"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo(args):
    from .demos import run_demo

    try:
        ok, text = run_demo(args.name, args.jobs, _sn(args), args.format, args.timing)
    except KeyError as e:
        raise InputError(str(e.args[0])) from e
    _emit(args, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_list_demos(args):
    from .demos import list_demos

    demos = list_demos()
    if args.format == "json":
        _emit(args, json.dumps([{"name": n, "description": d} for n, d in demos], indent=2) + "\n")
    else:
        _emit(args, "".join(f"{n:16s} {d}\n" for n, d in demos))
    return EXIT_OK


# parser ----------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for bracket computations")
    common.add_argument("--scale-normalize", choices=("on", "off"), default="on")
    common.add_argument("--timing", action="store_true", help="include wall time in reports")

    p = argparse.ArgumentParser(prog="poissonext", description="Exact Schouten calculus and Poisson extension checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check that a bivector is Poisson")
    s.add_argument("file")
    s.add_argument("--quotient", help="quotient presentation for the pullback check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("jacobiator", parents=[common], help="print [pi, pi]")
    s.add_argument("file")
    s.set_defaults(func=cmd_jacobiator)

    s = sub.add_parser("hilbert", parents=[common], help="Hilbert basis and ideal of V/Z_n")
    s.add_argument("n", type=int)
    s.add_argument("--rewrite", metavar="MONOMIAL")
    s.add_argument("--ideal", action="store_true")
    s.add_argument("--degrees", action="store_true")
    s.set_defaults(func=cmd_hilbert)

    s = sub.add_parser("pullback", parents=[common], help="pull a target polynomial back to the source")
    s.add_argument("poly")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--quotient")
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("resonance", parents=[common], help="resonant monomials for an eigenvalue list")
    s.add_argument("eigenvalues", help="comma-separated integers")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--max-degree", type=int, default=3)
    s.set_defaults(func=cmd_resonance)

    s = sub.add_parser("extend", parents=[common], help="solve the degree-2 extension problem")
    s.add_argument("n", type=int)
    s.add_argument("--waves", type=int, choices=(1, 2, 3), default=3)
    s.add_argument("--triples-file")
    s.add_argument("--template", choices=("reduced", "none"), default="reduced")
    s.add_argument("--emit-solution", metavar="FILE")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("demo", parents=[common], help="run a shipped demo")
    s.add_argument("name")
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("list-demos", parents=[common], help="list shipped demos")
    s.set_defaults(func=cmd_list_demos)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, StructuralError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
