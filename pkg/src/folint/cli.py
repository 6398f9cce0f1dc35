"""Command-line interface: input parsing, subcommands, canonical reports.

Grammar for foliation files: one `key = expression` per line, keys among
field_extension, A, B, C; expressions over X, Y, Z (and t when an
extension is declared) with integer or p/q coefficients, operators
+ - * ^ and parentheses; `#` starts a comment; multiplication is always
explicit.  Reports are byte-stable: fixed key order, exact scalars only
(rationals as "p/q" strings), canonical polynomial rendering.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateFoliation, EulerViolation, FactorDegreeCap,
                     FolintError, InhomogeneousInput, NonIsolated, NotCoprime,
                     NotSquarefreeExtension, ParseError, UnequalDegrees,
                     UnsupportedExtension, ZeroPolynomial)
from .fields import FieldElement, NumberField, render_scalar
from .foliation import Foliation, classify, cota_test, singular_locus
from .forms import PROJ_VARS, ProjOneForm
from .integrate import (DegreeBound, IntegrabilityReport, certify_wedge,
                        find_first_integral)
from .poly import MultiPoly
from .resolution import Germ, germ_milnor, germ_tjurina, is_nodal, type_check_S
from .unipoly import DEFAULT_FACTOR_CAP, UniPoly

SCHEMA = "folint-report/1"

EXIT_OK = 0
EXIT_NO_BELOW_BOUND = 2
EXIT_INVALID_INPUT = 3
EXIT_UNSUPPORTED = 4


# -- tokenizer / parser -------------------------------------------------------


def _tokenize(line, lineno):
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and line[j].isdigit():
                j += 1
            num = int(line[i:j])
            if j < n and line[j] == "/" and j + 1 < n and line[j + 1].isdigit():
                j2 = j + 1
                while j2 < n and line[j2].isdigit():
                    j2 += 1
                den = int(line[j + 1 : j2])
                if den == 0:
                    raise ParseError("zero denominator", lineno, col)
                tokens.append(("num", Fraction(num, den), col))
                i = j2
            else:
                tokens.append(("num", Fraction(num), col))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(("ident", line[i:j], col))
            i = j
            continue
        if ch in "+-*^()=":
            tokens.append((ch, ch, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", lineno, col)
    return tokens


class _ExprParser:
    """Recursive descent for + - * ^ over numbers and identifiers."""

    def __init__(self, tokens, lineno, allowed):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0
        self.allowed = allowed

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", self.lineno,
                             self.tokens[-1][2] if self.tokens else 1)
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            kind, val, col = self.peek()
            raise ParseError(f"unexpected token {val!r}", self.lineno, col)
        return node

    def expr(self):
        tok = self.peek()
        if tok and tok[0] == "-":
            self.take()
            node = ("neg", self.term())
        else:
            node = self.term()
        while self.peek() and self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            node = (op, node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() and self.peek()[0] == "*":
            self.take()
            node = ("*", node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.peek() and self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or tok[1].denominator != 1 or tok[1] < 0:
                raise ParseError("exponent must be a non-negative integer",
                                 self.lineno, tok[2])
            node = ("pow", node, int(tok[1]))
        return node

    def atom(self):
        tok = self.take()
        kind, val, col = tok
        if kind == "num":
            return ("num", val)
        if kind == "ident":
            if val not in self.allowed:
                raise ParseError(
                    f"unknown identifier {val!r} (allowed: {', '.join(self.allowed)})",
                    self.lineno, col)
            return ("var", val)
        if kind == "(":
            node = self.expr()
            nxt = self.take()
            if nxt[0] != ")":
                raise ParseError("expected ')'", self.lineno, nxt[2])
            return node
        if kind == "-":
            return ("neg", self.atom())
        raise ParseError(f"unexpected token {val!r}", self.lineno, col)


def _eval_ast(node, vars, field, tconst):
    if node[0] == "num":
        return MultiPoly.const(vars, node[1], field)
    if node[0] == "var":
        if node[1] == "t":
            return MultiPoly.const(vars, tconst, field)
        return MultiPoly.variable(vars, node[1], field)
    if node[0] == "neg":
        return -_eval_ast(node[1], vars, field, tconst)
    if node[0] == "+":
        return _eval_ast(node[1], vars, field, tconst) + _eval_ast(node[2], vars, field, tconst)
    if node[0] == "-":
        return _eval_ast(node[1], vars, field, tconst) - _eval_ast(node[2], vars, field, tconst)
    if node[0] == "*":
        return _eval_ast(node[1], vars, field, tconst) * _eval_ast(node[2], vars, field, tconst)
    if node[0] == "pow":
        return _eval_ast(node[1], vars, field, tconst) ** node[2]
    raise AssertionError(node)


def parse_expression(text, vars, field=None, lineno=1):
    """One polynomial expression over the given variables."""
    allowed = tuple(vars) + (("t",) if field is not None else ())
    tokens = _tokenize(text, lineno)
    if not tokens:
        raise ParseError("empty expression", lineno, 1)
    ast = _ExprParser(tokens, lineno, allowed).parse()
    tconst = field.gen() if field is not None else None
    return _eval_ast(ast, vars, field, tconst)


@dataclass
class FoliationFile:
    field: object  # NumberField or None
    A: MultiPoly
    B: MultiPoly
    C: MultiPoly


def parse_foliation_file(text):
    """Parse `key = expression` lines into a validated FoliationFile."""
    assignments = {}
    order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        if len(tokens) < 3 or tokens[0][0] != "ident" or tokens[1][0] != "=":
            raise ParseError("expected `key = expression`", lineno, tokens[0][2])
        key = tokens[0][1]
        if key not in ("field_extension", "A", "B", "C"):
            raise ParseError(f"unknown key {key!r}", lineno, tokens[0][2])
        if key in assignments:
            raise ParseError(f"duplicate key {key!r}", lineno, tokens[0][2])
        assignments[key] = (tokens[2:], lineno)
        order.append(key)
    for key in ("A", "B", "C"):
        if key not in assignments:
            raise ParseError(f"missing entry {key!r}")
    field = None
    if "field_extension" in assignments:
        tokens, lineno = assignments["field_extension"]
        ast = _ExprParser(tokens, lineno, ("t",)).parse()
        up_mp = _eval_ast(ast, ("t",), None, None)
        up = UniPoly([up_mp.coeff((d,)) for d in range(up_mp.total_degree() + 1)])
        if up.degree() < 1:
            raise ParseError("field_extension must involve t", lineno, 1)
        if up.lc() != 1 or any(Fraction(c).denominator != 1 for c in up.coeffs):
            raise NotSquarefreeExtension(
                "field_extension must be monic with integer coefficients")
        if up.degree() == 1:
            field = None  # degree one: t is the rational number -c0
            tval = -up.coeffs[0]
        else:
            field = NumberField(up.coeffs, symbol="t")
            tval = None
    comps = {}
    for key in ("A", "B", "C"):
        tokens, lineno = assignments[key]
        allowed = ("X", "Y", "Z") + (("t",) if "field_extension" in assignments else ())
        ast = _ExprParser(tokens, lineno, allowed).parse()
        if field is not None:
            comps[key] = _eval_ast(ast, PROJ_VARS, field, field.gen())
        elif "field_extension" in assignments:
            comps[key] = _eval_ast(ast, PROJ_VARS, None, tval)
        else:
            comps[key] = _eval_ast(ast, PROJ_VARS, None, None)
    return FoliationFile(field, comps["A"], comps["B"], comps["C"])


def load_foliation(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    ff = parse_foliation_file(text)
    form = ProjOneForm.build(ff.A, ff.B, ff.C)
    return Foliation(form)


# -- canonical serialization ---------------------------------------------------


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FieldElement):
        return render_scalar(x)
    if isinstance(x, MultiPoly):
        return x.render()
    if isinstance(x, UniPoly):
        return x.render()
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


def render_report(payload, fmt="text"):
    """Canonical byte-stable rendering of a report payload."""
    payload = jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    lines = []

    def emit(key, value, depth):
        pad = "  " * depth
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, depth + 1)
        elif isinstance(value, list):
            lines.append(f"{pad}{key}:")
            for i, v in enumerate(value):
                emit(f"[{i}]", v, depth + 1)
        else:
            lines.append(f"{pad}{key}: {value}")

    for k, v in payload.items():
        emit(k, v, 0)
    return "\n".join(lines) + "\n"


def _input_echo(fol):
    A, B, C = fol.form.components()
    echo = {
        "A": A.render(),
        "B": B.render(),
        "C": C.render(),
        "degree": fol.r,
    }
    if fol.field is not None:
        echo["field_extension"] = UniPoly(fol.field.minpoly).render("t")
    if fol.form.normalization_note:
        echo["normalization"] = fol.form.normalization_note
    return echo


def _point_entry(p):
    entry = {
        "point": p.render(),
        "size": p.size,
        "milnor": p.milnor,
    }
    if p.eigen is not None:
        entry["eigenvalues"] = f"({p.eigen[0]}, {p.eigen[1]})"
    else:
        entry["eigenvalues"] = "irrational"
        if p.eigen_s is not None:
            entry["trace_sq_over_det"] = render_scalar(p.eigen_s)
    entry["classification"] = "non_reduced" if p.non_reduced else "reduced"
    return entry


# -- subcommands ------------------------------------------------------------------


def run_analyze(fol, args):
    payload = {"schema": SCHEMA, "command": "analyze", "input": _input_echo(fol)}
    locus = singular_locus(fol, args.factor_cap, args.jet_cap)
    cls = classify(fol, locus)
    n = cls.n
    payload["singular_classes"] = [_point_entry(p) for p in locus.points]
    payload["weighted_milnor_sum"] = locus.weighted_milnor_sum()
    payload["expected_sum"] = fol.r * fol.r + fol.r + 1
    payload["non_reduced_count"] = n
    payload["reduced_count"] = sum(p.size for p in cls.reduced)
    payload["cardinality_bound"] = {
        "r_plus_1": fol.r + 1,
        "n": n,
        "pass": cota_test(fol.r, n),
    }
    if cls.obstruction_flag:
        payload["irrational_ratio_obstruction"] = [p.render() for p in cls.irrational]
    return payload, EXIT_OK


def run_integrate(fol, args):
    payload = {"schema": SCHEMA, "command": "integrate", "input": _input_echo(fol)}
    report = find_first_integral(
        fol, DegreeBound(args.max_degree), parallel=args.parallel,
        factor_cap=args.factor_cap, jet_cap=args.jet_cap,
        colength_cap=args.colength_cap)
    payload["max_degree"] = args.max_degree
    payload["verdict"] = report.verdict
    code = EXIT_OK
    if report.verdict == "first_integral":
        payload["numerator"] = report.numerator.render()
        payload["denominator"] = report.denominator.render()
        payload["wedge_certificate"] = "zero"
        if report.solution is not None:
            payload["solution"] = {"d": report.solution.d,
                                   "k": list(report.solution.k)}
        payload["candidates_tried"] = report.candidates_tried
    elif report.verdict == "proven_no":
        payload["obstruction"] = jsonable(report.obstruction)
    elif report.verdict == "no_below_bound":
        payload["bound"] = args.max_degree
        code = EXIT_NO_BELOW_BOUND
    else:
        payload["reason"] = report.reason
        code = EXIT_UNSUPPORTED
    if report.diagnostics:
        payload["diagnostics"] = jsonable(report.diagnostics)
    return payload, code


def run_certify(fol, args):
    payload = {"schema": SCHEMA, "command": "certify", "input": _input_echo(fol)}
    F = parse_expression(args.numerator, PROJ_VARS, fol.field)
    G = parse_expression(args.denominator, PROJ_VARS, fol.field)
    payload["numerator"] = F.render()
    payload["denominator"] = G.render()
    cert = certify_wedge(F, G, fol.form)
    payload["wedge_certificate"] = "zero" if cert.zero else "nonzero"
    if not cert.zero:
        payload["witness"] = {"component": cert.component, "monomial": cert.witness}
    return payload, EXIT_OK


def run_germ(args):
    payload = {"schema": SCHEMA, "command": "germ"}
    g = parse_expression(args.expression, ("u", "v"), None)
    if args.times:
        g = g * parse_expression(args.times, ("u", "v"), None)
    germ = Germ(g, note="cli input")
    payload["germ"] = g.render()
    payload["multiplicity"] = g.order()
    payload["milnor"] = germ_milnor(germ, args.colength_cap)
    payload["tjurina"] = germ_tjurina(germ, args.colength_cap)
    nod, detail = is_nodal(germ)
    payload["nodal"] = {"yes": nod}
    if nod:
        payload["nodal"]["n"], payload["nodal"]["m"] = detail
    else:
        payload["nodal"]["reason"] = detail
    if args.s_type:
        try:
            a, b, k = (int(x) for x in args.s_type.split(","))
        except ValueError:
            raise ParseError("--s-type expects three integers a,b,k")
        ok, detail = type_check_S(germ, a, b, k, jet_cap=args.colength_cap,
                                  factor_cap=args.factor_cap)
        payload["s_type"] = {"parameters": [a, b, k], "match": ok}
        if not ok:
            payload["s_type"]["reason"] = detail
    return payload, EXIT_OK


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="folint",
        description="Decide rational first integrals of plane algebraic "
                    "foliations, with exact certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="foliation file (key = expression lines)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--jet-cap", type=int, default=20,
                       help="truncation order cap for Milnor numbers")
        p.add_argument("--colength-cap", type=int, default=24,
                       help="truncation order cap for germ colengths")
        p.add_argument("--factor-cap", type=int, default=DEFAULT_FACTOR_CAP,
                       help="degree cap for univariate factorization")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (breaks byte stability)")

    p = sub.add_parser("analyze", help="singular locus and classification")
    common(p)
    p = sub.add_parser("integrate", help="search for a rational first integral")
    common(p)
    p.add_argument("--max-degree", type=int, required=True,
                   help="exclusive upper bound t on the pencil degree")
    p.add_argument("--parallel", type=int, default=1,
                   help="worker threads for candidate evaluation")
    p = sub.add_parser("certify", help="check the wedge identity for F/G")
    common(p)
    p.add_argument("--numerator", required=True)
    p.add_argument("--denominator", required=True)
    p = sub.add_parser("germ", help="invariants of a plane curve germ in u, v")
    p.add_argument("expression", help="polynomial in u and v")
    p.add_argument("--times", default=None,
                   help="multiply by a second germ before analysis")
    p.add_argument("--s-type", default=None, metavar="a,b,k",
                   help="test for the topological type of x^(ka)+y^(kb)")
    common(p, with_file=False)
    return ap


def run_subcommand(argv):
    """Parse argv, run, and return (payload, exit_code, format)."""
    args = build_arg_parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    started = time.monotonic()
    try:
        if args.command == "germ":
            payload, code = run_germ(args)
        else:
            fol = load_foliation(args.file)
            if args.command == "analyze":
                payload, code = run_analyze(fol, args)
            elif args.command == "integrate":
                payload, code = run_integrate(fol, args)
            else:
                payload, code = run_certify(fol, args)
    except (ParseError, InhomogeneousInput, EulerViolation,
            NotSquarefreeExtension, NotCoprime, UnequalDegrees,
            ZeroPolynomial, OSError) as exc:
        return ({"schema": SCHEMA, "command": args.command, "error": str(exc),
                 "error_type": type(exc).__name__}, EXIT_INVALID_INPUT, fmt)
    except (UnsupportedExtension, FactorDegreeCap, DegenerateFoliation,
            NonIsolated, FolintError) as exc:
        return ({"schema": SCHEMA, "command": args.command, "error": str(exc),
                 "error_type": type(exc).__name__}, EXIT_UNSUPPORTED, fmt)
    if args.timings:
        payload["timings"] = {
            "total_ms": str(int((time.monotonic() - started) * 1000))
        }
    return payload, code, fmt


def main(argv=None):
    args = sys.argv[1:] if argv is None else argv
    payload, code, fmt = run_subcommand(args)
    sys.stdout.write(render_report(payload, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
