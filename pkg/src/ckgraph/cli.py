"""Command-line surface: one subcommand per library operation, JSON in/out.

Inputs are file paths or inline JSON; element arguments additionally accept a
tiny expression sugar (`p:v`, `s:e`, `adj(...)`, `*`, `+`, parentheses) that
is desugared to an element before processing.  Output is deterministic for
identical inputs.  Exit codes: 0 success, 1 domain error, 2 I/O or parse
error; errors go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Optional

from . import algebra, graph, lattice, norms, rep
from .algebra import AlgebraError, Element
from .graph import Graph, GraphError
from .lattice import LatticeError
from .norms import NormError
from .rep import RepError

DOMAIN_ERRORS = (GraphError, AlgebraError, NormError, LatticeError, RepError)


class InputError(ValueError):
    """Unreadable or unparseable command input (exit code 2)."""


# -- input loading ---------------------------------------------------------------


def _load_text(arg: str) -> str:
    if os.path.exists(arg):
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg!r}: {exc}") from exc
    return arg


def _load_json(arg: str, what: str):
    text = _load_text(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON for {what}: {exc}") from exc


def load_graph(arg: str) -> Graph:
    return graph.graph_from_json(_load_json(arg, "graph"))


def load_ideal(arg: Optional[str], g: Graph) -> frozenset[str]:
    if arg is None:
        return frozenset()
    return graph.vertex_set_from_json(_load_json(arg, "ideal"), g, "ideal vertex set")


def load_set(arg: str, g: Graph) -> frozenset[str]:
    return graph.vertex_set_from_json(_load_json(arg, "vertex set"), g)


def load_element(arg: str, g: Graph) -> Element:
    text = _load_text(arg)
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad element JSON: {exc}") from exc
        return algebra.element_from_json(g, data)
    return parse_element_expression(g, stripped)


def load_family(arg: str) -> rep.CKFamily:
    return rep.family_from_json(_load_json(arg, "family"))


# -- element expression sugar --------------------------------------------------------

_TOKEN = re.compile(r"\s*(adj\b|[ps]:[A-Za-z0-9_.\-]+|[()*+])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise InputError(f"bad element expression near {text[pos:pos+12]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_element_expression(g: Graph, text: str) -> Element:
    """Desugar p:v / s:e / adj(...) / * / + into an element."""
    tokens = _tokenize(text)
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: Optional[str] = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise InputError("element expression ended unexpectedly")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise InputError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def parse_sum() -> Element:
        acc = parse_product()
        while peek() == "+":
            take("+")
            acc = acc + parse_product()
        return acc

    def parse_product() -> Element:
        acc = parse_atom()
        while peek() == "*":
            take("*")
            acc = acc * parse_atom()
        return acc

    def parse_atom() -> Element:
        tok = take()
        if tok == "(":
            inner = parse_sum()
            take(")")
            return inner
        if tok == "adj":
            take("(")
            inner = parse_sum()
            take(")")
            return inner.adjoint()
        if tok.startswith("p:"):
            return algebra.vertex_projection(g, tok[2:])
        if tok.startswith("s:"):
            return algebra.edge_generator(g, tok[2:])
        raise InputError(f"unexpected token {tok!r} in element expression")

    if not tokens:
        raise InputError("empty element expression")
    result = parse_sum()
    if pos != len(tokens):
        raise InputError(f"trailing tokens in element expression: {tokens[pos:]}")
    return result


# -- command handlers -------------------------------------------------------------------


def _graph_ideal(args) -> tuple[Graph, frozenset[str]]:
    g = load_graph(args.graph)
    return g, load_ideal(args.ideal, g)


def _path_json(p) -> object:
    return {"vertex": p.base} if p.is_vertex else list(p.edges)


def cmd_validate(args):
    return graph.graph_to_json(graph.validate(load_graph(args.graph)))


def cmd_paths(args):
    g = load_graph(args.graph)
    return {"n": args.n, "paths": [_path_json(p) for p in graph.paths_of_length(g, args.n)]}


def cmd_hereditary(args):
    g = load_graph(args.graph)
    return graph.vertex_set_to_json(graph.hereditary_closure(g, load_set(args.set, g)))


def cmd_saturate(args):
    g, V = _graph_ideal(args)
    return graph.vertex_set_to_json(graph.v_saturation(g, load_set(args.set, g), V))


def cmd_reduce(args):
    g, V = _graph_ideal(args)
    removed, g2, v2 = graph.reduction(g, V)
    return {
        "removed": graph.vertex_set_to_json(removed),
        "graph": graph.graph_to_json(g2),
        "ideal": graph.vertex_set_to_json(v2),
    }


def cmd_ideals(args):
    g, V = _graph_ideal(args)
    sets = lattice.enumerate_hereditary_saturated(g, V)
    return {"count": len(sets), "sets": [graph.vertex_set_to_json(f) for f in sets]}


def cmd_tpairs(args):
    g, V = _graph_ideal(args)
    report = lattice.enumerate_tpairs(g, V)
    if args.dot:
        return lattice.hasse_dot(report)
    return report.to_json()


def cmd_classify(args):
    g, V = _graph_ideal(args)
    return lattice.classify_lattice(g, V)


def cmd_decompose(args):
    g, V = _graph_ideal(args)
    dec = lattice.structure_decomposition(g, V, load_set(args.set, g))
    sub_g, sub_v = dec["sub"]
    quot_g, quot_v = dec["quot"]
    return {
        "sub": {"graph": graph.graph_to_json(sub_g), "ideal": graph.vertex_set_to_json(sub_v)},
        "quot": {"graph": graph.graph_to_json(quot_g), "ideal": graph.vertex_set_to_json(quot_v)},
        "saturation": graph.vertex_set_to_json(dec["saturation"]),
    }


def cmd_annihilator(args):
    g, V = _graph_ideal(args)
    return graph.vertex_set_to_json(lattice.annihilator(g, V))


def _elements(args, g: Graph, expected: int) -> list[Element]:
    given = args.element or []
    if len(given) != expected:
        raise InputError(f"this command needs exactly {expected} -a/--element argument(s)")
    return [load_element(a, g) for a in given]


def cmd_mul(args):
    g = load_graph(args.graph)
    a, b = _elements(args, g, 2)
    return algebra.element_to_json(algebra.star_splice(a, b))


def cmd_adjoint(args):
    g = load_graph(args.graph)
    (a,) = _elements(args, g, 1)
    return algebra.element_to_json(a.adjoint())


def cmd_tensor(args):
    g = load_graph(args.graph)
    (a,) = _elements(args, g, 1)
    return algebra.element_to_json(algebra.right_tensor(a, args.t))


def cmd_norm(args):
    g, V = _graph_ideal(args)
    (a,) = _elements(args, g, 1)
    return norms.seminorm_homogeneous(a, V).to_json()


def cmd_zero(args):
    g, V = _graph_ideal(args)
    (a,) = _elements(args, g, 1)
    return {"exact_zero": norms.is_zero(a, V)}


def cmd_bound(args):
    g, V = _graph_ideal(args)
    (a,) = _elements(args, g, 1)
    return {"bound": norms.norm_upper_bound(a, V)}


def cmd_check_family(args):
    g = load_graph(args.graph)
    return rep.check_family(load_family(args.family), g)


def cmd_coiso(args):
    g = load_graph(args.graph)
    return graph.vertex_set_to_json(rep.coisometricity_set(load_family(args.family), g))


def cmd_eval(args):
    g = load_graph(args.graph)
    fam = load_family(args.family)
    (a,) = _elements(args, g, 1)
    return {"dim": fam.dim, "matrix": rep.matrix_to_json(rep.evaluate(fam, a))}


def cmd_uniqueness(args):
    g, V = _graph_ideal(args)
    return rep.uniqueness_check(load_family(args.family), g, V)


def cmd_acyclic_dim(args):
    g, V = _graph_ideal(args)
    return {"dimension": rep.acyclic_dimension(g, V)}


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ckgraph",
        description="Exact computation in relative graph C*-algebras.",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="seed forwarded to randomized test tooling; library commands ignore it"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_, *, ideal=False, element=0, family=False, vset=False, extra=None):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-g", "--graph", required=True, help="graph JSON (file or inline)")
        if ideal:
            p.add_argument("-V", "--ideal", default=None, help="vertex set JSON (file or inline); default empty")
        if vset:
            p.add_argument("--set", required=True, help="vertex set JSON (file or inline)")
        if element:
            p.add_argument(
                "-a",
                "--element",
                action="append",
                help="element (file, inline JSON, or p:/s:/adj expression)",
            )
        if family:
            p.add_argument("-f", "--family", required=True, help="family JSON (file or inline)")
        if extra:
            extra(p)
        p.set_defaults(handler=handler)
        return p

    add("validate", cmd_validate, "validate a graph and echo its canonical JSON")
    add(
        "paths",
        cmd_paths,
        "enumerate the paths of one length",
        extra=lambda p: p.add_argument("-n", type=int, required=True, help="path length"),
    )
    add("hereditary", cmd_hereditary, "hereditary closure of a vertex set", vset=True)
    add("saturate", cmd_saturate, "V-saturation of a vertex set", ideal=True, vset=True)
    add("reduce", cmd_reduce, "strip the forced vertices and reduce the pair", ideal=True)
    add("ideals", cmd_ideals, "enumerate hereditary V-saturated vertex sets", ideal=True)
    def tpairs_flags(p):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="emit the report as JSON (default)")
        fmt.add_argument("--dot", action="store_true", help="emit the Hasse diagram as DOT")

    add(
        "tpairs",
        cmd_tpairs,
        "enumerate the gauge-invariant ideal pairs",
        ideal=True,
        extra=tpairs_flags,
    )
    add("classify", cmd_classify, "detect the simple-lattice cases", ideal=True)
    add("decompose", cmd_decompose, "ideal/quotient split along a hereditary set", ideal=True, vset=True)
    add("annihilator", cmd_annihilator, "complement vertex set of an ideal", ideal=True)
    add("mul", cmd_mul, "product of two elements (give -a twice)", element=2)
    add("adjoint", cmd_adjoint, "adjoint of an element", element=1)
    add(
        "tensor",
        cmd_tensor,
        "right tensoring of an element",
        element=1,
        extra=lambda p: p.add_argument("-t", type=int, default=1, help="tensor power (default 1)"),
    )
    add("norm", cmd_norm, "seminorm of a homogeneous element", ideal=True, element=1)
    add("zero", cmd_zero, "exact zero test", ideal=True, element=1)
    add("bound", cmd_bound, "norm upper bound over the grading", ideal=True, element=1)
    add("check-family", cmd_check_family, "relation report for a family", family=True)
    add("coiso", cmd_coiso, "coisometricity set of a family", family=True)
    add("eval", cmd_eval, "evaluate an element through a family", element=1, family=True)
    add("uniqueness", cmd_uniqueness, "gauge-invariant uniqueness certificate", ideal=True, family=True)
    add("acyclic-dim", cmd_acyclic_dim, "exact dimension for an acyclic graph", ideal=True)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.handler(args)
    except DOMAIN_ERRORS as exc:
        _emit_error(exc)
        return 1
    except (InputError, OSError) as exc:
        _emit_error(exc)
        return 2
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        json.dump(result, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _emit_error(exc: Exception) -> None:
    payload = {"error": {"kind": type(exc).__name__, "message": str(exc)}}
    json.dump(payload, sys.stderr)
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
