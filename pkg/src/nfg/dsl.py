"""Textual description language for tensors, graphs, and compound expressions.

Grammar (EBNF sketch)::

    doc         := stmt*
    stmt        := tensor_decl | graph_decl | expr_decl
    tensor_decl := "tensor" NAME "[" dims "]" "=" value_list
                 | "tensor" NAME "=" builtin
    builtin     := "eps(" INT ")" | "delta(" INT ")" | "e(" INT "," INT ")"
    graph_decl  := "graph" NAME "{" vertex* edge* interface? "}"
    vertex      := "vertex" NAME ":" TENSORNAME
    edge        := "edge" NAME "(" port "," port ")"
                 | "dangling" NAME "(" port ")"
    port        := VERTEXNAME "." SLOT          -- slots are 1-based
    interface   := "interface" "(" NAME ("," NAME)* ")"
    expr_decl   := "let" NAME "=" expr
    expr        := term (("+" | "-") term)*
    term        := [RATIONAL "*"] GRAPHNAME

Rationals are written p/q or as integers; comments run from "#" to end of
line.  Every error, lexical, syntactic, or semantic, carries the 1-based
line and column of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from . import scalars
from .algebra import CompoundNfg, add_nfgs, as_compound, scale_nfg, sub_nfgs
from .builtins import delta2, delta_point, levi_civita
from .graph import Nfg, NfgError
from .scalars import EXACT
from .tensor import Tensor, TensorError


class DslError(Exception):
    """Parse or semantic error with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# -- tokens -------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, NUMBER, SYM, EOF
    text: str
    line: int
    col: int


_SYMBOLS = set("[]{}(),.:=+-*/")


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            tokens.append(Token("NAME", text, line, col))
            col += len(text)
            continue
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            text = source[start:i]
            tokens.append(Token("NUMBER", text, line, col))
            col += len(text)
            continue
        if ch in _SYMBOLS:
            tokens.append(Token("SYM", ch, line, col))
            i += 1
            col += 1
            continue
        raise DslError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# -- document model -----------------------------------------------------------


@dataclass
class TensorDecl:
    name: str
    dims: Optional[List[int]]      # None for the builtin form
    values: Optional[List[str]]    # canonical rational strings
    builtin: Optional[Tuple] = None  # ("eps", n) | ("delta", n) | ("e", i, n)


@dataclass
class PortAst:
    vertex: str
    slot: int  # 1-based as written


@dataclass
class VertexDecl:
    name: str
    tensor: str


@dataclass
class EdgeDecl:
    name: str
    ports: Tuple[PortAst, PortAst]


@dataclass
class DanglingDecl:
    name: str
    port: PortAst


@dataclass
class GraphDecl:
    name: str
    vertices: List[VertexDecl]
    links: List[Union[EdgeDecl, DanglingDecl]]
    interface: Optional[List[str]]


@dataclass
class ExprTerm:
    coef: str  # canonical rational string
    graph: str


@dataclass
class ExprDecl:
    name: str
    terms: List[ExprTerm]


Statement = Union[TensorDecl, GraphDecl, ExprDecl]


@dataclass
class DslDocument:
    statements: List[Statement]
    tensors: Dict[str, Tensor] = field(default_factory=dict, compare=False)
    graphs: Dict[str, Nfg] = field(default_factory=dict, compare=False)
    compounds: Dict[str, CompoundNfg] = field(default_factory=dict, compare=False)
    backend: str = field(default=EXACT, compare=False)


def _canonical_rational(text: str) -> str:
    return str(scalars.rat(text))


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: List[Token], backend: str):
        self.tokens = tokens
        self.pos = 0
        self.backend = backend
        self.doc = DslDocument([], backend=backend)

    # token utilities ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise DslError(message, tok.line, tok.col)

    def expect_sym(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != "SYM" or tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    def expect_name(self, what: str = "a name") -> Token:
        tok = self.peek()
        if tok.kind != "NAME":
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.next()

    def expect_int(self) -> Tuple[int, Token]:
        tok = self.peek()
        if tok.kind != "NUMBER":
            self.error(f"expected an integer, found {tok.text or 'end of input'!r}")
        self.next()
        return int(tok.text), tok

    def at_sym(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYM" and tok.text == text

    def parse_rational(self) -> str:
        neg = False
        if self.at_sym("-"):
            self.next()
            neg = True
        num, tok = self.expect_int()
        text = tok.text
        if self.at_sym("/"):
            self.next()
            den, dtok = self.expect_int()
            if den == 0:
                self.error("zero denominator", dtok)
            text = f"{text}/{den}"
        if neg:
            text = "-" + text
        return _canonical_rational(text)

    # statements ----------------------------------------------------------

    def parse_document(self) -> DslDocument:
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind != "NAME":
                self.error(f"expected a statement, found {tok.text!r}")
            if tok.text == "tensor":
                self.parse_tensor_decl()
            elif tok.text == "graph":
                self.parse_graph_decl()
            elif tok.text == "let":
                self.parse_expr_decl()
            else:
                self.error(f"expected 'tensor', 'graph' or 'let', found {tok.text!r}", tok)
        return self.doc

    def _declare(self, name_tok: Token) -> str:
        name = name_tok.text
        doc = self.doc
        if name in doc.tensors or name in doc.graphs or name in doc.compounds:
            self.error(f"name {name!r} already defined", name_tok)
        return name

    def parse_tensor_decl(self) -> None:
        self.next()  # 'tensor'
        name_tok = self.expect_name("a tensor name")
        name = self._declare(name_tok)
        if self.at_sym("["):
            self.next()
            dims: List[int] = []
            if not self.at_sym("]"):
                while True:
                    d, dtok = self.expect_int()
                    if d <= 0:
                        self.error("alphabet sizes must be positive", dtok)
                    dims.append(d)
                    if self.at_sym(","):
                        self.next()
                        continue
                    break
            self.expect_sym("]")
            eq_tok = self.expect_sym("=")
            values = [self.parse_rational()]
            while self.at_sym(","):
                self.next()
                values.append(self.parse_rational())
            expected = 1
            for d in dims:
                expected *= d
            if len(values) != expected:
                self.error(
                    f"expected {expected} values for shape {dims}, got {len(values)}",
                    eq_tok,
                )
            decl = TensorDecl(name, dims, values)
            raw = [scalars.rat(v) for v in values]
            if self.backend == EXACT:
                tensor = Tensor.from_values(tuple(dims), raw, EXACT)
            else:
                tensor = Tensor.from_values(tuple(dims), [float(v) for v in raw], "f64")
        else:
            self.expect_sym("=")
            fn_tok = self.expect_name("a builtin name")
            self.expect_sym("(")
            if fn_tok.text == "eps":
                n, ntok = self.expect_int()
                if n < 1:
                    self.error("eps(n) needs n >= 1", ntok)
                builtin = ("eps", n)
                try:
                    tensor = levi_civita(n, self.backend)
                except ValueError as exc:
                    self.error(str(exc), ntok)
            elif fn_tok.text == "delta":
                n, ntok = self.expect_int()
                if n < 1:
                    self.error("delta(n) needs n >= 1", ntok)
                builtin = ("delta", n)
                tensor = delta2(n, self.backend)
            elif fn_tok.text == "e":
                i, itok = self.expect_int()
                self.expect_sym(",")
                n, _ = self.expect_int()
                if not (1 <= i <= n):
                    self.error(f"e(i,n) needs 1 <= i <= n, got i={i}, n={n}", itok)
                builtin = ("e", i, n)
                tensor = delta_point(n, i, self.backend)
            else:
                self.error(f"unknown builtin {fn_tok.text!r}", fn_tok)
            self.expect_sym(")")
            decl = TensorDecl(name, None, None, builtin)
        self.doc.statements.append(decl)
        self.doc.tensors[name] = tensor

    def parse_port(self, graph: Nfg, vertex_names: Dict[str, str]) -> Tuple[PortAst, Tuple[str, int], Token]:
        vtok = self.expect_name("a vertex name")
        if vtok.text not in vertex_names:
            self.error(f"undefined vertex {vtok.text!r}", vtok)
        self.expect_sym(".")
        slot, stok = self.expect_int()
        deg = graph.vertices[vtok.text].tensor.rank
        if not (1 <= slot <= deg):
            self.error("slot out of range", stok)
        return PortAst(vtok.text, slot), (vtok.text, slot - 1), stok

    def parse_graph_decl(self) -> None:
        self.next()  # 'graph'
        name_tok = self.expect_name("a graph name")
        name = self._declare(name_tok)
        self.expect_sym("{")
        graph = Nfg()
        vertices: List[VertexDecl] = []
        links: List[Union[EdgeDecl, DanglingDecl]] = []
        interface: Optional[List[str]] = None
        vertex_names: Dict[str, str] = {}
        dangling_names: List[str] = []
        seen_link = False
        while not self.at_sym("}"):
            tok = self.peek()
            if tok.kind != "NAME":
                self.error(f"expected a graph item, found {tok.text or 'end of input'!r}")
            if tok.text == "vertex":
                if seen_link or interface is not None:
                    self.error("vertex declarations must precede edges", tok)
                self.next()
                vtok = self.expect_name("a vertex name")
                if vtok.text in vertex_names:
                    self.error(f"duplicate vertex {vtok.text!r}", vtok)
                self.expect_sym(":")
                ttok = self.expect_name("a tensor name")
                if ttok.text not in self.doc.tensors:
                    self.error(f"undefined tensor {ttok.text!r}", ttok)
                graph.add_vertex(self.doc.tensors[ttok.text], name=vtok.text)
                vertex_names[vtok.text] = ttok.text
                vertices.append(VertexDecl(vtok.text, ttok.text))
            elif tok.text == "edge":
                if interface is not None:
                    self.error("edges must precede the interface", tok)
                seen_link = True
                self.next()
                etok = self.expect_name("an edge name")
                if etok.text in graph.edges:
                    self.error(f"duplicate edge {etok.text!r}", etok)
                self.expect_sym("(")
                ast_a, port_a, tok_a = self.parse_port(graph, vertex_names)
                self.expect_sym(",")
                ast_b, port_b, tok_b = self.parse_port(graph, vertex_names)
                self.expect_sym(")")
                try:
                    graph.connect(port_a, port_b, name=etok.text)
                except NfgError as exc:
                    self.error(str(exc), etok)
                links.append(EdgeDecl(etok.text, (ast_a, ast_b)))
            elif tok.text == "dangling":
                if interface is not None:
                    self.error("dangling edges must precede the interface", tok)
                seen_link = True
                self.next()
                etok = self.expect_name("an edge name")
                if etok.text in graph.edges:
                    self.error(f"duplicate edge {etok.text!r}", etok)
                self.expect_sym("(")
                ast_p, port, _ = self.parse_port(graph, vertex_names)
                self.expect_sym(")")
                try:
                    graph.add_dangling(port, name=etok.text)
                except NfgError as exc:
                    self.error(str(exc), etok)
                dangling_names.append(etok.text)
                links.append(DanglingDecl(etok.text, ast_p))
            elif tok.text == "interface":
                if interface is not None:
                    self.error("duplicate interface", tok)
                self.next()
                self.expect_sym("(")
                order = []
                while True:
                    ntok = self.expect_name("a dangling edge name")
                    if ntok.text not in dangling_names:
                        self.error(f"{ntok.text!r} is not a dangling edge", ntok)
                    if ntok.text in order:
                        self.error(f"duplicate interface entry {ntok.text!r}", ntok)
                    order.append(ntok.text)
                    if self.at_sym(","):
                        self.next()
                        continue
                    break
                self.expect_sym(")")
                if sorted(order) != sorted(dangling_names):
                    self.error("interface must list every dangling edge", tok)
                graph.set_interface(order)
                interface = order
            else:
                self.error(
                    f"expected 'vertex', 'edge', 'dangling' or 'interface', found {tok.text!r}",
                    tok,
                )
        self.expect_sym("}")
        violations = graph.validate()
        if violations:
            self.error(f"invalid graph {name!r}: {violations[0]}", name_tok)
        self.doc.statements.append(GraphDecl(name, vertices, links, interface))
        self.doc.graphs[name] = graph.freeze()

    def _resolve_graph(self, tok: Token) -> CompoundNfg:
        if tok.text in self.doc.graphs:
            return as_compound(self.doc.graphs[tok.text])
        if tok.text in self.doc.compounds:
            return self.doc.compounds[tok.text]
        self.error(f"undefined graph {tok.text!r}", tok)

    def parse_expr_decl(self) -> None:
        self.next()  # 'let'
        name_tok = self.expect_name("an expression name")
        name = self._declare(name_tok)
        self.expect_sym("=")
        terms: List[ExprTerm] = []

        def parse_term(sign: int) -> None:
            coef = "1"
            tok = self.peek()
            if tok.kind == "NUMBER" or (tok.kind == "SYM" and tok.text == "-"):
                coef = self.parse_rational()
                self.expect_sym("*")
            gtok = self.expect_name("a graph name")
            compound = self._resolve_graph(gtok)
            lam = scalars.rat(coef) * sign
            if terms and self._interface_of(terms[0].graph) != compound.interface:
                self.error(
                    f"interface mismatch: {gtok.text!r} has {compound.interface}",
                    gtok,
                )
            terms.append(ExprTerm(str(lam), gtok.text))

        parse_term(1)
        while self.at_sym("+") or self.at_sym("-"):
            op = self.next().text
            parse_term(1 if op == "+" else -1)

        compound = None
        for term in terms:
            part = scale_nfg(
                self._resolve_graph(Token("NAME", term.graph, name_tok.line, name_tok.col)),
                _coef_value(self.backend, term.coef),
            )
            compound = part if compound is None else add_nfgs(compound, part)
        self.doc.statements.append(ExprDecl(name, terms))
        self.doc.compounds[name] = compound

    def _interface_of(self, graph_name: str) -> Tuple[int, ...]:
        if graph_name in self.doc.graphs:
            return self.doc.graphs[graph_name].interface_signature()
        return self.doc.compounds[graph_name].interface


def _coef_value(backend: str, coef: str):
    v = scalars.rat(coef)
    return v if backend == EXACT else float(v)


def parse(source: str, backend: str = EXACT) -> DslDocument:
    """Parse and semantically elaborate a DSL document."""
    return _Parser(tokenize(source), backend).parse_document()


# -- serialization ------------------------------------------------------------


def _fmt_term(term: ExprTerm, first: bool) -> str:
    coef = scalars.rat(term.coef)
    if first:
        if coef == 1:
            return term.graph
        return f"{coef}*{term.graph}"
    if coef < 0:
        mag = -coef
        body = term.graph if mag == 1 else f"{mag}*{term.graph}"
        return f" - {body}"
    body = term.graph if coef == 1 else f"{coef}*{term.graph}"
    return f" + {body}"


def serialize(doc: DslDocument) -> str:
    """Canonical text: first-definition order, normalized whitespace.

    parse(serialize(d)) is structurally identical to d, and serialization is
    idempotent.
    """
    lines: List[str] = []
    for stmt in doc.statements:
        if isinstance(stmt, TensorDecl):
            if stmt.builtin is not None:
                fn = stmt.builtin[0]
                args = ",".join(str(a) for a in stmt.builtin[1:])
                lines.append(f"tensor {stmt.name} = {fn}({args})")
            else:
                dims = ",".join(str(d) for d in stmt.dims)
                vals = ", ".join(stmt.values)
                lines.append(f"tensor {stmt.name} [{dims}] = {vals}")
        elif isinstance(stmt, GraphDecl):
            lines.append(f"graph {stmt.name} {{")
            for v in stmt.vertices:
                lines.append(f"  vertex {v.name}: {v.tensor}")
            for link in stmt.links:
                if isinstance(link, EdgeDecl):
                    a, b = link.ports
                    lines.append(
                        f"  edge {link.name}({a.vertex}.{a.slot}, {b.vertex}.{b.slot})"
                    )
                else:
                    p = link.port
                    lines.append(f"  dangling {link.name}({p.vertex}.{p.slot})")
            if stmt.interface is not None:
                lines.append("  interface(" + ", ".join(stmt.interface) + ")")
            lines.append("}")
        elif isinstance(stmt, ExprDecl):
            body = "".join(
                _fmt_term(term, i == 0) for i, term in enumerate(stmt.terms)
            )
            lines.append(f"let {stmt.name} = {body}")
    return "\n".join(lines) + ("\n" if lines else "")
