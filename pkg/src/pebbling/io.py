"""Reading and writing DAGs as edge lists or a small subset of DOT.

Edge list: one ``<src> <dst>`` pair per line; a line holding a single name
declares a vertex (so isolated vertices survive a round trip); ``#`` starts
a comment. Names are any non-whitespace tokens and receive dense ids in
order of first appearance.

DOT subset: ``digraph [name] { ... }`` with node statements (``a;``) and
edge statements (``a -> b -> c;``). Attribute lists are ignored, as are
``graph``/``node``/``edge`` default statements and comments.
"""

from __future__ import annotations

import re

from pebbling.errors import CycleError, ParseError
from pebbling.graph import Dag


class _Builder:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}
        self.edges: list[tuple[int, int]] = []
        self.seen: set[tuple[int, int]] = set()

    def vertex(self, name: str) -> int:
        return self.ids.setdefault(name, len(self.ids))

    def edge(self, line: int, a: str, b: str) -> None:
        if a == b:
            raise ParseError(line, f"self-loop on {a!r}")
        e = (self.vertex(a), self.vertex(b))
        if e in self.seen:
            raise ParseError(line, f"duplicate edge {a} -> {b}")
        self.seen.add(e)
        self.edges.append(e)

    def build(self) -> Dag:
        if not self.ids:
            raise ParseError(0, "graph has no vertices")
        names = {i: name for name, i in self.ids.items()}
        try:
            return Dag(range(len(self.ids)), self.edges, names)
        except CycleError as exc:
            raise CycleError([names[v] for v in exc.cycle]) from None


def parse_edge_list(text: str) -> Dag:
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        if len(tok) == 1:
            b.vertex(tok[0])
        elif len(tok) == 2:
            b.edge(lineno, tok[0], tok[1])
        else:
            raise ParseError(lineno, f"expected 1 or 2 names, got {len(tok)}")
    return b.build()


_DOT_TOKEN = re.compile(
    r'"(?:[^"\\]|\\.)*"|->|--|[{};=\[\],]|[A-Za-z0-9_.]+|\S'
)
_DOT_COMMENT = re.compile(r"//[^\n]*|#[^\n]*|/\*.*?\*/", re.S)


def _dot_tokens(text: str):
    # Blank out comments but keep newlines so line numbers stay right.
    text = _DOT_COMMENT.sub(lambda m: re.sub(r"[^\n]", " ", m.group()), text)
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in _DOT_TOKEN.finditer(line):
            tok = m.group()
            if tok.startswith('"'):
                yield lineno, "id", tok[1:-1].replace('\\"', '"')
            elif re.fullmatch(r"[A-Za-z0-9_.]+", tok):
                yield lineno, "id", tok
            else:
                yield lineno, tok, tok


def parse_dot(text: str) -> Dag:
    toks = list(_dot_tokens(text))
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (toks[-1][0] if toks else 0, "eof", "")

    def take(kind=None):
        nonlocal pos
        tok = peek()
        if kind is not None and tok[1] != kind:
            raise ParseError(tok[0], f"expected {kind!r}, found {tok[2] or 'end of input'!r}")
        pos += 1
        return tok

    line, kind, val = take("id")
    if val.lower() == "strict":
        line, kind, val = take("id")
    if val.lower() != "digraph":
        raise ParseError(line, "only 'digraph' is supported")
    if peek()[1] == "id":
        take()
    take("{")
    b = _Builder()
    while peek()[1] != "}":
        line, kind, val = peek()
        if kind == "eof":
            raise ParseError(line, "missing '}'")
        if kind == ";":
            take()
            continue
        if kind != "id":
            raise ParseError(line, f"unexpected {val!r}")
        take()
        if val.lower() in ("graph", "node", "edge") and peek()[1] == "[":
            _skip_attrs(take, peek)
            continue
        if peek()[1] == "=":
            take()
            take("id")
            continue
        chain = [(line, val)]
        while peek()[1] in ("->", "--"):
            if take()[1] == "--":
                raise ParseError(line, "undirected edge '--' in a digraph")
            chain.append(take("id")[::2])
        if peek()[1] == "[":
            _skip_attrs(take, peek)
        if len(chain) == 1:
            b.vertex(val)
        for (la, a), (lb, bname) in zip(chain, chain[1:]):
            b.edge(lb, a, bname)
    take("}")
    return b.build()


def _skip_attrs(take, peek) -> None:
    take("[")
    while peek()[1] not in ("]", "eof"):
        take()
    take("]")


def parse_dag(text: str, fmt: str | None = None) -> Dag:
    """Parse ``text`` as ``"edges"`` or ``"dot"``; by default DOT is chosen
    when the first token is ``digraph`` or ``strict``."""
    if fmt is None:
        first = re.search(r"[^\s{]+", _DOT_COMMENT.sub(" ", text))
        fmt = "dot" if first and first.group().lower() in ("digraph", "strict") else "edges"
    if fmt == "dot":
        return parse_dot(text)
    if fmt == "edges":
        return parse_edge_list(text)
    raise ValueError(f"unknown format {fmt!r}")


def emit_edge_list(dag: Dag) -> str:
    """Every vertex declared in id order, then every edge; parsing the
    result gives back an equal DAG when ids are ``0..n-1``."""
    lines = [dag.name(v) for v in dag.vertices]
    lines += [f"{dag.name(u)} {dag.name(v)}" for u, v in dag.edges()]
    return "\n".join(lines) + "\n"


def emit_dot(dag: Dag, name: str = "G") -> str:
    def q(v: int) -> str:
        s = dag.name(v)
        return s if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+", s) else '"' + s.replace('"', '\\"') + '"'

    body = [f"  {q(v)};" for v in dag.vertices]
    body += [f"  {q(u)} -> {q(v)};" for u, v in dag.edges()]
    return f"digraph {name} {{\n" + "\n".join(body) + "\n}\n"


def vertex_ids(dag: Dag) -> dict[str, int]:
    """Name to id map, for reading schedules written with names."""
    return {dag.name(v): v for v in dag.vertices}
