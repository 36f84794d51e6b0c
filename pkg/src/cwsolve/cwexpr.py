"""The k-expression term language: parse, evaluate, validate, generate.

Expression files are s-expressions with a one-line header::

    cwexpr k=3
    (add 1 2 (u (v a 2) (ren 1 2 (v b))))   ; comments run to end of line

The four node kinds are Introduce ``(v NAME [WEIGHT])``, Relabel
``(ren I J e)``, AddEdges ``(add I J e)`` and Union ``(u e e)``.  Introduce
always labels its vertex 1; a missing weight defaults to 1.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterator

NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class ExpressionError(ValueError):
    """Syntax or structural problem in a k-expression."""


class PartiallyRedundantError(ExpressionError):
    """An AddEdges node re-adds some but not all of its cross edges."""


class NotIrredundantError(ExpressionError):
    """Solvers require every add to be applied before any of its edges exist."""


@dataclass(frozen=True)
class Introduce:
    name: str
    weight: int = 1


@dataclass(frozen=True)
class Relabel:
    i: int
    j: int
    child: "Node"


@dataclass(frozen=True)
class AddEdges:
    i: int
    j: int
    child: "Node"


@dataclass(frozen=True)
class Union:
    left: "Node"
    right: "Node"


Node = Introduce | Relabel | AddEdges | Union


@dataclass(frozen=True)
class CwExpression:
    k: int
    root: Node


@dataclass
class LabeledGraph:
    """Vertex-weighted graph with an optional labeling (filled by evaluate)."""

    weights: dict[str, int]
    edges: set[tuple[str, str]]
    labels: dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.weights)

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def neighbors(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.weights}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Traversal helpers (iterative; expression trees can be thousands deep).

def iter_postorder(root: Node) -> Iterator[Node]:
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, seen = stack.pop()
        if seen:
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, (Relabel, AddEdges)):
            stack.append((node.child, False))
        elif isinstance(node, Union):
            stack.append((node.right, False))
            stack.append((node.left, False))


def iter_preorder(root: Node) -> Iterator[Node]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (Relabel, AddEdges)):
            stack.append(node.child)
        elif isinstance(node, Union):
            stack.append(node.right)
            stack.append(node.left)


# ---------------------------------------------------------------------------
# Parsing / serialization.

def _tokenize(text: str):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c in "()":
            yield (c, line, col)
            col += 1
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "();":
            j += 1
        yield (text[i:j], line, col)
        col += j - i
        i = j


def parse_expression(text: str) -> CwExpression:
    """Parse the file format (header + one s-expression)."""
    lines = text.splitlines()
    header_idx = None
    for idx, raw in enumerate(lines):
        stripped = raw.split(";", 1)[0].strip()
        if stripped:
            header_idx = idx
            break
    if header_idx is None:
        raise ExpressionError("empty expression file")
    m = re.match(r"cwexpr\s+k=(\d+)\s*\Z", lines[header_idx].split(";", 1)[0].strip())
    if not m:
        raise ExpressionError(f"line {header_idx + 1}: expected header 'cwexpr k=<K>'")
    k = int(m.group(1))
    if k < 1:
        raise ExpressionError("declared k must be at least 1")
    body = "\n" * (header_idx + 1) + "\n".join(lines[header_idx + 1:])
    tokens = list(_tokenize(body))
    pos = 0

    def err(msg: str, tok=None):
        if tok is None:
            loc = "end of input" if pos >= len(tokens) else None
            tok = tokens[pos] if loc is None else None
        if tok is None:
            raise ExpressionError(f"syntax error: {msg} at end of input")
        raise ExpressionError(f"line {tok[1]} col {tok[2]}: {msg}")

    def take():
        nonlocal pos
        if pos >= len(tokens):
            where = f"line {tokens[-1][1]}" if tokens else "empty input"
            raise ExpressionError(
                f"syntax error: unexpected end of input ({where})")
        tok = tokens[pos]
        pos += 1
        return tok

    def expect(value: str):
        tok = take()
        if tok[0] != value:
            err(f"expected {value!r}, got {tok[0]!r}", tok)

    def parse_int(tok) -> int:
        if not re.match(r"\d+\Z", tok[0]):
            err(f"expected an integer, got {tok[0]!r}", tok)
        return int(tok[0])

    def parse_label(tok) -> int:
        val = parse_int(tok)
        if not 1 <= val <= k:
            err(f"label {val} outside 1..{k}", tok)
        return val

    seen_names: set[str] = set()

    def parse_leaf() -> Node:
        name_tok = take()
        if not NAME_RE.match(name_tok[0]):
            err(f"bad vertex name {name_tok[0]!r}", name_tok)
        if name_tok[0] in seen_names:
            err(f"duplicate vertex name {name_tok[0]!r}", name_tok)
        seen_names.add(name_tok[0])
        nxt = take()
        if nxt[0] == ")":
            return Introduce(name_tok[0])
        weight = parse_int(nxt)
        expect(")")
        return Introduce(name_tok[0], weight)

    # Frames carry unfinished operators; explicit stack so nesting depth is
    # not limited by the interpreter's recursion limit.
    stack: list[list] = []
    node: Node | None = None
    while True:
        expect("(")
        head = take()
        if head[0] == "v":
            node = parse_leaf()
        elif head[0] in ("ren", "add", "u"):
            if head[0] == "u":
                stack.append(["u", None])
            else:
                it, jt = take(), take()
                i, j = parse_label(it), parse_label(jt)
                if i == j:
                    err(f"'{head[0]}' needs two distinct labels", jt)
                stack.append([head[0], i, j])
            continue
        else:
            err(f"unknown operator {head[0]!r}", head)
        # a node is complete: fold it into pending frames
        while stack:
            frame = stack[-1]
            if frame[0] == "u" and frame[1] is None:
                frame[1] = node
                node = None
                break
            expect(")")
            if frame[0] == "u":
                node = Union(frame[1], node)
            elif frame[0] == "ren":
                node = Relabel(frame[1], frame[2], node)
            else:
                node = AddEdges(frame[1], frame[2], node)
            stack.pop()
        if node is not None and not stack:
            break
    if pos != len(tokens):
        err("trailing input after expression")
    return CwExpression(k, node)


def serialize(expr: CwExpression) -> str:
    parts: list[str] = []
    stack: list[Node | str] = [expr.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        if isinstance(item, Introduce):
            parts.append(f"(v {item.name} {item.weight})")
        elif isinstance(item, Relabel):
            parts.append(f"(ren {item.i} {item.j}")
            stack.append(")")
            stack.append(item.child)
        elif isinstance(item, AddEdges):
            parts.append(f"(add {item.i} {item.j}")
            stack.append(")")
            stack.append(item.child)
        else:
            parts.append("(u")
            stack.append(")")
            stack.append(item.right)
            stack.append(item.left)
    body = " ".join(parts).replace(" )", ")")
    return f"cwexpr k={expr.k}\n{body}\n"


def validate(expr: CwExpression) -> None:
    """Structural checks for programmatically built trees."""
    if expr.k < 1:
        raise ExpressionError("declared k must be at least 1")
    names: set[str] = set()
    for node in iter_preorder(expr.root):
        if isinstance(node, Introduce):
            if not NAME_RE.match(node.name):
                raise ExpressionError(f"bad vertex name {node.name!r}")
            if node.name in names:
                raise ExpressionError(f"duplicate vertex name {node.name!r}")
            if node.weight < 0:
                raise ExpressionError(f"negative weight on vertex {node.name!r}")
            names.add(node.name)
        elif isinstance(node, (Relabel, AddEdges)):
            if node.i == node.j:
                raise ExpressionError("relabel/add needs two distinct labels")
            if not (1 <= node.i <= expr.k and 1 <= node.j <= expr.k):
                raise ExpressionError(f"label outside 1..{expr.k}")


# ---------------------------------------------------------------------------
# Evaluation and irredundancy.

def _eval_states(expr: CwExpression):
    """Postorder stream of (node, weights, labels, classes, edges) tuples.

    The per-node structures are mutated in place along unary chains, so
    consumers must not hold onto them across iterations.
    """
    results: dict[int, tuple] = {}
    for node in iter_postorder(expr.root):
        if isinstance(node, Introduce):
            state = ({node.name: node.weight}, {node.name: 1},
                     {1: {node.name}}, set())
        elif isinstance(node, Relabel):
            weights, labels, classes, edges = results.pop(id(node.child))
            moving = classes.pop(node.i, set())
            if moving:
                classes.setdefault(node.j, set()).update(moving)
                for v in moving:
                    labels[v] = node.j
            state = (weights, labels, classes, edges)
        elif isinstance(node, AddEdges):
            weights, labels, classes, edges = results.pop(id(node.child))
            for u in classes.get(node.i, ()):
                for v in classes.get(node.j, ()):
                    edges.add(edge_key(u, v))
            state = (weights, labels, classes, edges)
        else:
            lw, ll, lc, le = results.pop(id(node.left))
            rw, rl, rc, re_ = results.pop(id(node.right))
            lw.update(rw)
            ll.update(rl)
            for lab, vs in rc.items():
                lc.setdefault(lab, set()).update(vs)
            le.update(re_)
            state = (lw, ll, lc, le)
        results[id(node)] = state
        yield node, state
    del results


def evaluate(expr: CwExpression) -> LabeledGraph:
    validate(expr)
    state = None
    for _, state in _eval_states(expr):
        pass
    weights, labels, _, edges = state
    return LabeledGraph(weights=weights, edges=edges, labels=labels)


@dataclass(frozen=True)
class RedundancyIssue:
    node_index: int  # preorder position of the offending AddEdges node
    i: int
    j: int
    kind: str  # "full" | "partial"


def check_irredundant(expr: CwExpression) -> list[RedundancyIssue]:
    """Classify every AddEdges node whose cross pairs already partly exist.

    An empty report means the expression is irredundant: each add is applied
    while no edge between the two classes exists yet.
    """
    validate(expr)
    order = {id(node): idx for idx, node in enumerate(iter_preorder(expr.root))}
    issues = []
    for node, state in _replay_with_pre_edges(expr):
        if node is None:
            continue
        pre_existing, total = state
        if total == 0 or pre_existing == 0:
            continue
        kind = "full" if pre_existing == total else "partial"
        issues.append(RedundancyIssue(order[id(node)], node.i, node.j, kind))
    return issues


def _replay_with_pre_edges(expr: CwExpression):
    """Yield (AddEdges node, (pre-existing cross pairs, total cross pairs))."""
    results: dict[int, tuple] = {}
    for node in iter_postorder(expr.root):
        if isinstance(node, Introduce):
            state = ({1: {node.name}}, set())
        elif isinstance(node, Relabel):
            classes, edges = results.pop(id(node.child))
            moving = classes.pop(node.i, set())
            if moving:
                classes.setdefault(node.j, set()).update(moving)
            state = (classes, edges)
        elif isinstance(node, AddEdges):
            classes, edges = results.pop(id(node.child))
            ci = classes.get(node.i, ())
            cj = classes.get(node.j, ())
            total = len(ci) * len(cj)
            existing = 0
            for u in ci:
                for v in cj:
                    key = edge_key(u, v)
                    if key in edges:
                        existing += 1
                    else:
                        edges.add(key)
            yield node, (existing, total)
            state = (classes, edges)
        else:
            lc, le = results.pop(id(node.left))
            rc, re_ = results.pop(id(node.right))
            for lab, vs in rc.items():
                lc.setdefault(lab, set()).update(vs)
            le.update(re_)
            state = (lc, le)
        results[id(node)] = state
    yield None, None


def strip_redundant_adds(expr: CwExpression) -> CwExpression:
    """Drop AddEdges nodes whose every cross pair already exists.

    Raises :class:`PartiallyRedundantError` when a node re-adds only some of
    its pairs; that case cannot be repaired by removal.
    """
    issues = check_irredundant(expr)
    if any(issue.kind == "partial" for issue in issues):
        raise PartiallyRedundantError(
            "expression has partially redundant add operations")
    dead = {issue.node_index for issue in issues}
    order = {id(node): idx for idx, node in enumerate(iter_preorder(expr.root))}
    rebuilt: dict[int, Node] = {}
    for node in iter_postorder(expr.root):
        if isinstance(node, Introduce):
            rebuilt[id(node)] = node
        elif isinstance(node, Relabel):
            rebuilt[id(node)] = Relabel(node.i, node.j, rebuilt[id(node.child)])
        elif isinstance(node, AddEdges):
            child = rebuilt[id(node.child)]
            rebuilt[id(node)] = child if order[id(node)] in dead \
                else AddEdges(node.i, node.j, child)
        else:
            rebuilt[id(node)] = Union(rebuilt[id(node.left)], rebuilt[id(node.right)])
    return CwExpression(expr.k, rebuilt[id(expr.root)])


# ---------------------------------------------------------------------------
# Construction from plain graphs, and fixture generators.

def naive_expression(graph: LabeledGraph) -> CwExpression:
    """n-label expression for an arbitrary graph: one label per vertex.

    Vertex i (in sorted-name order) is introduced, relabeled to label i, and
    union-folded in; each edge gets its own add as soon as both ends exist.
    Irredundant by construction.
    """
    names = sorted(graph.weights)
    if not names:
        raise ExpressionError("naive expression needs at least one vertex")
    index = {name: i + 1 for i, name in enumerate(names)}
    by_peak: dict[int, list[tuple[int, int]]] = {}
    for u, v in graph.edges:
        iu, iv = index[u], index[v]
        lo, hi = min(iu, iv), max(iu, iv)
        by_peak.setdefault(hi, []).append((lo, hi))
    cur: Node = Introduce(names[0], graph.weights[names[0]])
    for m, name in enumerate(names[1:], start=2):
        piece: Node = Introduce(name, graph.weights[name])
        if m != 1:
            piece = Relabel(1, m, piece)
        cur = Union(cur, piece)
        for lo, hi in sorted(by_peak.get(m, ())):
            cur = AddEdges(lo, hi, cur)
    return CwExpression(len(names), cur)


def _names(n: int) -> list[str]:
    return [f"v{i}" for i in range(1, n + 1)]


def _clique(n: int) -> CwExpression:
    names = _names(n)
    cur: Node = Introduce(names[0])
    for name in names[1:]:
        cur = Relabel(2, 1, AddEdges(1, 2, Union(cur, Relabel(1, 2, Introduce(name)))))
    return CwExpression(1 if n == 1 else 2, cur)


def _path(n: int) -> CwExpression:
    # Labels: 1 = settled interior, 2 = current endpoint, 3 = incoming vertex.
    names = _names(n)
    if n == 1:
        return CwExpression(1, Introduce(names[0]))
    if n == 2:
        root = AddEdges(1, 2, Union(Relabel(1, 2, Introduce(names[0])),
                                    Introduce(names[1])))
        return CwExpression(2, root)
    cur: Node = Relabel(1, 2, Introduce(names[0]))
    for name in names[1:]:
        cur = Union(cur, Relabel(1, 3, Introduce(name)))
        cur = Relabel(3, 2, Relabel(2, 1, AddEdges(2, 3, cur)))
    return CwExpression(3, cur)


def _cycle(n: int) -> CwExpression:
    # Labels: 1 = incoming vertex, 2 = current endpoint, 3 = start vertex
    # (kept apart for the closing edge), 4 = settled interior.  Four labels
    # are required: long cycles admit no 3-label construction.
    names = _names(n)
    if n == 1:
        return CwExpression(1, Introduce(names[0]))
    if n == 2:
        return _path(2)
    cur: Node = Relabel(1, 3, Introduce(names[0]))
    cur = AddEdges(3, 2, Union(cur, Relabel(1, 2, Introduce(names[1]))))
    for name in names[2:]:
        cur = Union(cur, Introduce(name))
        cur = Relabel(1, 2, Relabel(2, 4, AddEdges(2, 1, cur)))
    return CwExpression(4, AddEdges(2, 3, cur))


def _star(n: int) -> CwExpression:
    names = _names(n)
    if n == 1:
        return CwExpression(1, Introduce(names[0]))
    cur: Node = Relabel(1, 2, Introduce(names[0]))
    for name in names[1:]:
        cur = Union(cur, Introduce(name))
    return CwExpression(2, AddEdges(1, 2, cur))


def _random_cograph(n: int, seed: int) -> CwExpression:
    # Cographs: closed under disjoint union and full join, every vertex
    # labeled 1 between composite steps, label 2 only transiently.
    rng = random.Random(seed)
    names = _names(n)

    def build(lo: int, hi: int) -> Node:
        if hi - lo == 1:
            return Introduce(names[lo])
        split = rng.randint(lo + 1, hi - 1)
        left, right = build(lo, split), build(split, hi)
        if rng.random() < 0.5:
            return Union(left, right)
        return Relabel(2, 1, AddEdges(1, 2, Union(left, Relabel(1, 2, right))))

    return CwExpression(1 if n == 1 else 2, build(0, n))


FIXTURE_KINDS = ("clique", "path", "cycle", "star", "random-cograph")

_FIXTURE_BUILDERS = {
    "clique": lambda n, seed: _clique(n),
    "path": lambda n, seed: _path(n),
    "cycle": lambda n, seed: _cycle(n),
    "star": lambda n, seed: _star(n),
    "random-cograph": _random_cograph,
}


def fixture(kind: str, n: int, seed: int = 0) -> CwExpression:
    """Deterministic unit-weight expression families for tests and benchmarks."""
    if n < 1:
        raise ExpressionError("fixtures need n >= 1")
    builder = _FIXTURE_BUILDERS.get(kind)
    if builder is None:
        raise ExpressionError(
            f"unknown fixture kind {kind!r}; expected one of {', '.join(FIXTURE_KINDS)}")
    return builder(n, seed)


# ---------------------------------------------------------------------------
# Plain graph files: `v <name> [<weight>]` and `e <name> <name>` lines.

def parse_graph(text: str) -> LabeledGraph:
    weights: dict[str, int] = {}
    edges: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) in (2, 3):
            name = parts[1]
            if not NAME_RE.match(name):
                raise ExpressionError(f"line {lineno}: bad vertex name {name!r}")
            if name in weights:
                raise ExpressionError(f"line {lineno}: duplicate vertex {name!r}")
            weight = 1
            if len(parts) == 3:
                if not parts[2].isdigit():
                    raise ExpressionError(f"line {lineno}: bad weight {parts[2]!r}")
                weight = int(parts[2])
            weights[name] = weight
        elif parts[0] == "e" and len(parts) == 3:
            u, v = parts[1], parts[2]
            if u == v:
                raise ExpressionError(f"line {lineno}: self-loop on {u!r}")
            if u not in weights or v not in weights:
                raise ExpressionError(f"line {lineno}: edge uses an undeclared vertex")
            edges.add(edge_key(u, v))
        else:
            raise ExpressionError(f"line {lineno}: expected 'v <name> [w]' or 'e <a> <b>'")
    return LabeledGraph(weights=weights, edges=edges)


def serialize_graph(graph: LabeledGraph) -> str:
    lines = [f"v {name} {graph.weights[name]}" for name in sorted(graph.weights)]
    lines += [f"e {u} {v}" for u, v in sorted(graph.edges)]
    return "\n".join(lines) + "\n"
