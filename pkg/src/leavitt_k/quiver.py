"""Finite quivers: parsing, vertex classes, cycle closure, reduction chains.

A quiver file looks like::

    # two vertices, one arrow
    vertices: a b
    edges:
    a b 1

Each edge line is ``source target multiplicity``.  Parallel arrows are kept
as repeated entries of ``Quiver.edges`` so every arrow has its own index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


class QuiverParseError(ValueError):
    """Raised for malformed quiver text.  ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """A finite directed multigraph.

    ``vertices`` is in declaration order; ``vertex_order`` puts the sinks
    first (each class keeps declaration order), and every matrix built from
    a quiver uses ``vertex_order``.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()
    vertex_order: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple((s, t) for s, t in self.edges)
        if len(set(vertices)) != len(vertices):
            raise QuiverError("duplicate vertex")
        known = set(vertices)
        for s, t in edges:
            if s not in known or t not in known:
                raise QuiverError(f"edge {s}->{t} uses an undeclared vertex")
        emitting = {s for s, _ in edges}
        order = tuple(v for v in vertices if v not in emitting) + tuple(
            v for v in vertices if v in emitting
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "vertex_order", order)

    @property
    def sinks(self) -> tuple[str, ...]:
        emitting = {s for s, _ in self.edges}
        return tuple(v for v in self.vertex_order if v not in emitting)

    @property
    def non_sinks(self) -> tuple[str, ...]:
        return self.vertex_order[len(self.sinks):]

    def index(self) -> dict[str, int]:
        """Vertex -> position in ``vertex_order``."""
        return {v: i for i, v in enumerate(self.vertex_order)}

    def emitted(self, v: str) -> list[int]:
        """Indices of the arrows leaving ``v``."""
        return [k for k, (s, _) in enumerate(self.edges) if s == v]

    def ordered_edges(self) -> list[tuple[str, str]]:
        """Arrows sorted by (source order, target order, insertion)."""
        pos = self.index()
        keyed = sorted(
            range(len(self.edges)),
            key=lambda k: (pos[self.edges[k][0]], pos[self.edges[k][1]], k),
        )
        return [self.edges[k] for k in keyed]

    def multiplicities(self) -> dict[tuple[str, str], int]:
        counts: dict[tuple[str, str], int] = {}
        for e in self.edges:
            counts[e] = counts.get(e, 0) + 1
        return counts

    def subquiver(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> "Quiver":
        keep = set(vertices)
        return Quiver(tuple(v for v in self.vertices if v in keep), tuple(edges))

    def relabel(self, order: Sequence[str]) -> "Quiver":
        """Same quiver with the vertices declared in ``order``."""
        if sorted(order) != sorted(self.vertices):
            raise QuiverError("relabel order must be a permutation of the vertices")
        return Quiver(tuple(order), self.edges)

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices), "edges:"]
        for (s, t), m in self.multiplicities().items():
            lines.append(f"{s} {t} {m}")
        return "\n".join(lines) + "\n"

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class VertexClassification:
    sinks: frozenset[str]
    sources: frozenset[str]
    on_or_after_cycle: frozenset[str]


@dataclass(frozen=True)
class ReductionChain:
    """Complete subquivers ``stages[0] ⊂ ... ⊂ stages[-1] == q``.

    ``added_vertex[i]`` is the vertex adjoined to go from stage i to i+1.
    ``ell`` counts the sinks not reachable from any cycle.
    """

    stages: tuple[Quiver, ...]
    added_vertex: tuple[str, ...]
    ell: int

    def __len__(self):
        return len(self.added_vertex)


@dataclass(frozen=True)
class PathCountTable:
    quiver: Quiver
    n_max: int
    counts: dict[tuple[int, str], int]

    def __call__(self, n: int, v: str) -> int:
        return self.counts[(n, v)]


def parse_quiver(text: str) -> Quiver:
    vertices: list[str] | None = None
    in_edges = False
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if vertices is None:
            if not stripped.startswith("vertices:"):
                raise QuiverParseError("expected 'vertices:'", lineno, col)
            # an empty list is accepted so the empty quiver round-trips
            names = stripped[len("vertices:"):].split()
            seen: set[str] = set()
            for name in names:
                if not _IDENT.match(name):
                    raise QuiverParseError(f"bad identifier {name!r}", lineno, raw.find(name) + 1)
                if name in seen:
                    raise QuiverParseError(f"duplicate vertex {name!r}", lineno, raw.find(name) + 1)
                seen.add(name)
            vertices = names
            continue
        if not in_edges:
            if stripped != "edges:":
                raise QuiverParseError("expected 'edges:'", lineno, col)
            in_edges = True
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise QuiverParseError("edge line needs 'source target multiplicity'", lineno, col)
        s, t, m = parts
        for name in (s, t):
            if not _IDENT.match(name):
                raise QuiverParseError(f"bad identifier {name!r}", lineno, raw.find(name) + 1)
            if name not in vertices:
                raise QuiverParseError(f"undeclared vertex {name!r}", lineno, raw.find(name) + 1)
        if not m.isdigit() or int(m) < 1:
            raise QuiverParseError(f"multiplicity must be a positive integer, got {m!r}",
                                   lineno, raw.rfind(m) + 1)
        edges.extend([(s, t)] * int(m))
    if vertices is None:
        raise QuiverParseError("empty quiver file", 1, 1)
    if not in_edges:
        raise QuiverParseError("missing 'edges:' section", len(text.splitlines()) or 1, 1)
    return Quiver(tuple(vertices), tuple(edges))


def _strongly_connected_components(q: Quiver) -> list[list[str]]:
    # iterative Tarjan
    succ: dict[str, list[str]] = {v: [] for v in q.vertices}
    for s, t in q.edges:
        succ[s].append(t)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    for root in q.vertices:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            children = succ[v]
            while i < len(children):
                w = children[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def classify(q: Quiver) -> VertexClassification:
    emitting = {s for s, _ in q.edges}
    receiving = {t for _, t in q.edges}
    loops = {s for s, t in q.edges if s == t}
    on_cycle: set[str] = set()
    for comp in _strongly_connected_components(q):
        if len(comp) > 1 or comp[0] in loops:
            on_cycle.update(comp)
    closure = set(on_cycle)
    frontier = list(on_cycle)
    while frontier:
        v = frontier.pop()
        for s, t in q.edges:
            if s == v and t not in closure:
                closure.add(t)
                frontier.append(t)
    return VertexClassification(
        sinks=frozenset(v for v in q.vertices if v not in emitting),
        sources=frozenset(v for v in q.vertices if v not in receiving),
        on_or_after_cycle=frozenset(closure),
    )


def opposite(q: Quiver) -> Quiver:
    return Quiver(q.vertices, tuple((t, s) for s, t in q.edges))


def _multiset(edges) -> dict:
    out: dict = {}
    for e in edges:
        out[e] = out.get(e, 0) + 1
    return out


def is_complete_subquiver(f: Quiver, e: Quiver) -> bool:
    """True iff each vertex of ``f`` emits none or all of its ``e``-arrows in ``f``."""
    if not set(f.vertices) <= set(e.vertices):
        raise QuiverError("not a subquiver: extra vertices")
    fe, ee = _multiset(f.edges), _multiset(e.edges)
    if any(ee.get(k, 0) < m for k, m in fe.items()):
        raise QuiverError("not a subquiver: extra edges")
    for v in f.vertices:
        emitted_f = sum(m for (s, _), m in fe.items() if s == v)
        emitted_e = sum(m for (s, _), m in ee.items() if s == v)
        if emitted_f not in (0, emitted_e):
            return False
    return True


def tilde_quiver(q: Quiver) -> Quiver:
    """The complete subquiver spanned by the vertices on or after a cycle.

    Empty (no vertices) when ``q`` is acyclic.
    """
    keep = classify(q).on_or_after_cycle
    return Quiver(
        tuple(v for v in q.vertices if v in keep),
        tuple((s, t) for s, t in q.edges if s in keep),
    )


def reduction_chain(q: Quiver) -> ReductionChain:
    cls = classify(q)
    tilde = tilde_quiver(q)
    current = set(tilde.vertices) | cls.sinks
    emitting = set(tilde.vertices)

    def stage():
        return q.subquiver(current, (e for e in q.edges if e[0] in emitting))

    stages = [stage()]
    added: list[str] = []
    while len(current) < len(q.vertices):
        for v in q.vertices:
            if v in current:
                continue
            targets = [t for s, t in q.edges if s == v]
            if targets and all(t in current for t in targets):
                break
        else:
            raise AssertionError("no admissible vertex; the cycle closure is inconsistent")
        current.add(v)
        emitting.add(v)
        added.append(v)
        stages.append(stage())
    ell = len(cls.sinks - cls.on_or_after_cycle)
    return ReductionChain(tuple(stages), tuple(added), ell)


def path_counts(q: Quiver, n_max: int) -> PathCountTable:
    """Number of length-n paths ending at each vertex, for n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    mult = q.multiplicities()
    counts = {(0, v): 1 for v in q.vertices}
    for n in range(n_max):
        for j in q.vertices:
            counts[(n + 1, j)] = sum(m * counts[(n, i)] for (i, t), m in mult.items() if t == j)
    return PathCountTable(q, n_max, counts)
