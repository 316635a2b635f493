"""Finite directed graph model and vertex-set combinatorics.

Conventions used throughout the package:

- A graph E consists of vertex ids and edge records (id, src, dst).  All ids
  are opaque strings; every enumeration order is fixed by sorting ids
  lexicographically, so identical inputs always produce identical outputs.
- A path is a composable sequence of edges: dst(e_i) = src(e_{i+1}).  Paths
  are stored source-to-range.  A path of length 0 is a vertex; its source and
  range are that vertex.
- A vertex subset V stands for the ideal of the algebra of compacts spanned
  by the matrix units whose common range vertex lies *in* V.  (The opposite
  complement-based bookkeeping is also seen in the literature; this package
  never normalizes user data between the two conventions.)
- Hereditary set: closed under following edges forward (src in F implies
  dst in F).
- V-saturated set F: every v in V all of whose out-edges land in F is
  itself in F.  Sinks belonging to V are saturated into F vacuously.

Graphs are immutable after construction (construction validates), so values
are safe to share across threads; every function here is pure.

Finite graphs only.  In particular every vertex emits finitely many edges,
so there are no "infinite emitters": the regular vertices are exactly the
non-sinks, and the compacts exhaust the whole precategory of the graph
correspondence (no separate Toeplitz-extension layer exists at this scale).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional


class GraphError(ValueError):
    """Raised for malformed graphs, bad subsets, or violated preconditions."""


class Graph:
    """Immutable finite directed graph with string vertex and edge ids.

    `edges` maps edge id -> (src, dst).  Out-edge lists are precomputed and
    sorted so all downstream enumerations are deterministic.
    """

    __slots__ = ("vertices", "edges", "_out", "_in", "_key")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        vs = list(vertices)
        vset = set()
        for v in vs:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex id must be a nonempty string, got {v!r}")
            if v in vset:
                raise GraphError(f"duplicate vertex id {v!r}")
            vset.add(v)
        emap: dict[str, tuple[str, str]] = {}
        for eid, src, dst in edges:
            if not isinstance(eid, str) or not eid:
                raise GraphError(f"edge id must be a nonempty string, got {eid!r}")
            if eid in emap:
                raise GraphError(f"duplicate edge id {eid!r}")
            if src not in vset:
                raise GraphError(f"edge {eid!r} has unknown src {src!r}")
            if dst not in vset:
                raise GraphError(f"edge {eid!r} has unknown dst {dst!r}")
            emap[eid] = (src, dst)
        self.vertices: frozenset[str] = frozenset(vset)
        self.edges: dict[str, tuple[str, str]] = dict(sorted(emap.items()))
        out: dict[str, list[str]] = {v: [] for v in vset}
        inc: dict[str, list[str]] = {v: [] for v in vset}
        for eid, (src, dst) in self.edges.items():
            out[src].append(eid)
            inc[dst].append(eid)
        self._out = {v: tuple(sorted(es)) for v, es in out.items()}
        self._in = {v: tuple(sorted(es)) for v, es in inc.items()}
        self._key = (
            tuple(sorted(self.vertices)),
            tuple((e, s, d) for e, (s, d) in self.edges.items()),
        )

    # -- basic accessors -----------------------------------------------------

    def src(self, eid: str) -> str:
        return self.edges[eid][0]

    def dst(self, eid: str) -> str:
        return self.edges[eid][1]

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def sorted_vertices(self) -> list[str]:
        return list(self._key[0])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- paths ----------------------------------------------------------------

    def vertex_path(self, v: str) -> "Path":
        """Length-0 path sitting at vertex v."""
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return Path((), v, v, v)

    def make_path(self, edge_ids: Iterable[str]) -> "Path":
        """Path from a composable edge-id sequence (source-to-range order)."""
        ids = tuple(edge_ids)
        if not ids:
            raise GraphError("make_path needs at least one edge; use vertex_path")
        for eid in ids:
            if eid not in self.edges:
                raise GraphError(f"unknown edge {eid!r}")
        for a, b in zip(ids, ids[1:]):
            if self.dst(a) != self.src(b):
                raise GraphError(f"edges {a!r} -> {b!r} do not compose")
        return Path(ids, None, self.src(ids[0]), self.dst(ids[-1]))

    def extend_path(self, p: "Path", eid: str) -> "Path":
        """Concatenate one more edge onto the range end of p."""
        if self.src(eid) != p.range_:
            raise GraphError(f"edge {eid!r} does not extend path ending at {p.range_!r}")
        if p.is_vertex:
            return self.make_path((eid,))
        return Path(p.edges + (eid,), None, p.source, self.dst(eid))

    def has_cycle(self) -> bool:
        """True iff some directed cycle exists (3-color DFS)."""
        WHITE, GREY, BLACK = 0, 1, 2
        color = {v: WHITE for v in self.vertices}
        for start in self.sorted_vertices():
            if color[start] != WHITE:
                continue
            stack: list[tuple[str, Iterator[str]]] = [(start, iter(self._out[start]))]
            color[start] = GREY
            while stack:
                v, it = stack[-1]
                advanced = False
                for eid in it:
                    w = self.dst(eid)
                    if color[w] == GREY:
                        return True
                    if color[w] == WHITE:
                        color[w] = GREY
                        stack.append((w, iter(self._out[w])))
                        advanced = True
                        break
                if not advanced:
                    color[v] = BLACK
                    stack.pop()
        return False


class Path:
    """Composable edge sequence; length 0 carries exactly its base vertex.

    Instances are created through Graph methods, which validate composability
    and fill in source/range.  Ordering is (length, ids) so enumerations and
    canonical forms are reproducible.
    """

    __slots__ = ("edges", "base", "source", "range_")

    def __init__(self, edges: tuple[str, ...], base: Optional[str], source: str, range_: str):
        self.edges = edges
        self.base = base
        self.source = source
        self.range_ = range_

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def _key(self) -> tuple:
        if self.edges:
            return (len(self.edges), self.edges)
        return (0, (self.base,))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Path) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "Path") -> bool:
        return self._key() < other._key()

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"Path[{self.base}]"
        return "Path[" + ",".join(self.edges) + "]"

    def label(self) -> str:
        return self.base if self.is_vertex else "".join(self.edges)


# -- validation and subsets -------------------------------------------------


def validate(g: Graph) -> Graph:
    """Return g iff its invariants hold (construction already enforces them)."""
    if not isinstance(g, Graph):
        raise GraphError("not a Graph value")
    Graph(g.vertices, ((e, s, d) for e, (s, d) in g.edges.items()))
    return g


def check_subset(g: Graph, F: Iterable[str], what: str = "vertex set") -> frozenset[str]:
    """Normalize an iterable of vertex ids to a frozenset, checking membership."""
    fs = frozenset(F)
    bad = fs - g.vertices
    if bad:
        raise GraphError(f"{what} contains unknown vertices {sorted(bad)}")
    return fs


def is_hereditary(g: Graph, F: Iterable[str]) -> bool:
    fs = check_subset(g, F)
    return all(g.dst(e) in fs for v in fs for e in g.out_edges(v))


# -- path enumeration ---------------------------------------------------------


def paths_of_length(g: Graph, n: int) -> list[Path]:
    """All composable edge sequences of length n; n=0 gives one path per vertex."""
    if n < 0:
        raise GraphError("path length must be >= 0")
    current = [g.vertex_path(v) for v in g.sorted_vertices()]
    for _ in range(n):
        current = [g.extend_path(p, e) for p in current for e in g.out_edges(p.range_)]
    return sorted(current)


def paths_up_to_length(g: Graph, n: int) -> list[Path]:
    out: list[Path] = []
    for k in range(n + 1):
        out.extend(paths_of_length(g, k))
    return out


# -- hereditary closure, saturation, reduction --------------------------------


def hereditary_closure(g: Graph, F: Iterable[str]) -> frozenset[str]:
    """Smallest superset of F closed under following edges forward."""
    closed = set(check_subset(g, F))
    work = sorted(closed)
    while work:
        v = work.pop()
        for e in g.out_edges(v):
            w = g.dst(e)
            if w not in closed:
                closed.add(w)
                work.append(w)
    return frozenset(closed)


def v_saturation(g: Graph, F: Iterable[str], V: Iterable[str]) -> frozenset[str]:
    """Least fixpoint adding each v in V all of whose out-edges land inside.

    Sinks in V enter vacuously.  Terminates in at most |vertices| rounds.
    """
    cur = set(check_subset(g, F))
    vset = check_subset(g, V, "ideal vertex set")
    changed = True
    while changed:
        changed = False
        for v in sorted(vset - cur):
            if all(g.dst(e) in cur for e in g.out_edges(v)):
                cur.add(v)
                changed = True
    return frozenset(cur)


def quotient_graph(g: Graph, F: Iterable[str]) -> Graph:
    """Graph on vertices outside F, keeping edges whose dst avoids F.

    Requires F hereditary, which also forces src outside F for kept edges.
    """
    fs = check_subset(g, F)
    if not is_hereditary(g, fs):
        raise GraphError("quotient requires a hereditary vertex set")
    keep_v = g.vertices - fs
    keep_e = [(e, s, d) for e, (s, d) in g.edges.items() if d not in fs]
    return Graph(keep_v, keep_e)


def subgraph(g: Graph, F: Iterable[str]) -> Graph:
    """Graph on F with the edges emitted from F.  Requires F hereditary."""
    fs = check_subset(g, F)
    if not is_hereditary(g, fs):
        raise GraphError("subgraph requires a hereditary vertex set")
    keep_e = [(e, s, d) for e, (s, d) in g.edges.items() if s in fs]
    return Graph(fs, keep_e)


def reduction(g: Graph, V: Iterable[str]) -> tuple[frozenset[str], Graph, frozenset[str]]:
    """Strip the vertices of V whose every path dies at a sink through V.

    Returns (S, reduced graph, reduced V) with S = v_saturation(empty, V).
    S is hereditary by construction, so the quotient is always defined, and
    reducing the result again yields S = empty.
    """
    vset = check_subset(g, V, "ideal vertex set")
    s = v_saturation(g, frozenset(), vset)
    return s, quotient_graph(g, s), vset - s


def vertex_classes(g: Graph) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    """(sinks, regular vertices, infinite emitters).

    The last component is always empty: infinite emitters are unrepresentable
    in a finite graph, so the regular vertices are exactly the non-sinks.
    """
    sinks = frozenset(v for v in g.vertices if not g.out_edges(v))
    regular = g.vertices - sinks
    return sinks, regular, frozenset()


def is_hilbert_bimodule(g: Graph) -> bool:
    """True iff every vertex emits at most one edge and receives at most one."""
    return all(len(g.out_edges(v)) <= 1 and len(g.in_edges(v)) <= 1 for v in g.vertices)


# -- JSON ---------------------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": g.sorted_vertices(),
        "edges": [{"id": e, "src": s, "dst": d} for e, (s, d) in g.edges.items()],
    }


def graph_from_json(data: dict) -> Graph:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise GraphError('graph JSON needs "vertices" and "edges" keys')
    try:
        edges = [(e["id"], e["src"], e["dst"]) for e in data["edges"]]
    except (TypeError, KeyError) as exc:
        raise GraphError(f"malformed edge record: {exc}") from exc
    return Graph(data["vertices"], edges)


def vertex_set_to_json(F: Iterable[str]) -> list[str]:
    return sorted(F)


def vertex_set_from_json(data, g: Graph, what: str = "vertex set") -> frozenset[str]:
    if not isinstance(data, list) or not all(isinstance(v, str) for v in data):
        raise GraphError(f"{what} JSON must be a list of vertex ids")
    return check_subset(g, data, what)
