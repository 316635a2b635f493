"""Gauge-invariant ideal structure of a relative graph algebra.

A gauge-invariant ideal is encoded by a pair (F, F') of vertex sets:

- F, the kernel part, is hereditary;
- F' contains both F and the distinguished vertex set V (the ideal absorbs
  the defect projections it is coisometric on);
- every vertex of F' \\ F still emits at least one edge leaving F (in the
  quotient graph it must carry a nonzero defect projection to absorb).

The second and third conditions force F to be V-saturated, so enumeration
walks hereditary V-saturated kernels first and then chooses the free part of
F' \\ F inside the eligible vertices; V \\ F is forced.  The number of pairs
over a kernel F is 2^(eligible(F) minus V).

Two classical situations collapse the lattice to the hereditary V-saturated
sets alone, via F |-> (F, F union V):

 (i) every non-sink lies in V;
(ii) the source and range maps are injective on edges and V is exactly the
     set of regular (non-sink) vertices.

`classify_lattice` detects both cases and verifies the collapse.  Meets and
joins of pairs are computed componentwise and then re-closed (hereditary
closure, saturation, eligibility re-check) rather than assumed.

All enumeration orders are lexicographic on sorted vertex lists, so reports
are reproducible; the brute-force subset-pair oracle lives in the test suite.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .graph import (
    Graph,
    check_subset,
    hereditary_closure,
    is_hereditary,
    is_hilbert_bimodule,
    quotient_graph,
    subgraph,
    v_saturation,
    vertex_classes,
    vertex_set_to_json,
)


class LatticeError(ValueError):
    """Raised for violated preconditions in lattice operations."""


class TPair:
    """Kernel/coisometricity pair of vertex sets encoding one ideal."""

    __slots__ = ("kernel", "coiso")

    def __init__(self, kernel: frozenset[str], coiso: frozenset[str]):
        self.kernel = frozenset(kernel)
        self.coiso = frozenset(coiso)

    def _key(self) -> tuple:
        return (sorted(self.kernel), sorted(self.coiso))

    def leq(self, other: "TPair") -> bool:
        return self.kernel <= other.kernel and self.coiso <= other.coiso

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TPair)
            and self.kernel == other.kernel
            and self.coiso == other.coiso
        )

    def __hash__(self) -> int:
        return hash((self.kernel, self.coiso))

    def __lt__(self, other: "TPair") -> bool:
        return self._key() < other._key()

    def __repr__(self) -> str:
        return f"TPair({sorted(self.kernel)}, {sorted(self.coiso)})"

    def to_json(self) -> dict:
        return {
            "kernel": vertex_set_to_json(self.kernel),
            "coiso": vertex_set_to_json(self.coiso),
        }


def eligible_vertices(g: Graph, F: Iterable[str]) -> frozenset[str]:
    """Vertices outside F emitting at least one edge whose dst avoids F."""
    fs = check_subset(g, F)
    return frozenset(
        v
        for v in g.vertices - fs
        if any(g.dst(e) not in fs for e in g.out_edges(v))
    )


def hereditary_sets(g: Graph) -> list[frozenset[str]]:
    """All hereditary vertex sets, grown by single-vertex closures."""
    found = {frozenset()}
    work = [frozenset()]
    while work:
        f = work.pop()
        for v in g.vertices - f:
            nxt = hereditary_closure(g, f | {v})
            if nxt not in found:
                found.add(nxt)
                work.append(nxt)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def enumerate_hereditary_saturated(g: Graph, V: Iterable[str]) -> list[frozenset[str]]:
    """Hereditary V-saturated vertex sets, ordered by size then lexicographic."""
    vset = check_subset(g, V, "ideal vertex set")
    return [f for f in hereditary_sets(g) if v_saturation(g, f, vset) == f]


class LatticeReport:
    """Enumerated pairs with their covering relation and classification.

    `covers` holds index pairs (i, j) into `elements` meaning element i is
    covered by element j in the product order.  `simple_lattice` carries the
    hereditary V-saturated sets when one of the collapsing cases applies.
    """

    __slots__ = ("elements", "covers", "classification", "simple_lattice")

    def __init__(
        self,
        elements: list[TPair],
        covers: list[tuple[int, int]],
        classification: dict,
        simple_lattice: Optional[list[frozenset[str]]],
    ):
        self.elements = elements
        self.covers = covers
        self.classification = classification
        self.simple_lattice = simple_lattice

    def to_json(self) -> dict:
        out = {
            "elements": [p.to_json() for p in self.elements],
            "count": len(self.elements),
            "covers": [[i, j] for i, j in self.covers],
            "classification": self.classification,
        }
        if self.simple_lattice is not None:
            out["simple_lattice"] = [vertex_set_to_json(f) for f in self.simple_lattice]
        return out


def _covering_relation(elements: list[TPair]) -> list[tuple[int, int]]:
    n = len(elements)
    leq = [[elements[i].leq(elements[j]) for j in range(n)] for i in range(n)]
    covers = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(l != i and l != j and leq[i][l] and leq[l][j] for l in range(n)):
                continue
            covers.append((i, j))
    return covers


def enumerate_tpairs(g: Graph, V: Iterable[str]) -> LatticeReport:
    """All pairs satisfying the three invariants, with covers and classification."""
    vset = check_subset(g, V, "ideal vertex set")
    pairs = _raw_tpairs(g, vset)
    classification = _classify(g, vset, pairs)
    simple = (
        enumerate_hereditary_saturated(g, vset) if classification["simple"] else None
    )
    return LatticeReport(pairs, _covering_relation(pairs), classification, simple)


def embed_simple(g: Graph, V: Iterable[str], F: Iterable[str]) -> TPair:
    """Hereditary V-saturated set F into the pair (F, F union V)."""
    vset = check_subset(g, V, "ideal vertex set")
    fs = check_subset(g, F)
    if not is_hereditary(g, fs):
        raise LatticeError("embed_simple requires a hereditary set")
    if v_saturation(g, fs, vset) != fs:
        raise LatticeError("embed_simple requires a V-saturated set")
    return TPair(fs, fs | vset)


def classify_lattice(g: Graph, V: Iterable[str]) -> dict:
    """Detect the lattice-collapsing cases and verify the collapse when present.

    Case (i): every non-sink belongs to V.  Case (ii): the graph's source and
    range maps are injective on edges and V is the set of regular vertices.
    Under either case the map F |-> (F, F union V) is an order isomorphism
    from hereditary V-saturated sets onto the pairs.
    """
    vset = check_subset(g, V, "ideal vertex set")
    return _classify(g, vset, None)


def _classify(g: Graph, vset: frozenset[str], pairs: Optional[list[TPair]]) -> dict:
    sinks, regular, _ = vertex_classes(g)
    case_i = (g.vertices - sinks) <= vset
    case_ii = is_hilbert_bimodule(g) and vset == regular
    out = {
        "case_i": case_i,
        "case_ii": case_ii,
        "simple": case_i or case_ii,
        "bijection_verified": None,
    }
    if out["simple"]:
        hersat = enumerate_hereditary_saturated(g, vset)
        embedded = sorted(embed_simple(g, vset, f) for f in hersat)
        if pairs is None:
            pairs = _raw_tpairs(g, vset)
        if embedded != pairs:
            raise LatticeError("simple-case collapse failed; lattice inconsistent")
        out["bijection_verified"] = True
    return out


def _raw_tpairs(g: Graph, vset: frozenset[str]) -> list[TPair]:
    pairs: list[TPair] = []
    for f in hereditary_sets(g):
        if v_saturation(g, f, vset) != f:
            continue
        elig = eligible_vertices(g, f)
        forced = vset - f
        assert forced <= elig, "saturated kernel must leave V-vertices eligible"
        free = sorted(elig - vset)
        for mask in range(1 << len(free)):
            extra = {free[i] for i in range(len(free)) if mask >> i & 1}
            pairs.append(TPair(f, f | forced | extra))
    return sorted(pairs)


def tpair_meet(g: Graph, V: Iterable[str], p: TPair, q: TPair) -> TPair:
    """Greatest pair below both: componentwise intersection, re-checked."""
    vset = check_subset(g, V, "ideal vertex set")
    kernel = p.kernel & q.kernel
    elig = eligible_vertices(g, kernel)
    coiso = kernel | (vset - kernel) | (p.coiso & q.coiso & elig)
    return TPair(kernel, coiso)


def tpair_join(g: Graph, V: Iterable[str], p: TPair, q: TPair) -> TPair:
    """Least pair above both: close the union, absorbing stuck coiso vertices.

    A coiso vertex all of whose out-edges fall into the growing kernel cannot
    stay in the free part, so it is pushed into the kernel and the closure is
    re-run; the kernel grows strictly, so this terminates.
    """
    vset = check_subset(g, V, "ideal vertex set")
    kernel = v_saturation(g, hereditary_closure(g, p.kernel | q.kernel), vset)
    target = p.coiso | q.coiso
    while True:
        elig = eligible_vertices(g, kernel)
        stuck = (target - kernel) - elig
        if not stuck:
            break
        kernel = v_saturation(g, hereditary_closure(g, kernel | stuck), vset)
    return TPair(kernel, kernel | (vset - kernel) | (target - kernel))


def structure_decomposition(g: Graph, V: Iterable[str], F: Iterable[str]) -> dict:
    """Split (graph, V) along a hereditary F into ideal and quotient data.

    The ideal part is carried (up to Morita equivalence) by the subgraph on F
    with distinguished set F & V; the quotient is the graph with F deleted
    and distinguished set V - F.  The reported saturation records that the
    ideal generated by F equals the one generated by its V-saturation.
    """
    vset = check_subset(g, V, "ideal vertex set")
    fs = check_subset(g, F)
    if not is_hereditary(g, fs):
        raise LatticeError("structure decomposition requires a hereditary set")
    return {
        "sub": (subgraph(g, fs), fs & vset),
        "quot": (quotient_graph(g, fs), vset - fs),
        "saturation": v_saturation(g, fs, vset),
    }


def annihilator(g: Graph, V: Iterable[str]) -> frozenset[str]:
    """Largest vertex set whose ideal meets the ideal of V trivially."""
    vset = check_subset(g, V, "ideal vertex set")
    return g.vertices - vset


def hasse_dot(report: LatticeReport) -> str:
    """Hasse diagram of the report as DOT text (one node per pair)."""

    def fmt(s: frozenset[str]) -> str:
        return "{" + ",".join(sorted(s)) + "}"

    lines = ["digraph tpairs {", "  rankdir=BT;"]
    for i, p in enumerate(report.elements):
        label = f"{fmt(p.kernel)} | {fmt(p.coiso)}"
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in report.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
