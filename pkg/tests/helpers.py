"""Shared test tooling: deterministic graph corpus, random elements, oracles.

Everything here is seeded and deterministic.  The oracles are written from
the definitions (raw loops over edges and subsets), independent of the
library's own combinatorics, so they can referee it.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from ckgraph import (
    CKFamily,
    Element,
    GaussianRational,
    Graph,
    unit,
    v_saturation,
)

CORPUS_SEED = 20240901


def random_graph(rng: random.Random, max_vertices: int = 5, max_edges: int = 8) -> Graph:
    nv = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    ne = rng.randint(0, max_edges)
    edges = []
    for i in range(ne):
        edges.append((f"e{i}", rng.choice(vertices), rng.choice(vertices)))
    return Graph(vertices, edges)


def corpus(count: int = 100) -> list[Graph]:
    """Fixed deterministic corpus of small graphs (empty graph included)."""
    rng = random.Random(CORPUS_SEED)
    graphs = [Graph([], [])]
    while len(graphs) < count:
        graphs.append(random_graph(rng))
    return graphs


def acyclic_corpus(count: int = 20) -> list[Graph]:
    """Deterministic acyclic graphs: edges only point to higher vertex indices."""
    rng = random.Random(CORPUS_SEED + 1)
    graphs = []
    while len(graphs) < count:
        nv = rng.randint(1, 5)
        vertices = [f"v{i}" for i in range(nv)]
        edges = []
        for i in range(rng.randint(0, 7)):
            a, b = rng.randint(0, nv - 1), rng.randint(0, nv - 1)
            if a == b:
                continue
            lo, hi = min(a, b), max(a, b)
            edges.append((f"e{i}", f"v{lo}", f"v{hi}"))
        g = Graph(vertices, edges)
        assert not g.has_cycle()
        graphs.append(g)
    return graphs


def random_subset(rng: random.Random, items) -> frozenset[str]:
    return frozenset(x for x in items if rng.random() < 0.5)


def random_scalar(rng: random.Random) -> GaussianRational:
    def frac():
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))

    re = frac()
    im = frac() if rng.random() < 0.4 else Fraction(0)
    if re == 0 and im == 0:
        re = Fraction(1)
    return GaussianRational(re, im)


def random_forward_path(rng: random.Random, g: Graph, source: str, length: int):
    p = g.vertex_path(source)
    for _ in range(length):
        options = g.out_edges(p.range_)
        if not options:
            return None
        p = g.extend_path(p, rng.choice(options))
    return p


def random_backward_path(rng: random.Random, g: Graph, target: str, length: int):
    """Path of the requested length ending at target, or None."""
    ids: list[str] = []
    cur = target
    for _ in range(length):
        options = g.in_edges(cur)
        if not options:
            return None
        eid = rng.choice(options)
        ids.insert(0, eid)
        cur = g.src(eid)
    if not ids:
        return g.vertex_path(target)
    return g.make_path(ids)


def random_element(rng: random.Random, g: Graph, max_terms: int = 4, max_len: int = 2) -> Element:
    acc = Element.zero(g)
    verts = g.sorted_vertices()
    if not verts:
        return acc
    for _ in range(rng.randint(1, max_terms)):
        mu = random_forward_path(rng, g, rng.choice(verts), rng.randint(0, max_len))
        if mu is None:
            continue
        nu = random_backward_path(rng, g, mu.range_, rng.randint(0, max_len))
        if nu is None:
            continue
        acc = acc + unit(g, mu, nu, random_scalar(rng))
    return acc


def random_homogeneous(
    rng: random.Random, g: Graph, degree: int, max_terms: int = 4, max_len: int = 2
) -> Element:
    """Homogeneous element of the requested degree (may come out zero)."""
    acc = Element.zero(g)
    verts = g.sorted_vertices()
    if not verts:
        return acc
    for _ in range(rng.randint(1, max_terms)):
        nu_len = rng.randint(max(0, -degree), max_len)
        mu_len = nu_len + degree
        if mu_len < 0:
            continue
        mu = random_forward_path(rng, g, rng.choice(verts), mu_len)
        if mu is None:
            continue
        nu = random_backward_path(rng, g, mu.range_, nu_len)
        if nu is None:
            continue
        acc = acc + unit(g, mu, nu, random_scalar(rng))
    return acc


def some_homogeneous(rng: random.Random, g: Graph, tries: int = 12, degrees=(-2, -1, 0, 1, 2)):
    """Keep sampling until a nonzero homogeneous element appears (or give up)."""
    for _ in range(tries):
        a = random_homogeneous(rng, g, rng.choice(degrees))
        if not a.is_zero():
            return a
    return None


def nonzero_homogeneous(rng: random.Random, g: Graph, degrees=(-2, -1, 0, 1, 2)) -> Element:
    """Like some_homogeneous but guaranteed (falls back to a vertex projection)."""
    a = some_homogeneous(rng, g, degrees=degrees)
    if a is not None:
        return a
    from ckgraph import vertex_projection

    return vertex_projection(g, rng.choice(g.sorted_vertices()))


def lift_element(g: Graph, a: Element) -> Element:
    """Rebuild an element of a subgraph/quotient over the ambient graph g."""
    out = Element.zero(g)
    for term, c in a.terms.items():
        mu = g.make_path(term.mu.edges) if term.mu.edges else g.vertex_path(term.mu.base)
        nu = g.make_path(term.nu.edges) if term.nu.edges else g.vertex_path(term.nu.base)
        out = out + unit(g, mu, nu, c)
    return out


# -- independent oracles ------------------------------------------------------------


def incidence_matrix(g: Graph) -> np.ndarray:
    verts = g.sorted_vertices()
    idx = {v: i for i, v in enumerate(verts)}
    m = np.zeros((len(verts), len(verts)), dtype=np.int64)
    for _e, (src, dst) in g.edges.items():
        m[idx[src], idx[dst]] += 1
    return m


def brute_force_tpairs(g: Graph, V: frozenset[str]) -> set[tuple[frozenset, frozenset]]:
    """Exhaustive subset-pair check of the three pair invariants."""
    verts = g.sorted_vertices()
    subsets = [
        frozenset(c)
        for r in range(len(verts) + 1)
        for c in itertools.combinations(verts, r)
    ]
    out = set()
    for F in subsets:
        hereditary = all(dst in F for _e, (src, dst) in g.edges.items() if src in F)
        if not hereditary:
            continue
        eligible = {
            v
            for v in verts
            if v not in F
            and any(src == v and dst not in F for _e, (src, dst) in g.edges.items())
        }
        for Fp in subsets:
            if not (F <= Fp and V <= Fp):
                continue
            if (Fp - F) <= eligible:
                out.add((F, Fp))
    return out


def spectral_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def brute_force_seminorm(a: Element, vset: frozenset[str]) -> float:
    """Evaluate the limit norm formula by materializing tensor powers.

    Computes every partial sum symbolically out to a horizon past the
    reachability period (the horizon length is the only thing borrowed from
    the library; all values come from direct block norms), so it checks the
    escape/tail shortcuts of the production engine.  Exponential in the
    horizon; only use on small graphs.
    """
    from ckgraph import right_tensor
    from ckgraph.norms import ReachabilityProfile, decompose_blocks

    if a.is_zero():
        return 0.0
    (k,) = a.degrees()
    r0 = max(len(t.mu) for t in a.terms)
    horizon = r0 + ReachabilityProfile(a.graph).window + 2
    best = 0.0
    c = Element.zero(a.graph)
    for s in range(max(0, k), horizon + 1):
        c = right_tensor(c, 1) + a.component(s, s - k)
        dec = decompose_blocks(c)
        if s < horizon:
            best = max(
                best,
                max(
                    (dec.blocks[u].operator_norm() for u in dec.blocks if u not in vset),
                    default=0.0,
                ),
            )
        else:
            best = max(best, dec.norm())
    return best


def image_rank(matrices: list[np.ndarray], tol: float = 1e-9) -> int:
    """Complex linear dimension of the span of the given matrices."""
    if not matrices:
        return 0
    stacked = np.array([m.reshape(-1) for m in matrices])
    return int(np.linalg.matrix_rank(stacked, tol=tol))


# -- canonical finite-dimensional family for acyclic pairs -----------------------------


def path_space_family(g: Graph, V: frozenset[str]) -> CKFamily:
    """Faithful family on the finite path spaces of an acyclic pair.

    Basis vectors are the paths of the reduced graph that end at a vertex
    carrying a defect projection (one block per such vertex).  Edges act by
    prepending; the grading witness counts path length.  When the reduction
    removes everything the family is the 1-dimensional zero family.
    """
    assert not g.has_cycle()
    removed = v_saturation(g, frozenset(), V)
    kept_vertices = g.vertices - removed
    kept_edges = {e for e, (src, dst) in g.edges.items() if dst not in removed}
    block_vertices = sorted(kept_vertices - (V - removed))

    paths = []
    frontier = [g.vertex_path(v) for v in sorted(kept_vertices)]
    while frontier:
        paths.extend(frontier)
        frontier = [
            g.extend_path(p, e)
            for p in frontier
            for e in g.out_edges(p.range_)
            if e in kept_edges
        ]
    basis = sorted(p for p in paths if p.range_ in block_vertices)
    dim = len(basis)
    if dim == 0:
        zero = np.zeros((1, 1))
        return CKFamily(
            1,
            {v: zero.copy() for v in g.vertices},
            {e: zero.copy() for e in g.edges},
            zero.copy(),
        )
    index = {p: i for i, p in enumerate(basis)}
    P = {v: np.zeros((dim, dim), dtype=complex) for v in g.vertices}
    S = {e: np.zeros((dim, dim), dtype=complex) for e in g.edges}
    D = np.zeros((dim, dim), dtype=complex)
    for p, i in index.items():
        P[p.source][i, i] = 1.0
        D[i, i] = len(p)
    for e in kept_edges:
        dst = g.dst(e)
        for p, i in index.items():
            if p.source != dst:
                continue
            extended = g.make_path((e,) + p.edges) if p.edges else g.make_path((e,))
            S[e][index[extended], i] = 1.0
    return CKFamily(dim, P, S, D)
