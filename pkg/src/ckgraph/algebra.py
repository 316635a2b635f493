"""Exact arithmetic in the graded *-algebra spanned by graph matrix units.

An element is a finite linear combination, with Gaussian-rational
coefficients, of matrix units Theta_{mu,nu} indexed by pairs of paths with a
common range vertex.  Symbolically Theta_{mu,nu} = s_mu s_nu*; the vertex
projection p_v is Theta_{v,v} and the edge generator s_e is Theta_{e, r(e)}.

Bidegree of Theta_{mu,nu} is (|mu|, |nu|); its degree is |mu| - |nu| (the
gauge action scales a degree-k element by z^k, so s_e has degree +1).

Two implementations of the product are exposed on purpose:

- star_lambda builds the product from the shifted-matrix convolution
  a * b = a . sum_k Lambda^k(b) + sum_{k>=1} Lambda^k(a) . b, where "."
  is entrywise bucket-matrix multiplication and Lambda shifts a matrix one
  step down the diagonal while right-tensoring each entry;
- star_splice extends the unit-level rule
  s_mu s_nu* . s_alpha s_beta* = s_{mu gamma} s_beta*   if alpha = nu gamma,
                               = s_mu s_{beta gamma}*   if nu = alpha gamma,
                               = 0                      otherwise,
  bilinearly.

They must agree everywhere; the test suite pins them against each other.
Elements are immutable canonical values (no zero coefficients, terms ordered
by bidegree then lexicographic paths) tied to the graph they live over;
mixing graphs raises instead of coercing.  No floating point enters this
module, so equality of elements is structural equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from .graph import Graph, GraphError, Path

ScalarLike = Union["GaussianRational", Fraction, int, str]


class AlgebraError(ValueError):
    """Raised for ill-formed terms, graph mismatches, or bad scalars."""


class GaussianRational:
    """Exact complex scalar re + im*i with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[Fraction, int, str] = 0, im: Union[Fraction, int, str] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        return f"({self.re}+{self.im}i)"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


class Term:
    """Matrix unit Theta_{mu,nu}; both paths must share their range vertex."""

    __slots__ = ("mu", "nu")

    def __init__(self, mu: Path, nu: Path):
        if mu.range_ != nu.range_:
            raise AlgebraError(
                f"matrix unit needs a common range vertex, got {mu.range_!r} vs {nu.range_!r}"
            )
        self.mu = mu
        self.nu = nu

    @property
    def bidegree(self) -> tuple[int, int]:
        return (len(self.mu), len(self.nu))

    @property
    def degree(self) -> int:
        return len(self.mu) - len(self.nu)

    @property
    def range_vertex(self) -> str:
        return self.mu.range_

    def _key(self) -> tuple:
        return (self.bidegree, self.mu._key(), self.nu._key())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Term) and self.mu == other.mu and self.nu == other.nu

    def __hash__(self) -> int:
        return hash((self.mu, self.nu))

    def __lt__(self, other: "Term") -> bool:
        return self._key() < other._key()

    def __repr__(self) -> str:
        return f"T[{self.mu.label()},{self.nu.label()}]"


class Element:
    """Canonical finite combination of matrix units over a fixed graph."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: Graph, terms: Optional[dict[Term, GaussianRational]] = None):
        self.graph = graph
        pruned = {t: c for t, c in (terms or {}).items() if not c.is_zero()}
        self.terms: dict[Term, GaussianRational] = dict(
            sorted(pruned.items(), key=lambda tc: tc[0]._key())
        )

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(graph: Graph) -> "Element":
        return Element(graph, {})

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Term, GaussianRational]]:
        return list(self.terms.items())

    # -- linear structure -------------------------------------------------------

    def _require_same_graph(self, other: "Element") -> None:
        if self.graph != other.graph:
            raise AlgebraError("elements live over different graphs")

    def __add__(self, other: "Element") -> "Element":
        self._require_same_graph(other)
        acc = dict(self.terms)
        for t, c in other.terms.items():
            _accumulate(acc, t, c)
        return Element(self.graph, acc)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.graph, {t: -c for t, c in self.terms.items()})

    def scale(self, c: ScalarLike) -> "Element":
        g = GaussianRational.of(c)
        return Element(self.graph, {t: g * x for t, x in self.terms.items()})

    def adjoint(self) -> "Element":
        """Swap mu and nu in every unit and conjugate the coefficients."""
        return Element(
            self.graph,
            {Term(t.nu, t.mu): c.conjugate() for t, c in self.terms.items()},
        )

    def __mul__(self, other: "Element") -> "Element":
        return star_splice(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Element)
            and self.graph == other.graph
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.graph, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Element(0)"
        parts = [f"{c!r}*{t!r}" for t, c in self.terms.items()]
        return "Element(" + " + ".join(parts) + ")"

    # -- grading ----------------------------------------------------------------

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted({t.bidegree for t in self.terms})

    def degrees(self) -> list[int]:
        return sorted({t.degree for t in self.terms})

    def component(self, n: int, m: int) -> "Element":
        """Terms of bidegree (n, m), i.e. |mu| = n and |nu| = m."""
        return Element(
            self.graph, {t: c for t, c in self.terms.items() if t.bidegree == (n, m)}
        )

    def degree_component(self, k: int) -> "Element":
        return Element(
            self.graph, {t: c for t, c in self.terms.items() if t.degree == k}
        )

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1


def _accumulate(acc: dict[Term, GaussianRational], t: Term, c: GaussianRational) -> None:
    cur = acc.get(t)
    acc[t] = c if cur is None else cur + c


# -- generators ---------------------------------------------------------------


def unit(graph: Graph, mu: Path, nu: Path, coeff: ScalarLike = 1) -> Element:
    """Single matrix unit coeff * Theta_{mu,nu}; the ranges must match."""
    return Element(graph, {Term(mu, nu): GaussianRational.of(coeff)})


def vertex_projection(graph: Graph, v: str) -> Element:
    p = graph.vertex_path(v)
    return unit(graph, p, p)


def edge_generator(graph: Graph, eid: str) -> Element:
    """The partial isometry s_e as an element: Theta_{e, r(e)}."""
    if eid not in graph.edges:
        raise GraphError(f"unknown edge {eid!r}")
    mu = graph.make_path((eid,))
    return unit(graph, mu, graph.vertex_path(mu.range_))


# -- right tensoring ----------------------------------------------------------


def right_tensor(a: Element, t: int = 1) -> Element:
    """Apply the degree-shift endomorphism t times.

    Each unit picks up every one-edge extension of its common range vertex on
    both paths; units whose range vertex is a sink vanish.
    """
    if t < 0:
        raise AlgebraError("tensor power must be >= 0")
    g = a.graph
    cur = a
    for _ in range(t):
        acc: dict[Term, GaussianRational] = {}
        for term, c in cur.terms.items():
            for eid in g.out_edges(term.range_vertex):
                _accumulate(
                    acc,
                    Term(g.extend_path(term.mu, eid), g.extend_path(term.nu, eid)),
                    c,
                )
        cur = Element(g, acc)
    return cur


# -- products -------------------------------------------------------------------


def _matrix_multiply(a: Element, b: Element) -> dict[Term, GaussianRational]:
    """Entrywise bucket-matrix product: compose units when nu == alpha."""
    by_mu: dict[Path, list[tuple[Term, GaussianRational]]] = {}
    for t, c in b.terms.items():
        by_mu.setdefault(t.mu, []).append((t, c))
    acc: dict[Term, GaussianRational] = {}
    for ta, ca in a.terms.items():
        for tb, cb in by_mu.get(ta.nu, ()):
            _accumulate(acc, Term(ta.mu, tb.nu), ca * cb)
    return acc


def star_lambda(a: Element, b: Element) -> Element:
    """Convolution product built literally from the shifted-matrix formula.

    Only finitely many shifts contribute: the first sum needs the shift of b
    to reach the column indices of a, the second the row indices of b.
    """
    a._require_same_graph(b)
    acc: dict[Term, GaussianRational] = {}
    k_first = max((len(t.nu) for t in a.terms), default=-1)
    k_second = max((len(t.mu) for t in b.terms), default=-1)
    shifted_b = b
    for k in range(0, k_first + 1):
        if k > 0:
            shifted_b = right_tensor(shifted_b, 1)
        for t, c in _matrix_multiply(a, shifted_b).items():
            _accumulate(acc, t, c)
    shifted_a = a
    for _k in range(1, k_second + 1):
        shifted_a = right_tensor(shifted_a, 1)
        for t, c in _matrix_multiply(shifted_a, b).items():
            _accumulate(acc, t, c)
    return Element(a.graph, acc)


def _strip_prefix(g: Graph, nu: Path, alpha: Path) -> Optional[Path]:
    """Path gamma with alpha = nu . gamma, or None when nu is not a prefix."""
    if len(nu) > len(alpha):
        return None
    if nu.is_vertex:
        if alpha.source != nu.base:
            return None
        return alpha
    if alpha.edges[: len(nu)] != nu.edges:
        return None
    rest = alpha.edges[len(nu):]
    if not rest:
        return g.vertex_path(alpha.range_)
    return g.make_path(rest)


def _splice(g: Graph, mu: Path, gamma: Path) -> Path:
    if gamma.is_vertex:
        return mu
    if mu.is_vertex:
        return gamma
    return g.make_path(mu.edges + gamma.edges)


def star_splice(a: Element, b: Element) -> Element:
    """Convolution product via the unit-level path-splice rule."""
    a._require_same_graph(b)
    g = a.graph
    acc: dict[Term, GaussianRational] = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            gamma = _strip_prefix(g, ta.nu, tb.mu)
            if gamma is not None:
                _accumulate(acc, Term(_splice(g, ta.mu, gamma), tb.nu), ca * cb)
                continue
            gamma = _strip_prefix(g, tb.mu, ta.nu)
            if gamma is not None and len(gamma) > 0:
                _accumulate(acc, Term(ta.mu, _splice(g, tb.nu, gamma)), ca * cb)
    return Element(a.graph, acc)


# -- JSON ------------------------------------------------------------------------


def _path_to_json(p: Path):
    if p.is_vertex:
        return {"vertex": p.base}
    return list(p.edges)


def _path_from_json(g: Graph, data) -> Path:
    if isinstance(data, dict):
        if set(data.keys()) != {"vertex"}:
            raise AlgebraError(f'path JSON object must be {{"vertex": id}}, got {data!r}')
        return g.vertex_path(data["vertex"])
    if isinstance(data, list):
        if not data:
            raise AlgebraError('length-0 paths use {"vertex": id}, not []')
        return g.make_path(data)
    raise AlgebraError(f"bad path JSON {data!r}")


def _fraction_to_json(f: Fraction) -> str:
    return str(f)


def _fraction_from_json(data) -> Fraction:
    if isinstance(data, bool):
        raise AlgebraError(f"bad rational {data!r}")
    if isinstance(data, (int, str)):
        try:
            return Fraction(data)
        except (ValueError, ZeroDivisionError) as exc:
            raise AlgebraError(f"bad rational {data!r}") from exc
    raise AlgebraError(f"rationals must be integers or fraction strings, got {data!r}")


def element_to_json(a: Element) -> list[dict]:
    return [
        {
            "mu": _path_to_json(t.mu),
            "nu": _path_to_json(t.nu),
            "coeff": {"re": _fraction_to_json(c.re), "im": _fraction_to_json(c.im)},
        }
        for t, c in a.sorted_terms()
    ]


def element_from_json(g: Graph, data) -> Element:
    if not isinstance(data, list):
        raise AlgebraError("element JSON must be a list of term records")
    acc: dict[Term, GaussianRational] = {}
    for rec in data:
        if not isinstance(rec, dict) or not {"mu", "nu", "coeff"} <= set(rec.keys()):
            raise AlgebraError(f'term record needs "mu", "nu", "coeff": {rec!r}')
        coeff = rec["coeff"]
        if not isinstance(coeff, dict):
            raise AlgebraError(f"coeff must be an object with re/im, got {coeff!r}")
        c = GaussianRational(
            _fraction_from_json(coeff.get("re", 0)),
            _fraction_from_json(coeff.get("im", 0)),
        )
        _accumulate(acc, Term(_path_from_json(g, rec["mu"]), _path_from_json(g, rec["nu"])), c)
    return Element(g, acc)
