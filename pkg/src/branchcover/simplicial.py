"""Finite simplicial complexes and exact rational chain complexes.

A simplex is a strictly ascending tuple of non-negative integer vertex
ids; a complex is a face-closed finite set of simplices.  Boundary
operators use the ascending-vertex orientation with alternating signs,
and Betti numbers are computed exactly over the rationals.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    DuplicateSimplex,
    MissingFace,
    NonAscendingTuple,
    SimplexNotFound,
)
from . import linalg

Simplex = tuple[int, ...]


class SimplicialComplex:
    """Immutable finite abstract simplicial complex.

    The constructor normalizes the input to a frozenset and verifies face
    closure; it is meant for internally-built simplex sets.  User input
    goes through :func:`validate_complex`, which reports malformed data
    instead of silently repairing it.
    """

    __slots__ = ("_simplices", "_by_dim", "_hash", "_vertices", "_maximal")

    def __init__(self, simplices: Iterable[Simplex]):
        simps = frozenset(tuple(s) for s in simplices)
        for s in simps:
            if len(s) > 1:
                for facet in combinations(s, len(s) - 1):
                    if facet not in simps:
                        raise ValueError(f"not face-closed: {s} lacks face {facet}")
        self._simplices = simps
        by_dim: dict[int, list[Simplex]] = {}
        for s in simps:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: tuple(sorted(v)) for d, v in by_dim.items()}
        self._vertices = tuple(v for (v,) in self._by_dim.get(0, ()))
        self._hash = hash(simps)
        self._maximal = None

    @property
    def simplices(self) -> frozenset[Simplex]:
        return self._simplices

    @property
    def dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def n_simplices(self, d: int | None = None) -> int:
        if d is None:
            return len(self._simplices)
        return len(self._by_dim.get(d, ()))

    def simplices_of_dim(self, d: int) -> tuple[Simplex, ...]:
        return self._by_dim.get(d, ())

    def all_simplices(self) -> tuple[Simplex, ...]:
        return tuple(s for d in sorted(self._by_dim) for s in self._by_dim[d])

    def maximal_simplices(self) -> tuple[Simplex, ...]:
        if self._maximal is None:
            proper_faces: set[Simplex] = set()
            for s in self._simplices:
                if len(s) > 1:
                    proper_faces.update(combinations(s, len(s) - 1))
            self._maximal = tuple(s for s in self.all_simplices()
                                  if s not in proper_faces)
        return self._maximal

    def __contains__(self, simplex: Simplex) -> bool:
        return tuple(simplex) in self._simplices

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        counts = ",".join(str(self.n_simplices(d)) for d in range(self.dim + 1))
        return f"SimplicialComplex(dim={self.dim}, f=({counts}))"

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self._simplices <= other._simplices

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.n_simplices(d) for d in range(self.dim + 1))


EMPTY_COMPLEX = SimplicialComplex(())


def validate_complex(raw: Sequence[Sequence[int]]) -> SimplicialComplex:
    """Normalize a raw simplex list into a complex, rejecting bad input.

    A listed simplex whose face is absent is an error, never silently
    repaired; the caller decides how to close its input.
    """
    seen: set[Simplex] = set()
    for entry in raw:
        s = tuple(entry)
        if not s or any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in s):
            raise NonAscendingTuple(
                f"simplex {list(entry)} is not a nonempty tuple of non-negative integers")
        if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
            raise NonAscendingTuple(f"simplex {list(entry)} is not strictly ascending")
        if s in seen:
            raise DuplicateSimplex(f"simplex {list(entry)} listed twice")
        seen.add(s)
    for s in seen:
        if len(s) > 1:
            for facet in combinations(s, len(s) - 1):
                if facet not in seen:
                    raise MissingFace(f"simplex {list(s)} has unlisted face {list(facet)}")
    return SimplicialComplex(seen)


def subcomplex(c: SimplicialComplex, simplices: Iterable[Simplex]) -> SimplicialComplex:
    simps = set(tuple(s) for s in simplices)
    missing = simps - c.simplices
    if missing:
        raise SimplexNotFound(f"{sorted(missing)[0]} is not a simplex of the complex")
    return SimplicialComplex(simps)


def full_subcomplex(c: SimplicialComplex, vertices: Iterable[int]) -> SimplicialComplex:
    """Largest subcomplex whose simplices use only the given vertices."""
    vs = set(vertices)
    return SimplicialComplex(s for s in c.simplices if all(v in vs for v in s))


def is_full(c: SimplicialComplex, sub: SimplicialComplex) -> bool:
    """True if ``sub`` equals the full subcomplex on its own vertex set."""
    vs = set(sub.vertices)
    for s in c.simplices:
        if all(v in vs for v in s) and s not in sub.simplices:
            return False
    return True


def star(c: SimplicialComplex, simplex: Simplex) -> SimplicialComplex:
    """Closed star: the closure of all cofaces of ``simplex``."""
    s = tuple(simplex)
    if s not in c.simplices:
        raise SimplexNotFound(f"{list(s)} is not a simplex of the complex")
    sset = set(s)
    out: set[Simplex] = set()
    for tau in c.simplices:
        if sset <= set(tau):
            for k in range(1, len(tau) + 1):
                out.update(combinations(tau, k))
    return SimplicialComplex(out)


def link(c: SimplicialComplex, simplex: Simplex) -> SimplicialComplex:
    """Faces of star simplices disjoint from ``simplex``."""
    s = tuple(simplex)
    if s not in c.simplices:
        raise SimplexNotFound(f"{list(s)} is not a simplex of the complex")
    sset = set(s)
    st = star(c, s)
    return SimplicialComplex(t for t in st.simplices if not sset & set(t))


def cone(c: SimplicialComplex, apex: int | None = None) -> SimplicialComplex:
    """Join with a fresh apex (max id + 1 unless given)."""
    if apex is None:
        apex = (max(c.vertices) + 1) if c.vertices else 0
    simps: set[Simplex] = {(apex,)}
    for s in c.simplices:
        simps.add(s)
        simps.add(s + (apex,))
    return SimplicialComplex(simps)


def suspension(c: SimplicialComplex) -> SimplicialComplex:
    """Join with two fresh apexes (max id + 1 and + 2)."""
    base = (max(c.vertices) + 1) if c.vertices else 0
    north, south = base, base + 1
    simps: set[Simplex] = {(north,), (south,)}
    for s in c.simplices:
        simps.add(s)
        simps.add(s + (north,))
        simps.add(s + (south,))
    return SimplicialComplex(simps)


def components(c: SimplicialComplex) -> tuple[tuple[int, ...], ...]:
    """Connected components of the vertex set under edge adjacency."""
    adj: dict[int, list[int]] = {v: [] for v in c.vertices}
    for (u, v) in c.simplices_of_dim(1):
        adj[u].append(v)
        adj[v].append(u)
    seen: set[int] = set()
    comps = []
    for v0 in c.vertices:
        if v0 in seen:
            continue
        comp = []
        queue = deque([v0])
        seen.add(v0)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))


def is_connected(c: SimplicialComplex) -> bool:
    return len(components(c)) <= 1


# ---------------------------------------------------------------------------
# barycentric subdivision


def barycentric_subdivide_complex(
    c: SimplicialComplex,
) -> tuple[SimplicialComplex, dict[Simplex, int], dict[Simplex, tuple[Simplex, ...]]]:
    """Barycentric subdivision with bookkeeping.

    Returns (subdivision, barycenter ids, chain map).  Vertices of the
    subdivision are the simplices of the input, numbered in (dim, tuple)
    order; simplices are chains of proper faces, and ``chain_of`` maps
    each new simplex back to its underlying chain of old simplices.
    """
    order = c.all_simplices()
    b_id = {s: i for i, s in enumerate(order)}

    chains_ending: dict[Simplex, list[tuple[Simplex, ...]]] = {}

    def chains(s: Simplex) -> list[tuple[Simplex, ...]]:
        cached = chains_ending.get(s)
        if cached is not None:
            return cached
        out = [(s,)]
        for k in range(1, len(s)):
            for face in combinations(s, k):
                for ch in chains(face):
                    out.append(ch + (s,))
        chains_ending[s] = out
        return out

    chain_of: dict[Simplex, tuple[Simplex, ...]] = {}
    for s in order:
        for ch in chains(s):
            chain_of[tuple(b_id[x] for x in ch)] = ch
    new = SimplicialComplex(chain_of.keys())
    return new, b_id, chain_of


def barycentric_subdivide_set(
    chain_of: dict[Simplex, tuple[Simplex, ...]], old: Iterable[Simplex]
) -> set[Simplex]:
    """Simplices of the subdivision lying inside an old subcomplex."""
    old_set = set(old)
    return {ns for ns, ch in chain_of.items() if all(x in old_set for x in ch)}


# ---------------------------------------------------------------------------
# chain complexes over the rationals

SparseCol = dict[int, Fraction]


class ChainComplexQ:
    """Chain complex of finite-dimensional rational vector spaces.

    ``boundaries[j]`` is the operator from degree j to degree j-1 stored
    as a tuple of sparse columns; composition of consecutive boundaries
    is verified to vanish at construction time.
    """

    __slots__ = ("ranks", "boundaries")

    def __init__(self, ranks: Sequence[int], boundaries: Sequence[Sequence[SparseCol]]):
        self.ranks = tuple(ranks)
        self.boundaries = tuple(tuple(dict(col) for col in bd) for bd in boundaries)
        if len(self.boundaries) != len(self.ranks):
            raise ValueError("need one boundary slot per degree")
        for j, bd in enumerate(self.boundaries):
            if j == 0:
                if bd:
                    raise ValueError("degree 0 has no boundary")
                continue
            if len(bd) != self.ranks[j]:
                raise ValueError(f"boundary {j} has {len(bd)} columns, expected {self.ranks[j]}")
            for col in bd:
                for row in col:
                    if not 0 <= row < self.ranks[j - 1]:
                        raise ValueError(f"boundary {j} hits row {row} out of range")
        for j in range(2, len(self.ranks)):
            for col in self.boundaries[j]:
                acc: dict[int, Fraction] = {}
                for row, val in col.items():
                    for row2, val2 in self.boundaries[j - 1][row].items():
                        acc[row2] = acc.get(row2, Fraction(0)) + val * val2
                if any(acc.values()):
                    raise ValueError(f"boundary squared is nonzero in degree {j}")

    @property
    def dim(self) -> int:
        return len(self.ranks) - 1

    def boundary_rank(self, j: int) -> int:
        if j < 1 or j > self.dim:
            return 0
        return linalg.rank_from_columns(self.boundaries[j])


def chain_complex(c: SimplicialComplex) -> ChainComplexQ:
    """Simplicial chain complex with the ascending-vertex orientation."""
    dim = c.dim
    if dim < 0:
        return ChainComplexQ((), ())
    index = {d: {s: i for i, s in enumerate(c.simplices_of_dim(d))} for d in range(dim + 1)}
    ranks = [c.n_simplices(d) for d in range(dim + 1)]
    boundaries: list[list[SparseCol]] = [[] for _ in range(dim + 1)]
    for j in range(1, dim + 1):
        rows = index[j - 1]
        cols = []
        for s in c.simplices_of_dim(j):
            col: SparseCol = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                col[rows[face]] = Fraction((-1) ** i)
            cols.append(col)
        boundaries[j] = cols
    return ChainComplexQ(ranks, boundaries)


def betti(cc: ChainComplexQ) -> tuple[int, ...]:
    """Betti numbers b_j = rank_j - rank d_j - rank d_{j+1}, exactly."""
    if not cc.ranks:
        return ()
    brk = [cc.boundary_rank(j) for j in range(cc.dim + 2)]
    return tuple(cc.ranks[j] - brk[j] - brk[j + 1] for j in range(cc.dim + 1))


def betti_numbers(c: SimplicialComplex) -> tuple[int, ...]:
    return betti(chain_complex(c))
