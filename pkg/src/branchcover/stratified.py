"""Stratified simplicial complexes.

A stratification is a descending filtration by subcomplexes
X = X_m >= X_{m-2} >= X_{m-3} >= ... >= X_0, with the pseudomanifold
convention X_{m-1} = X_{m-2} and a dense top stratum.  Strata are the
connected pieces of the level differences, where each simplex belongs to
the smallest level containing it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import BadDimension, InsufficientSubdivision, NotFull
from .simplicial import (
    EMPTY_COMPLEX,
    SimplicialComplex,
    Simplex,
    barycentric_subdivide_complex,
    barycentric_subdivide_set,
    is_full,
    link,
    star,
)


@dataclass(frozen=True)
class Stratum:
    level: int
    dim: int
    simplices: tuple[Simplex, ...]


class StratifiedComplex:
    """Pure simplicial complex with a descending filtration.

    ``singular_levels`` lists X_{m-2}, X_{m-3}, ..., X_0 top-down; a
    truncated list is padded with empty levels.  Levels must be
    subcomplexes, descending, and of bounded dimension; every maximal
    simplex must have dimension m and lie outside X_{m-2}.
    """

    __slots__ = ("complex", "levels", "_full", "_min_level", "_strata", "_hash")

    def __init__(self, complex: SimplicialComplex,
                 singular_levels: Sequence[SimplicialComplex] = ()):
        m = complex.dim
        if m < 0 and singular_levels:
            raise BadDimension("empty complex admits no singular levels")
        levels = [EMPTY_COMPLEX] * (m + 1)
        if m >= 0:
            levels[m] = complex
        provided = list(singular_levels)
        if len(provided) > max(m - 1, 0):
            raise BadDimension(
                f"too many filtration levels for dimension {m}: got {len(provided)}")
        for i, lvl in enumerate(provided):
            levels[m - 2 - i] = lvl
        if m >= 2:
            levels[m - 1] = levels[m - 2]

        for j in range(m):
            if not levels[j].is_subcomplex_of(levels[j + 1]):
                raise BadDimension(f"filtration level {j} is not contained in level {j + 1}")
            if levels[j].dim > j:
                raise BadDimension(
                    f"filtration level {j} contains a simplex of dimension {levels[j].dim}")
        if m >= 1:
            sing = levels[m - 2].simplices if m >= 2 else frozenset()
            for s in complex.maximal_simplices():
                if len(s) - 1 != m:
                    raise BadDimension(
                        f"maximal simplex {list(s)} has dimension {len(s) - 1}, expected {m}")
                if s in sing:
                    raise BadDimension(f"top-dimensional simplex {list(s)} lies in the singular set")

        self.complex = complex
        self.levels = tuple(levels)
        self._full = None
        self._min_level = None
        self._strata = None
        self._hash = hash((complex, self.levels))

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def singular_set(self) -> SimplicialComplex:
        return self.levels[self.dim - 2] if self.dim >= 2 else EMPTY_COMPLEX

    def level(self, j: int) -> SimplicialComplex:
        if j < 0:
            return EMPTY_COMPLEX
        if j > self.dim:
            return self.complex
        return self.levels[j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, StratifiedComplex)
                and self.complex == other.complex and self.levels == other.levels)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        sizes = ",".join(str(l.n_simplices()) for l in self.levels)
        return f"StratifiedComplex(dim={self.dim}, level sizes=({sizes}))"

    def min_level(self, simplex: Simplex) -> int:
        """Smallest filtration index whose level contains the simplex."""
        table = self._min_level_table()
        return table[tuple(simplex)]

    def _min_level_table(self) -> dict[Simplex, int]:
        if self._min_level is None:
            table = {s: self.dim for s in self.complex.simplices}
            for j in range(self.dim - 1, -1, -1):
                for s in self.levels[j].simplices:
                    table[s] = j
            self._min_level = table
        return self._min_level

    def strata(self) -> tuple[Stratum, ...]:
        """Connected pieces of the level differences.

        Two simplices of the same difference are adjacent when one is a
        face of the other; since the level assignment is monotone under
        faces, any such pair is joined by a chain of facet steps inside
        the difference, so codimension-1 adjacency suffices.
        """
        if self._strata is not None:
            return self._strata
        table = self._min_level_table()
        by_level: dict[int, list[Simplex]] = {}
        for s, j in table.items():
            by_level.setdefault(j, []).append(s)
        out = []
        for j in sorted(by_level):
            group = set(by_level[j])
            adj: dict[Simplex, list[Simplex]] = {s: [] for s in group}
            for s in group:
                if len(s) > 1:
                    for facet in combinations(s, len(s) - 1):
                        if facet in group:
                            adj[s].append(facet)
                            adj[facet].append(s)
            seen: set[Simplex] = set()
            for s0 in sorted(by_level[j], key=lambda s: (len(s), s)):
                if s0 in seen:
                    continue
                piece = []
                queue = deque([s0])
                seen.add(s0)
                while queue:
                    s = queue.popleft()
                    piece.append(s)
                    for t in adj[s]:
                        if t not in seen:
                            seen.add(t)
                            queue.append(t)
                piece.sort(key=lambda s: (len(s), s))
                out.append(Stratum(level=j, dim=max(len(s) - 1 for s in piece),
                                   simplices=tuple(piece)))
        self._strata = tuple(out)
        return self._strata

    def full_check(self) -> None:
        """Raise NotFull unless every level is full in the complex."""
        if self._full is None:
            bad = [j for j in range(self.dim) if not is_full(self.complex, self.levels[j])]
            self._full = tuple(bad)
        if self._full:
            raise NotFull(
                f"filtration levels {list(self._full)} are not full subcomplexes; "
                "run barycentric_subdivide first (twice always suffices)")

    def is_full(self) -> bool:
        try:
            self.full_check()
        except NotFull:
            return False
        return True


def trivial_stratification(c: SimplicialComplex) -> StratifiedComplex:
    return StratifiedComplex(c)


def barycentric_subdivide(sc: StratifiedComplex) -> StratifiedComplex:
    """Subdivide the complex and all filtration levels together."""
    new, _b_id, chain_of = barycentric_subdivide_complex(sc.complex)
    singular = []
    for j in range(sc.dim - 2, -1, -1):
        old = sc.levels[j]
        singular.append(SimplicialComplex(barycentric_subdivide_set(chain_of, old.simplices)))
    return StratifiedComplex(new, singular)


def subdivide_with_subcomplexes(
    sc: StratifiedComplex, extras: Sequence[StratifiedComplex]
) -> tuple[StratifiedComplex, list[StratifiedComplex]]:
    """Subdivide ``sc`` once, carrying stratified subcomplexes along."""
    new, _b_id, chain_of = barycentric_subdivide_complex(sc.complex)
    singular = []
    for j in range(sc.dim - 2, -1, -1):
        singular.append(SimplicialComplex(
            barycentric_subdivide_set(chain_of, sc.levels[j].simplices)))
    new_sc = StratifiedComplex(new, singular)
    new_extras = []
    for ex in extras:
        ex_complex = SimplicialComplex(barycentric_subdivide_set(chain_of, ex.complex.simplices))
        ex_singular = []
        for j in range(ex.dim - 2, -1, -1):
            ex_singular.append(SimplicialComplex(
                barycentric_subdivide_set(chain_of, ex.levels[j].simplices)))
        new_extras.append(StratifiedComplex(ex_complex, ex_singular))
    return new_sc, new_extras


def induced_star(sc: StratifiedComplex, vertex: int) -> StratifiedComplex:
    """Closed star of a vertex with the induced filtration."""
    st = star(sc.complex, (vertex,))
    singular = []
    for j in range(sc.dim - 2, -1, -1):
        singular.append(SimplicialComplex(st.simplices & sc.levels[j].simplices))
    return StratifiedComplex(st, singular)


def induced_link(sc: StratifiedComplex, vertex: int) -> StratifiedComplex:
    """Link of a vertex with the induced filtration, indices shifted by one.

    Level j of the link is the link's intersection with ambient level
    j+1, so codimensions of strata are preserved; since levels are
    nested, content of deeper ambient levels lands at the link's deepest
    level.  When the induced filtration cannot be represented (for
    example a marked point on a 1-dimensional link, which would need a
    forbidden codimension-1 stratum), the triangulation is too coarse for
    stalk analysis at this vertex and a barycentric subdivision is
    required.
    """
    m = sc.dim
    lk = link(sc.complex, (vertex,))
    lk_simps = lk.simplices
    if lk.dim != m - 1:
        raise BadDimension(
            f"link of vertex {vertex} has dimension {lk.dim}, expected {m - 1}")
    singular = []
    for j in range(lk.dim - 2, -1, -1):
        singular.append(SimplicialComplex(lk_simps & sc.level(j + 1).simplices))
    leftover = lk_simps & sc.level(min(1, m - 1)).simplices
    if lk.dim < 2 and leftover:
        raise InsufficientSubdivision(
            f"link of vertex {vertex} is {lk.dim}-dimensional but meets the singular "
            "set; subdivide the complex once")
    try:
        return StratifiedComplex(lk, singular)
    except BadDimension as exc:
        raise InsufficientSubdivision(
            f"link of vertex {vertex} does not carry the induced filtration "
            f"({exc}); subdivide the complex once") from None


def cone_stratified(link_sc: StratifiedComplex, apex: int | None = None) -> StratifiedComplex:
    """Closed cone with the apex as the deepest stratum.

    Level j of the cone is the cone on level j-1 of the link; level 0 is
    the apex alone.
    """
    from .simplicial import cone as cone_complex  # local import to avoid cycle noise

    base = link_sc.complex
    if apex is None:
        apex = (max(base.vertices) + 1) if base.vertices else 0
    total = cone_complex(base, apex)
    m = total.dim
    singular = []
    for j in range(m - 2, -1, -1):
        lvl = link_sc.level(j - 1)
        if lvl.n_simplices() == 0:
            singular.append(SimplicialComplex(((apex,),)))
        else:
            singular.append(cone_complex(lvl, apex))
    return StratifiedComplex(total, singular)
