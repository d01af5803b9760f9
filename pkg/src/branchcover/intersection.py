"""Perversities, allowable chains and intersection homology.

A chain is allowable when each of its simplices meets every filtration
level in controlled dimension; the intersection complex in degree j is
the space of allowable j-chains whose boundary is again allowable.
Fullness of the filtration levels makes the intersection of a simplex
with a level the face spanned by its vertices there, so allowability is
a vertex count.  Homology ranks are computed by exact elimination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AnchorUnavailable, BadDimension, InternalCheckError
from . import linalg
from .local_systems import LocalSystemQ
from .simplicial import Simplex
from .stratified import (
    StratifiedComplex,
    cone_stratified,
    induced_link,
    induced_star,
)


@dataclass(frozen=True)
class Perversity:
    """Goresky-MacPherson perversity: p(2) = 0 and unit steps."""

    top_dim: int
    values: tuple[int, ...]  # p(2), ..., p(top_dim)

    def __post_init__(self):
        if self.top_dim < 2:
            raise BadDimension("a perversity needs dimension at least 2")
        if len(self.values) != self.top_dim - 1:
            raise BadDimension(
                f"need values p(2)..p({self.top_dim}), got {len(self.values)}")
        if self.values[0] != 0:
            raise BadDimension("p(2) must be 0")
        for a, b in zip(self.values, self.values[1:]):
            if b - a not in (0, 1):
                raise BadDimension("perversity steps must be 0 or 1")

    def __getitem__(self, k: int) -> int:
        if not 2 <= k <= self.top_dim:
            raise BadDimension(f"perversity value p({k}) undefined")
        return self.values[k - 2]


def zero_perversity(m: int) -> Perversity:
    return Perversity(m, tuple(0 for _ in range(2, m + 1)))


def lower_middle(m: int) -> Perversity:
    return Perversity(m, tuple((k - 2) // 2 for k in range(2, m + 1)))


def upper_middle(m: int) -> Perversity:
    return Perversity(m, tuple((k - 1) // 2 for k in range(2, m + 1)))


def top_perversity(m: int) -> Perversity:
    return Perversity(m, tuple(k - 2 for k in range(2, m + 1)))


def complementary(p: Perversity) -> Perversity:
    return Perversity(p.top_dim, tuple(k - 2 - p[k] for k in range(2, p.top_dim + 1)))


def perversity_by_name(name: str, m: int) -> Perversity:
    table = {"lower": lower_middle, "upper": upper_middle,
             "zero": zero_perversity, "top": top_perversity}
    if name not in table:
        raise BadDimension(f"unknown perversity name {name!r}")
    return table[name](max(m, 2))


# ---------------------------------------------------------------------------
# allowability


def _level_vertex_sets(sc: StratifiedComplex) -> list[set[int]]:
    return [set(sc.level(j).vertices) for j in range(max(sc.dim, 0) + 1)]


def _allowable(s: Simplex, m: int, level_verts: list[set[int]],
               p: Perversity | None) -> bool:
    js = len(s) - 1
    for k in range(2, m + 1):
        count = sum(1 for v in s if v in level_verts[m - k])
        if count == 0:
            continue
        if p is None:
            raise BadDimension("a perversity is required in dimension >= 2")
        if count - 1 > js - k + p[k]:
            return False
    return True


def is_allowable(simplex: Simplex, sc: StratifiedComplex, p: Perversity | None) -> bool:
    """dim(s ^ X_{m-k}) <= dim s - k + p(k) for every k >= 2."""
    sc.full_check()
    return _allowable(tuple(simplex), sc.dim, _level_vertex_sets(sc), p)


# ---------------------------------------------------------------------------
# the intersection chain complex


@dataclass(frozen=True)
class ICComplexQ:
    """Allowable-chain complex with its induced boundary operators.

    ``ic_basis[j]`` spans the allowable j-chains with allowable boundary
    inside the allowable span (coordinates are allowable-simplex index
    times coefficient rank); ``boundaries[j]`` is the boundary in these
    bases, verified to square to zero.
    """

    dim: int
    coefficient_rank: int
    allowable: tuple[tuple[Simplex, ...], ...]
    ic_basis: tuple[tuple[dict, ...], ...]
    boundaries: tuple[tuple[dict, ...], ...]
    ih: tuple[int, ...]


def intersection_chain_complex(sc: StratifiedComplex, p: Perversity | None,
                               coeff: LocalSystemQ | None = None) -> ICComplexQ:
    m = sc.dim
    if m < 0:
        return ICComplexQ(-1, 1, (), (), (), ())
    sc.full_check()
    if m >= 2:
        if p is None:
            raise BadDimension("a perversity is required in dimension >= 2")
        if p.top_dim < m:
            raise BadDimension(f"perversity only defined up to {p.top_dim}, need {m}")

    r = coeff.rank if coeff is not None else 1
    singular = set(sc.singular_set.vertices)
    level_verts = _level_vertex_sets(sc)

    allowable: list[tuple[Simplex, ...]] = []
    allow_index: list[dict[Simplex, int]] = []
    for j in range(m + 1):
        simps = tuple(s for s in sc.complex.simplices_of_dim(j)
                      if _allowable(s, m, level_verts, p))
        allowable.append(simps)
        allow_index.append({s: i for i, s in enumerate(simps)})

    def anchor(s: Simplex) -> int:
        for v in s:
            if v not in singular:
                return v
        raise AnchorUnavailable(
            f"allowable simplex {list(s)} has no vertex off the singular set")

    if coeff is not None:
        for j in range(1, m + 1):
            for s in allowable[j]:
                if sum(1 for v in s if v not in singular) < 2:
                    raise AnchorUnavailable(
                        f"allowable simplex {list(s)} has fewer than two vertices off "
                        "the singular set; subdivide the base")

    def transport(u: int, v: int):
        if u == v or coeff is None:
            return None
        return coeff.transport(u, v)

    # boundary columns split into the allowable block and the rest
    allow_cols: list[list[dict[int, Fraction]]] = [[] for _ in range(m + 1)]
    other_rows: list[list[Simplex]] = [[] for _ in range(m + 1)]
    other_cols: list[list[dict[int, Fraction]]] = [[] for _ in range(m + 1)]
    for j in range(1, m + 1):
        other_index: dict[Simplex, int] = {}
        for s in allowable[j]:
            blocks = []
            a_s = anchor(s) if coeff is not None else None
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                sign = (-1) ** i
                mat = transport(a_s, anchor(face)) if coeff is not None else None
                fi = allow_index[j - 1].get(face)
                if fi is None:
                    oi = other_index.get(face)
                    if oi is None:
                        oi = len(other_index)
                        other_index[face] = oi
                    blocks.append(("o", oi, sign, mat))
                else:
                    blocks.append(("a", fi, sign, mat))
            for t in range(r):
                acol: dict[int, Fraction] = {}
                ocol: dict[int, Fraction] = {}
                for (kind, fi, sign, mat) in blocks:
                    col = acol if kind == "a" else ocol
                    base = fi * r
                    if mat is None:
                        col[base + t] = col.get(base + t, Fraction(0)) + sign
                    else:
                        for rt in range(r):
                            v = mat[rt][t]
                            if v:
                                col[base + rt] = col.get(base + rt, Fraction(0)) + sign * v
                allow_cols[j].append({k: v for k, v in acol.items() if v})
                other_cols[j].append({k: v for k, v in ocol.items() if v})
        # deterministic row order for the non-allowable faces
        ordered = sorted(other_index)
        remap = {other_index[s]: i for i, s in enumerate(ordered)}
        other_rows[j] = tuple(ordered)
        for c in other_cols[j]:
            items = [(remap[k // r] * r + k % r, v) for k, v in c.items()]
            c.clear()
            c.update(items)

    # IC_j = kernel of the non-allowable block of the boundary
    ic_basis: list[tuple[dict, ...]] = []
    free_cols: list[list[int]] = []
    for j in range(m + 1):
        ncols = len(allowable[j]) * r
        if j == 0 or not other_rows[j]:
            basis = [{i: Fraction(1)} for i in range(ncols)]
            free = list(range(ncols))
        else:
            sparse_rows: dict[int, dict[int, Fraction]] = {}
            for ci, col in enumerate(other_cols[j]):
                for row, v in col.items():
                    sparse_rows.setdefault(row, {})[ci] = v
            basis, free = linalg.sparse_nullspace(sparse_rows, ncols)
        ic_basis.append(tuple(basis))
        free_cols.append(free)

    # induced boundary in the IC bases
    boundaries: list[tuple[dict, ...]] = [()]
    for j in range(1, m + 1):
        cols = []
        prev_basis = ic_basis[j - 1]
        prev_free = free_cols[j - 1]
        free_pos = {f: i for i, f in enumerate(prev_free)}
        for vec in ic_basis[j]:
            image: dict[int, Fraction] = {}
            for ci, coefv in vec.items():
                for row, v in allow_cols[j][ci].items():
                    image[row] = image.get(row, Fraction(0)) + coefv * v
            image = {k: v for k, v in image.items() if v}
            col = {}
            for row, v in image.items():
                fp = free_pos.get(row)
                if fp is not None and v:
                    col[fp] = v
            # exact verification that the image lies in the previous IC space
            recon: dict[int, Fraction] = {}
            for fp, cv in col.items():
                for k2, v2 in prev_basis[fp].items():
                    recon[k2] = recon.get(k2, Fraction(0)) + cv * v2
            recon = {k: v for k, v in recon.items() if v}
            if recon != image:
                raise InternalCheckError(
                    f"boundary of an intersection chain in degree {j} left the "
                    "allowable-with-allowable-boundary subspace")
            cols.append(col)
        boundaries.append(tuple(cols))

    # boundary squared must vanish in the induced bases
    for j in range(2, m + 1):
        for col in boundaries[j]:
            acc: dict[int, Fraction] = {}
            for row, v in col.items():
                for row2, v2 in boundaries[j - 1][row].items():
                    acc[row2] = acc.get(row2, Fraction(0)) + v * v2
            if any(acc.values()):
                raise InternalCheckError(f"induced boundary squared is nonzero in degree {j}")

    ranks = [linalg.rank_from_columns(boundaries[j]) if 1 <= j <= m else 0
             for j in range(m + 2)]
    ih = tuple(len(ic_basis[j]) - ranks[j] - ranks[j + 1] for j in range(m + 1))
    return ICComplexQ(m, r, tuple(allowable), tuple(ic_basis),
                      tuple(boundaries), ih)


def ih_betti(sc: StratifiedComplex, p: Perversity | None,
             coeff: LocalSystemQ | None = None) -> tuple[int, ...]:
    """Intersection homology ranks in degrees 0..dim."""
    return intersection_chain_complex(sc, p, coeff).ih


# ---------------------------------------------------------------------------
# cone formula and stalk checks


@dataclass(frozen=True)
class ConeCheckResult:
    link_ih: tuple[int, ...]
    cone_ih: tuple[int, ...]
    cutoff: int
    expected: tuple[int, ...]
    mismatches: tuple[tuple[int, int, int], ...]  # (degree, expected, got)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cone_formula_check(link_sc: StratifiedComplex, p: Perversity | None,
                       coeff: LocalSystemQ | None = None) -> ConeCheckResult:
    """Verify IH of the closed cone against the truncated IH of the link.

    For a compact link of dimension l >= 1 the cone keeps the link's IH
    strictly below degree l - p(l+1) and vanishes from there on.  A
    0-dimensional link falls outside the codimension-2 theory; its cone
    is a contractible graph with IH (1, 0).
    """
    l = link_sc.dim
    if l < 0:
        raise BadDimension("the link is empty")
    link_ih = ih_betti(link_sc, p, coeff)
    cone_sc = cone_stratified(link_sc)
    cone_ih = ih_betti(cone_sc, p, coeff)
    if l == 0:
        cutoff = 1
        expected = (1, 0)
    else:
        if p is None or p.top_dim < l + 1:
            raise BadDimension(f"perversity must be defined up to {l + 1}")
        cutoff = l - p[l + 1]
        expected = tuple(link_ih[j] if j < cutoff else 0 for j in range(l + 2))
    mismatches = tuple((j, expected[j], cone_ih[j])
                       for j in range(l + 2) if expected[j] != cone_ih[j])
    return ConeCheckResult(link_ih, cone_ih, cutoff, expected, mismatches)


@dataclass(frozen=True)
class StalkCheckEntry:
    vertex: int
    level: int
    codim: int
    cutoff: int
    link_ih: tuple[int, ...]
    star_ih: tuple[int, ...]
    expected: tuple[int, ...]
    mismatches: tuple[tuple[int, int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass(frozen=True)
class StalkCheckResult:
    entries: tuple[StalkCheckEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def deligne_stalk_check(sc: StratifiedComplex, p: Perversity,
                        coeff: LocalSystemQ | None = None) -> StalkCheckResult:
    """Check the closed star of every singular vertex against the cone formula.

    The closed star of a vertex in a codimension-k stratum is a cone over
    its link, so its IH must agree with the link's IH strictly below
    degree (k-1) - p(k) and vanish from there on: the chain-level shadow
    of the truncation conditions the decomposition relies on.
    """
    m = sc.dim
    sc.full_check()
    entries = []
    for (v,) in sc.singular_set.simplices_of_dim(0):
        j = sc.min_level((v,))
        k = m - j
        link_sc = induced_link(sc, v)
        star_sc = induced_star(sc, v)
        link_ih = ih_betti(link_sc, p, coeff)
        star_ih = ih_betti(star_sc, p, coeff)
        cutoff = (k - 1) - p[k]
        expected = tuple(
            (link_ih[i] if i < len(link_ih) else 0) if i < cutoff else 0
            for i in range(m + 1))
        mism = tuple((i, expected[i], star_ih[i])
                     for i in range(m + 1) if expected[i] != star_ih[i])
        entries.append(StalkCheckEntry(v, j, k, cutoff, link_ih, star_ih, expected, mism))
    return StalkCheckResult(tuple(entries))
