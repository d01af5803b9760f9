"""Rank-r local systems over the rationals as flat edge transports.

A local system assigns an invertible rational matrix to every oriented
edge of its base complex, with inverse transports on reversed edges and
flatness over every 2-simplex.  The pushforward system of a degree-d
cover is the permutation system of the monodromy; it splits as the
constant rank-1 system plus the sum-zero kernel of the coordinate-sum
(trace) map, which is the local system driving all decomposition checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    Disconnected,
    NotASubcomplex,
    NotPermutationSystem,
    RankMismatch,
    RelatorViolatedMatrix,
)
from . import linalg
from .covering import MonodromyRep, Perm
from .presentation import EdgePathPresentation, edge_path_presentation
from .simplicial import ChainComplexQ, SimplicialComplex, betti, is_connected

Matrix = list


class LocalSystemQ:
    """Flat invertible edge-transport data over a base complex."""

    __slots__ = ("base", "rank", "transports")

    def __init__(self, base: SimplicialComplex, rank: int,
                 transports: dict[tuple[int, int], Matrix]):
        if rank < 0:
            raise RankMismatch("rank must be non-negative")
        edges = base.simplices_of_dim(1)
        for (u, v) in edges:
            if (u, v) not in transports or (v, u) not in transports:
                raise NotASubcomplex(f"edge {u}->{v} has no transport")
        ident = linalg.identity_matrix(rank)
        for (u, v) in edges:
            f, b = transports[(u, v)], transports[(v, u)]
            if len(f) != rank or any(len(row) != rank for row in f):
                raise RankMismatch(f"transport of {u}->{v} is not {rank}x{rank}")
            if not linalg.mat_equal(linalg.matmul(b, f), ident):
                raise RankMismatch(f"transport of {v}->{u} is not inverse to {u}->{v}")
        for (a, b, c) in base.simplices_of_dim(2):
            lhs = linalg.matmul(transports[(b, c)], transports[(a, b)])
            if not linalg.mat_equal(lhs, transports[(a, c)]):
                raise RankMismatch(f"flatness fails on 2-simplex {[a, b, c]}")
        self.base = base
        self.rank = rank
        self.transports = {e: [list(map(Fraction, row)) for row in m]
                           for e, m in transports.items()}

    def transport(self, u: int, v: int) -> Matrix:
        try:
            return self.transports[(u, v)]
        except KeyError:
            raise NotASubcomplex(f"no transport along {u}->{v}") from None

    @classmethod
    def from_forward_edges(cls, base: SimplicialComplex, rank: int,
                           forward: dict[tuple[int, int], Matrix]) -> "LocalSystemQ":
        transports: dict[tuple[int, int], Matrix] = {}
        for (u, v) in base.simplices_of_dim(1):
            m = forward[(u, v)]
            transports[(u, v)] = m
            transports[(v, u)] = linalg.matrix_inverse(m) if rank else []
        return cls(base, rank, transports)


def trivial_system(base: SimplicialComplex, rank: int = 1) -> LocalSystemQ:
    ident = linalg.identity_matrix(rank)
    forward = {e: ident for e in base.simplices_of_dim(1)}
    return LocalSystemQ.from_forward_edges(base, rank, forward)


@dataclass(frozen=True)
class RepresentationQ:
    """Invertible matrix assignment on the generators of a presentation."""

    presentation: EdgePathPresentation
    rank: int
    matrices: tuple

    def validate(self) -> None:
        if len(self.matrices) != len(self.presentation.generators):
            raise RelatorViolatedMatrix(
                f"{len(self.presentation.generators)} generators but "
                f"{len(self.matrices)} matrices")
        inverses = [linalg.matrix_inverse(m) if self.rank else [] for m in self.matrices]
        ident = linalg.identity_matrix(self.rank)
        for i, word in enumerate(self.presentation.relators):
            acc = ident
            for (gi, sign) in word:
                m = self.matrices[gi] if sign > 0 else inverses[gi]
                acc = linalg.matmul(m, acc)
            if not linalg.mat_equal(acc, ident):
                raise RelatorViolatedMatrix(f"relator {i} does not evaluate to the identity")


def from_representation(rep: RepresentationQ) -> LocalSystemQ:
    """Tree edges transport by the identity, generators by their matrices."""
    rep.validate()
    pres = rep.presentation
    ident = linalg.identity_matrix(rep.rank)
    forward: dict[tuple[int, int], Matrix] = {}
    for e in pres.complex.simplices_of_dim(1):
        if e in pres.tree_edges:
            forward[e] = ident
        else:
            forward[e] = rep.matrices[pres.gen_index[e]]
    return LocalSystemQ.from_forward_edges(pres.complex, rep.rank, forward)


def pushforward_local_system(pres: EdgePathPresentation, rep: MonodromyRep) -> LocalSystemQ:
    """Rank-d permutation system modeling the direct image of a d-cover."""
    matrices = tuple(linalg.permutation_matrix(img) for img in rep.images)
    return from_representation(RepresentationQ(pres, rep.degree, matrices))


# ---------------------------------------------------------------------------
# trace splitting


def sum_zero_action(perm: Perm) -> Matrix:
    """Action of a permutation on the sum-zero basis e_i - e_{d-1}."""
    d = len(perm)
    k = [[Fraction(0)] * (d - 1) for _ in range(d - 1)]
    last = perm[d - 1]
    for i in range(d - 1):
        gi = perm[i]
        if gi < d - 1:
            k[gi][i] += 1
        if last < d - 1:
            k[last][i] -= 1
    return k


@dataclass(frozen=True)
class TraceSplit:
    """Constant-plus-kernel splitting of a permutation system."""

    constant: LocalSystemQ
    kernel: LocalSystemQ
    unit: tuple          # d x 1, the all-ones column (eta)
    trace: tuple         # 1 x d, the coordinate sum (epsilon)
    kernel_inclusion: tuple   # d x (d-1), columns e_i - e_{d-1}
    kernel_projection: tuple  # (d-1) x d, v -> coordinates of v - mean


def trace_split(system: LocalSystemQ) -> TraceSplit:
    """Split a permutation system into constant part and sum-zero kernel.

    The trace (coordinate sum) composed with the unit (diagonal
    inclusion) is d times the identity, so the splitting is exact over
    the rationals.
    """
    d = system.rank
    perms: dict[tuple[int, int], Perm] = {}
    for e, m in system.transports.items():
        if not linalg.is_permutation_matrix(m):
            raise NotPermutationSystem(f"transport along {e[0]}->{e[1]} is not a permutation matrix")
        perms[e] = tuple(linalg.permutation_of_matrix(m))

    constant = trivial_system(system.base, 1)
    forward = {e: sum_zero_action(perms[e]) for e in system.base.simplices_of_dim(1)}
    kernel = LocalSystemQ.from_forward_edges(system.base, max(d - 1, 0), forward)

    unit = tuple((Fraction(1),) for _ in range(d))
    trace = (tuple(Fraction(1) for _ in range(d)),)
    incl = tuple(
        tuple(Fraction((1 if j == i else 0) - (1 if j == d - 1 else 0)) for i in range(d - 1))
        for j in range(d))
    proj = tuple(
        tuple(Fraction(1 if i == j else 0) - Fraction(1, d) for j in range(d))
        for i in range(d - 1))
    return TraceSplit(constant, kernel, unit, trace, incl, proj)


# ---------------------------------------------------------------------------
# sections and twisted homology


def monodromy_matrices(system: LocalSystemQ) -> list:
    """Transport around each generator loop of the base, at the basepoint."""
    base = system.base
    if not is_connected(base):
        raise Disconnected("base of the local system is not connected")
    if not base.vertices:
        return []
    pres = edge_path_presentation(base, min(base.vertices))
    mats = []
    for (u, v) in pres.generators:
        path = pres.tree_path(u) + (v,) + tuple(reversed(pres.tree_path(v)))[1:]
        acc = linalg.identity_matrix(system.rank)
        for a, b in zip(path, path[1:]):
            acc = linalg.matmul(system.transport(a, b), acc)
        mats.append(acc)
    return mats


def global_sections(system: LocalSystemQ) -> tuple[int, list]:
    """Dimension and basis of the joint fixed space of the monodromy."""
    mats = monodromy_matrices(system)
    if not mats:
        basis = [{i: Fraction(1)} for i in range(system.rank)]
        return system.rank, basis
    basis, dim = linalg.invariant_space(mats)
    return dim, basis


def invariant_dimension(matrices, rank: int) -> int:
    """Dimension of the joint fixed space of explicit matrices."""
    mats = [m for m in matrices if not linalg.mat_equal(m, linalg.identity_matrix(rank))]
    if not mats:
        return rank
    _basis, dim = linalg.invariant_space(mats)
    return dim


def twisted_chain_complex(c: SimplicialComplex, system: LocalSystemQ) -> ChainComplexQ:
    """Chains with coefficients attached at the minimal vertex of each simplex.

    The boundary transports coefficients along the edge joining the
    minimal vertices, which lies inside the simplex; flatness makes the
    square of the boundary vanish.
    """
    for e in c.simplices_of_dim(1):
        if e not in system.transports:
            raise NotASubcomplex(f"local system has no transport for edge {list(e)}")
    r = system.rank
    dim = c.dim
    if dim < 0:
        return ChainComplexQ((), ())
    index = {d: {s: i for i, s in enumerate(c.simplices_of_dim(d))} for d in range(dim + 1)}
    ranks = [c.n_simplices(d) * r for d in range(dim + 1)]
    boundaries: list[list[dict[int, Fraction]]] = [[] for _ in range(dim + 1)]
    for j in range(1, dim + 1):
        rows = index[j - 1]
        cols: list[dict[int, Fraction]] = []
        for s in c.simplices_of_dim(j):
            blocks = []
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                sign = (-1) ** i
                if i == 0:
                    mat = system.transport(s[0], s[1])
                else:
                    mat = None  # identity: anchors agree
                blocks.append((rows[face], sign, mat))
            for t in range(r):
                col: dict[int, Fraction] = {}
                for (fi, sign, mat) in blocks:
                    base_row = fi * r
                    if mat is None:
                        col[base_row + t] = col.get(base_row + t, Fraction(0)) + sign
                    else:
                        for rt in range(r):
                            v = mat[rt][t]
                            if v:
                                col[base_row + rt] = col.get(base_row + rt, Fraction(0)) + sign * v
                cols.append({k: v for k, v in col.items() if v})
        boundaries[j] = cols
    return ChainComplexQ(ranks, boundaries)


def twisted_betti(c: SimplicialComplex, system: LocalSystemQ) -> tuple[int, ...]:
    return betti(twisted_chain_complex(c, system))


def restrict(system: LocalSystemQ, sub: SimplicialComplex) -> LocalSystemQ:
    """Restriction to a subcomplex; flatness is inherited."""
    if not sub.is_subcomplex_of(system.base):
        raise NotASubcomplex("restriction target is not a subcomplex of the base")
    transports = {}
    for (u, v) in sub.simplices_of_dim(1):
        transports[(u, v)] = system.transports[(u, v)]
        transports[(v, u)] = system.transports[(v, u)]
    return LocalSystemQ(sub, system.rank, transports)
