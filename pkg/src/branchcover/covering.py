"""Branched covers from monodromy data.

The complement of the branch locus is modeled as the full subcomplex on
the vertices off the locus (legitimate once the locus is full).  A
validated permutation assignment on the edge-path generators glues the
unbranched cover sheet by sheet; the branched cover is then completed by
adding one vertex per connected component of the preimage of each
punctured star, which is the combinatorial form of Fox completion.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    BadBasepoint,
    BranchNotInCodim2Level,
    ChiMismatch,
    Disconnected,
    DisconnectedPuncturedStar,
    InsufficientSubdivision,
    MissingGenerator,
    NotAPermutation,
    NotASubcomplex,
    NotFull,
    RelatorViolated,
    SimplexNotInBranchLocus,
    SingularOutsideBranch,
)
from .presentation import EdgePathPresentation, edge_path_presentation
from .simplicial import (
    SimplicialComplex,
    Simplex,
    full_subcomplex,
    is_connected,
    is_full,
    star,
)
from .stratified import StratifiedComplex

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations


def identity_perm(d: int) -> Perm:
    return tuple(range(d))


def compose_perms(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p[q[i]]: q acts first."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def is_permutation(seq: Sequence[int], d: int) -> bool:
    return len(seq) == d and sorted(seq) == list(range(d))


def orbit_count(perms: Iterable[Perm], d: int) -> int:
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i in range(d):
            ri, rj = find(i), find(p[i])
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(d)})


# ---------------------------------------------------------------------------
# monodromy data


@dataclass(frozen=True)
class MonodromyRep:
    """Degree-d permutation assignment on the ordered generators."""

    degree: int
    images: tuple[Perm, ...]

    @classmethod
    def from_edge_dict(cls, pres: EdgePathPresentation, degree: int,
                       assignments: dict[tuple[int, int], Sequence[int]]) -> "MonodromyRep":
        images = []
        known = set(pres.generators)
        for edge in assignments:
            if tuple(edge) not in known:
                raise MissingGenerator(
                    f"{edge[0]}->{edge[1]} is not a generator edge of the presentation")
        for e in pres.generators:
            if e not in assignments:
                raise MissingGenerator(f"no image assigned to generator {e[0]}->{e[1]}")
            images.append(tuple(assignments[e]))
        return cls(degree, tuple(images))


def validate_monodromy(pres: EdgePathPresentation, rep: MonodromyRep) -> None:
    """Accept iff all images are permutations and all relators map to 1."""
    d = rep.degree
    if d < 1:
        raise NotAPermutation("degree must be at least 1")
    if len(rep.images) != len(pres.generators):
        raise MissingGenerator(
            f"{len(pres.generators)} generators but {len(rep.images)} images")
    for e, img in zip(pres.generators, rep.images):
        if not is_permutation(img, d):
            raise NotAPermutation(f"image of generator {e[0]}->{e[1]} is not a permutation: {list(img)}")
    ident = identity_perm(d)
    for i, word in enumerate(pres.relators):
        acc = ident
        for (gi, sign) in word:
            p = rep.images[gi] if sign > 0 else invert_perm(rep.images[gi])
            acc = compose_perms(p, acc)
        if acc != ident:
            raise RelatorViolated(f"relator {i} evaluates to {list(acc)}")


def transport_table(pres: EdgePathPresentation, rep: MonodromyRep) -> dict[tuple[int, int], Perm]:
    """Oriented edge -> sheet permutation, for every edge of the base."""
    d = rep.degree
    ident = identity_perm(d)
    table: dict[tuple[int, int], Perm] = {}
    for e in pres.complex.simplices_of_dim(1):
        u, v = e
        if e in pres.tree_edges:
            table[(u, v)] = ident
            table[(v, u)] = ident
        else:
            img = rep.images[pres.gen_index[e]]
            table[(u, v)] = img
            table[(v, u)] = invert_perm(img)
    return table


def transport_along(table: dict[tuple[int, int], Perm], path: Sequence[int], d: int) -> Perm:
    acc = identity_perm(d)
    for u, v in zip(path, path[1:]):
        acc = compose_perms(table[(u, v)], acc)
    return acc


# ---------------------------------------------------------------------------
# branched cover specification


class BranchedCoverSpec:
    """Base, branch locus and validated monodromy on the complement."""

    __slots__ = ("base", "branch", "complement", "presentation", "monodromy",
                 "basepoint", "branch_vertices", "_table", "_punctured")

    def __init__(self, base: StratifiedComplex, branch: StratifiedComplex | None,
                 monodromy: MonodromyRep, basepoint: int | None = None):
        y = base.complex
        m = base.dim
        if branch is not None and branch.complex.n_simplices() == 0:
            branch = None
        if branch is not None:
            r = branch.complex
            if not r.is_subcomplex_of(y):
                raise NotASubcomplex("branch locus is not a subcomplex of the base")
            if r.dim > m - 2:
                raise BranchNotInCodim2Level(
                    f"branch locus has dimension {r.dim} in a base of dimension {m}")
            if not is_full(y, r):
                raise NotFull(
                    "branch locus is not a full subcomplex of the base; "
                    "run barycentric_subdivide first")
            if m >= 2 and not base.singular_set.is_subcomplex_of(r):
                raise SingularOutsideBranch(
                    "singular set of the base must be contained in the branch locus")
            branch_vertices = frozenset(r.vertices)
        else:
            branch_vertices = frozenset()

        complement = full_subcomplex(y, (v for v in y.vertices if v not in branch_vertices))
        if complement.n_simplices() == 0:
            raise Disconnected("complement of the branch locus is empty")
        if not is_connected(complement):
            raise Disconnected("complement of the branch locus is not connected")
        if basepoint is None:
            basepoint = min(complement.vertices)
        if basepoint in branch_vertices or basepoint not in set(y.vertices):
            raise BadBasepoint(f"basepoint {basepoint} is not a vertex of the complement")

        pres = edge_path_presentation(complement, basepoint)
        validate_monodromy(pres, monodromy)

        self.base = base
        self.branch = branch
        self.complement = complement
        self.presentation = pres
        self.monodromy = monodromy
        self.basepoint = basepoint
        self.branch_vertices = branch_vertices
        self._table = transport_table(pres, monodromy)
        self._punctured: dict[Simplex, SimplicialComplex] = {}

    @property
    def degree(self) -> int:
        return self.monodromy.degree

    @property
    def table(self) -> dict[tuple[int, int], Perm]:
        return self._table

    def branch_simplices(self) -> tuple[Simplex, ...]:
        if self.branch is None:
            return ()
        return self.branch.complex.all_simplices()

    def punctured_star(self, tau: Simplex) -> SimplicialComplex:
        """star(tau) minus the branch locus, as a full subcomplex."""
        tau = tuple(tau)
        if self.branch is None or tau not in self.branch.complex.simplices:
            raise SimplexNotInBranchLocus(f"{list(tau)} is not a simplex of the branch locus")
        cached = self._punctured.get(tau)
        if cached is None:
            st = star(self.base.complex, tau)
            cached = full_subcomplex(st, (v for v in st.vertices if v not in self.branch_vertices))
            self._punctured[tau] = cached
        return cached


# ---------------------------------------------------------------------------
# the unbranched cover of the complement


class CoverComplex:
    """Total complex of a cover with its simplicial projection."""

    __slots__ = ("spec", "total", "degree", "projection", "sheet", "vertex_info",
                 "branch_lift_count", "is_completed", "_fibers")

    def __init__(self, spec: BranchedCoverSpec, total: SimplicialComplex,
                 projection: dict[Simplex, Simplex], sheet: dict[Simplex, int],
                 vertex_info: dict[int, tuple], branch_lift_count: dict[Simplex, int],
                 is_completed: bool):
        self.spec = spec
        self.total = total
        self.degree = spec.degree
        self.projection = projection
        self.sheet = sheet
        self.vertex_info = vertex_info
        self.branch_lift_count = branch_lift_count
        self.is_completed = is_completed
        fibers: dict[Simplex, list[Simplex]] = {}
        for s in total.all_simplices():
            fibers.setdefault(projection[s], []).append(s)
        self._fibers = {b: tuple(sorted(v)) for b, v in fibers.items()}

    def fiber_over(self, base_simplex: Simplex) -> tuple[Simplex, ...]:
        return self._fibers.get(tuple(base_simplex), ())


def build_complement_cover(spec: BranchedCoverSpec) -> CoverComplex:
    """Glue d sheets over the complement along the validated transports."""
    k = spec.complement
    d = spec.degree
    table = spec.table
    verts = k.vertices
    vid = {}
    info = {}
    next_id = 0
    for v in verts:
        for s in range(d):
            vid[(v, s)] = next_id
            info[next_id] = ("sheet", v, s)
            next_id += 1

    simplices: list[Simplex] = []
    projection: dict[Simplex, Simplex] = {}
    sheet: dict[Simplex, int] = {}
    for sig in k.all_simplices():
        anchor = sig[0]
        for s in range(d):
            ids = [vid[(anchor, s)]]
            for v in sig[1:]:
                ids.append(vid[(v, table[(anchor, v)][s])])
            lift = tuple(sorted(ids))
            simplices.append(lift)
            projection[lift] = sig
            sheet[lift] = s
    total = SimplicialComplex(simplices)
    return CoverComplex(spec, total, projection, sheet, info, {}, spec.branch is None)


# ---------------------------------------------------------------------------
# local monodromy and fiber cardinalities


def local_monodromy_group(spec: BranchedCoverSpec, tau: Simplex) -> tuple[Perm, ...]:
    """Generators of the sheet action of loops in the punctured star.

    Loops are read off a deterministic local spanning tree and conjugated
    to the global basepoint along the global tree path, so the generated
    subgroup is a well-defined representative of its conjugacy class.
    """
    p = spec.punctured_star(tau)
    if p.n_simplices() == 0 or not is_connected(p):
        raise DisconnectedPuncturedStar(
            f"punctured star of {list(tau)} is not connected")
    d = spec.degree
    table = spec.table
    local_base = min(p.vertices)
    local_pres = edge_path_presentation(p, local_base)
    gamma = spec.presentation.tree_path(local_base)
    t_gamma = transport_along(table, gamma, d)
    t_gamma_inv = invert_perm(t_gamma)

    gens: list[Perm] = []
    seen: set[Perm] = set()
    ident = identity_perm(d)
    for (u, v) in local_pres.generators:
        path = local_pres.tree_path(u) + (v,) + tuple(reversed(local_pres.tree_path(v)))[1:]
        loop = transport_along(table, path, d)
        conj = compose_perms(t_gamma_inv, compose_perms(loop, t_gamma))
        if conj != ident and conj not in seen:
            seen.add(conj)
            gens.append(conj)
    if not gens:
        return (ident,)
    return tuple(sorted(gens))


def fiber_cardinality(spec: BranchedCoverSpec, tau: Simplex) -> int:
    """Orbit count of the local monodromy group on the sheets."""
    return orbit_count(local_monodromy_group(spec, tau), spec.degree)


# ---------------------------------------------------------------------------
# Fox completion


def _preimage_components(spec: BranchedCoverSpec, vid: dict, punctured: SimplicialComplex) -> list[list[int]]:
    """Components of the preimage of a punctured star, as vertex id lists."""
    d = spec.degree
    table = spec.table
    ids = [vid[(v, s)] for v in punctured.vertices for s in range(d)]
    adj: dict[int, list[int]] = {i: [] for i in ids}
    for (u, v) in punctured.simplices_of_dim(1):
        perm = table[(u, v)]
        for s in range(d):
            a, b = vid[(u, s)], vid[(v, perm[s])]
            adj[a].append(b)
            adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for start in sorted(ids):
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def fox_complete(spec: BranchedCoverSpec) -> CoverComplex:
    """Extend the complement cover over the branch locus.

    Lifts of a branch simplex are the connected components of the
    preimage of its punctured star; incidence between lifts follows
    component containment.  Fails if a punctured star is disconnected
    (local-flatness shadow) or if two lifts collide as vertex sets
    (insufficient subdivision of the base).
    """
    if spec.branch is None:
        return build_complement_cover(spec)

    k = spec.complement
    y = spec.base.complex
    d = spec.degree
    table = spec.table

    vid = {}
    info: dict[int, tuple] = {}
    next_id = 0
    for v in k.vertices:
        for s in range(d):
            vid[(v, s)] = next_id
            info[next_id] = ("sheet", v, s)
            next_id += 1

    branch_simps = spec.branch_simplices()
    for tau in branch_simps:
        p = spec.punctured_star(tau)
        if p.n_simplices() == 0 or not is_connected(p):
            raise DisconnectedPuncturedStar(
                f"punctured star of branch simplex {list(tau)} is not connected")

    # one new vertex per component of the preimage of each vertex's punctured star
    comp_of: dict[int, dict[int, int]] = {}  # branch vertex -> cover vertex id -> component
    branch_vid: dict[tuple[int, int], int] = {}
    for w in sorted(spec.branch_vertices):
        comps = _preimage_components(spec, vid, spec.punctured_star((w,)))
        lookup: dict[int, int] = {}
        for ci, comp in enumerate(comps):
            branch_vid[(w, ci)] = next_id
            info[next_id] = ("branch", w, ci)
            next_id += 1
            for x in comp:
                lookup[x] = ci
        comp_of[w] = lookup

    simplices: dict[Simplex, tuple[Simplex, int]] = {}
    projection: dict[Simplex, Simplex] = {}
    sheet: dict[Simplex, int] = {}
    branch_lift_count: dict[Simplex, int] = {}

    def register(lift_ids: Iterable[int], base_simplex: Simplex, tag: int) -> Simplex:
        lift = tuple(sorted(lift_ids))
        if len(set(lift)) != len(lift):
            raise InsufficientSubdivision(
                f"lift of {list(base_simplex)} has repeated vertices; subdivide the base")
        prior = simplices.get(lift)
        if prior is not None and prior != (base_simplex, tag):
            raise InsufficientSubdivision(
                f"lifts of {list(prior[0])} and {list(base_simplex)} share the vertex set "
                f"{list(lift)}; subdivide the base")
        simplices[lift] = (base_simplex, tag)
        projection[lift] = base_simplex
        return lift

    rset = spec.branch.complex.simplices
    for sig in y.all_simplices():
        sig_r = tuple(v for v in sig if v in spec.branch_vertices)
        sig_k = tuple(v for v in sig if v not in spec.branch_vertices)
        if not sig_r:
            anchor = sig[0]
            for s in range(d):
                ids = [vid[(anchor, s)]]
                for v in sig[1:]:
                    ids.append(vid[(v, table[(anchor, v)][s])])
                lift = register(ids, sig, s)
                sheet[lift] = s
        elif not sig_k:
            assert sig in rset
            comps = _preimage_components(spec, vid, spec.punctured_star(sig))
            branch_lift_count[sig] = len(comps)
            for ci, comp in enumerate(comps):
                rep = comp[0]
                ids = [branch_vid[(w, comp_of[w][rep])] for w in sig]
                register(ids, sig, ci)
        else:
            anchor = sig_k[0]
            for s in range(d):
                ids = [vid[(anchor, s)]]
                for v in sig_k[1:]:
                    ids.append(vid[(v, table[(anchor, v)][s])])
                rep = vid[(anchor, s)]
                for w in sig_r:
                    ids.append(branch_vid[(w, comp_of[w][rep])])
                register(ids, sig, s)

    total = SimplicialComplex(simplices.keys())
    return CoverComplex(spec, total, projection, sheet, info, branch_lift_count, True)


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class ConnectivityReport:
    """Punctured-star connectivity, downstairs and (optionally) upstairs."""

    base_failures: tuple[Simplex, ...]
    cover_failures: tuple[Simplex, ...]
    checked_base: int
    checked_cover: int

    @property
    def ok(self) -> bool:
        return not self.base_failures and not self.cover_failures


def complement_connectivity_check(spec: BranchedCoverSpec,
                                  cover: CoverComplex | None = None) -> ConnectivityReport:
    """Verify star(tau) minus the locus is connected for every branch simplex.

    With a completed cover, also verifies the analogous condition
    upstairs for every lift of every branch simplex.  Non-fatal: failures
    are reported, not raised.
    """
    base_failures = []
    checked_base = 0
    for tau in spec.branch_simplices():
        checked_base += 1
        p = spec.punctured_star(tau)
        if p.n_simplices() == 0 or not is_connected(p):
            base_failures.append(tau)

    cover_failures = []
    checked_cover = 0
    if cover is not None and cover.is_completed and spec.branch is not None:
        branch_ids = {i for i, inf in cover.vertex_info.items() if inf[0] == "branch"}
        for tau in spec.branch_simplices():
            for lift in cover.fiber_over(tau):
                checked_cover += 1
                st = star(cover.total, lift)
                punctured = full_subcomplex(st, (v for v in st.vertices if v not in branch_ids))
                if punctured.n_simplices() == 0 or not is_connected(punctured):
                    cover_failures.append(lift)
    return ConnectivityReport(tuple(base_failures), tuple(cover_failures),
                              checked_base, checked_cover)


def riemann_hurwitz_check(cover: CoverComplex) -> int:
    """Verify the combinatorial Euler-characteristic identity of the cover.

    chi(total) must equal d * (-1)^dim summed over base simplices off the
    locus plus orbit-count * (-1)^dim summed over branch simplices, with
    orbit counts recomputed by loop tracing (independent of the component
    counts used to build the completion).
    """
    spec = cover.spec
    d = spec.degree
    rset = spec.branch.complex.simplices if spec.branch is not None else frozenset()
    rhs = 0
    for sig in spec.base.complex.all_simplices():
        sign = (-1) ** (len(sig) - 1)
        if sig in rset:
            rhs += sign * fiber_cardinality(spec, sig)
        else:
            rhs += sign * d
    chi = cover.total.euler_characteristic()
    if chi != rhs:
        raise ChiMismatch(f"chi of the cover is {chi} but the branch data predicts {rhs}")
    return chi


# ---------------------------------------------------------------------------
# refined and pulled-back stratifications


def refine_stratification(base: StratifiedComplex, branch: StratifiedComplex) -> StratifiedComplex:
    """Common refinement of the base strata and the branch strata.

    Pieces are the top stratum minus the locus together with all nonempty
    intersections of a base stratum with a branch stratum; they are
    re-indexed into a descending filtration by dimension.
    """
    y = base.complex
    m = base.dim
    r = branch.complex
    if not r.is_subcomplex_of(y):
        raise NotASubcomplex("branch locus is not a subcomplex of the base")
    if r.dim > m - 2:
        raise BranchNotInCodim2Level(
            f"branch locus has dimension {r.dim} in a base of dimension {m}")
    if m >= 2 and not base.singular_set.is_subcomplex_of(r):
        raise SingularOutsideBranch(
            "singular set of the base must be contained in the branch locus")

    y_stratum: dict[Simplex, int] = {}
    for i, st in enumerate(base.strata()):
        for s in st.simplices:
            y_stratum[s] = i
    r_stratum: dict[Simplex, int] = {}
    for i, st in enumerate(branch.strata()):
        for s in st.simplices:
            r_stratum[s] = i

    pieces: dict[tuple[int, int], list[Simplex]] = {}
    for s in r.all_simplices():
        pieces.setdefault((y_stratum[s], r_stratum[s]), []).append(s)

    piece_dim = {key: max(len(s) - 1 for s in group) for key, group in pieces.items()}
    singular = []
    for j in range(m - 2, -1, -1):
        closed: set[Simplex] = set()
        for key, group in pieces.items():
            if piece_dim[key] <= j:
                for s in group:
                    closed.add(s)
                    for k in range(1, len(s)):
                        closed.update(combinations(s, k))
        singular.append(SimplicialComplex(closed))
    return StratifiedComplex(y, singular)


def pullback_stratification(cover: CoverComplex, refined: StratifiedComplex) -> StratifiedComplex:
    """Preimage filtration on the total complex of a completed cover."""
    if refined.complex != cover.spec.base.complex:
        raise NotASubcomplex("refined stratification does not live on the cover's base")
    m = refined.dim
    singular = []
    for j in range(m - 2, -1, -1):
        level = refined.levels[j].simplices
        singular.append(SimplicialComplex(
            s for s in cover.total.simplices if cover.projection[s] in level))
    return StratifiedComplex(cover.total, singular)
