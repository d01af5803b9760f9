"""End-to-end verification of the cover decomposition at the rank level.

For a validated branched cover the Betti numbers of the total space must
split, degree by degree, into the intersection homology of the base with
constant coefficients plus the intersection homology with the sum-zero
kernel system, both taken on the refined stratification.  Rank and stalk
equalities are necessary conditions for the sheaf-level decomposition,
not sufficient; the reports say so explicitly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import BranchingAtHighCodim, Disconnected, InputError
from .covering import (
    BranchedCoverSpec,
    ConnectivityReport,
    CoverComplex,
    build_complement_cover,
    complement_connectivity_check,
    fiber_cardinality,
    fox_complete,
    local_monodromy_group,
    orbit_count,
    pullback_stratification,
    refine_stratification,
    riemann_hurwitz_check,
)
from .intersection import Perversity, ih_betti, perversity_by_name
from .local_systems import (
    invariant_dimension,
    pushforward_local_system,
    sum_zero_action,
    trace_split,
    twisted_betti,
)
from .simplicial import Simplex, betti_numbers, components

NECESSITY_NOTE = ("rank and stalk equalities are necessary conditions for the "
                  "sheaf-level decomposition, not sufficient")


# ---------------------------------------------------------------------------
# fiber table


@dataclass(frozen=True)
class FiberRow:
    simplex: Simplex
    orbit_count: int
    one_plus_invariants: int
    lift_count: int | None

    @property
    def ok(self) -> bool:
        agree = self.orbit_count == self.one_plus_invariants
        if self.lift_count is not None:
            agree = agree and self.lift_count == self.orbit_count
        return agree


@dataclass(frozen=True)
class FiberReport:
    rows: tuple[FiberRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)


def fiber_rank_report(spec: BranchedCoverSpec, cover: CoverComplex | None = None) -> FiberReport:
    """Orbit counts against 1 + invariants of the kernel system, row by row.

    A mismatch indicates an implementation bug, never acceptable input;
    rows also record the lift counts of a completed cover when given.
    """
    d = spec.degree
    rows = []
    for tau in spec.branch_simplices():
        gens = local_monodromy_group(spec, tau)
        orbits = orbit_count(gens, d)
        kernel_mats = [sum_zero_action(g) for g in gens]
        inv = invariant_dimension(kernel_mats, d - 1)
        lifts = None
        if cover is not None and cover.is_completed:
            lifts = len(cover.fiber_over(tau))
        rows.append(FiberRow(tau, orbits, 1 + inv, lifts))
    return FiberReport(tuple(rows))


# ---------------------------------------------------------------------------
# codimension corollary


@dataclass(frozen=True)
class CodimReport:
    applicable: bool
    branch_dim: int
    base_dim: int
    fibers: tuple[tuple[Simplex, int], ...]
    non_minimal: bool
    note: str


def codim_check(spec: BranchedCoverSpec) -> CodimReport:
    """If the branch locus has codimension >= 3, no branching may occur.

    All fibers must then equal the degree and the locus is flagged
    non-minimal; a smaller fiber raises, since it signals invalid input
    or a bug.
    """
    m = spec.base.dim
    if spec.branch is None:
        return CodimReport(False, -1, m, (), False, "branch locus empty; vacuous pass")
    rdim = spec.branch.dim
    if rdim > m - 3:
        return CodimReport(False, rdim, m, (), False,
                           "branch locus has codimension 2; check not applicable")
    fibers = []
    for tau in spec.branch_simplices():
        card = fiber_cardinality(spec, tau)
        fibers.append((tau, card))
        if card < spec.degree:
            raise BranchingAtHighCodim(
                f"fiber over {list(tau)} has cardinality {card} < degree {spec.degree} "
                f"at codimension >= 3")
    return CodimReport(True, rdim, m, tuple(fibers), True,
                       "all fibers equal the degree; the locus is not minimal")


# ---------------------------------------------------------------------------
# unbranched splitting


@dataclass(frozen=True)
class UnbranchedReport:
    degree: int
    betti_cover: tuple[int, ...]
    betti_base: tuple[int, ...]
    betti_kernel: tuple[int, ...]
    betti_pushforward: tuple[int, ...]
    equal_per_degree: tuple[bool, ...]

    @property
    def all_equal(self) -> bool:
        return all(self.equal_per_degree)


def verify_unbranched(spec: BranchedCoverSpec) -> UnbranchedReport:
    """b_j(cover) = b_j(base) + b_j(base; kernel) in every degree."""
    if spec.branch is not None:
        raise InputError("verify_unbranched requires an empty branch locus")
    cover = build_complement_cover(spec)
    b_cover = betti_numbers(cover.total)
    pushforward = pushforward_local_system(spec.presentation, spec.monodromy)
    split = trace_split(pushforward)
    base_c = spec.complement
    b_base = betti_numbers(base_c)
    b_kernel = twisted_betti(base_c, split.kernel)
    b_push = twisted_betti(base_c, pushforward)
    n = len(b_base)
    equal = tuple(b_cover[j] == b_base[j] + b_kernel[j] for j in range(n))
    return UnbranchedReport(spec.degree, b_cover, b_base, b_kernel, b_push, equal)


# ---------------------------------------------------------------------------
# branched decomposition


@dataclass(frozen=True)
class DecompositionReport:
    perversity: str
    degree: int
    base_dim: int
    betti_cover: tuple[int, ...]
    ih_trivial: tuple[int, ...]
    ih_kernel: tuple[int, ...]
    equal_per_degree: tuple[bool, ...]
    fiber: FiberReport
    connectivity: ConnectivityReport
    euler_cover: int
    euler_ok: bool
    b0_ok: bool
    betti_base_manifold: tuple[int, ...] | None
    manifold_crosscheck_ok: bool
    stratification_levels: tuple[tuple[int, int], ...]
    pullback_levels: tuple[tuple[int, int], ...]
    note: str = NECESSITY_NOTE

    @property
    def all_equal(self) -> bool:
        return all(self.equal_per_degree)

    @property
    def internal_ok(self) -> bool:
        return (self.fiber.ok and self.connectivity.ok and self.euler_ok
                and self.b0_ok and self.manifold_crosscheck_ok)

    def to_json_dict(self) -> dict:
        return {
            "perversity": self.perversity,
            "degree": self.degree,
            "base_dim": self.base_dim,
            "betti_cover": list(self.betti_cover),
            "ih_trivial": list(self.ih_trivial),
            "ih_kernel": list(self.ih_kernel),
            "equal_per_degree": [bool(b) for b in self.equal_per_degree],
            "all_equal": self.all_equal,
            "fiber_table": [
                {
                    "simplex": list(r.simplex),
                    "orbit_count": r.orbit_count,
                    "one_plus_invariants": r.one_plus_invariants,
                    "lift_count": r.lift_count,
                    "ok": r.ok,
                }
                for r in self.fiber.rows
            ],
            "connectivity": {
                "checked_base": self.connectivity.checked_base,
                "checked_cover": self.connectivity.checked_cover,
                "base_failures": [list(s) for s in self.connectivity.base_failures],
                "cover_failures": [list(s) for s in self.connectivity.cover_failures],
                "ok": self.connectivity.ok,
            },
            "euler_cover": self.euler_cover,
            "euler_ok": self.euler_ok,
            "b0_ok": self.b0_ok,
            "betti_base_manifold": (list(self.betti_base_manifold)
                                    if self.betti_base_manifold is not None else None),
            "manifold_crosscheck_ok": self.manifold_crosscheck_ok,
            "stratification_levels": [[j, n] for j, n in self.stratification_levels],
            "pullback_levels": [[j, n] for j, n in self.pullback_levels],
            "internal_ok": self.internal_ok,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = []
        lines.append(f"decomposition check ({self.perversity} middle perversity, "
                     f"degree {self.degree}, base dimension {self.base_dim})")
        lines.append(f"  b(cover)          = {list(self.betti_cover)}")
        lines.append(f"  ih(base; trivial) = {list(self.ih_trivial)}")
        lines.append(f"  ih(base; kernel)  = {list(self.ih_kernel)}")
        verdict = "HOLDS" if self.all_equal else "FAILS"
        lines.append(f"  per-degree equality: {verdict} "
                     f"{['ok' if b else 'FAIL' for b in self.equal_per_degree]}")
        lines.append(f"  fiber table ({len(self.fiber.rows)} branch simplices): "
                     f"{'ok' if self.fiber.ok else 'MISMATCH'}")
        for r in self.fiber.rows:
            lines.append(f"    {list(r.simplex)}: orbits={r.orbit_count} "
                         f"1+invariants={r.one_plus_invariants} lifts={r.lift_count} "
                         f"{'ok' if r.ok else 'MISMATCH'}")
        lines.append(f"  connectivity: base {self.connectivity.checked_base} checked, "
                     f"cover {self.connectivity.checked_cover} checked, "
                     f"{'ok' if self.connectivity.ok else 'FAILURES'}")
        lines.append(f"  euler characteristic of cover: {self.euler_cover} "
                     f"({'consistent' if self.euler_ok else 'INCONSISTENT'})")
        lines.append(f"  degree-0 consistency: {'ok' if self.b0_ok else 'FAIL'}")
        if self.betti_base_manifold is not None:
            lines.append(f"  manifold cross-check b(base) = {list(self.betti_base_manifold)}: "
                         f"{'ok' if self.manifold_crosscheck_ok else 'FAIL'}")
        lines.append(f"  refined levels: {[list(x) for x in self.stratification_levels]}")
        lines.append(f"  pullback levels: {[list(x) for x in self.pullback_levels]}")
        lines.append(f"  note: {self.note}")
        return "\n".join(lines) + "\n"


def verify_branched(spec: BranchedCoverSpec,
                    perversity: str | Perversity = "lower") -> DecompositionReport:
    """Build the cover, refine the stratification and compare ranks.

    The kernel system is carried through the intersection machinery on
    the refined stratification, never pushed forward naively.
    """
    m = spec.base.dim
    if isinstance(perversity, str):
        pname = perversity
        p = perversity_by_name(perversity, m) if m >= 2 else None
    else:
        pname = "custom"
        p = perversity

    connectivity0 = complement_connectivity_check(spec)
    if not connectivity0.ok:
        raise Disconnected(
            f"punctured stars of {[list(s) for s in connectivity0.base_failures]} "
            "are disconnected")

    cover = fox_complete(spec)
    euler_cover = riemann_hurwitz_check(cover)
    b_cover = betti_numbers(cover.total)

    if spec.branch is not None:
        refined = refine_stratification(spec.base, spec.branch)
    else:
        refined = spec.base
    pullback = pullback_stratification(cover, refined)

    ih_trivial = ih_betti(refined, p, None)
    pushforward = pushforward_local_system(spec.presentation, spec.monodromy)
    split = trace_split(pushforward)
    ih_kernel = ih_betti(refined, p, split.kernel)

    equal = tuple(b_cover[j] == ih_trivial[j] + ih_kernel[j] for j in range(m + 1))

    fiber = fiber_rank_report(spec, cover)
    connectivity = complement_connectivity_check(spec, cover)

    euler_ok = True
    if all(equal):
        lhs = sum((-1) ** j * b_cover[j] for j in range(m + 1))
        rhs = sum((-1) ** j * (ih_trivial[j] + ih_kernel[j]) for j in range(m + 1))
        euler_ok = lhs == rhs == euler_cover

    global_orbits = orbit_count(spec.monodromy.images, spec.degree)
    b0_ok = (b_cover[0] == len(components(cover.total)) == global_orbits)

    b_base_manifold = None
    manifold_ok = True
    if spec.base.singular_set.n_simplices() == 0:
        b_base_manifold = betti_numbers(spec.base.complex)
        manifold_ok = tuple(ih_trivial) == tuple(b_base_manifold)

    strat_levels = tuple((j, refined.levels[j].n_simplices()) for j in range(m + 1))
    pull_levels = tuple((j, pullback.levels[j].n_simplices()) for j in range(m + 1))

    return DecompositionReport(
        perversity=pname, degree=spec.degree, base_dim=m,
        betti_cover=b_cover, ih_trivial=ih_trivial, ih_kernel=ih_kernel,
        equal_per_degree=equal, fiber=fiber, connectivity=connectivity,
        euler_cover=euler_cover, euler_ok=euler_ok, b0_ok=b0_ok,
        betti_base_manifold=b_base_manifold, manifold_crosscheck_ok=manifold_ok,
        stratification_levels=strat_levels, pullback_levels=pull_levels)
