import pytest

from branchcover.covering import BranchedCoverSpec, refine_stratification
from branchcover.errors import BadDimension, NotFull
from branchcover.intersection import (
    ICComplexQ,
    Perversity,
    complementary,
    cone_formula_check,
    deligne_stalk_check,
    ih_betti,
    intersection_chain_complex,
    is_allowable,
    lower_middle,
    top_perversity,
    upper_middle,
    zero_perversity,
)
from branchcover.local_systems import pushforward_local_system, trace_split
from branchcover.simplicial import SimplicialComplex, betti_numbers, suspension
from branchcover.stratified import (
    StratifiedComplex,
    barycentric_subdivide,
    trivial_stratification,
)
from branchcover.fixtures import (
    boundary_simplex,
    cycle_complex,
    hexagon,
    octahedron,
    pinched_torus,
    s3_unknot_double_data,
    sphere_branched_data,
    suspension_torus,
    torus7,
)

from oracles import suspension_ih_oracle


# ---------------------------------------------------------------------------
# perversities


def test_middle_perversities_dim4():
    assert lower_middle(4).values == (0, 0, 1)
    assert upper_middle(4).values == (0, 1, 1)


def test_complementary_of_zero_is_top():
    assert complementary(zero_perversity(4)).values == (0, 1, 2)
    assert complementary(zero_perversity(4)) == top_perversity(4)


def test_complementary_identity():
    for m in (2, 3, 4, 5, 7):
        for p in (zero_perversity(m), lower_middle(m), upper_middle(m)):
            q = complementary(p)
            for k in range(2, m + 1):
                assert p[k] + q[k] == k - 2
    assert complementary(lower_middle(5)) == upper_middle(5)


def test_growth_conditions_enforced():
    with pytest.raises(BadDimension):
        Perversity(3, (1, 1))       # p(2) != 0
    with pytest.raises(BadDimension):
        Perversity(4, (0, 2, 2))    # step of 2
    with pytest.raises(BadDimension):
        Perversity(4, (0, 1, 0))    # decreasing
    with pytest.raises(BadDimension):
        Perversity(1, ())


# ---------------------------------------------------------------------------
# allowability


def _two_sphere_with_marked_vertex():
    # octahedron with vertex 0 marked as an isolated singular point
    oct_ = octahedron()
    return StratifiedComplex(oct_, [SimplicialComplex([(0,)])])


def test_allowable_away_from_singular_set():
    sc = _two_sphere_with_marked_vertex()
    p = zero_perversity(2)
    assert is_allowable((1, 2), sc, p)
    assert is_allowable((2, 3, 5), sc, p)


def test_edge_through_singular_vertex_not_allowable():
    sc = _two_sphere_with_marked_vertex()
    assert not is_allowable((0, 1), sc, zero_perversity(2))
    assert not is_allowable((0,), sc, zero_perversity(2))


def test_triangle_with_one_singular_vertex_allowable():
    sc = _two_sphere_with_marked_vertex()
    assert is_allowable((0, 1, 2), sc, zero_perversity(2))


def test_allowability_monotone_in_perversity():
    st = suspension_torus()
    lo, hi = lower_middle(3), upper_middle(3)
    for s in st.complex.all_simplices():
        if is_allowable(s, st, lo):
            assert is_allowable(s, st, hi)


def test_allowability_requires_full_levels():
    oct_ = octahedron()
    sc = StratifiedComplex(oct_, [SimplicialComplex([(1,), (2,)])])
    with pytest.raises(NotFull):
        is_allowable((1, 2), sc, zero_perversity(2))


# ---------------------------------------------------------------------------
# intersection homology: manifolds


MANIFOLDS = (octahedron, torus7, lambda: boundary_simplex(4),
             lambda: suspension(boundary_simplex(4)))


def test_ih_equals_betti_on_manifolds():
    for fn in MANIFOLDS:
        c = fn()
        sc = trivial_stratification(c)
        b = betti_numbers(c)
        m = max(c.dim, 2)
        for p in (zero_perversity(m), lower_middle(m), upper_middle(m),
                  top_perversity(m)):
            assert ih_betti(sc, p) == b


def test_ih_octahedron_value():
    assert ih_betti(trivial_stratification(octahedron()), lower_middle(2)) == (1, 0, 1)


# ---------------------------------------------------------------------------
# intersection homology: singular fixtures
# expected values derived through the cone-formula / Mayer-Vietoris oracle


def test_ih_suspension_torus():
    st = suspension_torus()
    torus_ih = (1, 2, 1)
    # cutoff = 2 - p(3): upper middle truncates at 1, lower middle at 2
    assert suspension_ih_oracle(torus_ih, 1) == (1, 0, 2, 1)
    assert suspension_ih_oracle(torus_ih, 2) == (1, 2, 0, 1)
    assert ih_betti(st, upper_middle(3)) == (1, 0, 2, 1)
    assert ih_betti(st, lower_middle(3)) == (1, 2, 0, 1)


def test_ih_suspension_duality():
    # complementary middle perversities pair degrees i and 3 - i
    st = suspension_torus()
    lo = ih_betti(st, lower_middle(3))
    up = ih_betti(st, upper_middle(3))
    assert lo == tuple(reversed(up))


def test_ih_pinched_torus():
    # Mayer-Vietoris with the pinch star (cone over two circles, IH (2,0,0))
    # against the complementary cylinder gives (1, 0, 1); ordinary homology
    # differs in degree 1
    pt = pinched_torus()
    assert betti_numbers(pt.complex) == (1, 1, 1)
    assert ih_betti(pt, lower_middle(2)) == (1, 0, 1)
    assert ih_betti(pt, upper_middle(2)) == (1, 0, 1)


def test_ih_invariant_under_subdivision():
    fixtures = [
        (trivial_stratification(octahedron()), zero_perversity(2)),
        (pinched_torus(), lower_middle(2)),
        (suspension_torus(), lower_middle(3)),
        (suspension_torus(), upper_middle(3)),
    ]
    for sc, p in fixtures:
        sub = barycentric_subdivide(sc)
        assert ih_betti(sub, p) == ih_betti(sc, p)


def test_ic_complex_structure():
    st = suspension_torus()
    ic = intersection_chain_complex(st, upper_middle(3))
    assert isinstance(ic, ICComplexQ)
    # every basis chain is supported on allowable simplices; boundaries
    # were verified to square to zero at construction time
    assert ic.ih == (1, 0, 2, 1)
    for j, simps in enumerate(ic.allowable):
        for s in simps:
            assert is_allowable(s, st, upper_middle(3))
    assert len(ic.boundaries[1]) == len(ic.ic_basis[1])


# ---------------------------------------------------------------------------
# twisted intersection homology


def test_twisted_ih_genus_two_kernel():
    y, r, rep, pres = sphere_branched_data(6, 2)
    spec = BranchedCoverSpec(y, r, rep)
    refined = refine_stratification(y, r)
    split = trace_split(pushforward_local_system(spec.presentation, spec.monodromy))
    # derived: b(genus 2 surface) - ih(sphere) = (1,4,1) - (1,0,1)
    assert ih_betti(refined, lower_middle(2), split.kernel) == (0, 4, 0)


def test_twisted_ih_unknot_kernel_vanishes():
    y, r, rep, pres = s3_unknot_double_data()
    spec = BranchedCoverSpec(y, r, rep)
    refined = refine_stratification(y, r)
    split = trace_split(pushforward_local_system(spec.presentation, spec.monodromy))
    assert ih_betti(refined, lower_middle(3), split.kernel) == (0, 0, 0, 0)
    assert ih_betti(refined, lower_middle(3), None) == (1, 0, 0, 1)


# ---------------------------------------------------------------------------
# cone formula


def test_cone_formula_hexagon():
    res = cone_formula_check(trivial_stratification(hexagon()), zero_perversity(2))
    assert res.ok
    assert res.cone_ih == (1, 0, 0)
    assert res.cutoff == 1


def test_cone_formula_torus_both_middles():
    t = trivial_stratification(torus7())
    lo = cone_formula_check(t, lower_middle(3))
    assert lo.ok and lo.cone_ih == (1, 2, 0, 0) and lo.cutoff == 2
    up = cone_formula_check(t, upper_middle(3))
    assert up.ok and up.cone_ih == (1, 0, 0, 0) and up.cutoff == 1


def test_cone_formula_two_points():
    two = trivial_stratification(SimplicialComplex([(0,), (1,)]))
    res = cone_formula_check(two, None)
    assert res.ok
    assert res.cone_ih == (1, 0)


def test_cone_formula_disconnected_link():
    # cone over two circles: degree zero keeps both components because
    # allowable chains avoid the apex
    two_circles = SimplicialComplex(
        set(cycle_complex(4, 0).simplices) | set(cycle_complex(4, 4).simplices))
    res = cone_formula_check(trivial_stratification(two_circles), zero_perversity(2))
    assert res.ok
    assert res.cone_ih == (2, 0, 0)


def test_cone_formula_sphere_link():
    res = cone_formula_check(trivial_stratification(octahedron()), lower_middle(3))
    assert res.ok and res.cone_ih == (1, 0, 0, 0)


# ---------------------------------------------------------------------------
# stalk checks


def test_stalk_check_suspension_torus():
    st = suspension_torus()
    up = deligne_stalk_check(st, upper_middle(3))
    assert up.ok
    assert [e.vertex for e in up.entries] == [7, 8]
    for e in up.entries:
        assert e.codim == 3
        assert e.link_ih == (1, 2, 1)
        assert e.star_ih == (1, 0, 0, 0)
    lo = deligne_stalk_check(st, lower_middle(3))
    assert lo.ok
    for e in lo.entries:
        assert e.star_ih == (1, 2, 0, 0)


def test_stalk_check_pinched_torus():
    pt = pinched_torus()
    res = deligne_stalk_check(pt, lower_middle(2))
    assert res.ok
    (entry,) = res.entries
    assert entry.codim == 2
    # the link is two disjoint circles; allowable chains in the star avoid
    # the apex, so degree zero has rank two on both sides
    assert entry.link_ih == (2, 2)
    assert entry.star_ih == (2, 0, 0)


def test_stalk_check_manifold_is_vacuous():
    sc = trivial_stratification(octahedron())
    res = deligne_stalk_check(sc, zero_perversity(2))
    assert res.ok and res.entries == ()


def test_stalk_check_unknot_base():
    y, r, rep, pres = s3_unknot_double_data()
    spec = BranchedCoverSpec(y, r, rep)
    refined = refine_stratification(y, r)
    res = deligne_stalk_check(refined, lower_middle(3))
    assert res.ok
    assert len(res.entries) == 6
    for e in res.entries:
        assert e.codim == 2
        assert e.star_ih == (1, 0, 0, 0)


def test_ic_requires_full_levels():
    oct_ = octahedron()
    sc = StratifiedComplex(oct_, [SimplicialComplex([(1,), (2,)])])
    with pytest.raises(NotFull):
        intersection_chain_complex(sc, zero_perversity(2))


def test_ic_requires_perversity_in_high_dimension():
    with pytest.raises(BadDimension):
        intersection_chain_complex(trivial_stratification(octahedron()), None)
    with pytest.raises(BadDimension):
        # perversity defined only up to dimension 2 cannot serve dimension 3
        intersection_chain_complex(suspension_torus(), zero_perversity(2))


def test_stalk_check_arc_stratum_through_suspension_points():
    # an arc through both suspension points of a 3-sphere: interior points
    # have codimension 2 with marked-sphere links, the endpoints have
    # codimension 3; the coarse triangulation already carries the induced
    # link filtrations because levels are nested
    from branchcover.simplicial import suspension
    from branchcover.fixtures import boundary_simplex
    total = suspension(boundary_simplex(3))
    arc = SimplicialComplex([(0,), (4,), (5,), (0, 4), (0, 5)])
    apexes = SimplicialComplex([(4,), (5,)])
    sc = StratifiedComplex(total, [arc, apexes])
    for p in (lower_middle(3), upper_middle(3)):
        res = deligne_stalk_check(sc, p)
        assert res.ok
        by_codim = {e.vertex: e for e in res.entries}
        assert by_codim[0].codim == 2 and by_codim[4].codim == 3
        for e in res.entries:
            assert e.link_ih == (1, 0, 1)
            assert e.star_ih == (1, 0, 0, 0)


def test_stalk_check_refined_suspension_circle():
    # refine the suspension of the torus along a suspension circle, then
    # subdivide once for fullness: arc points see marked spheres, the cone
    # points see the torus link truncated at the middle-perversity cutoff
    from branchcover.covering import refine_stratification
    st = suspension_torus()
    circle = SimplicialComplex([(7,), (8,), (0,), (1,), (0, 7), (0, 8), (1, 7), (1, 8)])
    refined = refine_stratification(st, trivial_stratification(circle))
    with pytest.raises(NotFull):
        deligne_stalk_check(refined, lower_middle(3))
    sub = barycentric_subdivide(refined)
    res = deligne_stalk_check(sub, lower_middle(3))
    assert res.ok
    codim3 = [e for e in res.entries if e.codim == 3]
    codim2 = [e for e in res.entries if e.codim == 2]
    assert len(codim3) == 2 and len(codim2) == 6
    for e in codim3:
        assert e.link_ih == (1, 2, 1) and e.star_ih == (1, 2, 0, 0)
    for e in codim2:
        assert e.link_ih == (1, 0, 1) and e.star_ih == (1, 0, 0, 0)
