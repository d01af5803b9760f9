import pytest

from branchcover.covering import BranchedCoverSpec, MonodromyRep, fox_complete
from branchcover.errors import BadParams, DisconnectedPuncturedStar
from branchcover.covering import complement_connectivity_check, fiber_cardinality
from branchcover.presentation import edge_path_presentation
from branchcover.simplicial import betti_numbers, link
from branchcover.fixtures import (
    annulus,
    codim3_vertex_data,
    figure_eight,
    hexagon,
    k4_graph,
    nullspace_mod_p,
    octahedron,
    orient_closed_surface,
    oriented_vertex_link_cycle,
    pinched_torus,
    s3_unknot_double_data,
    solve_mod_p,
    sphere_branched_data,
    suspension_torus,
    theta_graph,
    torus7,
)

from oracles import brute_betti


def test_graph_bases_are_connected_with_free_pi1():
    for c, rank in ((hexagon(), 1), (figure_eight(), 2), (theta_graph(), 2),
                    (k4_graph(), 3)):
        pres = edge_path_presentation(c, min(c.vertices))
        assert pres.relators == ()
        assert len(pres.generators) == rank


def test_annulus_is_a_cylinder():
    c = annulus()
    assert betti_numbers(c) == (1, 1, 0)
    assert c.euler_characteristic() == 0


def test_orientability():
    for c in (octahedron(), torus7()):
        signs = orient_closed_surface(c)
        assert set(signs.values()) <= {1, -1}
        assert len(signs) == c.n_simplices(2)


def test_oriented_link_cycles_cover_the_link():
    c = octahedron()
    signs = orient_closed_surface(c)
    for v in c.vertices:
        cycle = oriented_vertex_link_cycle(c, signs, v)
        assert len(cycle) == link(c, (v,)).n_simplices(1)
        # consecutive directed edges chain up
        for (a, b), (c2, d2) in zip(cycle, cycle[1:]):
            assert b == c2


def test_meridian_orientations_sum_to_zero():
    # with a coherent orientation the meridian classes sum to zero, so the
    # all-ones target is solvable exactly when the degree divides the count
    with pytest.raises(BadParams):
        sphere_branched_data(3, 2)
    with pytest.raises(BadParams):
        sphere_branched_data(4, 3)
    sphere_branched_data(6, 3)  # 3 | 6: solvable


def test_sphere_branched_rejects_bad_params():
    with pytest.raises(BadParams):
        sphere_branched_data(8, 2)
    with pytest.raises(BadParams):
        sphere_branched_data(4, 4)  # degree not prime


def test_solve_mod_p():
    # x0 + x1 = 1, x1 = 1 over GF(2)
    sol = solve_mod_p([[1, 1], [0, 1]], [1, 1], 2, 2)
    assert sol == [0, 1]
    assert solve_mod_p([[1], [1]], [0, 1], 1, 3) is None


def test_nullspace_mod_p():
    basis = nullspace_mod_p([[1, 1, 0]], 3, 2)
    assert len(basis) == 2
    for vec in basis:
        assert (vec[0] + vec[1]) % 2 == 0


def test_sphere_branched_data_is_consistent():
    y, r, rep, pres = sphere_branched_data(6, 2)
    assert y.dim == 2
    assert r.complex.n_simplices(0) == 6
    spec = BranchedCoverSpec(y, r, rep)
    for tau in spec.branch_simplices():
        assert fiber_cardinality(spec, tau) == 1


def test_unknot_data_is_consistent():
    y, r, rep, pres = s3_unknot_double_data()
    assert y.dim == 3
    assert betti_numbers(r.complex) == (1, 1)   # the branch locus is a circle
    assert betti_numbers(y.complex) == (1, 0, 0, 1)


def test_suspension_torus_homology():
    st = suspension_torus()
    assert betti_numbers(st.complex) == brute_betti(st.complex.all_simplices()) \
        == (1, 0, 2, 1)


def test_pinched_torus_is_pseudomanifold():
    pt = pinched_torus()
    assert pt.complex.euler_characteristic() == 1
    pinch = pt.level(0).vertices[0]
    lk = link(pt.complex, (pinch,))
    assert betti_numbers(lk) == (2, 2)  # two disjoint circles


def test_branching_at_pinch_fails_flatness_shadow():
    # the punctured star of the pinch vertex is disconnected, so the
    # configuration is rejected by the local-flatness shadow checks
    pt = pinched_torus()
    pinch = pt.level(0).vertices[0]
    from branchcover.simplicial import SimplicialComplex
    from branchcover.stratified import trivial_stratification
    r = trivial_stratification(SimplicialComplex([(pinch,)]))
    bverts = {pinch}
    from branchcover.simplicial import full_subcomplex
    complement = full_subcomplex(pt.complex,
                                 [v for v in pt.complex.vertices if v not in bverts])
    pres = edge_path_presentation(complement, min(complement.vertices))
    rep = MonodromyRep(1, tuple((0,) for _ in pres.generators))
    spec = BranchedCoverSpec(pt, r, rep)
    report = complement_connectivity_check(spec)
    assert not report.ok
    assert report.base_failures == ((pinch,),)
    with pytest.raises(DisconnectedPuncturedStar):
        fox_complete(spec)


def test_fiber_cardinality_constant_on_refined_strata():
    from branchcover.covering import refine_stratification
    for builder, args in ((sphere_branched_data, (6, 2)),
                          (sphere_branched_data, (3, 3)),
                          (s3_unknot_double_data, ())):
        y, r, rep, _ = builder(*args)
        spec = BranchedCoverSpec(y, r, rep)
        refined = refine_stratification(y, r)
        rset = r.complex.simplices
        for stratum in refined.strata():
            in_branch = [s for s in stratum.simplices if s in rset]
            values = {fiber_cardinality(spec, s) for s in in_branch}
            assert len(values) <= 1


def test_codim3_only_identity_monodromy_validates():
    # the punctured-star complement of a vertex in the 3-sphere is simply
    # connected, so relators force every generator to the identity
    y, r, rep, pres = codim3_vertex_data(2)
    swapped = list(rep.images)
    swapped[0] = (1, 0)
    from branchcover.errors import RelatorViolated
    from branchcover.covering import validate_monodromy
    with pytest.raises(RelatorViolated):
        validate_monodromy(pres, MonodromyRep(2, tuple(swapped)))
