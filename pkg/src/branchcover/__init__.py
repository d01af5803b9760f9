"""Branched covers of triangulated stratified spaces over the rationals.

Build branched covers from monodromy data, compute ordinary, twisted and
intersection homology exactly, and verify that the Betti numbers of the
total space split into the intersection homology of the base with
constant coefficients plus the sum-zero kernel system.
"""

from .errors import BranchCoverError, InputError, InternalCheckError
from .simplicial import (
    SimplicialComplex,
    ChainComplexQ,
    validate_complex,
    star,
    link,
    cone,
    suspension,
    components,
    chain_complex,
    betti,
    betti_numbers,
    full_subcomplex,
    is_full,
)
from .stratified import (
    StratifiedComplex,
    trivial_stratification,
    barycentric_subdivide,
)
from .presentation import EdgePathPresentation, edge_path_presentation
from .covering import (
    MonodromyRep,
    BranchedCoverSpec,
    CoverComplex,
    validate_monodromy,
    build_complement_cover,
    fox_complete,
    local_monodromy_group,
    fiber_cardinality,
    complement_connectivity_check,
    riemann_hurwitz_check,
    refine_stratification,
    pullback_stratification,
)
from .local_systems import (
    LocalSystemQ,
    RepresentationQ,
    from_representation,
    pushforward_local_system,
    trace_split,
    global_sections,
    twisted_chain_complex,
    twisted_betti,
    restrict,
    trivial_system,
)
from .intersection import (
    Perversity,
    lower_middle,
    upper_middle,
    zero_perversity,
    top_perversity,
    complementary,
    is_allowable,
    intersection_chain_complex,
    ih_betti,
    cone_formula_check,
    deligne_stalk_check,
)
from .verify import (
    DecompositionReport,
    verify_unbranched,
    verify_branched,
    fiber_rank_report,
    codim_check,
)

__version__ = "0.1.0"
