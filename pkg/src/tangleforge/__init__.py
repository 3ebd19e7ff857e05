"""tangleforge: separation universes, profiles, splinter algorithms,
canonical nested separator sets, and certified tree-decompositions for
finite graphs."""

from .core import (
    Graph,
    Separation,
    UniverseView,
    all_separations,
    canonical,
    classify_separation,
    corner_separations,
    crosses,
    enumerate_separations,
    graph_universe,
    is_nested,
    is_separation,
    is_tight,
    join,
    leq,
    mask_of,
    meet,
    star,
    verify_universe,
    vertices_of,
)
from .errors import (
    CapExceededError,
    CertificationError,
    HypothesisError,
    InputError,
    PreconditionError,
    TangleforgeError,
)
from .profiles import (
    DistinguisherSet,
    Profile,
    classify_irregular,
    corner_equal_orders,
    corner_unequal_orders,
    efficient_distinguishers,
    enumerate_k_profiles,
    profile_flags,
)
from .profinite import (
    DirectedPoset,
    InverseSystem,
    graph_restriction_system,
    inverse_limits,
    profinite_splinter,
    project,
    validate_inverse_system,
)
from .separators import (
    canonical_nested_separators,
    distinguishing_separators,
    minimal_separators,
    separator_nested,
    separators_to_separations,
    strongly_nested,
)
from .splinter import (
    FiniteSplinterFamily,
    SplinterInstance,
    crossing_number,
    crossing_profile,
    splinter_finite,
    splinters_check,
    thin_splinter,
    thinly_splinters_check,
)
from .treedec import (
    TreeDecomposition,
    build_totd,
    edge_tree_set,
    induced_separations,
    torso,
    treeset_to_treedecomposition,
    verify_treedecomposition,
)

__version__ = "0.1.0"
