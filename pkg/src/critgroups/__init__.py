"""Critical groups of generalized de Bruijn and Kautz digraphs.

The same groups are computed along two independent routes: exact Smith
Normal Form of graph Laplacians, and closed formulas driven by the
arithmetic of multiplication by d on Z_n.  A third route connects them,
for prime degree, to unit groups of circulant matrices over F_p.
"""

from .abelian import (
    AbelianGroup,
    InfiniteOrderError,
    MalformedStatisticsError,
    TRIVIAL_GROUP,
    canonicalize,
    cyclic,
    from_order_statistics,
)
from .circulant import (
    CirculantFactor,
    DEFAULT_BRUTE_CAP,
    PolyModRing,
    ResourceLimitError,
    UnitGroupStructure,
    bruteforce_count_normal,
    bruteforce_unit_group,
    circulant_group,
    circulant_group_fixing_ones,
    count_normal_elements,
    cyclotomic_cosets,
    quotient_by_shift,
)
from .closed_form import (
    DSequence,
    EpsilonCoordinates,
    OrbitData,
    c_value,
    d_sequence,
    d_type,
    epsilon_coordinates_of_ev,
    epsilon_relation_matrix,
    membership_in_sandpile,
    orbits,
    order_of_ev,
    sand_dune_group,
    sandpile_group_db,
    sandpile_group_kautz,
)
from .exact_linalg import (
    IntegerMatrix,
    SnfResult,
    cokernel_element_order,
    determinant,
    finite_part,
    invariant_factors,
    smith_group,
    smith_normal_form,
)
from .graphs import (
    Digraph,
    Family,
    GraphSpec,
    build,
    critical_group_snf,
    is_eulerian,
    laplacian,
    reduced_laplacian,
    sandpile_group_snf,
    spanning_tree_count,
)

__version__ = "0.1.0"
