"""Exact symbolic computation in relative graph C*-algebras.

Five layers: finite directed graphs and their vertex-set combinatorics
(`graph`), exact arithmetic in the graded *-algebra of matrix units
(`algebra`), exact norms and zero tests on homogeneous elements (`norms`),
the gauge-invariant ideal lattice (`lattice`), and finite-dimensional
Cuntz-Krieger family verification (`rep`).  `cli` exposes everything as
subcommands with JSON I/O.
"""

from .algebra import (
    AlgebraError,
    Element,
    GaussianRational,
    Term,
    edge_generator,
    element_from_json,
    element_to_json,
    right_tensor,
    star_lambda,
    star_splice,
    unit,
    vertex_projection,
)
from .graph import (
    Graph,
    GraphError,
    Path,
    graph_from_json,
    graph_to_json,
    hereditary_closure,
    is_hilbert_bimodule,
    paths_of_length,
    quotient_graph,
    reduction,
    subgraph,
    v_saturation,
    validate,
    vertex_classes,
)
from .lattice import (
    LatticeError,
    LatticeReport,
    TPair,
    annihilator,
    classify_lattice,
    embed_simple,
    enumerate_hereditary_saturated,
    enumerate_tpairs,
    hasse_dot,
    structure_decomposition,
    tpair_join,
    tpair_meet,
)
from .norms import (
    NormError,
    ReachabilityProfile,
    SeminormReport,
    VertexBlockDecomposition,
    decompose_blocks,
    is_zero,
    norm_upper_bound,
    seminorm_homogeneous,
    zero_coordinates,
)
from .rep import (
    CKFamily,
    RepError,
    acyclic_dimension,
    check_family,
    coisometricity_set,
    evaluate,
    family_from_json,
    uniqueness_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
