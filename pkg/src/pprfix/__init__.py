"""Fixed points of personalized PageRank viewed as a map on the simplex."""

__version__ = "0.1.0"

from .errors import ConvergenceError, InputError, InvariantError, PreconditionError
from .graph import (
    DegreeSummary,
    Graph,
    RowStochastic,
    degrees,
    parse_edge_list,
    parse_vector,
    resolve_dangling,
    row_normalize,
)
from .pagerank import (
    FixedPointReport,
    IterationTrace,
    PageRankConfig,
    classify_fixed_points,
    feedback_iterate,
    is_fixed_point,
    pagerank,
    predict_limit,
)
from .spectral import (
    PerronResult,
    ResolventConfig,
    apply_resolvent,
    degree_perron_eulerian,
    degree_perron_undirected,
    left_perron,
)
from .structure import (
    NormalForm,
    SccDecomposition,
    dangling_clusters,
    decompose,
    is_eulerian_balanced,
    normal_form,
    scc,
)
