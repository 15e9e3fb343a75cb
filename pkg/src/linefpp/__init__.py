"""Lattice first-passage percolation with shared line passage times.

Randomness lives on axis-parallel integer lines: every edge of a line shares
one passage time, lines are independent, and the whole environment is a pure
function of a 64-bit seed.  The package computes exact passage times and
geodesics on the infinite lattice, grows balls, and ships the Monte Carlo and
analytic machinery for the model's limit statements (time constant, growth
regimes, sandwich bounds, limit shape, regularized times).
"""

from .environment import (
    Constant,
    DistributionError,
    Environment,
    Power,
    ShiftedBernoulli,
    ShiftedExponential,
    WithInfinity,
    derive_seed,
    infimum,
    inv_cdf,
    line_key,
    parse_distribution,
    replica_environment,
    uniform01,
)
from .lattice import (
    Edge,
    LatticeError,
    LineId,
    Point,
    cell_of,
    incident_edges,
    l1,
    line_of_edge,
    lines_through,
    make_edge,
)
from .search import (
    BallGrid,
    NoGeodesicError,
    QueryResult,
    SearchError,
    geodesic,
    greedy_line_bound,
    grow_ball,
    shortest_time,
    shortest_times_from,
    window_oracle,
)
from .cluster import ClusterError, ClusterView, chemical_distance, project, t_star, t_tilde
from .estimators import (
    EstimateSummary,
    EstimationError,
    RegimeReport,
    ShapeMetrics,
    classify_regime,
    estimate_point_time,
    mn_asymptote,
    mn_mean_exact_uniform,
    mn_mean_power,
    mn_monte_carlo,
    sandwich_bounds,
    shape_metrics,
)

__version__ = "0.1.0"
