"""Parametric topological entropies of multivalued nonautonomous dynamical
systems on finite metric spaces and grid-discretized interval maps."""

from .space import FiniteMetricSpace, new_space, set_hausdorff, set_rho
from .dynamics import (
    Cover,
    MapSequence,
    MultiMap,
    OrbitSet,
    autonomous,
    ball_cover,
    composed_image,
    cover_An_class,
    cover_f_set,
    count_orbits,
    enumerate_orbits,
    large_preimage,
    map_at,
    small_preimage,
)
from .orbitmetrics import p_haus_at, p_rho_at, pn, pn_branch, pn_cm
from .extremal import (
    EXACT,
    LOWER_BOUND,
    UPPER_BOUND,
    DistanceTable,
    SolveResult,
    max_separated,
    min_spanning,
    min_subcover,
)
from .entropy import (
    Caps,
    DEFAULT_CAPS,
    EntropyEstimate,
    EntropyProfile,
    KINDS,
    check_prop61,
    count_branch,
    count_cm,
    count_haus,
    count_kt,
    count_lcover,
    count_rho,
    count_ucover,
    estimate,
    estimate_grid,
    median_selection,
    profile,
)
from .hyperspace import (
    Hyperspace,
    build_hyperspace,
    compare_hyper,
    embed,
    lift_map,
    lift_sequence,
)
from .ingestion import (
    IntervalMultiMap,
    SystemSpec,
    builtin,
    discretize,
    grid_space,
    parse_spec,
    realize,
    selection_on_grid,
    serialize_spec,
)

__version__ = "0.1.0"
