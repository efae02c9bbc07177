"""Exact tropical disk counts and scattering diagrams for toric surfaces."""
from .families import (
    AmbiguousRealization,
    DiskFamily,
    FamilySet,
    NonGenericConfiguration,
    NonGenericQuery,
    brute_force_potential,
    enumerate_families,
    perturb,
    potential_at,
)
from .geom2d import Cell, GeometryError, NonGenericPath, parse_point, point
from .ringalg import Fan, FanError, LieElement, PotentialElement, bracket, exp_apply
from .scattering import (
    Diagram,
    Wall,
    build_diagram,
    check_joint_consistency,
    check_wall_crossing,
    path_ordered_apply,
    transport,
)
from .trees import Join, Leaf, Mark, parse_tree, stats

__version__ = "0.1.0"
