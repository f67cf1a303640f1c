"""Balanced transversals of set sequences and balanced block partitions."""

__version__ = "0.1.0"

from .blocks import BlockInstance, BlockPartition, oracle_min_spread, partition, partition_scaled
from .construct2d import (
    ConstructionParams,
    GridSequence2D,
    build_theorem3,
    claim1_transversal,
    jump_sequence,
    lift_1d,
    normalize,
    trivial_transversal,
)
from .errors import BlocklineError, ValidationError
from .geom2d import Box, BoxUnionSet2D, DensityProbe, NormKind, Transversal2D, Vec2, diameter, is_grid_dense_2d
from .optimize2d import SearchConfig, assignment_search, local_search, min_triangle_diameter
from .sets1d import ClosedSet1D, Interval, Lattice, Point, is_unit_dense
from .transversal1d import (
    GridSequence1D,
    Transversal1D,
    find_window_offset,
    propagate,
    solve,
    solve_exact_finite,
)
