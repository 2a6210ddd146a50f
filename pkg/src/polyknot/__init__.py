"""Random equilateral polygons in tight spherical confinement: sampling,
knot identification via HOMFLY, equilateral certification, and a persistent
store of best-known stick-number bounds."""

from .geometry import (
    ActionAngle,
    DegenerateChord,
    DegenerateDiagonal,
    Polygon,
    crankshaft,
    edge_lengths,
    extract,
    min_nonadjacent_distance,
    read_polygon,
    reconstruct,
    rigid_deviation,
    segment_distance,
    write_polygon,
)
from .polytope import DimensionMismatch, ExteriorPoint, MomentPolytope
from .sampler import ChainState, SamplerConfig, TsmcmcSampler, sample_polygons, tsmcmc_step
from .diagram import (
    NonGenericProjection,
    PlanarDiagram,
    ProjectionFailure,
    generic_projection,
    project,
    simplify,
)
from .homfly import CrossingCapExceeded, HomflyPolynomial, homfly, homfly_bruteforce
from .identify import (
    Classification,
    InvariantTable,
    bundled_table,
    classify,
    load_table,
)
from .certify import Certificate, certify, tighten
from .records import KnotRecord, RecordStore, stick_lower_bound, superbridge_upper

__all__ = [
    "ActionAngle",
    "Certificate",
    "ChainState",
    "Classification",
    "CrossingCapExceeded",
    "DegenerateChord",
    "DegenerateDiagonal",
    "DimensionMismatch",
    "ExteriorPoint",
    "HomflyPolynomial",
    "InvariantTable",
    "KnotRecord",
    "MomentPolytope",
    "NonGenericProjection",
    "PlanarDiagram",
    "Polygon",
    "ProjectionFailure",
    "RecordStore",
    "SamplerConfig",
    "TsmcmcSampler",
    "bundled_table",
    "certify",
    "classify",
    "crankshaft",
    "edge_lengths",
    "extract",
    "generic_projection",
    "homfly",
    "homfly_bruteforce",
    "load_table",
    "min_nonadjacent_distance",
    "project",
    "read_polygon",
    "reconstruct",
    "rigid_deviation",
    "sample_polygons",
    "segment_distance",
    "simplify",
    "stick_lower_bound",
    "superbridge_upper",
    "tighten",
    "tsmcmc_step",
    "write_polygon",
]
