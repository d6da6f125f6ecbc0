"""Desk-scale decision toolkit for temperature-1 tile self-assembly paths:
visible glues, nice U-turns, the stake-path pumping algorithm, window movies,
and independently verifiable pumpability/fragility certificates."""

from .model import (
    Assembly,
    Glue,
    PathAssembly,
    TileAssemblySystem,
    TileType,
    attachable,
    conflict,
    grow_sequence,
    interacts,
    is_stable,
    validate_path,
)
from .geometry import Point, Vector, line_side, region_cut
from .pumping import (
    ConflictAt,
    Infinite,
    PumpedSequence,
    decide_pumping,
    fragility_witness,
    pumping,
)
from .visibility import (
    DominationReport,
    GlueEdge,
    VisibilityReport,
    check_order,
    dominating_tiles,
    glue_edges,
    visible_glues,
    watershed,
)
from .engine import (
    AlgoLimits,
    AlgoState,
    CageFree,
    Fragile,
    Inconclusive,
    Pumpable,
    StakeReached,
    algo_step,
    classify_contact,
    conclude,
    detect_nice_uturn,
    find_initial_pair,
    run_algorithm,
    south_pump_monitor,
)
from .movies import (
    BoundReport,
    Movie,
    PeriodicSeparator,
    VerticalWindow,
    bound,
    cagefree_separators,
    diet_check,
    movies_equal_upto,
    record_movie,
    wml_pump,
)
from .certify import (
    FragileCertificate,
    PumpableCertificate,
    parse_certificate,
    serialize_certificate,
    verify_fragile,
    verify_pumpable,
)
from .instances import InstanceFile, load_fixture, parse_instance, serialize_instance

__version__ = "0.1.0"
