"""Fox p-colorings of knot diagrams and palette reduction to six colors."""

from .diagram import Diagram, DiagramError, unknot
from .coloring import (
    ColoringError,
    ColoringSpace,
    FoxColoring,
    count_colorings,
    determinant,
    is_p_colorable,
    lower_bound,
    solve_colorings,
    validate_coloring,
)
from .codec import (
    ColoredDiagramDoc,
    braid_closure,
    builtin_corpus,
    canonical_checksum,
    parse_pd,
    pd_text,
    serialize,
)
from .moves import Move, MoveTrace, apply_move, apply_sequence, replay
from .reduction import (
    SCHEDULE,
    TARGET,
    ReductionError,
    reduce_to_six,
    special_case_tables,
)

__all__ = [
    "ColoredDiagramDoc", "ColoringError", "ColoringSpace", "Diagram",
    "DiagramError", "FoxColoring", "Move", "MoveTrace", "ReductionError",
    "SCHEDULE", "TARGET", "apply_move", "apply_sequence", "braid_closure",
    "builtin_corpus", "canonical_checksum", "count_colorings", "determinant",
    "is_p_colorable", "lower_bound", "parse_pd", "pd_text", "reduce_to_six",
    "replay", "serialize", "solve_colorings", "special_case_tables",
    "unknot", "validate_coloring",
]

__version__ = "0.1.0"
