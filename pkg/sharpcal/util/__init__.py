from sharpcal.util.processing_utils import (
    process_count,
    process_seed,
    process_tol,
    process_grid,
    process_checkpoints,
    to_jsonable,
)

__all__ = [
    "process_count",
    "process_seed",
    "process_tol",
    "process_grid",
    "process_checkpoints",
    "to_jsonable",
]
