"""Figure rendering for cpsim sweep/compare/reserve CSV output."""
from .figures import (COMPARE_COLUMNS, KINDS, RESERVE_COLUMNS, SWEEP_COLUMNS,
                      FigureSpec, SchemaError, mechanism_label, read_rows,
                      render)

__version__ = "0.1.0"

__all__ = ["COMPARE_COLUMNS", "KINDS", "RESERVE_COLUMNS", "SWEEP_COLUMNS",
           "FigureSpec", "SchemaError", "mechanism_label", "read_rows",
           "render", "__version__"]
