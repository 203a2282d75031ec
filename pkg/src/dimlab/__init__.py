"""Exact computations with dimension subgroups, quadratic functors and free presentations."""
from .abelian import AbMap, FgAbelian, Lattice, format_invariants, parse_invariants
from .errors import DimlabError
from .report import FAILED, PARTIAL, VERIFIED, CheckReport

__version__ = "0.1.0"

__all__ = ["AbMap", "FgAbelian", "Lattice", "format_invariants", "parse_invariants", "DimlabError",
           "FAILED", "PARTIAL", "VERIFIED", "CheckReport", "__version__"]
