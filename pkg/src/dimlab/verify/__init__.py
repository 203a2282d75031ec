"""Identity checks, limits over free presentations and the batch runner."""
from .checks import (DIM_IDS, FOX_PARTS, check_dim_identity, check_dim_quotients, check_fox,
                     check_foxlimit, check_limit_formula, check_thdim, fox_witnesses)
from .finite import (FiniteGroupTable, abelian_table, corpus, dihedral_table, dim_quotient_finite,
                     dimension_subgroup, load_table, parse_table, quaternion_table)
from .presentations import PresentationSpec, fg1_presentation, load_presentation, parse_presentation
from .reps import RepTag, comparison_map, equalizer_data, evaluate, induced_map, limit_equalizer, monoadd_check
from .suite import PRESETS, run_suite

__all__ = [
    "DIM_IDS", "FOX_PARTS", "check_dim_identity", "check_dim_quotients", "check_fox", "check_foxlimit",
    "check_limit_formula", "check_thdim", "fox_witnesses", "FiniteGroupTable", "abelian_table", "corpus",
    "dihedral_table", "dim_quotient_finite", "dimension_subgroup", "load_table", "parse_table",
    "quaternion_table", "PresentationSpec", "fg1_presentation", "load_presentation", "parse_presentation",
    "RepTag", "comparison_map", "equalizer_data", "evaluate", "induced_map", "limit_equalizer",
    "monoadd_check", "PRESETS", "run_suite",
]
