"""K-theory of Leavitt path algebras and graph C*-algebras of finite quivers."""

__version__ = "0.1.0"

from .groups import FgAbGroup, SymbolicGroup, parse_group
from .ktheory import KReport, KTable, coker_ker, k0_k1_pid, k_groups, load_ktable, parse_ktable
from .linalg import (IntMatrix, SmithForm, adjacency, det, edge_matrix, one_minus_Nt, rank,
                     smith_normal_form)
from .quiver import (Quiver, classify, is_complete_subquiver, opposite, parse_quiver,
                     path_counts, reduction_chain, tilde_quiver)

__all__ = [
    "FgAbGroup", "SymbolicGroup", "parse_group", "KReport", "KTable", "coker_ker", "k0_k1_pid",
    "k_groups", "load_ktable", "parse_ktable", "IntMatrix", "SmithForm", "adjacency", "det",
    "edge_matrix", "one_minus_Nt", "rank", "smith_normal_form", "Quiver", "classify",
    "is_complete_subquiver", "opposite", "parse_quiver", "path_counts", "reduction_chain",
    "tilde_quiver",
]
