"""Decision procedures for finiteness and simplicity of labeled graph algebras."""

from .algebra import atoms, compute_tower, unique_path_label, weakly_left_resolving_check
from .decision import afe_verdict, analyze, disagreeable_check, no_loop_with_exit, simplicity_verdict
from .graph import (
    LabeledGraph, LanguageSpec, SkewProductSpec, at_most_one_one, label_blocks, range_of,
    relative_range, skew_product, source_of,
)
from .io import parse_input
from .subshift import (
    blocks, closure_infinite_check, minimality_check, overlap_graph, pseudo_periodicity_check,
)
from .topgraph import build_top_graph, find_pseudoloop, is_pseudoloop, metric_rho
from .verdict import Status, Verdict

__all__ = [
    "LabeledGraph", "LanguageSpec", "SkewProductSpec", "Status", "Verdict", "afe_verdict",
    "analyze", "at_most_one_one", "atoms", "blocks", "build_top_graph", "closure_infinite_check",
    "compute_tower", "disagreeable_check", "find_pseudoloop", "is_pseudoloop", "label_blocks",
    "metric_rho", "minimality_check", "no_loop_with_exit", "overlap_graph", "parse_input",
    "pseudo_periodicity_check", "range_of", "relative_range", "simplicity_verdict",
    "skew_product", "source_of", "unique_path_label", "weakly_left_resolving_check",
]

__version__ = "0.1.0"
