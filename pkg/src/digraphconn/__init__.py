"""Construction, spectral analysis, exhaustive search and consensus simulation
for simple digraphs with large algebraic connectivity."""

from .builder import arc_for_index, build, predicted_connectivity, predicted_spectrum
from .graph import DiGraph, complement, in_degrees, is_rooted, laplacian, source_scc_count
from .search import max_connectivity
from .spectra import algebraic_connectivity, char_poly_exact, eigenvalues, forest_counts

__all__ = [
    "DiGraph", "algebraic_connectivity", "arc_for_index", "build", "char_poly_exact",
    "complement", "eigenvalues", "forest_counts", "in_degrees", "is_rooted", "laplacian",
    "max_connectivity", "predicted_connectivity", "predicted_spectrum", "source_scc_count",
]
