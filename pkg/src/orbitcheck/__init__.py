"""Algorithmic verification of geodesic-orbit structure on two-summand
compact homogeneous spaces.

The package builds compact Lie algebras and embeddings numerically
(with an exact rational lane where the structure constants allow it),
decomposes isotropy representations, checks the geodesic-orbit property
of invariant metrics by structure-constant linear algebra, applies
necessary structural filters, and re-derives the naturally reductive
presentations attached to bi-invariant product metrics.
"""

from .catalog import (CatalogEntry, CatalogError, catalog_instantiate,
                      catalog_list, catalog_run, get_entry, load_catalog)
from .core import (LieAlgebra, EffectivenessError, ValidationError,
                   direct_sum)
from .filters import (CentralizerSplit, FilterError, FilterReport,
                      bracket_location, centralizer, necessary_filter,
                      normalizer_split, principal_isotropy_dim)
from .go import (GeodesicGraph, GoError, GoVerdict, GoWitness,
                 MetricOperator, ToleranceError, ZxZyDecomposition,
                 geodesic_graph, go_check, go_witness_general,
                 zxzy_decompose)
from .linalg import DEFAULT_TOL, rng_for
from .natred import (BiInvariantTriple, LedgerObataMetric,
                     LedgerObataSolution, TwoFactorWeights,
                     ledger_obata_metric_operator, ledger_obata_solve,
                     ledger_obata_verify, ledger_obata_verify_exact,
                     product_biinvariant_weights)
from .spaces import (ClassificationError, ReductiveSpace, StructureReport,
                     classify_structure, decompose_isotropy, minimal_ideals,
                     reductive_space)
from .zoo import Embedding, classical, g2, algebra_by_name, named_embedding

__all__ = [
    "BiInvariantTriple", "CatalogEntry", "CatalogError",
    "CentralizerSplit", "ClassificationError", "DEFAULT_TOL",
    "EffectivenessError", "Embedding", "FilterError", "FilterReport",
    "GeodesicGraph", "GoError", "GoVerdict", "GoWitness",
    "LedgerObataMetric", "LedgerObataSolution", "LieAlgebra",
    "MetricOperator", "ReductiveSpace", "StructureReport",
    "ToleranceError", "TwoFactorWeights", "ValidationError",
    "ZxZyDecomposition", "algebra_by_name", "bracket_location",
    "catalog_instantiate", "catalog_list", "catalog_run", "centralizer",
    "classical", "classify_structure", "decompose_isotropy", "direct_sum",
    "g2", "geodesic_graph", "get_entry", "go_check", "go_witness_general",
    "ledger_obata_metric_operator", "ledger_obata_solve",
    "ledger_obata_verify", "ledger_obata_verify_exact", "load_catalog",
    "minimal_ideals", "named_embedding", "necessary_filter",
    "normalizer_split", "principal_isotropy_dim",
    "product_biinvariant_weights", "reductive_space", "rng_for",
    "zxzy_decompose",
]

__version__ = "0.1.0"
