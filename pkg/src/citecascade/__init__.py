"""Citation cascade analysis.

Builds cascades (layered reachability along knowledge-flow edges) from a
citation graph, measures their structure (depth, width, size, structural
virality), scores topic relevance between publications through truncated
classification codes, compares against degree/year-preserving randomized
baselines, clusters per-cascade curves into typical shapes, and reports
binned relationships between structure and direct citation impact.
"""

from .cascade import (
    WALK_DEPTH_CAP,
    Cascade,
    CascadeSummary,
    WalkProfile,
    batch_cascades,
    build_cascade,
    cascade_width,
    count_walks,
    structural_virality,
    width_profile,
)
from .cluster import ClusterModel, SeriesSet, collect_cohort, kmeans, z_normalize
from .errors import (
    CitationCascadeError,
    DepthCapExceeded,
    DuplicateId,
    EdgeValidationError,
    EmptyCohort,
    EmptyInput,
    GenerationOutOfRange,
    InsufficientEdges,
    MalformedCode,
    ParseError,
    TooFewSeries,
    UnknownRoot,
    ViralityUndefined,
)
from .graph import (
    CitationGraph,
    MetadataSchema,
    Publication,
    ValidationReport,
    build_graph,
    degrees,
    load_edges,
    load_metadata,
)
from .impact import (
    BinSpec,
    BinnedSummary,
    CdfTable,
    citations_vs_generation_relevance,
    citations_vs_structure,
    distribution_summary,
    relevance_vs_citations,
)
from .nullmodel import (
    GenerationBaseline,
    RewireConfig,
    TemporalRule,
    baseline_curve,
    fit_slope,
    rewire,
    slope_confidence_interval,
)
from .relevance import (
    DEFAULT_CODE_LEVEL,
    RelevanceCurve,
    RelevanceStats,
    code_level,
    first_generation_total,
    generation_relevance,
    overall_relevance_by_generation,
    pair_relevance,
    relevance_curve,
)

__version__ = "0.1.0"

__all__ = [
    "WALK_DEPTH_CAP",
    "DEFAULT_CODE_LEVEL",
    "Cascade",
    "CascadeSummary",
    "WalkProfile",
    "CitationGraph",
    "MetadataSchema",
    "Publication",
    "ValidationReport",
    "SeriesSet",
    "ClusterModel",
    "BinSpec",
    "BinnedSummary",
    "CdfTable",
    "RewireConfig",
    "TemporalRule",
    "GenerationBaseline",
    "RelevanceCurve",
    "RelevanceStats",
    "CitationCascadeError",
    "ParseError",
    "DuplicateId",
    "EdgeValidationError",
    "UnknownRoot",
    "ViralityUndefined",
    "DepthCapExceeded",
    "GenerationOutOfRange",
    "MalformedCode",
    "InsufficientEdges",
    "EmptyCohort",
    "TooFewSeries",
    "EmptyInput",
    "build_graph",
    "load_edges",
    "load_metadata",
    "degrees",
    "build_cascade",
    "width_profile",
    "cascade_width",
    "structural_virality",
    "count_walks",
    "batch_cascades",
    "code_level",
    "pair_relevance",
    "generation_relevance",
    "relevance_curve",
    "first_generation_total",
    "overall_relevance_by_generation",
    "rewire",
    "baseline_curve",
    "fit_slope",
    "slope_confidence_interval",
    "z_normalize",
    "collect_cohort",
    "kmeans",
    "distribution_summary",
    "relevance_vs_citations",
    "citations_vs_structure",
    "citations_vs_generation_relevance",
]
