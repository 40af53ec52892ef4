from .ged import GedConfig, GedResult, ged, ged_exhaustive
from .frechet import (
    FEATURE_EXTRACTOR_IDS,
    FeatureStats,
    RandomProjectionPixels,
    TypeHistogram,
    compute_stats,
    frechet_distance,
    get_feature_extractor,
)
from .rectfit import fit_rectangles
from .protocol import (
    CompatibilityResult,
    EvalProtocol,
    compatibility,
    compatibility_report,
    diversity_report,
    diversity_score,
    layout_sampler_from_checkpoint,
)

__all__ = [
    "GedConfig",
    "GedResult",
    "ged",
    "ged_exhaustive",
    "FEATURE_EXTRACTOR_IDS",
    "FeatureStats",
    "RandomProjectionPixels",
    "TypeHistogram",
    "compute_stats",
    "frechet_distance",
    "get_feature_extractor",
    "fit_rectangles",
    "CompatibilityResult",
    "EvalProtocol",
    "compatibility",
    "compatibility_report",
    "diversity_report",
    "diversity_score",
    "layout_sampler_from_checkpoint",
]
