from ._core import (
    ConfigError,
    DomainError,
    Endomorphism,
    ExpandingBase,
    IfsPair,
    PrecisionError,
    ProductMap,
    SearchExhausted,
    SingularMap,
    SkewMap,
    box_transitivity,
    classify_fixed_points,
    dist_circle,
    reduce,
    robustness_sweep,
    unstable_coverage,
)


def default_singular_map():
    """The reference singular map on T^1 x T^1 with default parameters."""
    return SingularMap(SkewMap())


__all__ = [
    "ConfigError",
    "DomainError",
    "Endomorphism",
    "ExpandingBase",
    "IfsPair",
    "PrecisionError",
    "ProductMap",
    "SearchExhausted",
    "SingularMap",
    "SkewMap",
    "box_transitivity",
    "classify_fixed_points",
    "default_singular_map",
    "dist_circle",
    "reduce",
    "robustness_sweep",
    "unstable_coverage",
]
