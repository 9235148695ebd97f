from .fiad import (
    Box,
    SkeletonError,
    Tiling,
    TilingVerification,
    TilingViolation,
    adjacency,
    build_fiad_tiling,
    tile_counts,
    tiling_from_boxes,
    verify_tiling,
)

__all__ = [
    "Box",
    "SkeletonError",
    "Tiling",
    "TilingVerification",
    "TilingViolation",
    "adjacency",
    "build_fiad_tiling",
    "tile_counts",
    "tiling_from_boxes",
    "verify_tiling",
]
