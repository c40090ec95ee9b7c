"""Rotation-invariant point cloud analysis."""

from ._core import (
    apply_rotation,
    approx_geometric_median,
    ball_query,
    codeword,
    descriptor_tensor,
    farthest_point_sampling,
    load_cloud,
    normalize,
    random_rotation,
    sample_shape,
    save_xyz,
    shape_class_names,
    weiszfeld_median,
)

__all__ = [
    "apply_rotation",
    "approx_geometric_median",
    "ball_query",
    "codeword",
    "descriptor_tensor",
    "farthest_point_sampling",
    "load_cloud",
    "normalize",
    "random_rotation",
    "sample_shape",
    "save_xyz",
    "shape_class_names",
    "weiszfeld_median",
]
