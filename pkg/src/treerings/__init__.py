"""Automatic pith location and ring-boundary detection for tree-disk CT slices."""

from .errors import (
    BlurNotInGrid,
    CenterOutOfBounds,
    DegenerateRadius,
    DimensionMismatch,
    EmptyGrid,
    ImageTooSmall,
    InvalidDiskSpec,
    MixedDimensions,
    NoForeground,
    NotAnExtremum,
    RowOutOfRange,
    TreeRingError,
    UnreadableFile,
    UnsortedInput,
    UnsupportedFormat,
)
from .evaluate import (
    DEFAULT_BLUR_VALUES,
    DEFAULT_THRESHOLD_VALUES,
    EditCosts,
    MatchResult,
    RingSweep,
    SweepGrid,
    edit_distance,
    run_sweep,
    write_heatmap,
)
from .image import (
    convolve3x3,
    foreground_mask,
    gaussian_blur,
    gaussian_kernel1d,
    load_image,
    load_stack,
    save_image,
)
from .pith import (
    SOBEL_KERNELS,
    SOBEL_X,
    SOBEL_XY,
    SOBEL_Y,
    SOBEL_YX,
    DirectionalProfile,
    PithEstimate,
    PithLocator,
    directional_profile,
    directional_response,
    fit_center_line,
    locate_center,
)
from .polar import PolarImage, PolarTransformer, bilinear_sample, polar_to_radius, to_polar
from .rings import (
    DetectionParams,
    ExtremaMask,
    PersistenceRecord,
    RingDetector,
    RingMarks,
    area_persistence_row,
    detect_rings,
    extract_row_extrema,
    format_ring_file,
    parse_ring_file,
    persistence_filter,
    preprocess,
)
from .synth import DiskSpec, DiskTruth, generate_disk, generate_stack, radial_intensity

__version__ = "0.1.0"

__all__ = [
    "BlurNotInGrid",
    "CenterOutOfBounds",
    "DEFAULT_BLUR_VALUES",
    "DEFAULT_THRESHOLD_VALUES",
    "DegenerateRadius",
    "DetectionParams",
    "DimensionMismatch",
    "DirectionalProfile",
    "DiskSpec",
    "DiskTruth",
    "EditCosts",
    "EmptyGrid",
    "ExtremaMask",
    "ImageTooSmall",
    "InvalidDiskSpec",
    "MatchResult",
    "MixedDimensions",
    "NoForeground",
    "NotAnExtremum",
    "PersistenceRecord",
    "PithEstimate",
    "PithLocator",
    "PolarImage",
    "PolarTransformer",
    "RingDetector",
    "RingMarks",
    "RingSweep",
    "RowOutOfRange",
    "SOBEL_KERNELS",
    "SOBEL_X",
    "SOBEL_XY",
    "SOBEL_Y",
    "SOBEL_YX",
    "SweepGrid",
    "TreeRingError",
    "UnreadableFile",
    "UnsortedInput",
    "UnsupportedFormat",
    "area_persistence_row",
    "bilinear_sample",
    "convolve3x3",
    "detect_rings",
    "directional_profile",
    "directional_response",
    "edit_distance",
    "extract_row_extrema",
    "fit_center_line",
    "foreground_mask",
    "format_ring_file",
    "gaussian_blur",
    "gaussian_kernel1d",
    "generate_disk",
    "generate_stack",
    "load_image",
    "load_stack",
    "locate_center",
    "parse_ring_file",
    "persistence_filter",
    "polar_to_radius",
    "preprocess",
    "radial_intensity",
    "run_sweep",
    "save_image",
    "to_polar",
    "write_heatmap",
]
