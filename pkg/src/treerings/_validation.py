"""Input validation helpers shared by the functional and estimator APIs."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch


def as_image(img, name: str = "image") -> np.ndarray:
    """Coerce to a 2D float64 array."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2D array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    return arr


def as_mask(mask, name: str = "mask") -> np.ndarray:
    """Coerce to a 2D boolean array."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2D array, got shape {arr.shape}")
    return arr.astype(bool, copy=False)


def check_same_shape(img: np.ndarray, other: np.ndarray, name: str = "mask") -> None:
    if img.shape != other.shape:
        raise DimensionMismatch(
            f"{name} shape {other.shape} does not match image shape {img.shape}"
        )


def as_stack(stack, name: str = "stack") -> np.ndarray:
    """Coerce a sequence of slices (or a 3D array) to a (z, height, width) float64 array."""
    if isinstance(stack, np.ndarray) and stack.ndim == 3:
        arr = stack.astype(np.float64, copy=False)
    else:
        slices = [as_image(s, f"{name}[{i}]") for i, s in enumerate(stack)]
        if not slices:
            raise ValueError(f"{name} has no slices")
        if len({s.shape for s in slices}) != 1:
            raise DimensionMismatch(f"{name} slices disagree in shape")
        arr = np.stack(slices)
    if arr.shape[0] == 0:
        raise ValueError(f"{name} has no slices")
    return arr


def check_fraction(value: float, name: str, high: float = 1.0) -> float:
    value = float(value)
    if not 0.0 <= value <= high:
        raise ValueError(f"{name} must be in [0, {high}], got {value}")
    return value


def check_nonnegative(value: float, name: str) -> float:
    value = float(value)
    if not value >= 0.0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value
