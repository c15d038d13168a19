"""Polar resampling of a slice around its center.

Columns of the polar image index radius (1 px bins), rows index angle over
[0, 2pi). The top of the image is padded with wrapped rows from the bottom so
that later blurring never sees an artificial seam at angle 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import as_image
from .errors import CenterOutOfBounds, DegenerateRadius


@dataclass(frozen=True)
class PolarImage:
    """Angle-by-radius resampling of one slice.

    ``base`` holds ``angular_bins + pad_rows`` rows; the first ``pad_rows``
    rows duplicate the last ``pad_rows`` unpadded rows (wrap identity).
    """

    base: np.ndarray
    pad_rows: int
    center: tuple[float, float]
    angular_bins: int
    max_radius: float

    def __post_init__(self):
        if self.base.shape[0] != self.angular_bins + self.pad_rows:
            raise ValueError(
                f"base has {self.base.shape[0]} rows, expected "
                f"{self.angular_bins} bins + {self.pad_rows} pad rows"
            )

    @property
    def width(self) -> int:
        return self.base.shape[1]

    @property
    def unpadded(self) -> np.ndarray:
        return self.base[self.pad_rows :]

    def row_angle(self, row: int) -> float:
        """Angle in radians of an unpadded row index."""
        return 2.0 * np.pi * row / self.angular_bins


def bilinear_sample(img, x, y):
    """Bilinear interpolation of ``img`` at float coords; coords must be in bounds."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x0 = np.clip(np.floor(x).astype(np.intp), 0, w - 2)
    y0 = np.clip(np.floor(y).astype(np.intp), 0, h - 2)
    fx = x - x0
    fy = y - y0
    return (
        img[y0, x0] * (1 - fx) * (1 - fy)
        + img[y0, x0 + 1] * fx * (1 - fy)
        + img[y0 + 1, x0] * (1 - fx) * fy
        + img[y0 + 1, x0 + 1] * fx * fy
    )


def to_polar(img, center, angular_bins: int = 720, pad_rows: int = 16) -> PolarImage:
    """Resample a slice to polar coordinates around ``center``.

    The radial extent is clipped to the inscribed circle (full circles only),
    so no row ever samples outside the image. Row j of the unpadded image is
    angle ``2*pi*j/angular_bins``; column r samples radius r exactly.
    """
    img = as_image(img)
    h, w = img.shape
    cx, cy = float(center[0]), float(center[1])
    if not (0 <= cx <= w - 1 and 0 <= cy <= h - 1):
        raise CenterOutOfBounds(f"center ({cx}, {cy}) outside {w}x{h} image")
    if angular_bins < 8:
        raise ValueError(f"angular_bins must be >= 8, got {angular_bins}")
    if pad_rows < 0 or pad_rows > angular_bins:
        raise ValueError(f"pad_rows must be in [0, angular_bins], got {pad_rows}")
    max_radius = min(cx, cy, (w - 1) - cx, (h - 1) - cy)
    if max_radius < 4:
        raise DegenerateRadius(f"inscribed radius {max_radius:.2f} < 4 px around ({cx}, {cy})")
    width = int(np.floor(max_radius))
    radii = np.arange(width, dtype=np.float64)
    theta = 2.0 * np.pi * np.arange(angular_bins, dtype=np.float64) / angular_bins
    xs = cx + np.outer(np.cos(theta), radii)
    ys = cy + np.outer(np.sin(theta), radii)
    unpadded = bilinear_sample(img, xs, ys)
    if pad_rows:
        base = np.vstack([unpadded[angular_bins - pad_rows :], unpadded])
    else:
        base = unpadded
    return PolarImage(
        base=base,
        pad_rows=pad_rows,
        center=(cx, cy),
        angular_bins=angular_bins,
        max_radius=float(max_radius),
    )


def polar_to_radius(mark_x: float) -> float:
    """Polar column index to radius in pixels (identity under 1 px bins)."""
    return float(mark_x)


class PolarTransformer(BaseEstimator, TransformerMixin):
    """Estimator wrapper around :func:`to_polar`.

    The center may be fixed at construction or passed per call, e.g. from a
    fitted :class:`~treerings.pith.PithLocator`.
    """

    def __init__(self, angular_bins: int = 720, pad_rows: int = 16, center=None):
        self.angular_bins = angular_bins
        self.pad_rows = pad_rows
        self.center = center

    def fit(self, X=None, y=None):
        return self

    def transform(self, X, center=None) -> PolarImage:
        c = center if center is not None else self.center
        if c is None:
            raise ValueError("no center: set it at construction or pass it to transform")
        return to_polar(X, c, self.angular_bins, self.pad_rows)
