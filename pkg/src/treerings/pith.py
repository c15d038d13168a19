"""Disk center (pith) location from directional edge-response profiles.

Rings cross their own radius perpendicular to it, so a directional edge filter
responds weakly, on average, at the coordinate of the center and strongly away
from it. Four Sobel kernels (horizontal, vertical and the two diagonals) each
yield a 1D profile over their coordinate; the pixel minimizing the sum of the
four profiles is the center. Diagonal directions make the estimate robust to
radial cracks, which can dominate any single direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ._validation import as_image, as_mask, as_stack, check_same_shape
from .errors import NoForeground
from .image import convolve3x3, foreground_mask, gaussian_blur

_SQRT2 = math.sqrt(2.0)

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[1, 2, 1], [0, 0, 0], [-1, -2, -1]], dtype=np.float64)
SOBEL_XY = np.array([[-2, -2, 0], [-2, 0, 2], [0, 2, 2]], dtype=np.float64) / _SQRT2
SOBEL_YX = np.array([[0, 2, 2], [-2, 0, 2], [-2, -2, 0]], dtype=np.float64) / _SQRT2

# Kernel per profile direction. SOBEL_XY differentiates along x+y, SOBEL_YX
# along x-y; both diagonal coordinates are integer-binned.
SOBEL_KERNELS = {
    "x": SOBEL_X,
    "y": SOBEL_Y,
    "diag_sum": SOBEL_XY,
    "diag_diff": SOBEL_YX,
}
DIRECTIONS = tuple(SOBEL_KERNELS)


@dataclass(frozen=True)
class DirectionalProfile:
    """Mean edge response per coordinate bin of one direction."""

    direction: str
    values: np.ndarray
    min_count: int


@dataclass(frozen=True)
class PithEstimate:
    """Per-slice centers plus the straight lines fitted through them over z."""

    z: np.ndarray
    per_slice_centers: np.ndarray  # (n, 2) raw (x, y) per slice
    fitted_centers: np.ndarray  # (n, 2) evaluated on the fitted lines
    fit_params: dict = field(default_factory=dict)  # {"x": (slope, intercept), "y": ...}

    def center_at(self, z):
        """Evaluate the fitted center line(s) at slice index z."""
        z = np.asarray(z, dtype=np.float64)
        ax, bx = self.fit_params["x"]
        ay, by = self.fit_params["y"]
        return np.stack([ax * z + bx, ay * z + by], axis=-1)


def _direction_coords(direction, shape):
    """Integer bin index per pixel and the bin count for one direction."""
    h, w = shape
    yy, xx = np.indices((h, w))
    if direction == "x":
        return xx, w
    if direction == "y":
        return yy, h
    if direction == "diag_sum":
        return xx + yy, w + h - 1
    if direction == "diag_diff":
        return xx - yy + (h - 1), w + h - 1
    raise ValueError(f"unknown direction {direction!r}, expected one of {DIRECTIONS}")


def directional_response(img, kernel, sigma: float) -> np.ndarray:
    """Blurred absolute response of one edge kernel; non-negative everywhere."""
    return gaussian_blur(np.abs(convolve3x3(img, kernel)), sigma)


def directional_profile(resp, mask, direction: str, min_count: int = 100) -> DirectionalProfile:
    """Average the response over masked pixels per coordinate bin.

    Bins with fewer than ``min_count`` masked pixels fall back to the maximum
    response over the whole image, so sparsely covered coordinates can never
    look artificially ring-free.
    """
    resp = as_image(resp, "response")
    mask = as_mask(mask)
    check_same_shape(resp, mask)
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    coords, nbins = _direction_coords(direction, resp.shape)
    counts = np.bincount(coords[mask], minlength=nbins)
    sums = np.bincount(coords[mask], weights=resp[mask], minlength=nbins)
    values = np.full(nbins, resp.max(), dtype=np.float64)
    ok = counts >= min_count
    values[ok] = sums[ok] / counts[ok]
    return DirectionalProfile(direction, values, min_count)


def locate_center(img, mask, sigma: float = 2.0, min_count: int = 100) -> tuple[int, int]:
    """Find the pith pixel of one slice.

    Sums the four directional profiles at each masked pixel's coordinates and
    returns the argmin as integer ``(x, y)``; ties break to the smallest y,
    then smallest x.
    """
    img = as_image(img)
    mask = as_mask(mask)
    check_same_shape(img, mask)
    if not mask.any():
        raise NoForeground("mask contains no foreground pixels")
    h, w = img.shape
    profiles = {}
    for direction, kernel in SOBEL_KERNELS.items():
        resp = directional_response(img, kernel, sigma)
        profiles[direction] = directional_profile(resp, mask, direction, min_count).values
    yy, xx = np.indices((h, w))
    total = (
        profiles["x"][xx]
        + profiles["y"][yy]
        + profiles["diag_sum"][xx + yy]
        + profiles["diag_diff"][xx - yy + (h - 1)]
    )
    total[~mask] = np.inf
    flat = int(np.argmin(total))  # row-major first minimum = (y, x) tie-break
    y, x = divmod(flat, w)
    return x, y


def _fit_line(z, v):
    if z.size == 1:
        return 0.0, float(v[0])
    zm = z.mean()
    vm = v.mean()
    slope = float(((z - zm) * (v - vm)).sum() / ((z - zm) ** 2).sum())
    return slope, float(vm - slope * zm)


def fit_center_line(centers) -> PithEstimate:
    """Least-squares lines x(z) and y(z) through per-slice centers.

    ``centers`` is a sequence of (z, x, y). A single center yields constant
    lines through that point.
    """
    pts = np.asarray(list(centers), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] == 0:
        raise ValueError("centers must be a non-empty sequence of (z, x, y)")
    z = pts[:, 0]
    if np.unique(z).size != z.size:
        raise ValueError("z values must be distinct")
    fit_x = _fit_line(z, pts[:, 1])
    fit_y = _fit_line(z, pts[:, 2])
    fitted = np.column_stack([fit_x[0] * z + fit_x[1], fit_y[0] * z + fit_y[1]])
    return PithEstimate(
        z=z,
        per_slice_centers=pts[:, 1:].copy(),
        fitted_centers=fitted,
        fit_params={"x": fit_x, "y": fit_y},
    )


class PithLocator(BaseEstimator):
    """Estimator that locates per-slice pith centers and fits their drift line.

    Parameters
    ----------
    sigma : blur applied to the absolute Sobel responses before averaging.
    min_count : minimum masked pixels per coordinate bin before the profile
        falls back to the image maximum.
    mask_frac : foreground threshold as a fraction of each slice's maximum.
    """

    def __init__(self, sigma: float = 2.0, min_count: int = 100, mask_frac: float = 0.1):
        self.sigma = sigma
        self.min_count = min_count
        self.mask_frac = mask_frac

    def fit(self, X, y=None):
        stack = as_stack(X)
        centers = []
        for z, sl in enumerate(stack):
            mask = foreground_mask(sl, self.mask_frac)
            cx, cy = locate_center(sl, mask, self.sigma, self.min_count)
            centers.append((z, cx, cy))
        self.estimate_ = fit_center_line(centers)
        self.centers_ = self.estimate_.per_slice_centers
        self.fitted_centers_ = self.estimate_.fitted_centers
        return self

    def predict(self, z):
        """Fitted (x, y) center at the given slice index or indices."""
        if not hasattr(self, "estimate_"):
            raise NotFittedError("PithLocator must be fitted before calling predict")
        return self.estimate_.center_at(z)

    def fit_predict(self, X, y=None):
        return self.fit(X).fitted_centers_
