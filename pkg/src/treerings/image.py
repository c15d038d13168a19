"""Raster primitives shared by every pipeline stage.

Images are plain 2D float64 numpy arrays indexed ``[y, x]``. Intensities are
kept raw (8-bit and 16-bit files are not rescaled); parameters that depend on
brightness are expressed as fractions of the image maximum.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from ._validation import as_image, check_fraction, check_nonnegative
from .errors import (
    ImageTooSmall,
    MixedDimensions,
    NoForeground,
    UnreadableFile,
    UnsupportedFormat,
)

SUPPORTED_SUFFIXES = (".png", ".tif", ".tiff")

# PIL modes that carry a single grayscale channel (8, 16 or 32 bits).
_GRAY_MODES = {"L", "I", "I;16", "I;16B", "I;16L", "I;16N"}


def convolve3x3(img, kernel) -> np.ndarray:
    """Correlate a 3x3 kernel with the image, edge-replicate at the borders.

    Interior pixel (x, y) is the plain 9-term correlation sum of the kernel
    with its neighborhood; border pixels see replicated edge values. Output
    is signed; callers take the absolute value where they need magnitudes.
    """
    img = as_image(img)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ImageTooSmall(
            f"convolution needs at least 3x3 pixels, got {img.shape[1]}x{img.shape[0]}"
        )
    k = np.asarray(kernel, dtype=np.float64)
    if k.shape != (3, 3):
        raise ValueError(f"kernel must be 3x3, got shape {k.shape}")
    if not np.all(np.isfinite(k)):
        raise ValueError("kernel coefficients must be finite")
    return ndimage.correlate(img, k, mode="nearest")


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian taps, truncated at radius ceil(3*sigma)."""
    sigma = check_nonnegative(sigma, "sigma")
    if sigma == 0:
        return np.ones(1)
    radius = math.ceil(3.0 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return taps / taps.sum()


def gaussian_blur(img, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge-replicate borders; sigma 0 is a no-op."""
    img = as_image(img)
    sigma = check_nonnegative(sigma, "sigma")
    if sigma == 0:
        return img.copy()
    taps = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(img, taps, axis=0, mode="nearest")
    return ndimage.correlate1d(out, taps, axis=1, mode="nearest")


def foreground_mask(img, frac: float = 0.1) -> np.ndarray:
    """Threshold at ``frac * max`` and keep the largest 4-connected component.

    The component filter drops bright speckle outside the disk. An image with
    no positive intensity has no foreground at any threshold.
    """
    img = as_image(img)
    frac = check_fraction(frac, "frac")
    peak = float(img.max())
    if peak <= 0.0:
        raise NoForeground("image has no positive intensities")
    mask = img >= frac * peak
    if not mask.any():
        raise NoForeground(f"no pixel reaches {frac} of the image maximum")
    labels, count = ndimage.label(mask)  # default structure = 4-connectivity
    if count > 1:
        sizes = np.bincount(labels.ravel())
        sizes[0] = 0
        mask = labels == sizes.argmax()
    return mask


def load_image(path) -> np.ndarray:
    """Read one grayscale PNG/TIFF slice, preserving raw intensity values."""
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_SUFFIXES:
        raise UnsupportedFormat(f"{path}: only {'/'.join(SUPPORTED_SUFFIXES)} are supported")
    try:
        with Image.open(path) as im:
            mode = im.mode
            if mode not in _GRAY_MODES:
                raise UnsupportedFormat(f"{path}: mode {mode!r} is not single-channel grayscale")
            arr = np.asarray(im, dtype=np.float64)
    except UnsupportedFormat:
        raise
    except FileNotFoundError as exc:
        raise UnreadableFile(f"{path}: no such file") from exc
    except Exception as exc:
        raise UnreadableFile(f"{path}: {exc}") from exc
    return arr


def load_stack(path) -> np.ndarray:
    """Load a (z, height, width) stack from a file or a directory of slices.

    Directory slices are ordered by lexicographic filename. All slices must
    agree in size.
    """
    path = Path(path)
    if not path.exists():
        raise UnreadableFile(f"{path}: no such file or directory")
    if path.is_dir():
        files = sorted(
            (p for p in path.iterdir() if p.suffix.lower() in SUPPORTED_SUFFIXES),
            key=lambda p: p.name,
        )
        if not files:
            raise UnreadableFile(f"{path}: no supported image files found")
    else:
        files = [path]
    slices = [load_image(f) for f in files]
    shape = slices[0].shape
    for f, s in zip(files, slices):
        if s.shape != shape:
            raise MixedDimensions(
                f"{f.name} is {s.shape[1]}x{s.shape[0]}, expected {shape[1]}x{shape[0]}"
            )
    return np.stack(slices)


def save_image(path, img, depth: int = 16) -> None:
    """Write an image as 8- or 16-bit grayscale PNG (values rounded, not rescaled)."""
    img = as_image(img)
    if depth == 8:
        limit, dtype = 255, np.uint8
    elif depth == 16:
        limit, dtype = 65535, np.uint16
    else:
        raise ValueError(f"depth must be 8 or 16, got {depth}")
    vals = np.rint(img)
    if vals.min() < 0 or vals.max() > limit:
        raise ValueError(f"intensities {vals.min()}..{vals.max()} do not fit {depth}-bit output")
    Image.fromarray(vals.astype(dtype)).save(Path(path), format="PNG")
