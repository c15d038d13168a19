"""Ring-boundary detection on polar images via per-row extrema and area persistence.

In polar coordinates a ring boundary is a ridge (or, in some species, a
valley) of intensity running across angle rows. Per row, every interior local
extremum is a candidate; its significance is measured by area-based
persistence: walk left and right from a minimum to the nearest strictly lower
pixel on each side, integrate the intensity above the minimum's level over
each walk, and keep the smaller of the two areas. Maxima are scored on the
negated row. Noise produces extrema trapped between nearby low points, so its
persistence stays small and a threshold removes it.

Tie rules for a discrete image: a plateau of equal values flanked by lower
(resp. higher) neighbors carries exactly one mark at its leftmost pixel, and
the persistence walk treats an equal-valued pixel as lower on the right side
only (the usual index-ordered perturbation), so walks terminate at ties
consistently. When a side has no lower pixel at all, that side's area is
infinite and the extremum always survives filtering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_image, check_fraction, check_nonnegative, check_same_shape
from .errors import ImageTooSmall, NotAnExtremum
from .image import gaussian_blur
from .polar import PolarImage

MODES = ("ridges", "valleys")

BOUNDARY = None  # sentinel bound: no lower pixel exists on that side


@dataclass(frozen=True)
class DetectionParams:
    """Knobs of the detection stage.

    ``sigma`` is the Gaussian blur applied to the polar image; the thresholds
    are fractions of the polar image's maximum intensity n: ``pre_threshold``
    clamps intensities below ``pre*n`` before extremum extraction, and
    ``post_threshold`` drops extrema whose persistence is below ``post*n``.
    ``mode`` selects the extremum species that marks a ring boundary.
    """

    sigma: float = 0.0
    pre_threshold: float = 0.0
    post_threshold: float = 0.0
    mode: str = "ridges"

    def __post_init__(self):
        check_nonnegative(self.sigma, "sigma")
        check_fraction(self.pre_threshold, "pre_threshold", high=0.2)
        check_fraction(self.post_threshold, "post_threshold", high=0.2)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class ExtremaMask:
    """Per-row extremum marks over an image: ridges (maxima) and valleys (minima)."""

    maxima: np.ndarray
    minima: np.ndarray


@dataclass(frozen=True)
class PersistenceRecord:
    """Area persistence of one extremum: the smaller of its two side areas."""

    x: int
    y: int
    area_left: float
    area_right: float
    value: float
    left_bound: int | None
    right_bound: int | None


@dataclass(frozen=True)
class RingMarks:
    """Detected ring radii along one ray (one unpadded polar row)."""

    z: int
    row: int
    positions: np.ndarray  # strictly increasing radii in px
    persistence: np.ndarray  # aligned with positions; may contain inf


def _row_extrema_indices(row):
    """Leftmost-of-plateau maxima and minima of one row; endpoints excluded."""
    change = np.flatnonzero(row[1:] != row[:-1])
    starts = np.concatenate(([0], change + 1))
    if starts.size < 3:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty
    vals = row[starts]
    left, mid, right = vals[:-2], vals[1:-1], vals[2:]
    mid_starts = starts[1:-1]
    maxima = mid_starts[(left < mid) & (right < mid)]
    minima = mid_starts[(left > mid) & (right > mid)]
    return maxima, minima


def extract_row_extrema(img) -> ExtremaMask:
    """Mark interior local maxima and minima of every row.

    Plateaus flanked by lower (higher) values on both sides get a single mark
    at their leftmost pixel; row endpoints are never marked.
    """
    img = as_image(img)
    if img.shape[1] < 3:
        raise ImageTooSmall(f"rows must have at least 3 pixels, got {img.shape[1]}")
    maxima = np.zeros(img.shape, dtype=bool)
    minima = np.zeros(img.shape, dtype=bool)
    for r in range(img.shape[0]):
        mx, mn = _row_extrema_indices(img[r])
        maxima[r, mx] = True
        minima[r, mn] = True
    return ExtremaMask(maxima=maxima, minima=minima)


def _bounds_and_areas(vals, x_p):
    """Persistence bounds and side areas for a minimum of ``vals`` at ``x_p``.

    Left bound: nearest pixel strictly below vals[x_p]; right bound: nearest
    pixel at or below it. A missing bound makes that side's area infinite.
    """
    w = vals.size
    v = vals[x_p]
    left = np.flatnonzero(vals[:x_p] < v)
    right = np.flatnonzero(vals[x_p + 1 :] <= v)
    x_l = int(left[-1]) if left.size else BOUNDARY
    x_r = int(x_p + 1 + right[0]) if right.size else BOUNDARY
    if x_l is BOUNDARY:
        a_left = math.inf
    else:
        a_left = float(np.maximum(vals[x_l : x_p + 1] - v, 0.0).sum())
    if x_r is BOUNDARY:
        a_right = math.inf
    else:
        a_right = float(np.maximum(vals[x_p : x_r + 1] - v, 0.0).sum())
    return x_l, x_r, a_left, a_right


def area_persistence_row(row, x_p: int, kind: str = "min", y: int = 0) -> PersistenceRecord:
    """Area-based persistence of the extremum at column ``x_p`` of a row.

    ``kind="max"`` negates the row first, reducing to the minimum case. Areas
    use unit pixel width (rectangle rule) over the inclusive bound-to-extremum
    span.
    """
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1:
        raise ValueError("row must be 1D")
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', got {kind!r}")
    if not 0 <= x_p < row.size:
        raise NotAnExtremum(f"column {x_p} outside row of length {row.size}")
    vals = -row if kind == "max" else row
    if x_p in (0, row.size - 1) or vals[x_p - 1] < vals[x_p] or vals[x_p + 1] < vals[x_p]:
        raise NotAnExtremum(f"column {x_p} is not a {kind}imum of its row")
    x_l, x_r, a_left, a_right = _bounds_and_areas(vals, x_p)
    return PersistenceRecord(
        x=int(x_p),
        y=int(y),
        area_left=a_left,
        area_right=a_right,
        value=min(a_left, a_right),
        left_bound=x_l,
        right_bound=x_r,
    )


def preprocess(polar: PolarImage, params: DetectionParams) -> np.ndarray:
    """Blur the polar image, then clamp intensities below ``pre_threshold * n``.

    Clamping from below flattens sub-threshold noise so it produces no extrema
    without introducing step edges. n is the maximum of the original polar
    image, not of the blurred one.
    """
    n = float(polar.base.max())
    out = gaussian_blur(polar.base, params.sigma)
    if params.pre_threshold > 0:
        np.maximum(out, params.pre_threshold * n, out=out)
    return out


def _row_detections(vals, mode):
    """Positions and persistence values of one preprocessed row, unfiltered."""
    maxima, minima = _row_extrema_indices(vals)
    if mode == "ridges":
        cols, work = maxima, -vals
    else:
        cols, work = minima, vals
    persistence = np.empty(cols.size, dtype=np.float64)
    for i, c in enumerate(cols):
        _, _, a_left, a_right = _bounds_and_areas(work, c)
        persistence[i] = min(a_left, a_right)
    return cols, persistence


def persistence_filter(
    img,
    extrema: ExtremaMask,
    params: DetectionParams,
    n: float | None = None,
    pad_rows: int = 0,
    z: int = 0,
) -> list[RingMarks]:
    """Keep extrema of the selected species whose persistence reaches ``post*n``.

    Returns one :class:`RingMarks` per unpadded row (rows ``pad_rows`` onward
    of ``img``), with row indices shifted back to unpadded coordinates. ``n``
    defaults to the maximum of ``img`` but should be the original polar
    maximum when ``img`` was blurred.
    """
    img = as_image(img)
    check_same_shape(img, extrema.maxima, "extrema mask")
    marks = extrema.maxima if params.mode == "ridges" else extrema.minima
    n = float(img.max()) if n is None else float(n)
    threshold = params.post_threshold * n
    out = []
    for r in range(pad_rows, img.shape[0]):
        vals = img[r]
        work = -vals if params.mode == "ridges" else vals
        cols = np.flatnonzero(marks[r])
        persistence = np.empty(cols.size, dtype=np.float64)
        for i, c in enumerate(cols):
            _, _, a_left, a_right = _bounds_and_areas(work, c)
            persistence[i] = min(a_left, a_right)
        keep = persistence >= threshold
        out.append(
            RingMarks(
                z=z,
                row=r - pad_rows,
                positions=cols[keep].astype(np.intp),
                persistence=persistence[keep],
            )
        )
    return out


def detect_rings(polar: PolarImage, params: DetectionParams, z: int = 0) -> list[RingMarks]:
    """Full detection on one polar image: preprocess, extract extrema, filter.

    Pad rows participate in the blur but are excluded from the output.
    """
    pre = preprocess(polar, params)
    extrema = extract_row_extrema(pre)
    n = float(polar.base.max())
    return persistence_filter(pre, extrema, params, n=n, pad_rows=polar.pad_rows, z=z)


def _format_persistence(v: float) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def format_ring_file(marks) -> str:
    """Serialize ring marks to the tab-separated text format.

    One detection per line: ``<row>\\t<radius>\\t<persistence>`` with the
    radius as a decimal integer and the persistence as the shortest
    round-tripping decimal (``inf`` for boundary extrema). Rows ascend, radii
    ascend within a row.
    """
    lines = []
    for m in sorted(marks, key=lambda m: m.row):
        for pos, val in zip(m.positions, m.persistence):
            lines.append(f"{m.row}\t{int(pos)}\t{_format_persistence(float(val))}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_ring_file(text: str, z: int = 0) -> list[RingMarks]:
    """Parse the tab-separated ring format back into :class:`RingMarks`."""
    per_row: dict[int, list[tuple[int, float]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        row, radius, persistence = int(parts[0]), int(parts[1]), float(parts[2])
        per_row.setdefault(row, []).append((radius, persistence))
    out = []
    for row in sorted(per_row):
        entries = per_row[row]
        out.append(
            RingMarks(
                z=z,
                row=row,
                positions=np.array([e[0] for e in entries], dtype=np.intp),
                persistence=np.array([e[1] for e in entries], dtype=np.float64),
            )
        )
    return out


class RingDetector(BaseEstimator):
    """Estimator wrapper around :func:`detect_rings`.

    ``mode`` has no default: whether ridges or valleys mark ring boundaries
    depends on the species.
    """

    def __init__(
        self,
        mode: str,
        sigma: float = 0.0,
        pre_threshold: float = 0.0,
        post_threshold: float = 0.0,
    ):
        self.mode = mode
        self.sigma = sigma
        self.pre_threshold = pre_threshold
        self.post_threshold = post_threshold

    def _params(self) -> DetectionParams:
        return DetectionParams(
            sigma=self.sigma,
            pre_threshold=self.pre_threshold,
            post_threshold=self.post_threshold,
            mode=self.mode,
        )

    def fit(self, X=None, y=None):
        self._params()  # validate early
        return self

    def predict(self, polar: PolarImage, z: int = 0) -> list[RingMarks]:
        return detect_rings(polar, self._params(), z=z)
