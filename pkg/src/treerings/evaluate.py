"""Scoring of detected ring positions and the parameter-sweep harness.

Two sorted position lists are compared with a monotone edit distance: matched
pairs cost their pixel distance, every unmatched truth position costs
``add_cost`` (a missed ring must be added) and every unmatched detection costs
``remove_cost`` (a false ring must be removed). The default 200/200 makes
missing or false rings the dominant term while placement errors still matter.

The sweep evaluates this cost for one ray over a (blur, pre, post) grid and
reports the cheapest cell; per-blur heat maps serialize to CSV.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .errors import BlurNotInGrid, EmptyGrid, RowOutOfRange, UnsortedInput
from .image import gaussian_blur
from .polar import PolarImage
from .rings import DetectionParams, _row_detections

DEFAULT_BLUR_VALUES = (0.0, 1.0, 2.0, 3.0)
DEFAULT_THRESHOLD_VALUES = tuple(round(0.02 * k, 2) for k in range(11))  # 0..0.2


@dataclass(frozen=True)
class EditCosts:
    """Costs of resolving a false negative (add) or false positive (remove).

    Moving a matched point costs its absolute pixel distance and has no knob.
    """

    add_cost: float = 200.0
    remove_cost: float = 200.0

    def __post_init__(self):
        if self.add_cost <= 0 or self.remove_cost <= 0:
            raise ValueError("add_cost and remove_cost must be positive")


@dataclass(frozen=True)
class MatchResult:
    """Optimal monotone matching between a truth and a detection list."""

    total_cost: float
    pairs: list  # (truth index, detection index), both strictly increasing
    unmatched_truth: list
    unmatched_detected: list


def _check_sorted(values, name):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1D sequence")
    if arr.size > 1 and np.any(np.diff(arr) < 0):
        raise UnsortedInput(f"{name} is not sorted ascending")
    return arr


def edit_distance(truth, detected, costs: EditCosts | None = None) -> MatchResult:
    """Minimum-cost monotone alignment of two sorted position lists.

    Standard string-edit dynamic program with substitution cost ``|dx|``,
    deletion of a truth entry at ``add_cost`` and of a detection entry at
    ``remove_cost``. Backtracing prefers a match, then an unmatched truth
    entry, for determinism.
    """
    costs = costs or EditCosts()
    t = _check_sorted(truth, "truth").tolist()
    d = _check_sorted(detected, "detected").tolist()
    add, rem = costs.add_cost, costs.remove_cost
    la, lb = len(t), len(d)
    D = [[0.0] * (lb + 1) for _ in range(la + 1)]
    for i in range(1, la + 1):
        D[i][0] = i * add
    for j in range(1, lb + 1):
        D[0][j] = j * rem
    for i in range(1, la + 1):
        ti = t[i - 1]
        Di, Dp = D[i], D[i - 1]
        for j in range(1, lb + 1):
            m = Dp[j - 1] + abs(ti - d[j - 1])
            a = Dp[j] + add
            r = Di[j - 1] + rem
            Di[j] = m if (m <= a and m <= r) else (a if a <= r else r)
    pairs, um_t, um_d = [], [], []
    i, j = la, lb
    while i > 0 or j > 0:
        if i > 0 and j > 0 and D[i][j] == D[i - 1][j - 1] + abs(t[i - 1] - d[j - 1]):
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and D[i][j] == D[i - 1][j] + add:
            um_t.append(i - 1)
            i -= 1
        else:
            um_d.append(j - 1)
            j -= 1
    return MatchResult(
        total_cost=D[la][lb],
        pairs=pairs[::-1],
        unmatched_truth=um_t[::-1],
        unmatched_detected=um_d[::-1],
    )


@dataclass(frozen=True)
class SweepGrid:
    """Edit-distance cost over a (blur, pre, post) parameter grid."""

    blur_values: tuple
    pre_values: tuple
    post_values: tuple
    costs: np.ndarray  # shape (len(blur), len(pre), len(post))

    def __post_init__(self):
        if not (self.blur_values and self.pre_values and self.post_values):
            raise EmptyGrid("every grid axis needs at least one value")
        expected = (len(self.blur_values), len(self.pre_values), len(self.post_values))
        if self.costs.shape != expected:
            raise ValueError(f"costs shape {self.costs.shape} != axes {expected}")

    @property
    def best(self) -> tuple[float, float, float, float]:
        """(blur, pre, post, cost) of the cheapest cell; earliest cell on ties."""
        i, j, k = np.unravel_index(int(np.argmin(self.costs)), self.costs.shape)
        return (
            self.blur_values[i],
            self.pre_values[j],
            self.post_values[k],
            float(self.costs[i, j, k]),
        )


def run_sweep(
    polar: PolarImage,
    truth_row,
    row: int,
    blur_values=DEFAULT_BLUR_VALUES,
    pre_values=DEFAULT_THRESHOLD_VALUES,
    post_values=DEFAULT_THRESHOLD_VALUES,
    mode: str = "ridges",
    costs: EditCosts | None = None,
) -> SweepGrid:
    """Score one ray against ground truth over the whole parameter grid.

    Per (blur, pre) pair the row's extrema and persistences are computed once
    and re-thresholded for every post value; results are identical to running
    the full detector per cell. Deterministic: repeat runs are bit-identical.
    """
    blur_values = tuple(float(v) for v in blur_values)
    pre_values = tuple(float(v) for v in pre_values)
    post_values = tuple(float(v) for v in post_values)
    if not (blur_values and pre_values and post_values):
        raise EmptyGrid("every grid axis needs at least one value")
    if not 0 <= row < polar.angular_bins:
        raise RowOutOfRange(f"row {row} outside 0..{polar.angular_bins - 1}")
    costs = costs or EditCosts()
    truth = _check_sorted(truth_row, "truth_row")
    n = float(polar.base.max())
    padded_row = polar.pad_rows + row
    grid = np.empty((len(blur_values), len(pre_values), len(post_values)))
    for i, sigma in enumerate(blur_values):
        params0 = DetectionParams(sigma=sigma, mode=mode)  # validates sigma/mode
        blurred = gaussian_blur(polar.base, params0.sigma)
        for j, pre in enumerate(pre_values):
            DetectionParams(sigma=sigma, pre_threshold=pre, mode=mode)
            vals = np.maximum(blurred[padded_row], pre * n)
            positions, persistence = _row_detections(vals, mode)
            for k, post in enumerate(post_values):
                DetectionParams(sigma=sigma, pre_threshold=pre, post_threshold=post, mode=mode)
                detected = positions[persistence >= post * n]
                grid[i, j, k] = edit_distance(truth, detected, costs).total_cost
    return SweepGrid(
        blur_values=blur_values,
        pre_values=pre_values,
        post_values=post_values,
        costs=grid,
    )


def _fmt(v: float) -> str:
    return repr(float(v))


def write_heatmap(grid: SweepGrid, fixed_blur: float) -> str:
    """CSV heat map of one blur slice: t_post columns, t_pre rows, cost cells.

    A footer comment names the global best cell of the whole grid.
    """
    fixed_blur = float(fixed_blur)
    if fixed_blur not in grid.blur_values:
        raise BlurNotInGrid(f"blur {fixed_blur} not in grid axes {grid.blur_values}")
    i = grid.blur_values.index(fixed_blur)
    lines = ["pre\\post," + ",".join(_fmt(p) for p in grid.post_values)]
    for j, pre in enumerate(grid.pre_values):
        lines.append(_fmt(pre) + "," + ",".join(_fmt(c) for c in grid.costs[i, j]))
    b, p, q, c = grid.best
    lines.append(f"# best blur={_fmt(b)} pre={_fmt(p)} post={_fmt(q)} cost={_fmt(c)}")
    return "\n".join(lines) + "\n"


class RingSweep(BaseEstimator):
    """Grid-search estimator: fit on (polar, truth) and expose the best cell."""

    def __init__(
        self,
        mode: str,
        blur_values=DEFAULT_BLUR_VALUES,
        pre_values=DEFAULT_THRESHOLD_VALUES,
        post_values=DEFAULT_THRESHOLD_VALUES,
        add_cost: float = 200.0,
        remove_cost: float = 200.0,
    ):
        self.mode = mode
        self.blur_values = blur_values
        self.pre_values = pre_values
        self.post_values = post_values
        self.add_cost = add_cost
        self.remove_cost = remove_cost

    def fit(self, X: PolarImage, y, row: int = 0):
        """X is a polar image, y the sorted truth radii for ``row``."""
        self.grid_ = run_sweep(
            X,
            y,
            row,
            blur_values=self.blur_values,
            pre_values=self.pre_values,
            post_values=self.post_values,
            mode=self.mode,
            costs=EditCosts(self.add_cost, self.remove_cost),
        )
        blur, pre, post, cost = self.grid_.best
        self.best_params_ = {"sigma": blur, "pre_threshold": pre, "post_threshold": post}
        self.best_cost_ = cost
        return self
