"""Independent brute-force reference implementations used only by tests.

Everything here is written with plain Python loops against the definitions,
deliberately sharing no code path with the package.
"""

import math
from itertools import combinations

import numpy as np


def naive_convolve3x3(img, kernel):
    """Direct 9-term correlation sum per pixel with edge-replicated borders."""
    img = np.asarray(img, dtype=np.float64)
    k = np.asarray(kernel, dtype=np.float64)
    h, w = img.shape
    out = np.zeros_like(img)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    acc += k[dy + 1, dx + 1] * img[yy, xx]
            out[y, x] = acc
    return out


def explicit_gaussian_kernel2d(sigma):
    """Normalized 2D Gaussian built directly from the formula, radius ceil(3*sigma)."""
    radius = math.ceil(3.0 * sigma)
    size = 2 * radius + 1
    k = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            d2 = (i - radius) ** 2 + (j - radius) ** 2
            k[i, j] = math.exp(-d2 / (2.0 * sigma * sigma))
    return k / k.sum()


def naive_threshold_mask(img, frac):
    """Per-pixel comparison against frac * max, no component filtering."""
    img = np.asarray(img, dtype=np.float64)
    peak = img.max()
    out = np.zeros(img.shape, dtype=bool)
    for y in range(img.shape[0]):
        for x in range(img.shape[1]):
            out[y, x] = img[y, x] >= frac * peak
    return out


def largest_component_4(mask):
    """Flood-fill (BFS) labeling with 4-connectivity; keep the biggest region."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    seen = np.zeros_like(mask)
    best = None
    for y0 in range(h):
        for x0 in range(w):
            if not mask[y0, x0] or seen[y0, x0]:
                continue
            queue = [(y0, x0)]
            seen[y0, x0] = True
            comp = []
            while queue:
                y, x = queue.pop()
                comp.append((y, x))
                for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w and mask[yy, xx] and not seen[yy, xx]:
                        seen[yy, xx] = True
                        queue.append((yy, xx))
            if best is None or len(comp) > len(best):
                best = comp
    out = np.zeros_like(mask)
    if best:
        for y, x in best:
            out[y, x] = True
    return out


def masked_profile_mean(resp, mask, coord_of, nbins, min_count):
    """Directly averaged profile with the max-fallback rule."""
    resp = np.asarray(resp, dtype=np.float64)
    fallback = resp.max()
    sums = [0.0] * nbins
    counts = [0] * nbins
    for y in range(resp.shape[0]):
        for x in range(resp.shape[1]):
            if mask[y, x]:
                c = coord_of(x, y)
                sums[c] += resp[y, x]
                counts[c] += 1
    return [sums[c] / counts[c] if counts[c] >= min_count else fallback for c in range(nbins)]


def plateau_extrema(row):
    """Exhaustive plateau scan: leftmost mark per flanked plateau, no endpoints."""
    row = [float(v) for v in row]
    w = len(row)
    maxima, minima = [], []
    i = 0
    while i < w:
        j = i
        while j + 1 < w and row[j + 1] == row[i]:
            j += 1
        if i > 0 and j < w - 1:
            if row[i - 1] < row[i] and row[j + 1] < row[i]:
                maxima.append(i)
            if row[i - 1] > row[i] and row[j + 1] > row[i]:
                minima.append(i)
        i = j + 1
    return maxima, minima


def brute_persistence(row, x_p, kind="min"):
    """Quadratic bound-pair scan for area persistence.

    Tests every candidate (l, r) pair: a valid left bound is strictly lower
    with no strictly-lower pixel between it and x_p; a valid right bound is
    lower-or-equal with no lower-or-equal pixel in between. Returns
    (area_left, area_right, value, left_bound, right_bound).
    """
    vals = [float(v) for v in row]
    if kind == "max":
        vals = [-v for v in vals]
    w = len(vals)
    v = vals[x_p]
    left_candidates = [
        l
        for l in range(x_p)
        if vals[l] < v and all(vals[m] >= v for m in range(l + 1, x_p))
    ]
    right_candidates = [
        r
        for r in range(x_p + 1, w)
        if vals[r] <= v and all(vals[m] > v for m in range(x_p + 1, r))
    ]
    x_l = max(left_candidates) if left_candidates else None
    x_r = min(right_candidates) if right_candidates else None
    lo = 0 if x_l is None else x_l
    hi = w - 1 if x_r is None else x_r
    a_left = sum(max(0.0, vals[m] - v) for m in range(lo, x_p + 1))
    a_right = sum(max(0.0, vals[m] - v) for m in range(x_p, hi + 1))
    if x_l is None:
        a_left = math.inf
    if x_r is None:
        a_right = math.inf
    return a_left, a_right, min(a_left, a_right), x_l, x_r


def exhaustive_edit_cost(truth, detected, add_cost=200.0, remove_cost=200.0):
    """Minimum cost over every monotone partial matching, enumerated outright."""
    truth = [float(v) for v in truth]
    detected = [float(v) for v in detected]
    la, lb = len(truth), len(detected)
    best = math.inf
    for k in range(min(la, lb) + 1):
        for ti in combinations(range(la), k):
            for di in combinations(range(lb), k):
                cost = add_cost * (la - k) + remove_cost * (lb - k)
                cost += sum(abs(truth[a] - detected[b]) for a, b in zip(ti, di))
                best = min(best, cost)
    return best


def bilinear_at(img, x, y):
    """Scalar bilinear interpolation, four-point formula with plain arithmetic."""
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    x0 = min(max(int(math.floor(x)), 0), w - 2)
    y0 = min(max(int(math.floor(y)), 0), h - 2)
    fx, fy = x - x0, y - y0
    return (
        img[y0, x0] * (1 - fx) * (1 - fy)
        + img[y0, x0 + 1] * fx * (1 - fy)
        + img[y0 + 1, x0] * (1 - fx) * fy
        + img[y0 + 1, x0 + 1] * fx * fy
    )
