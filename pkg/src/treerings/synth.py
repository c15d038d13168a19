"""Synthetic tree-disk generator: the ground-truth oracle for end-to-end tests.

Disks are radial intensity fields: a flat base inside the disk edge, a
Gaussian bump (ridge) at every ring radius, optionally a crack wedge cut to
background level and seeded uniform noise. The true center and ring radii are
returned alongside, so detection output can be scored against exact truth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidDiskSpec


@dataclass(frozen=True)
class DiskSpec:
    """Parameters of one synthetic disk.

    ``ring_amplitude`` is the bump height relative to ``base_intensity``;
    ``noise_amplitude`` is relative to the noiseless image maximum. ``crack``
    is an optional (angle_radians, width_px) radial wedge. ``valleys`` flips
    bumps downward for species whose rings are intensity minima.
    """

    width: int = 400
    height: int = 400
    center: tuple[float, float] = (200.0, 200.0)
    radii: tuple[float, ...] = ()
    ring_width: float = 2.0
    ring_amplitude: float = 0.5
    base_intensity: float = 100.0
    background_intensity: float = 0.0
    crack: tuple[float, float] | None = None
    noise_amplitude: float = 0.0
    seed: int = 0
    margin: float = 10.0
    edge_width: float = 3.0
    valleys: bool = False

    def inscribed_radius(self) -> float:
        cx, cy = self.center
        return min(cx, cy, (self.width - 1) - cx, (self.height - 1) - cy)

    def peak_intensity(self) -> float:
        """Maximum of the noiseless image."""
        if self.valleys or not self.radii:
            return self.base_intensity
        return self.base_intensity * (1.0 + self.ring_amplitude)

    def validate(self) -> None:
        if self.width < 8 or self.height < 8:
            raise InvalidDiskSpec("disk image must be at least 8x8")
        cx, cy = self.center
        if not (0 <= cx <= self.width - 1 and 0 <= cy <= self.height - 1):
            raise InvalidDiskSpec(f"center ({cx}, {cy}) outside the image")
        radii = tuple(self.radii)
        if any(r <= 0 for r in radii):
            raise InvalidDiskSpec("ring radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise InvalidDiskSpec("ring radii must be strictly increasing")
        if radii and radii[-1] >= self.inscribed_radius():
            raise InvalidDiskSpec(
                f"largest radius {radii[-1]} must stay inside the inscribed "
                f"radius {self.inscribed_radius():.1f}"
            )
        if not 0 < self.ring_amplitude <= 1:
            raise InvalidDiskSpec("ring_amplitude must be in (0, 1]")
        if self.ring_width <= 0:
            raise InvalidDiskSpec("ring_width must be positive")
        if self.base_intensity <= self.background_intensity:
            raise InvalidDiskSpec("base_intensity must exceed background_intensity")
        if self.background_intensity < 0:
            raise InvalidDiskSpec("background_intensity must be >= 0")
        if self.noise_amplitude < 0:
            raise InvalidDiskSpec("noise_amplitude must be >= 0")
        if self.edge_width < 0:
            raise InvalidDiskSpec("edge_width must be >= 0")
        if self.crack is not None and self.crack[1] <= 0:
            raise InvalidDiskSpec("crack width must be positive")


@dataclass(frozen=True)
class DiskTruth:
    """Ground truth of one generated slice."""

    center: tuple[float, float]
    radii: tuple[float, ...]

    def to_json(self) -> dict:
        return {"center": list(self.center), "radii": list(self.radii)}


def radial_intensity(spec: DiskSpec, rho):
    """Noiseless intensity at distance ``rho`` from the center (vectorized).

    The disk edge tapers smoothly to the background over ``edge_width`` px; a
    hard cliff would alias into single-pixel staircase edges that no real scan
    shows.
    """
    rho = np.asarray(rho, dtype=np.float64)
    outer = spec.radii[-1] + spec.margin if spec.radii else spec.inscribed_radius()
    outer = min(outer, spec.inscribed_radius())
    bumps = np.zeros_like(rho)
    height = spec.ring_amplitude * spec.base_intensity
    for r in spec.radii:
        bumps += height * np.exp(-((rho - r) ** 2) / (2.0 * spec.ring_width**2))
    inside = spec.base_intensity - bumps if spec.valleys else spec.base_intensity + bumps
    if spec.edge_width > 0:
        t = np.clip((outer - rho) / spec.edge_width, 0.0, 1.0)
        fade = t * t * (3.0 - 2.0 * t)  # smoothstep
        return spec.background_intensity + (inside - spec.background_intensity) * fade
    return np.where(rho <= outer, inside, spec.background_intensity)


def generate_disk(spec: DiskSpec) -> tuple[np.ndarray, DiskTruth]:
    """Render one disk; deterministic for a given spec (including seed)."""
    spec.validate()
    cx, cy = spec.center
    yy, xx = np.indices((spec.height, spec.width), dtype=np.float64)
    rho = np.hypot(xx - cx, yy - cy)
    img = radial_intensity(spec, rho)
    if spec.crack is not None:
        angle, width = spec.crack
        ux, uy = np.cos(angle), np.sin(angle)
        dx, dy = xx - cx, yy - cy
        along = dx * ux + dy * uy
        perp = np.abs(dx * uy - dy * ux)
        img = np.where((along >= 0) & (perp <= width / 2.0), spec.background_intensity, img)
    if spec.noise_amplitude > 0:
        rng = np.random.default_rng(spec.seed)
        img = img + rng.uniform(-1.0, 1.0, img.shape) * spec.noise_amplitude * spec.peak_intensity()
        np.clip(img, 0.0, None, out=img)
    return img, DiskTruth(center=spec.center, radii=tuple(spec.radii))


def generate_stack(
    spec: DiskSpec, slices: int, center_drift: tuple[float, float] = (0.0, 0.0)
) -> tuple[np.ndarray, list[DiskTruth]]:
    """Render a stack whose center moves by ``center_drift`` per slice.

    Slice z gets a derived seed so noise differs between slices while staying
    reproducible.
    """
    if slices < 1:
        raise InvalidDiskSpec("need at least one slice")
    dx, dy = center_drift
    cx, cy = spec.center
    imgs, truths = [], []
    for z in range(slices):
        spec_z = replace(spec, center=(cx + z * dx, cy + z * dy), seed=spec.seed + z)
        img, truth = generate_disk(spec_z)
        imgs.append(img)
        truths.append(truth)
    return np.stack(imgs), truths


def truth_to_json(truths, spec: DiskSpec | None = None) -> str:
    """Serialize per-slice truths (center per slice, shared radii) as JSON."""
    if isinstance(truths, DiskTruth):
        truths = [truths]
    payload = {
        "centers": [list(t.center) for t in truths],
        "radii": list(truths[0].radii),
    }
    if spec is not None:
        payload["seed"] = spec.seed
        payload["noise_amplitude"] = spec.noise_amplitude
    return json.dumps(payload, sort_keys=True) + "\n"


def radii_to_text(radii) -> str:
    """One radius per line, sorted ascending: the scorer's truth format."""
    vals = sorted(float(r) for r in radii)
    return "".join(f"{v:g}\n" for v in vals)
