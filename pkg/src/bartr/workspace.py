"""Reaching-workspace geometry: the annular half-cylinder in front of the
participant, the 100-target grid, and volume-uniform sampling.

Coordinates are centimeters in a right-handed frame anchored at the center
of the home position: x lateral (positive toward the participant's right),
y anterior (positive away from the chest), z height above the table.
Azimuth 0 deg points to the participant's left, 180 deg to their right, so
a target at azimuth a and radius r sits at (-r cos a, r sin a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Absolute float guard for membership tests: grid points computed from
# exact radii land within one or two ulps of the boundary.
_EDGE_TOL = 1e-9

GRID_RADIAL_STEPS = 5
GRID_AZIMUTH_STEPS = 5
GRID_HEIGHT_STEPS = 4


@dataclass(frozen=True)
class Point3:
    """A location in the reaching workspace (cm)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"Point3.{name} must be finite")

    def rounded(self) -> "Point3":
        """Coordinates at the serialized precision (2 decimal places)."""
        return Point3(round(self.x, 2), round(self.y, 2), round(self.z, 2))

    def to_json(self) -> dict:
        return {"x": round(self.x, 2), "y": round(self.y, 2), "z": round(self.z, 2)}

    @classmethod
    def from_json(cls, obj: dict) -> "Point3":
        try:
            return cls(float(obj["x"]), float(obj["y"]), float(obj["z"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed point: {obj!r}") from exc

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class WorkspaceSpec:
    """Bounds of the annular half-cylinder reaching region.

    Defaults are the test protocol's values: 10-30 cm radial extent,
    0-40 cm height, 180 deg azimuth span in front of the participant.
    """

    r_min: float = 10.0
    r_max: float = 30.0
    z_min: float = 0.0
    z_max: float = 40.0

    def validate(self) -> "WorkspaceSpec":
        if not all(map(math.isfinite, (self.r_min, self.r_max, self.z_min, self.z_max))):
            raise ValidationError("workspace bounds must be finite")
        if self.r_min <= 0:
            raise ValidationError(f"r_min must be > 0 (got {self.r_min})")
        if self.r_min >= self.r_max:
            raise ValidationError(
                f"r_min must be < r_max (got r_min={self.r_min}, r_max={self.r_max})"
            )
        if self.z_min >= self.z_max:
            raise ValidationError(
                f"z_min must be < z_max (got z_min={self.z_min}, z_max={self.z_max})"
            )
        return self

    def to_json(self) -> dict:
        return {
            "r_min": self.r_min,
            "r_max": self.r_max,
            "z_min": self.z_min,
            "z_max": self.z_max,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WorkspaceSpec":
        spec = cls(
            float(obj.get("r_min", 10.0)),
            float(obj.get("r_max", 30.0)),
            float(obj.get("z_min", 0.0)),
            float(obj.get("z_max", 40.0)),
        )
        return spec.validate()


def points_to_array(points) -> np.ndarray:
    """Stack Point3s (or coordinate triples) into an (n, 3) float array."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(1, 3)
        return arr
    return np.array(
        [(p.x, p.y, p.z) if isinstance(p, Point3) else tuple(p) for p in points],
        dtype=float,
    ).reshape(-1, 3)


def azimuth_radius(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Azimuth (deg, 0 = left) and radius of (n, 2) or (n, 3) coordinates."""
    x, y = xy[..., 0], xy[..., 1]
    r = np.hypot(x, y)
    az = np.degrees(np.arctan2(y, -x))
    return az, r


def point_at(radius: float, azimuth_deg: float, z: float) -> Point3:
    a = math.radians(azimuth_deg)
    return Point3(-radius * math.cos(a), radius * math.sin(a), z)


def generate_grid(spec: WorkspaceSpec = WorkspaceSpec()) -> list[Point3]:
    """The 100 evenly spaced targets: 5 radii x 5 azimuths x 4 heights.

    Ordering is radius-major, then azimuth (left to right), then height,
    and is stable across runs and platforms.
    """
    spec.validate()
    radii = np.linspace(spec.r_min, spec.r_max, GRID_RADIAL_STEPS)
    azimuths = np.linspace(0.0, 180.0, GRID_AZIMUTH_STEPS)
    heights = np.linspace(spec.z_min, spec.z_max, GRID_HEIGHT_STEPS)
    return [
        point_at(r, a, z)
        for r in radii
        for a in azimuths
        for z in heights
    ]


def contains(spec: WorkspaceSpec, p) -> bool | np.ndarray:
    """Whether a point (or (n, 3) array) lies in the workspace region."""
    arr = points_to_array([p] if isinstance(p, Point3) else p)
    r = np.hypot(arr[:, 0], arr[:, 1])
    ok = (
        (r >= spec.r_min - _EDGE_TOL)
        & (r <= spec.r_max + _EDGE_TOL)
        & (arr[:, 1] >= -_EDGE_TOL)
        & (arr[:, 2] >= spec.z_min - _EDGE_TOL)
        & (arr[:, 2] <= spec.z_max + _EDGE_TOL)
    )
    return bool(ok[0]) if isinstance(p, Point3) else ok


def sample_uniform_array(
    spec: WorkspaceSpec, n: int, seed: int
) -> np.ndarray:
    """n volume-uniform samples as an (n, 3) array, deterministic per seed.

    Radius is drawn with density proportional to r so the samples are
    uniform by volume over the annular sector; azimuth and height are
    uniform on their ranges.
    """
    spec.validate()
    if n < 1:
        raise ValidationError(f"sample count must be >= 1 (got {n})")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    r = np.sqrt(spec.r_min**2 + u * (spec.r_max**2 - spec.r_min**2))
    az = rng.random(n) * math.pi
    z = spec.z_min + rng.random(n) * (spec.z_max - spec.z_min)
    return np.column_stack((-r * np.cos(az), r * np.sin(az), z))


def sample_uniform(spec: WorkspaceSpec, n: int, seed: int) -> list[Point3]:
    """n i.i.d. volume-uniform Point3 samples (see sample_uniform_array)."""
    arr = sample_uniform_array(spec, n, seed)
    return [Point3(*row) for row in arr]
