"""Link geometry between a transmitter x and a receiver y."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray


@dataclass(frozen=True)
class LinkGeometry:
    """Horizontal distance and endpoint heights of one link (or a batch).

    For links that terminate at a BS, ``h_y`` is the BS height.
    """

    r_2d: float | NDArray[np.float64]
    h_x: float
    h_y: float

    def __post_init__(self) -> None:
        r = np.asarray(self.r_2d, dtype=float)
        if np.any(r < 0) or np.any(np.isnan(r)):
            raise ValueError("r_2d must be non-negative")
        if self.h_x < 0 or self.h_y < 0:
            raise ValueError(f"heights must be non-negative, got {self.h_x}, {self.h_y}")

    @classmethod
    def batch(cls, r_2d: ArrayLike, h_x: float, h_y: float) -> "LinkGeometry":
        return cls(np.asarray(r_2d, dtype=float), h_x, h_y)

    @property
    def height_difference(self) -> float:
        return self.h_x - self.h_y

    @property
    def d_3d(self) -> float | NDArray[np.float64]:
        return np.hypot(np.asarray(self.r_2d, dtype=float), self.h_x - self.h_y)[()]


def zenith_angle_at_bs(geometry: LinkGeometry) -> float | NDArray[np.float64]:
    """Zenith angle of the far end seen from the BS at ``h_y``.

    Measured from the BS's upward vertical: a node above the BS gives
    θ < π/2, a ground node below it θ > π/2.

    Raises:
        ValueError: If the two nodes are co-located (d_3d = 0)
    """
    d = np.asarray(geometry.d_3d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("zenith angle undefined for co-located nodes (d_3d = 0)")
    cos_theta = np.clip(geometry.height_difference / d, -1.0, 1.0)
    return np.arccos(cos_theta)[()]
