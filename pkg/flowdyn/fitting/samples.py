from typing import Sequence, Tuple

import numpy as np

from ..angles import wrap_angles
from ..cylindrical_sample import CylindricalSample

__all__ = ["as_arrays", "circular_linear_sq_dist"]


def as_arrays(samples: Sequence[CylindricalSample]) -> Tuple[np.ndarray, np.ndarray]:
    """Split samples into heading and speed arrays."""
    theta = np.fromiter((s.theta for s in samples), dtype=float, count=len(samples))
    rho = np.fromiter((s.rho for s in samples), dtype=float, count=len(samples))
    return theta, rho


def circular_linear_sq_dist(
    theta: np.ndarray, rho: np.ndarray, c_theta: float, c_rho: float
) -> np.ndarray:
    """Squared circular-linear distance of every sample to one point.

    ``d^2 = angular_diff(theta, c_theta)^2 + (rho - c_rho)^2``
    """
    dt = wrap_angles(theta - c_theta)
    dr = rho - c_rho
    return dt * dt + dr * dr
