import math
from typing import Union

import numpy as np
from scipy.stats import norm

from .exceptions import ValueError

__all__ = ["wrap_angle", "angular_diff", "wrap_angles", "direction_bin", "TWO_PI", "wrapped_normal_bin_masses"]

TWO_PI: float = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle into ``[-pi, pi)``. ``pi`` maps to ``-pi``.

    :param a: angle in radians
    :return: the equivalent angle in ``[-pi, pi)``
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``a`` is not finite.
    """
    if not math.isfinite(a):
        raise ValueError("Angle must be finite, got {}.".format(a))
    r = math.fmod(a + math.pi, TWO_PI)
    if r < 0:
        r += TWO_PI
    r -= math.pi
    # fmod of a value a hair below a multiple of 2*pi can round up to pi
    if r >= math.pi:
        r -= TWO_PI
    return r


def wrap_angles(a: Union[np.ndarray, float]) -> np.ndarray:
    """Vectorized :func:`wrap_angle`. Non-finite entries are rejected.

    :param a: array of angles in radians
    :return: array of angles in ``[-pi, pi)``
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("Angles must be finite.")
    r = np.mod(a + np.pi, TWO_PI) - np.pi
    return np.where(r >= np.pi, r - TWO_PI, r)


def angular_diff(a: float, b: float) -> float:
    """Signed shortest angular difference ``a - b`` in ``[-pi, pi)``.

    :param a: angle in radians
    :param b: angle in radians
    :return: ``wrap_angle(a - b)``
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("Angles must be finite, got {} and {}.".format(a, b))
    return wrap_angle(a - b)


def direction_bin(theta: float, bins: int) -> int:
    """Index of the angular bin holding ``theta``.

    Bins partition ``[-pi, pi)`` into ``bins`` equal intervals, bin 0 starting at ``-pi``.

    :param theta: angle in radians, wrapped before binning
    :param bins: number of bins
    :return: bin index in ``0..bins-1``
    """
    if bins < 1:
        raise ValueError("bins must be >= 1, got {}.".format(bins))
    theta = wrap_angle(theta)
    index = int(math.floor((theta + math.pi) * bins / TWO_PI))
    return min(max(index, 0), bins - 1)


def wrapped_normal_bin_masses(mu: float, sd: float, bins: int, winding: int = 1) -> np.ndarray:
    """Mass of every angular bin under a normal wrapped by ``winding`` replicas per side.

    A zero ``sd`` puts all mass in the bin of ``mu``.

    :param mu: mean angle in radians
    :param sd: standard deviation in radians, >= 0
    :param bins: number of equal bins over ``[-pi, pi)``
    :param winding: replicas summed on each side
    :return: array of ``bins`` masses
    """
    if bins < 1:
        raise ValueError("bins must be >= 1, got {}.".format(bins))
    if sd == 0:
        masses = np.zeros(bins)
        masses[direction_bin(mu, bins)] = 1.0
        return masses
    # bins as offsets from mu; the replicas cover (2W+1) turns centred on mu
    lower = wrap_angles(-math.pi + TWO_PI * np.arange(bins) / bins - mu)
    upper = lower + TWO_PI / bins
    half = (2 * winding + 1) * math.pi
    shifts = TWO_PI * np.arange(-winding - 1, winding + 2)
    a = np.clip(lower[:, None] + shifts[None, :], -half, half)
    b = np.clip(upper[:, None] + shifts[None, :], -half, half)
    return (norm.cdf(b, scale=sd) - norm.cdf(a, scale=sd)).sum(axis=1)
