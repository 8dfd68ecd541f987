from typing import Sequence

import numpy as np

from .samples import as_arrays, circular_linear_sq_dist
from ..cylindrical_sample import CylindricalSample
from ..exceptions import ValueError

__all__ = ["kmeanspp_init", "kmeanspp_centers", "assign_labels"]


def kmeanspp_centers(
    theta: np.ndarray, rho: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Pick ``k`` sample indices as K-means++ seeds on the cylinder.

    The first seed is uniform over the samples, every further seed is drawn
    with probability proportional to its squared circular-linear distance to
    the nearest seed picked so far.
    """
    n = theta.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1, got {}.".format(k))
    if k > n:
        raise ValueError("k ({}) cannot exceed the sample count ({}).".format(k, n))
    centers = [int(rng.integers(n))]
    nearest = circular_linear_sq_dist(theta, rho, theta[centers[0]], rho[centers[0]])
    for _ in range(1, k):
        total = nearest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=nearest / total))
        else:
            # every sample coincides with a seed
            remaining = np.setdiff1d(np.arange(n), centers)
            idx = int(rng.choice(remaining))
        centers.append(idx)
        nearest = np.minimum(
            nearest, circular_linear_sq_dist(theta, rho, theta[idx], rho[idx])
        )
    return np.array(centers, dtype=int)


def assign_labels(
    theta: np.ndarray, rho: np.ndarray, c_theta: np.ndarray, c_rho: np.ndarray
) -> np.ndarray:
    """Label of the nearest center under the circular-linear metric, lowest index on ties."""
    d2 = np.stack(
        [circular_linear_sq_dist(theta, rho, t, r) for t, r in zip(c_theta, c_rho)],
        axis=1,
    )
    return np.argmin(d2, axis=1)


def kmeanspp_init(
    samples: Sequence[CylindricalSample], k: int, rng: np.random.Generator
) -> np.ndarray:
    """K-means++ seeding followed by nearest-center labelling.

    :param samples: the observations
    :param k: number of clusters
    :param rng: the seeded generator every draw goes through
    :return: integer labels in ``0..k-1``, one per sample
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``k`` exceeds the sample count.
    """
    theta, rho = as_arrays(samples)
    centers = kmeanspp_centers(theta, rho, k, rng)
    return assign_labels(theta, rho, theta[centers], rho[centers])
