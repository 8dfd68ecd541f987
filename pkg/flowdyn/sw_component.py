import math
from typing import Tuple

import numpy as np

from .angles import wrap_angle
from .exceptions import NumericalDegeneracyError, ValueError

__all__ = ["SwComponent", "regularize_covariance"]


def regularize_covariance(
    sigma: np.ndarray, cov_floor: float, cs_epsilon: float
) -> Tuple[np.ndarray, bool]:
    """Clamp a 2x2 covariance so it stays positive-definite on the cylinder.

    Diagonal entries are raised to at least ``cov_floor`` and the off-diagonal
    entry is bounded by ``(1 - cs_epsilon) * sqrt(s_tt * s_rr)``.

    :param sigma: 2x2 covariance, (theta, rho) order
    :param cov_floor: variance floor applied to both diagonal entries
    :param cs_epsilon: slack of the Cauchy-Schwarz off-diagonal bound
    :return: the regularized (symmetric) matrix and whether anything was clamped
    """
    s_tt = float(sigma[0, 0])
    s_rr = float(sigma[1, 1])
    s_tr = 0.5 * (float(sigma[0, 1]) + float(sigma[1, 0]))
    clamped = False
    if s_tt < cov_floor:
        s_tt, clamped = cov_floor, True
    if s_rr < cov_floor:
        s_rr, clamped = cov_floor, True
    bound = (1.0 - cs_epsilon) * math.sqrt(s_tt * s_rr)
    if abs(s_tr) > bound:
        s_tr, clamped = math.copysign(bound, s_tr), True
    return np.array([[s_tt, s_tr], [s_tr, s_rr]]), clamped


class SwComponent:
    """One semi-wrapped Gaussian component of a :class:`SwGmm <flowdyn.sw_gmm.SwGmm>`.

    The inverse covariance and the log normalizing constant are computed once
    here and reused by every density evaluation.

    :param weight: mixing weight in ``(0, 1]``
    :param mu_theta: mean heading in radians, wrapped into ``[-pi, pi)``
    :param mu_rho: mean speed in m/s
    :param sigma: 2x2 symmetric positive-definite covariance over (theta, rho)
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the weight or the matrix shape is invalid.
        | :exc:`NumericalDegeneracyError <flowdyn.exceptions.NumericalDegeneracyError>`:
            if ``sigma`` is not positive-definite.
    """

    def __init__(
        self, weight: float, mu_theta: float, mu_rho: float, sigma: np.ndarray
    ) -> None:
        weight = float(weight)
        if not 0.0 < weight <= 1.0 + 1e-12:
            raise ValueError("weight must be in (0, 1], got {}.".format(weight))
        sigma = np.array(sigma, dtype=float)
        if sigma.shape != (2, 2):
            raise ValueError("sigma must be a 2x2 matrix, got shape {}.".format(sigma.shape))
        if not np.all(np.isfinite(sigma)):
            raise NumericalDegeneracyError("sigma contains non-finite entries.")
        if abs(sigma[0, 1] - sigma[1, 0]) > 1e-12 * max(1.0, abs(sigma[0, 1])):
            raise ValueError("sigma must be symmetric.")
        try:
            np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:
            raise NumericalDegeneracyError(
                "sigma is not positive-definite: {}".format(sigma.tolist())
            )
        self.weight: float = min(weight, 1.0)
        self.mu_theta: float = wrap_angle(float(mu_theta))
        self.mu_rho: float = float(mu_rho)
        self.sigma: np.ndarray = sigma
        self.sigma_inv: np.ndarray = np.linalg.inv(sigma)
        # log of 1 / (2 pi sqrt|sigma|)
        self.log_norm: float = -math.log(2.0 * math.pi) - 0.5 * math.log(
            float(np.linalg.det(sigma))
        )

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.mu_theta, self.mu_rho])

    def with_weight(self, weight: float) -> "SwComponent":
        return SwComponent(weight, self.mu_theta, self.mu_rho, self.sigma)

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "mu_theta": self.mu_theta,
            "mu_rho": self.mu_rho,
            "sigma": self.sigma.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SwComponent":
        return cls(data["weight"], data["mu_theta"], data["mu_rho"], data["sigma"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.weight == other.weight
            and self.mu_theta == other.mu_theta
            and self.mu_rho == other.mu_rho
            and np.array_equal(self.sigma, other.sigma)
        )

    def __str__(self):
        return "<SwComponent [weight={weight}, mu_theta={mu_theta}, mu_rho={mu_rho}, sigma={sigma}]>".format(
            weight=self.weight,
            mu_theta=self.mu_theta,
            mu_rho=self.mu_rho,
            sigma=self.sigma.tolist(),
        )
