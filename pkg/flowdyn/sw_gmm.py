import math
from typing import List, Union

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from .angles import TWO_PI, wrap_angles, wrapped_normal_bin_masses
from .cylindrical_sample import CylindricalSample
from .exceptions import ValueError
from .sw_component import SwComponent

__all__ = [
    "SwGmm",
    "sw_gaussian_density",
    "mixture_density",
    "marginal_direction_density",
    "direction_bin_mass",
    "replica_log_pdf",
    "replica_offsets",
]

WEIGHT_TOLERANCE = 1e-9


def replica_offsets(theta: np.ndarray, mu_theta: float, winding: int) -> np.ndarray:
    """Heading offsets from ``mu_theta`` of every winding replica, shape ``(n, 2W+1)``."""
    shifts = TWO_PI * np.arange(-winding, winding + 1)
    return wrap_angles(theta - mu_theta)[:, None] + shifts[None, :]


def replica_log_pdf(
    theta: np.ndarray, rho: np.ndarray, comp: SwComponent, winding: int
) -> np.ndarray:
    """Log bivariate Gaussian density of every winding replica of every sample.

    :param theta: headings, shape ``(n,)``
    :param rho: speeds, shape ``(n,)``
    :param comp: the component
    :param winding: winding number W
    :return: array of shape ``(n, 2W+1)``; column ``w + W`` holds the replica
        ``wrap(theta - mu_theta) + 2 pi w``, so the window is centred on the mean
    """
    d_t = replica_offsets(theta, comp.mu_theta, winding)
    d_r = (rho - comp.mu_rho)[:, None]
    inv = comp.sigma_inv
    quad = inv[0, 0] * d_t * d_t + 2.0 * inv[0, 1] * d_t * d_r + inv[1, 1] * d_r * d_r
    return comp.log_norm - 0.5 * quad


class SwGmm:
    """A semi-wrapped Gaussian mixture over (heading, speed).

    :param components: mixture components, weights summing to one
    :param winding: number of 2 pi replicas summed on each side
    :param sample_count_at_fit: number of samples the model was fitted on
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if there are no components,
        the weights do not sum to one or ``winding`` is negative.
    """

    def __init__(
        self, components: List[SwComponent], winding: int = 1, sample_count_at_fit: int = 0
    ) -> None:
        if not components:
            raise ValueError("A mixture needs at least one component.")
        if winding < 0:
            raise ValueError("winding must be >= 0, got {}.".format(winding))
        total = math.fsum(c.weight for c in components)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError("Component weights must sum to 1, got {}.".format(total))
        self.components: List[SwComponent] = list(components)
        self.winding: int = int(winding)
        self.sample_count_at_fit: int = int(sample_count_at_fit)

    @property
    def k(self) -> int:
        return len(self.components)

    def log_density(self, theta: np.ndarray, rho: np.ndarray) -> np.ndarray:
        """Vectorized log of :func:`mixture_density`."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        terms = [
            math.log(c.weight) + replica_log_pdf(theta, rho, c, self.winding)
            for c in self.components
        ]
        return logsumexp(np.concatenate(terms, axis=1), axis=1)

    def density(self, theta: np.ndarray, rho: np.ndarray) -> np.ndarray:
        return np.exp(self.log_density(theta, rho))

    def log_likelihood(self, theta: np.ndarray, rho: np.ndarray) -> float:
        """Total semi-wrapped log-likelihood of the given samples."""
        return float(np.sum(self.log_density(theta, rho)))

    def marginal_direction_density(self, theta: Union[float, np.ndarray]) -> np.ndarray:
        """Vectorized :func:`marginal_direction_density`."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.zeros_like(theta)
        for c in self.components:
            sd = math.sqrt(c.sigma[0, 0])
            out += c.weight * norm.pdf(
                replica_offsets(theta, c.mu_theta, self.winding), scale=sd
            ).sum(axis=1)
        return out

    def bin_masses(self, bins: int) -> np.ndarray:
        """Probability mass of every angular bin, see :func:`direction_bin_mass`."""
        if bins < 1:
            raise ValueError("bins must be >= 1, got {}.".format(bins))
        masses = np.zeros(bins)
        for c in self.components:
            masses += c.weight * wrapped_normal_bin_masses(
                c.mu_theta, math.sqrt(c.sigma[0, 0]), bins, self.winding
            )
        return masses

    def mean_speed(self) -> float:
        return math.fsum(c.weight * c.mu_rho for c in self.components)

    def sample(self, n: int, rng: np.random.Generator) -> List[CylindricalSample]:
        """Draw ``n`` samples; headings are wrapped and speeds clipped at zero."""
        weights = np.array([c.weight for c in self.components])
        labels = rng.choice(len(self.components), size=n, p=weights / weights.sum())
        out = []
        for label in labels:
            c = self.components[label]
            t, r = rng.multivariate_normal(c.mean, c.sigma)
            out.append(CylindricalSample(t, max(r, 0.0)))
        return out

    def to_dict(self) -> dict:
        return {
            "winding": self.winding,
            "sample_count_at_fit": self.sample_count_at_fit,
            "components": [c.to_dict() for c in self.components],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SwGmm":
        return cls(
            [SwComponent.from_dict(c) for c in data["components"]],
            data["winding"],
            data.get("sample_count_at_fit", 0),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.components == other.components
            and self.winding == other.winding
            and self.sample_count_at_fit == other.sample_count_at_fit
        )

    def __str__(self):
        return "<SwGmm [k={k}, winding={winding}, sample_count_at_fit={n}]>".format(
            k=self.k, winding=self.winding, n=self.sample_count_at_fit
        )


def sw_gaussian_density(z: CylindricalSample, comp: SwComponent, winding: int) -> float:
    """Semi-wrapped Gaussian density of one component at ``z``.

    Sums the bivariate Gaussian over the replicas ``z + (2 pi w, 0)`` for
    ``w = -W..W``.

    :param z: the observation
    :param comp: the component
    :param winding: winding number W
    :return: density in 1/(rad m/s)
    """
    if winding < 0:
        raise ValueError("winding must be >= 0, got {}.".format(winding))
    log_pdf = replica_log_pdf(np.array([z.theta]), np.array([z.rho]), comp, winding)
    return float(np.exp(log_pdf).sum())


def mixture_density(z: CylindricalSample, model: SwGmm) -> float:
    """Weighted sum of the component densities at ``z``."""
    return float(model.density(z.theta, z.rho)[0])


def marginal_direction_density(theta: float, model: SwGmm) -> float:
    """Heading density with speed integrated out, in 1/rad.

    Marginalizing a bivariate Gaussian over its linear dimension leaves the
    univariate Gaussian ``N(theta | mu_theta, s_tt)``, summed over replicas.
    """
    theta = float(wrap_angles(theta))
    return float(model.marginal_direction_density(theta)[0])


def direction_bin_mass(bin_index: int, bins: int, model: SwGmm) -> float:
    """Probability mass of one angular bin, from the Gaussian CDF (no quadrature).

    Bins partition ``[-pi, pi)`` into ``bins`` equal intervals, bin 0 starting at ``-pi``.

    :param bin_index: bin in ``0..bins-1``
    :param bins: bin count B
    :param model: the mixture
    :return: probability in ``[0, 1]``
    """
    if not 0 <= bin_index < bins:
        raise ValueError("bin_index must be in [0, {}), got {}.".format(bins, bin_index))
    return float(min(max(model.bin_masses(bins)[bin_index], 0.0), 1.0))
