from ..exceptions import ConfigError, ValueError

__all__ = ["FitConfig"]


class FitConfig:
    """Parameters of a mixture fit.

    :param k_max: largest component count tried by the BIC sweep
    :param winding: winding number W of the semi-wrapped density
    :param em_max_iters: EM iteration cap
    :param em_loglik_tol: EM stops once the absolute change of the total log-likelihood drops below this
    :param min_samples_per_component: a candidate K is feasible only with at least ``K`` times this many samples
    :param cov_floor: lower bound of both covariance diagonal entries
    :param cs_epsilon: slack of the Cauchy-Schwarz bound on the covariance off-diagonal
    :param rng_seed: seed of every random draw made by a fit, must be >= 0
    :param meanshift_max_iters: iteration cap of the mean-shift initializer
    :param meanshift_tol: mean-shift stops when no point moves more than this many bandwidths
    :param meanshift_min_mode_fraction: modes holding fewer than this fraction of the samples are dissolved
    :param meanshift_valley_ratio: a mode is merged into a denser one unless the kernel density between
        them dips below this fraction of its own, in ``(0, 1]``
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a parameter is out of range.
    """

    def __init__(
        self,
        k_max: int = 5,
        winding: int = 1,
        em_max_iters: int = 100,
        em_loglik_tol: float = 1e-4,
        min_samples_per_component: int = 3,
        cov_floor: float = 1e-4,
        cs_epsilon: float = 1e-3,
        rng_seed: int = 0,
        meanshift_max_iters: int = 300,
        meanshift_tol: float = 1e-4,
        meanshift_min_mode_fraction: float = 0.05,
        meanshift_valley_ratio: float = 0.5,
    ) -> None:
        if k_max < 1:
            raise ValueError("k_max must be >= 1, got {}.".format(k_max))
        if winding < 0:
            raise ValueError("winding must be >= 0, got {}.".format(winding))
        if em_max_iters < 1:
            raise ValueError("em_max_iters must be >= 1, got {}.".format(em_max_iters))
        if min_samples_per_component < 1:
            raise ValueError(
                "min_samples_per_component must be >= 1, got {}.".format(
                    min_samples_per_component
                )
            )
        for name, value in (
            ("em_loglik_tol", em_loglik_tol),
            ("cov_floor", cov_floor),
            ("cs_epsilon", cs_epsilon),
            ("meanshift_tol", meanshift_tol),
        ):
            if not value > 0:
                raise ValueError("{} must be > 0, got {}.".format(name, value))
        if cs_epsilon >= 1:
            raise ValueError("cs_epsilon must be < 1, got {}.".format(cs_epsilon))
        if not 0 <= meanshift_min_mode_fraction < 1:
            raise ValueError(
                "meanshift_min_mode_fraction must be in [0, 1), got {}.".format(
                    meanshift_min_mode_fraction
                )
            )
        if not 0 < meanshift_valley_ratio <= 1:
            raise ValueError(
                "meanshift_valley_ratio must be in (0, 1], got {}.".format(meanshift_valley_ratio)
            )
        if rng_seed < 0:
            raise ValueError("rng_seed must be >= 0, got {}.".format(rng_seed))
        self.k_max: int = int(k_max)
        self.winding: int = int(winding)
        self.em_max_iters: int = int(em_max_iters)
        self.em_loglik_tol: float = float(em_loglik_tol)
        self.min_samples_per_component: int = int(min_samples_per_component)
        self.cov_floor: float = float(cov_floor)
        self.cs_epsilon: float = float(cs_epsilon)
        self.rng_seed: int = int(rng_seed)
        self.meanshift_max_iters: int = int(meanshift_max_iters)
        self.meanshift_tol: float = float(meanshift_tol)
        self.meanshift_min_mode_fraction: float = float(meanshift_min_mode_fraction)
        self.meanshift_valley_ratio: float = float(meanshift_valley_ratio)

    def with_seed(self, rng_seed: int) -> "FitConfig":
        """A copy of this config with another seed."""
        data = self.to_dict()
        data["rng_seed"] = rng_seed
        return FitConfig(**data)

    def to_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "winding": self.winding,
            "em_max_iters": self.em_max_iters,
            "em_loglik_tol": self.em_loglik_tol,
            "min_samples_per_component": self.min_samples_per_component,
            "cov_floor": self.cov_floor,
            "cs_epsilon": self.cs_epsilon,
            "rng_seed": self.rng_seed,
            "meanshift_max_iters": self.meanshift_max_iters,
            "meanshift_tol": self.meanshift_tol,
            "meanshift_min_mode_fraction": self.meanshift_min_mode_fraction,
            "meanshift_valley_ratio": self.meanshift_valley_ratio,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FitConfig":
        """Build a config from a mapping, rejecting unknown keys.

        :raises: :exc:`ConfigError <flowdyn.exceptions.ConfigError>`: on unknown keys.
        """
        unknown = sorted(set(data) - set(cls().to_dict()))
        if unknown:
            raise ConfigError("Unknown fit config keys: {}.".format(", ".join(unknown)))
        return cls(**data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.to_dict() == other.to_dict()

    def __str__(self):
        return "<FitConfig [{}]>".format(
            ", ".join("{}={}".format(k, v) for k, v in self.to_dict().items())
        )
