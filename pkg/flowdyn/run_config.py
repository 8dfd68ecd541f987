import math
from typing import List, Optional

import toml

from .exceptions import ConfigError, ValueError
from .fitting.fit_config import FitConfig
from .reservoir_buffer import DEFAULT_CAPACITY
from .scene_graph.layered_graph import Bounds

__all__ = ["RunConfig", "load_run_config", "RUN_CONFIG_VERSION"]

RUN_CONFIG_VERSION = 1


class RunConfig:
    """Everything a reproducible run depends on besides its input files.

    The effective fit seed is ``fit_seed``; the ``rng_seed`` of ``fit`` is replaced by it.

    :param scenario: scenario TOML path or ``builtin:<name>``
    :param resolutions: hash resolutions in meters evaluated by a sweep
    :param bins: angular bins of the MPP metric and the reference
    :param histogram_bins: bins of the histogram baseline, ``bins`` if omitted
    :param reservoir_capacity: reservoir capacity M of every cell
    :param update_interval: seconds between two model updates
    :param stabilization_window: quiet seconds required before binding
    :param significance_threshold: node displacement in meters that counts as a pose update
    :param min_fit_samples: cells holding fewer entries are not fitted
    :param parallelism: worker threads for model updates and sweeps
    :param bounds: ``((x_min, y_min), (x_max, y_max))`` of the navigational grid
    :param simulation_seed: seed of the simulated training stream
    :param fit_seed: seed of every fit
    :param output_dir: where commands write their files
    :param fit: fit parameters
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a parameter is out of range.
    """

    def __init__(
        self,
        scenario: str = "builtin:multimodal",
        resolutions: List[float] = None,
        bins: int = 8,
        histogram_bins: Optional[int] = None,
        reservoir_capacity: int = DEFAULT_CAPACITY,
        update_interval: float = 10.0,
        stabilization_window: float = 10.0,
        significance_threshold: float = 0.05,
        min_fit_samples: int = 10,
        parallelism: int = 1,
        bounds: Bounds = ((0.0, 0.0), (18.0, 10.0)),
        simulation_seed: int = 0,
        fit_seed: int = 0,
        output_dir: str = ".",
        fit: FitConfig = None,
    ) -> None:
        resolutions = [0.2, 0.3, 0.5, 1.0] if resolutions is None else list(resolutions)
        if not resolutions or any(not (math.isfinite(r) and r > 0) for r in resolutions):
            raise ValueError("resolutions must be positive, got {}.".format(resolutions))
        if not 1 <= bins <= 360:
            raise ValueError("bins must be in 1..360, got {}.".format(bins))
        if histogram_bins is not None and not 1 <= histogram_bins <= 360:
            raise ValueError("histogram_bins must be in 1..360, got {}.".format(histogram_bins))
        if reservoir_capacity < 1:
            raise ValueError("reservoir_capacity must be > 0, got {}.".format(reservoir_capacity))
        for name, value in (
            ("update_interval", update_interval),
            ("stabilization_window", stabilization_window),
        ):
            if not (math.isfinite(value) and value > 0):
                raise ValueError("{} must be > 0, got {}.".format(name, value))
        if not significance_threshold >= 0:
            raise ValueError(
                "significance_threshold must be >= 0, got {}.".format(significance_threshold)
            )
        if min_fit_samples < 1:
            raise ValueError("min_fit_samples must be >= 1, got {}.".format(min_fit_samples))
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1, got {}.".format(parallelism))
        if simulation_seed < 0 or fit_seed < 0:
            raise ValueError("Seeds must be >= 0.")
        (x0, y0), (x1, y1) = bounds
        if not (x1 > x0 and y1 > y0):
            raise ValueError("Bounds {} enclose no area.".format(bounds))
        self.scenario: str = scenario
        self.resolutions: List[float] = [float(r) for r in resolutions]
        self.bins: int = int(bins)
        self.histogram_bins: int = int(histogram_bins) if histogram_bins else self.bins
        self.reservoir_capacity: int = int(reservoir_capacity)
        self.update_interval: float = float(update_interval)
        self.stabilization_window: float = float(stabilization_window)
        self.significance_threshold: float = float(significance_threshold)
        self.min_fit_samples: int = int(min_fit_samples)
        self.parallelism: int = int(parallelism)
        self.bounds: Bounds = ((float(x0), float(y0)), (float(x1), float(y1)))
        self.simulation_seed: int = int(simulation_seed)
        self.fit_seed: int = int(fit_seed)
        self.output_dir: str = output_dir
        self.fit: FitConfig = (fit or FitConfig()).with_seed(self.fit_seed)

    def with_overrides(self, **overrides) -> "RunConfig":
        """A copy with the given fields replaced; ``None`` values are ignored."""
        data = self.to_dict()
        data.pop("version")
        fit = FitConfig.from_dict(data.pop("fit"))
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "fit" in overrides and overrides["fit"] is not None:
            fit = overrides["fit"]
        data["fit"] = fit
        data["bounds"] = tuple(tuple(c) for c in data["bounds"])
        return RunConfig(**data)

    def to_dict(self) -> dict:
        return {
            "version": RUN_CONFIG_VERSION,
            "scenario": self.scenario,
            "resolutions": list(self.resolutions),
            "bins": self.bins,
            "histogram_bins": self.histogram_bins,
            "reservoir_capacity": self.reservoir_capacity,
            "update_interval": self.update_interval,
            "stabilization_window": self.stabilization_window,
            "significance_threshold": self.significance_threshold,
            "min_fit_samples": self.min_fit_samples,
            "parallelism": self.parallelism,
            "bounds": [list(self.bounds[0]), list(self.bounds[1])],
            "simulation_seed": self.simulation_seed,
            "fit_seed": self.fit_seed,
            "output_dir": self.output_dir,
            "fit": self.fit.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        """Build a config from a parsed TOML document.

        :raises: :exc:`ConfigError <flowdyn.exceptions.ConfigError>`: on unknown keys or another version.
        """
        data = dict(data)
        version = data.pop("version", RUN_CONFIG_VERSION)
        if version != RUN_CONFIG_VERSION:
            raise ConfigError(
                "Unsupported config version {}, expected {}.".format(version, RUN_CONFIG_VERSION)
            )
        unknown = sorted(set(data) - set(cls().to_dict()))
        if unknown:
            raise ConfigError("Unknown config keys: {}.".format(", ".join(unknown)))
        if "fit" in data:
            data["fit"] = FitConfig.from_dict(data["fit"])
        if "bounds" in data:
            (x0, y0), (x1, y1) = data["bounds"]
            data["bounds"] = ((x0, y0), (x1, y1))
        return cls(**data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.to_dict() == other.to_dict()

    def __str__(self):
        return "<RunConfig [scenario={scenario}, resolutions={resolutions}, bins={bins}, fit_seed={seed}]>".format(
            scenario=self.scenario,
            resolutions=self.resolutions,
            bins=self.bins,
            seed=self.fit_seed,
        )


def load_run_config(path: str) -> RunConfig:
    """Read a run configuration TOML file.

    :raises: :exc:`ConfigError <flowdyn.exceptions.ConfigError>`: on malformed TOML, unknown keys or another version.
    """
    try:
        data = toml.load(path)
    except toml.TomlDecodeError as e:
        raise ConfigError("Invalid config file {}: {}".format(path, e))
    return RunConfig.from_dict(data)
