import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import toml

from ..exceptions import ConfigError, ValueError
from ..scene_graph.layered_graph import Bounds

__all__ = ["Corridor", "FlowScenario", "load_scenario", "builtin_scenario", "BUILTIN_SCENARIOS"]

SCENARIO_VERSION = 1


class Corridor:
    """A directed polyline walked by a share of the agents.

    :param waypoints: at least two ``(x, y)`` points in meters, walked in order
    :param lateral_sigma: standard deviation of the lateral offset in meters
    :param speed_mean: mean walking speed in m/s
    :param speed_sigma: standard deviation of the speed in m/s
    :param heading_noise: per-detection heading noise in radians, the scenario's if omitted
    :param name: label used in logs
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a parameter is out of range.
    """

    def __init__(
        self,
        waypoints: Sequence[Tuple[float, float]],
        lateral_sigma: float = 0.3,
        speed_mean: float = 1.2,
        speed_sigma: float = 0.1,
        heading_noise: Optional[float] = None,
        name: str = "",
    ) -> None:
        points = np.asarray(waypoints, dtype=float)
        if points.ndim != 2 or points.shape[0] < 2 or points.shape[1] != 2:
            raise ValueError("A corridor needs at least two (x, y) waypoints.")
        if not np.all(np.isfinite(points)):
            raise ValueError("Corridor waypoints must be finite.")
        seg = np.diff(points, axis=0)
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(lengths <= 0):
            raise ValueError("Consecutive corridor waypoints must differ.")
        for field, value in (
            ("lateral_sigma", lateral_sigma),
            ("speed_sigma", speed_sigma),
            ("heading_noise", 0.0 if heading_noise is None else heading_noise),
        ):
            if not (math.isfinite(value) and value >= 0):
                raise ValueError("{} must be >= 0, got {}.".format(field, value))
        if not (math.isfinite(speed_mean) and speed_mean > 0):
            raise ValueError("speed_mean must be > 0, got {}.".format(speed_mean))
        self.waypoints: np.ndarray = points
        self.lateral_sigma: float = float(lateral_sigma)
        self.speed_mean: float = float(speed_mean)
        self.speed_sigma: float = float(speed_sigma)
        self.heading_noise: Optional[float] = (
            None if heading_noise is None else float(heading_noise)
        )
        self.name: str = name
        self.segment_lengths: np.ndarray = lengths
        self.segment_headings: np.ndarray = np.arctan2(seg[:, 1], seg[:, 0])
        self.cumulative: np.ndarray = np.concatenate([[0.0], np.cumsum(lengths)])

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])

    def locate(self, s: float) -> Tuple[float, float, float]:
        """Point and tangent heading at arc length ``s``.

        :return: ``(x, y, heading)``
        """
        i = int(np.searchsorted(self.cumulative, s, side="right")) - 1
        i = min(max(i, 0), len(self.segment_lengths) - 1)
        t = (s - self.cumulative[i]) / self.segment_lengths[i]
        x, y = self.waypoints[i] + t * (self.waypoints[i + 1] - self.waypoints[i])
        return float(x), float(y), float(self.segment_headings[i])

    def to_dict(self) -> dict:
        data = {
            "waypoints": self.waypoints.tolist(),
            "lateral_sigma": self.lateral_sigma,
            "speed_mean": self.speed_mean,
            "speed_sigma": self.speed_sigma,
        }
        if self.heading_noise is not None:
            data["heading_noise"] = self.heading_noise
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Corridor":
        unknown = set(data) - {
            "waypoints", "lateral_sigma", "speed_mean", "speed_sigma", "heading_noise", "name"
        }
        if unknown:
            raise ConfigError("Unknown corridor keys: {}.".format(", ".join(sorted(unknown))))
        return cls(**data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.to_dict() == other.to_dict()

    def __str__(self):
        return "<Corridor [name={name}, length={length:.3f}, speed_mean={speed}]>".format(
            name=self.name, length=self.length, speed=self.speed_mean
        )


class FlowScenario:
    """A synthetic scene: corridors, agents and how often they are detected.

    Agent ``i`` walks corridor ``i % len(corridors)``.

    :param corridors: the flows, at least one
    :param bounds: ``((x_min, y_min), (x_max, y_max))`` in meters
    :param agents: number of simultaneously walking agents
    :param heading_noise: default per-detection heading noise in radians
    :param detection_rate: detections per agent per second
    :param duration: seconds of simulated time
    :param rng_seed: seed of every random draw
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a parameter is out of range
        or a corridor leaves the bounds.
    """

    def __init__(
        self,
        corridors: List[Corridor],
        bounds: Bounds = ((0.0, 0.0), (18.0, 10.0)),
        agents: int = 7,
        heading_noise: float = 0.15,
        detection_rate: float = 2.0,
        duration: float = 600.0,
        rng_seed: int = 0,
    ) -> None:
        if not corridors:
            raise ValueError("A scenario needs at least one corridor.")
        (x_min, y_min), (x_max, y_max) = bounds
        if not (x_max > x_min and y_max > y_min):
            raise ValueError("Bounds {} enclose no area.".format(bounds))
        for c in corridors:
            w = c.waypoints
            if (
                w[:, 0].min() < x_min
                or w[:, 0].max() > x_max
                or w[:, 1].min() < y_min
                or w[:, 1].max() > y_max
            ):
                raise ValueError("Corridor {} leaves the bounds {}.".format(c, bounds))
        if agents < 1:
            raise ValueError("agents must be >= 1, got {}.".format(agents))
        if not (math.isfinite(heading_noise) and heading_noise >= 0):
            raise ValueError("heading_noise must be >= 0, got {}.".format(heading_noise))
        if not (math.isfinite(detection_rate) and detection_rate > 0):
            raise ValueError("detection_rate must be > 0, got {}.".format(detection_rate))
        if not (math.isfinite(duration) and duration >= 0):
            raise ValueError("duration must be >= 0, got {}.".format(duration))
        if rng_seed < 0:
            raise ValueError("rng_seed must be >= 0, got {}.".format(rng_seed))
        self.corridors: List[Corridor] = list(corridors)
        self.bounds: Bounds = ((float(x_min), float(y_min)), (float(x_max), float(y_max)))
        self.agents: int = int(agents)
        self.heading_noise: float = float(heading_noise)
        self.detection_rate: float = float(detection_rate)
        self.duration: float = float(duration)
        self.rng_seed: int = int(rng_seed)

    def corridor_of(self, agent_id: int) -> int:
        return agent_id % len(self.corridors)

    def agents_on(self, corridor_index: int) -> int:
        return sum(
            1 for a in range(self.agents) if self.corridor_of(a) == corridor_index
        )

    def heading_noise_of(self, corridor: Corridor) -> float:
        return self.heading_noise if corridor.heading_noise is None else corridor.heading_noise

    def with_seed(self, rng_seed: int) -> "FlowScenario":
        """The same corridor structure with other trajectories."""
        return FlowScenario(
            self.corridors,
            self.bounds,
            self.agents,
            self.heading_noise,
            self.detection_rate,
            self.duration,
            rng_seed,
        )

    def with_duration(self, duration: float) -> "FlowScenario":
        return FlowScenario(
            self.corridors,
            self.bounds,
            self.agents,
            self.heading_noise,
            self.detection_rate,
            duration,
            self.rng_seed,
        )

    def to_dict(self) -> dict:
        return {
            "version": SCENARIO_VERSION,
            "bounds": [list(self.bounds[0]), list(self.bounds[1])],
            "agents": self.agents,
            "heading_noise": self.heading_noise,
            "detection_rate": self.detection_rate,
            "duration": self.duration,
            "rng_seed": self.rng_seed,
            "corridors": [c.to_dict() for c in self.corridors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FlowScenario":
        """Build a scenario from parsed TOML.

        :raises: :exc:`ConfigError <flowdyn.exceptions.ConfigError>`: on unknown keys or another version.
        """
        data = dict(data)
        version = data.pop("version", SCENARIO_VERSION)
        if version != SCENARIO_VERSION:
            raise ConfigError(
                "Unsupported scenario version {}, expected {}.".format(version, SCENARIO_VERSION)
            )
        unknown = set(data) - {
            "bounds", "agents", "heading_noise", "detection_rate", "duration", "rng_seed", "corridors"
        }
        if unknown:
            raise ConfigError("Unknown scenario keys: {}.".format(", ".join(sorted(unknown))))
        corridors = [Corridor.from_dict(c) for c in data.pop("corridors", [])]
        if "bounds" in data:
            (x0, y0), (x1, y1) = data.pop("bounds")
            data["bounds"] = ((x0, y0), (x1, y1))
        return cls(corridors, **data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.to_dict() == other.to_dict()

    def __str__(self):
        return "<FlowScenario [corridors={corridors}, agents={agents}, duration={duration}, rng_seed={seed}]>".format(
            corridors=len(self.corridors),
            agents=self.agents,
            duration=self.duration,
            seed=self.rng_seed,
        )


def load_scenario(path: str) -> FlowScenario:
    """Read a scenario TOML file with a ``[[corridors]]`` array of tables.

    :raises:
        | :exc:`ConfigError <flowdyn.exceptions.ConfigError>`: on unknown keys or malformed TOML.
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a parameter is out of range.
    """
    try:
        data = toml.load(path)
    except toml.TomlDecodeError as e:
        raise ConfigError("Invalid scenario file {}: {}".format(path, e))
    return FlowScenario.from_dict(data)


def _unimodal() -> FlowScenario:
    return FlowScenario(
        [
            Corridor([(0.5, 5.0), (17.5, 5.0)], 0.4, 1.2, 0.1, name="east"),
        ],
        agents=7,
        heading_noise=0.15,
    )


def _bimodal() -> FlowScenario:
    return FlowScenario(
        [
            Corridor([(0.5, 5.0), (17.5, 5.0)], 0.4, 1.2, 0.1, name="east"),
            Corridor([(17.5, 5.0), (0.5, 5.0)], 0.4, 1.2, 0.1, name="west"),
        ],
        agents=8,
        heading_noise=0.15,
    )


def _multimodal() -> FlowScenario:
    # shallow crossing: a brisk straight flow and a slow wandering one share headings
    return FlowScenario(
        [
            Corridor([(0.5, 4.0), (17.5, 6.0)], 0.6, 1.2, 0.35, heading_noise=0.05, name="through"),
            Corridor([(0.5, 6.0), (17.5, 4.0)], 0.6, 1.2, 0.05, heading_noise=0.4, name="stroll"),
            Corridor([(9.0, 0.5), (9.0, 9.5)], 0.4, 1.0, 0.1, name="cross"),
        ],
        agents=9,
        heading_noise=0.15,
    )


BUILTIN_SCENARIOS = {
    "unimodal": _unimodal,
    "bimodal": _bimodal,
    "multimodal": _multimodal,
}


def builtin_scenario(name: str) -> FlowScenario:
    """One of the packaged scenarios: ``unimodal``, ``bimodal`` or ``multimodal``.

    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the name is unknown.
    """
    factory = BUILTIN_SCENARIOS.get(name)
    if factory is None:
        raise ValueError(
            "Unknown builtin scenario {!r}, expected one of {}.".format(
                name, ", ".join(sorted(BUILTIN_SCENARIOS))
            )
        )
    return factory()
