import logging
import math
from typing import List

import numpy as np
from scipy.stats import norm

from .detection import Detection
from .flow_scenario import Corridor, FlowScenario
from ..angles import wrapped_normal_bin_masses
from ..position import Position3

__all__ = ["generate", "ground_truth_marginal"]

logger = logging.getLogger(__name__)

LATERAL_CUTOFF = 3.0
_ON_LINE = 1e-9


class _Agent:
    def __init__(self, agent_id: int, corridor: Corridor, heading_noise: float) -> None:
        self.agent_id = agent_id
        self.corridor = corridor
        self.heading_noise = heading_noise
        self.s = 0.0
        self.offset = 0.0
        self.speed = 0.0

    def respawn(self, rng: np.random.Generator, s: float = 0.0) -> None:
        c = self.corridor
        self.s = s
        self.offset = float(rng.normal(0.0, c.lateral_sigma))
        self.speed = max(float(rng.normal(c.speed_mean, c.speed_sigma)), 0.0)

    def detect(self, time: float, rng: np.random.Generator) -> Detection:
        x, y, heading = self.corridor.locate(self.s)
        # lateral offset along the left normal of the current segment
        x -= self.offset * math.sin(heading)
        y += self.offset * math.cos(heading)
        theta = heading + float(rng.normal(0.0, self.heading_noise))
        return Detection(time, self.agent_id, Position3(x, y, 0.0), theta, self.speed)

    def advance(self, dt: float, rng: np.random.Generator) -> None:
        self.s += self.speed * dt
        if self.s >= self.corridor.length:
            self.respawn(rng)


def generate(scenario: FlowScenario) -> List[Detection]:
    """Simulate the scenario and return its detections in time order.

    Every agent starts at a random point of its corridor, keeps a lateral
    offset and a speed for one traversal and starts over at the corridor's
    first waypoint when it reaches the last. At every tick of
    ``1 / detection_rate`` seconds each agent is detected with its tangent
    heading plus Gaussian noise. The stream is a function of the scenario
    alone.

    :param scenario: the scene to simulate
    :return: detections ordered by time, then agent id
    """
    rng = np.random.default_rng(scenario.rng_seed)
    agents = []
    for agent_id in range(scenario.agents):
        corridor = scenario.corridors[scenario.corridor_of(agent_id)]
        agent = _Agent(agent_id, corridor, scenario.heading_noise_of(corridor))
        agent.respawn(rng, float(rng.uniform(0.0, corridor.length)))
        agents.append(agent)

    dt = 1.0 / scenario.detection_rate
    ticks = int(math.floor(round(scenario.duration * scenario.detection_rate, 9)))
    detections: List[Detection] = []
    for tick in range(ticks):
        time = tick * dt
        for agent in agents:
            detections.append(agent.detect(time, rng))
        for agent in agents:
            agent.advance(dt, rng)
    logger.debug("Generated %d detections for %s.", len(detections), scenario)
    return detections


def ground_truth_marginal(scenario: FlowScenario, p: Position3, bins: int = 8) -> np.ndarray:
    """Analytic heading distribution at ``p``, integrated over ``bins`` angular bins.

    Every corridor segment whose centerline passes within three lateral
    standard deviations of ``p`` contributes a wrapped normal around its
    heading. A contribution is weighted by the agents on the corridor per
    meter of corridor times the lateral density at ``p``.

    :param scenario: the scene
    :param p: the query point
    :param bins: number of equal angular bins over ``[-pi, pi)``
    :return: bin probabilities summing to one, uniform if no corridor passes near ``p``
    """
    masses = np.zeros(bins)
    total = 0.0
    for index, corridor in enumerate(scenario.corridors):
        per_meter = scenario.agents_on(index) / corridor.length
        if per_meter == 0:
            continue
        sd = scenario.heading_noise_of(corridor)
        for i, heading in enumerate(corridor.segment_headings):
            a = corridor.waypoints[i]
            along = (p.x - a[0]) * math.cos(heading) + (p.y - a[1]) * math.sin(heading)
            if not 0.0 <= along <= corridor.segment_lengths[i]:
                continue
            lateral = abs(-(p.x - a[0]) * math.sin(heading) + (p.y - a[1]) * math.cos(heading))
            sigma = corridor.lateral_sigma
            if sigma > 0:
                if lateral > LATERAL_CUTOFF * sigma:
                    continue
                weight = per_meter * float(norm.pdf(lateral, scale=sigma))
            elif lateral <= _ON_LINE:
                weight = per_meter
            else:
                continue
            masses += weight * wrapped_normal_bin_masses(heading, sd, bins, winding=2)
            total += weight
    if total == 0:
        return np.full(bins, 1.0 / bins)
    return masses / total
