import logging
from typing import Sequence

from .dynamics_layer import DynamicsLayer
from ..fitting.base_fitter import BaseFitter
from ..scene_graph.pose_event import PoseEvent
from ..simulator.detection import Detection

__all__ = ["replay", "settle"]

logger = logging.getLogger(__name__)


def settle(
    layer: DynamicsLayer, fitter: BaseFitter, now: float, parallelism: int = 1
) -> float:
    """Let the graph stabilize after ``now``, bind and fit every dirty cell.

    :return: the time at which the layer settled
    """
    settled_at = max(now, layer.tracker.last_significant_update) + layer.tracker.window
    layer.try_bind(settled_at)
    layer.update_models(fitter, 0.0, settled_at, parallelism)
    return settled_at


def replay(
    layer: DynamicsLayer,
    detections: Sequence[Detection],
    fitter: BaseFitter,
    update_interval: float,
    pose_events: Sequence[PoseEvent] = (),
    parallelism: int = 1,
    scheduled: bool = True,
    settle_at_end: bool = True,
) -> DynamicsLayer:
    """Feed time-ordered detections and pose events into a dynamics layer.

    A pose event is applied before detections with the same time stamp.
    With ``scheduled`` set, binding and model updates run every
    ``update_interval`` seconds of stream time.

    :param layer: the layer to feed
    :param detections: detections in time order
    :param fitter: model selection used by the updates
    :param update_interval: seconds between two update cycles
    :param pose_events: pose events in time order
    :param parallelism: worker threads of every model update
    :param scheduled: run the periodic update cycles
    :param settle_at_end: bind and fit once more after the last input, see :func:`settle`
    :return: ``layer``
    """
    next_update = update_interval
    cycles = 0

    def catch_up(t: float) -> None:
        nonlocal next_update, cycles
        while scheduled and next_update <= t:
            layer.try_bind(next_update)
            layer.update_models(fitter, update_interval, next_update, parallelism)
            next_update += update_interval
            cycles += 1

    events = list(pose_events)
    ei = 0
    end = 0.0
    for d in detections:
        while ei < len(events) and events[ei].time <= d.time:
            catch_up(events[ei].time)
            layer.apply_event(events[ei])
            ei += 1
        catch_up(d.time)
        layer.observe(d.position, d.sample)
        end = d.time
    for ev in events[ei:]:
        catch_up(ev.time)
        layer.apply_event(ev)
        end = max(end, ev.time)
    logger.info(
        "Replayed %d detections and %d pose events in %d update cycles.",
        len(detections),
        len(events),
        cycles,
    )
    if settle_at_end:
        settle(layer, fitter, end, parallelism)
    return layer
